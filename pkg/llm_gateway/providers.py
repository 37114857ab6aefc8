"""Providers
============
Where completions come from. Providers are chosen by name from
configuration, e.g. ``Provider['scripted']``.
"""
import json
import logging

from errors import InputError, ProviderError
from registered import Registered
from .http import JsonEndpoint, TransportError
from .request import LlmExchange
from .store import ExchangeStore

logger = logging.getLogger(__name__)


class CacheMiss(ProviderError):
    """Replay mode was asked for a request the store does not hold."""
    def __init__(self, cache_key, tag=''):
        super().__init__('no recorded exchange for {} request {}'.format(tag or 'untagged', cache_key))
        self.cache_key = cache_key


class UnscriptedPrompt(ProviderError):
    """No scripted rule matches the prompt."""
    def __init__(self, request):
        super().__init__('no scripted response for {} prompt: {!r}'.format(
            request.tag or 'untagged', request.user_prompt[:120]))
        self.request = request


class Provider(metaclass=Registered):
    """A source of completions."""

    @property
    def name(self):
        return type(self).__name__.lower()

    @classmethod
    def from_options(cls, base_url='', cache=None, script=None, timeout=60.0, attempts=3, backoff=1.0):
        """Return the provider configured by the gateway options."""
        raise NotImplementedError

    def complete(self, request):
        """Return the response text for `request`."""
        raise NotImplementedError


class Live(Provider):
    """An HTTP chat-completion endpoint (``POST {base_url}/chat/completions``)."""

    def __init__(self, base_url, timeout=60.0, attempts=3, backoff=1.0, session=None):
        self.endpoint = JsonEndpoint(base_url, timeout, attempts, backoff, session)

    @classmethod
    def from_options(cls, base_url='', cache=None, script=None, timeout=60.0, attempts=3, backoff=1.0):
        return cls(base_url, timeout, attempts, backoff)

    def complete(self, request):
        messages = [{'role': 'user', 'content': request.user_prompt}]
        if request.system_prompt:
            messages.insert(0, {'role': 'system', 'content': request.system_prompt})
        reply = self.endpoint.post('chat/completions', {
            'model': request.model, 'messages': messages,
            'temperature': request.temperature, 'max_tokens': request.max_tokens})
        try:
            return reply['choices'][0]['message']['content'] or ''
        except (KeyError, IndexError, TypeError):
            raise TransportError(200, json.dumps(reply)[:200]) from None


class Scripted(Provider):
    """Answer from an ordered list of (substring, response) rules. The
    first rule whose substring occurs in the prompt wins; a prompt no rule
    matches is an error.
    """

    def __init__(self, rules):
        self.rules = [(pattern, response) for pattern, response in rules]

    @classmethod
    def from_file(cls, path):
        """Load rules from a JSON list of ``{"pattern": ..., "response": ...}``."""
        try:
            with open(path, encoding='utf-8') as fp:
                return cls((rule['pattern'], rule['response']) for rule in json.load(fp))
        except OSError as error:
            raise InputError('cannot read script {}: {}'.format(path, error.strerror)) from None
        except (ValueError, KeyError, TypeError) as error:
            raise InputError('{}: bad script ({})'.format(path, error)) from None

    @classmethod
    def from_options(cls, base_url='', cache=None, script=None, timeout=60.0, attempts=3, backoff=1.0):
        if not script:
            raise InputError('scripted mode needs a script file')
        return cls.from_file(script)

    def complete(self, request):
        prompt = '{}\n{}'.format(request.system_prompt or '', request.user_prompt)
        for pattern, response in self.rules:
            if pattern in prompt:
                return response
        raise UnscriptedPrompt(request)


class Replay(Provider):
    """Serve only what an :class:`.ExchangeStore` recorded."""

    def __init__(self, store):
        self.store = store

    @classmethod
    def from_options(cls, base_url='', cache=None, script=None, timeout=60.0, attempts=3, backoff=1.0):
        if not cache:
            raise InputError('replay mode needs a cache store')
        return cls(ExchangeStore(cache))

    def complete(self, request):
        exchange = self.store.get(request.cache_key)
        if exchange is None:
            raise CacheMiss(request.cache_key, request.tag)
        return exchange.response_text


class Record(Provider):
    """Serve recorded exchanges, forward misses to `inner` and record them."""

    def __init__(self, inner, store):
        self.inner, self.store = inner, store

    @classmethod
    def from_options(cls, base_url='', cache=None, script=None, timeout=60.0, attempts=3, backoff=1.0):
        """Record what the live endpoint at `base_url` answers."""
        if not cache:
            raise InputError('record mode needs a cache store')
        live = Live.from_options(base_url, timeout=timeout, attempts=attempts, backoff=backoff)
        return cls(live, ExchangeStore(cache))

    def complete(self, request):
        exchange = self.store.get(request.cache_key)
        if exchange is not None:
            logger.debug('replayed %s %s', request.tag, request.cache_key[:12])
            return exchange.response_text
        text = self.inner.complete(request)
        self.store.append(LlmExchange(request, text, self.inner.name))
        return text
