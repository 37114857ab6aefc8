"""LLM Requests
===============
A request is hashed over its canonical JSON form so that record/replay
stores are keyed by content, never by call order.
"""
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from errors import InputError

DEFAULT_TEMPERATURE = 0.7
DEFAULT_MAX_TOKENS = 1024


def canonical_json(value):
    """Return the canonical JSON text of `value` (sorted keys, no spaces)."""
    return json.dumps(value, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


@dataclass(frozen=True)
class LlmRequest:
    """One single-turn completion request. `tag` labels the pipeline stage
    and is not part of the cache key.
    """
    model: str
    user_prompt: str
    system_prompt: Optional[str] = None
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    tag: str = ''

    def __post_init__(self):
        if not self.user_prompt:
            raise InputError('{}: user prompt must not be empty'.format(self.tag or 'request'))
        if not 0 <= self.temperature <= 2:
            raise InputError('temperature {} outside [0, 2]'.format(self.temperature))
        if self.max_tokens < 1:
            raise InputError('max_tokens must be positive, not {}'.format(self.max_tokens))

    def canonical(self):
        """Return the canonical serialization the cache key is computed over."""
        return canonical_json({
            'model': self.model,
            'system_prompt': self.system_prompt,
            'user_prompt': self.user_prompt,
            'temperature': float(self.temperature),
            'max_tokens': int(self.max_tokens),
        })

    @property
    def cache_key(self):
        """Return the 64 hex digit SHA-256 of :meth:`canonical`."""
        return hashlib.sha256(self.canonical().encode('utf-8')).hexdigest()

    def as_dict(self):
        return {'model': self.model, 'system_prompt': self.system_prompt, 'user_prompt': self.user_prompt,
                'temperature': self.temperature, 'max_tokens': self.max_tokens, 'tag': self.tag}

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: data[k] for k in ('model', 'user_prompt') if k in data},
                   **{k: data[k] for k in ('system_prompt', 'temperature', 'max_tokens', 'tag') if k in data})


def utc_now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass(frozen=True)
class LlmExchange:
    """A request, its response text and where it came from: the record/replay unit."""
    request: LlmRequest
    response_text: str
    provider_name: str
    timestamp: str = field(default_factory=utc_now)

    @property
    def cache_key(self):
        return self.request.cache_key

    def to_json(self):
        """Return this exchange as one JSON line (no trailing newline)."""
        return json.dumps({'cache_key': self.cache_key, 'request': self.request.as_dict(),
                           'response_text': self.response_text, 'provider_name': self.provider_name,
                           'timestamp': self.timestamp}, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, line):
        data = json.loads(line)
        exchange = cls(LlmRequest.from_dict(data['request']), data['response_text'],
                       data.get('provider_name', ''), data.get('timestamp', ''))
        if data.get('cache_key', exchange.cache_key) != exchange.cache_key:
            raise InputError('stored cache key {} does not match its request'.format(data['cache_key']))
        return exchange


@dataclass(frozen=True)
class RequestSettings:
    """Model settings shared by every prompt stage."""
    model: str = 'gpt-3.5-turbo'
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS
    system_prompt: Optional[str] = None

    def request(self, user_prompt, tag):
        """Return an :class:`LlmRequest` for `user_prompt` labelled `tag`."""
        return LlmRequest(self.model, user_prompt, self.system_prompt, self.temperature, self.max_tokens, tag)
