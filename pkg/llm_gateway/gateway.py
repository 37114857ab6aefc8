"""Gateway
==========
The one entry point every pipeline stage uses to reach a model.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor

from errors import InputError, ProviderError
from .providers import Provider, Record, Scripted
from .store import ExchangeStore

logger = logging.getLogger(__name__)


class BatchAborted(ProviderError):
    """A request of a batch failed; `partial` holds the responses that completed
    (None elsewhere).
    """
    def __init__(self, index, partial, cause):
        super().__init__('batch aborted at request {}: {}'.format(index, cause))
        self.index, self.partial, self.cause = index, partial, cause


class Gateway:
    """Complete requests through `provider`, with at most `concurrency`
    provider calls in flight across all threads.
    """

    def __init__(self, provider, concurrency=4):
        if concurrency < 1:
            raise InputError('concurrency must be at least 1')
        self.provider = provider
        self.concurrency = concurrency
        self.semaphore = threading.BoundedSemaphore(concurrency)

    def complete(self, request):
        """Return the response text for `request`."""
        with self.semaphore:
            text = self.provider.complete(request)
        logger.debug('%s %s -> %d chars', request.tag, request.cache_key[:12], len(text))
        return text

    def complete_batch(self, requests):
        """Return the responses to `requests`, in order. The first failure
        (in request order) aborts the batch with :class:`BatchAborted`.
        """
        requests = list(requests)
        if not requests:
            return []
        with ThreadPoolExecutor(max_workers=min(self.concurrency, len(requests))) as pool:
            futures = [pool.submit(self.complete, request) for request in requests]
            results = []
            for index, future in enumerate(futures):
                try:
                    results.append(future.result())
                except Exception as error:
                    for pending in futures[index + 1:]:
                        pending.cancel()
                    results += [None] * (len(futures) - index)
                    for later, pending in enumerate(futures[index + 1:], index + 1):
                        if pending.done() and not pending.cancelled() and pending.exception() is None:
                            results[later] = pending.result()
                    raise BatchAborted(index, results, error) from error
            return results


class Tracer:
    """A gateway view that records the cache key of every call made through it."""

    def __init__(self, gateway):
        self.gateway = gateway
        self.keys = []
        self.lock = threading.Lock()

    def note(self, request):
        with self.lock:
            self.keys.append(request.cache_key)

    def complete(self, request):
        self.note(request)
        return self.gateway.complete(request)

    def complete_batch(self, requests):
        requests = list(requests)
        for request in requests:
            self.note(request)
        return self.gateway.complete_batch(requests)


def open_gateway(mode, base_url='', cache=None, script=None, concurrency=4,
                 timeout=60.0, attempts=3, backoff=1.0):
    """Return a :class:`Gateway` for provider `mode`:

    live
        call `base_url`, nothing stored.
    record
        serve hits from the `cache` store; call `base_url` on a miss and record it.
    replay
        serve only from the `cache` store; a miss is :class:`.CacheMiss`.
    scripted
        answer from the `script` rules file; recorded to `cache` when given.
    """
    provider = Provider[mode].from_options(base_url, cache, script, timeout, attempts, backoff)
    if isinstance(provider, Scripted) and cache:
        provider = Record(provider, ExchangeStore(cache))
    logger.info('provider mode %s (%s)', mode, type(provider).__name__)
    return Gateway(provider, concurrency)
