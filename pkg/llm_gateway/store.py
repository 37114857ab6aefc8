"""Exchange Store
=================
The record/replay store: an append-only JSON-lines file, one
:class:`.LlmExchange` per line, UTF-8. The first record of a cache key wins.
"""
import logging
import os
import threading

from errors import InputError
from .request import LlmExchange

logger = logging.getLogger(__name__)


class ExchangeStore:
    """Exchanges keyed by cache key, optionally backed by a file.
    Writes are serialized by a lock; lookups read a dict that is only ever
    added to.
    """

    def __init__(self, path=None):
        self.path = path
        self.exchanges = {}
        self.lock = threading.Lock()
        if path and os.path.exists(path):
            self.load(path)

    def load(self, path):
        with open(path, encoding='utf-8') as fp:
            for line_no, line in enumerate(fp, 1):
                if not line.strip():
                    continue
                try:
                    exchange = LlmExchange.from_json(line)
                except (ValueError, KeyError, TypeError) as error:
                    raise InputError('{}:{}: bad exchange record ({})'.format(path, line_no, error)) from None
                self.exchanges.setdefault(exchange.cache_key, exchange)
        logger.info('loaded %d exchanges from %s', len(self.exchanges), path)

    def get(self, cache_key):
        """Return the exchange stored under `cache_key`, or None."""
        return self.exchanges.get(cache_key)

    def append(self, exchange):
        """Store `exchange` unless its key is already present. Return True if written."""
        with self.lock:
            if exchange.cache_key in self.exchanges:
                return False
            self.exchanges[exchange.cache_key] = exchange
            if self.path:
                directory = os.path.dirname(self.path)
                if directory:
                    os.makedirs(directory, exist_ok=True)
                with open(self.path, 'a', encoding='utf-8') as fp:
                    fp.write(exchange.to_json() + '\n')
            return True

    def __len__(self):
        return len(self.exchanges)

    def __contains__(self, cache_key):
        return cache_key in self.exchanges

    def __iter__(self):
        return iter(self.exchanges.values())
