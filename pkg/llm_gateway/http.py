"""HTTP Transport
=================
JSON POSTs to an OpenAI-style endpoint with bounded retry.
"""
import logging
import os
import time

import requests

from errors import ProviderError

logger = logging.getLogger(__name__)

API_KEY_VARIABLE = 'DALK_API_KEY'


class TransportError(ProviderError):
    """The provider answered with an error status, or could not be reached."""
    def __init__(self, status, body=''):
        super().__init__('provider error {}: {}'.format(status or 'unreachable', str(body)[:200]))
        self.status, self.body = status, body


class RateLimited(TransportError):
    """The provider kept answering 429 after every retry."""
    def __init__(self, body=''):
        super().__init__(429, body)


def api_key():
    """Return the bearer token from ``DALK_API_KEY`` (None if unset)."""
    return os.environ.get(API_KEY_VARIABLE) or None


class JsonEndpoint:
    """POST JSON to ``base_url/path`` and return the decoded reply.

    429, 5xx and connection failures are retried `attempts` times in all,
    sleeping ``backoff * 2 ** n`` seconds between tries. Other error
    statuses fail at once.
    """

    def __init__(self, base_url, timeout=60.0, attempts=3, backoff=1.0, session=None):
        self.base_url = base_url.rstrip('/')
        self.timeout, self.attempts, self.backoff = timeout, max(1, attempts), backoff
        self.session = session or requests.Session()

    def headers(self):
        headers = {'Content-Type': 'application/json'}
        key = api_key()
        if key:
            headers['Authorization'] = 'Bearer {}'.format(key)
        return headers

    def post(self, path, payload):
        url = '{}/{}'.format(self.base_url, path.lstrip('/'))
        error = None
        for attempt in range(self.attempts):
            if attempt:
                delay = self.backoff * 2 ** (attempt - 1)
                logger.warning('%s (attempt %d of %d, retrying in %.1fs)', error, attempt, self.attempts, delay)
                time.sleep(delay)
            try:
                response = self.session.post(url, json=payload, headers=self.headers(), timeout=self.timeout)
            except requests.RequestException as exception:
                error = TransportError(None, exception)
                continue
            if response.status_code == 200:
                try:
                    return response.json()
                except ValueError:
                    raise TransportError(200, response.text) from None
            if response.status_code == 429:
                error = RateLimited(response.text)
            elif response.status_code >= 500:
                error = TransportError(response.status_code, response.text)
            else:
                raise TransportError(response.status_code, response.text)
        raise error
