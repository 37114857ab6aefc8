"""Embeddings
=============
Embedders turn texts into vectors; they are chosen by name from
configuration (``Embedder['hashed']``, ``Embedder['live']``).
"""
import hashlib
import re

import numpy as np

from errors import InputError
from llm_gateway import JsonEndpoint, TransportError
from registered import Registered

TOKEN = re.compile(r'\w+')

HASHED_DIMENSION = 256


class EmptyInput(InputError):
    """Nothing to embed."""


class DimensionMismatch(InputError):
    """Vectors of different lengths were compared."""


class ZeroVector(InputError):
    """A vector with no nonzero entry has no direction."""


def tokens(text):
    """Return the lowercase word tokens of `text`."""
    return TOKEN.findall(str(text).lower())


def token_bucket(token, dimension):
    """Return (index, sign) of `token` under signed hashing."""
    digest = hashlib.blake2b(token.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest[:4], 'little') % dimension, -1.0 if digest[4] & 1 else 1.0


def cosine(a, b):
    """Return the cosine similarity of `a` and `b`, clamped to [-1, 1]."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch('cannot compare vectors of dimension {} and {}'.format(a.shape, b.shape))
    norm_a, norm_b = np.linalg.norm(a), np.linalg.norm(b)
    if norm_a == 0 or norm_b == 0:
        raise ZeroVector('cosine of a zero vector is undefined')
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


class Embedder(metaclass=Registered):
    """Embed texts into vectors of one dimension."""

    dimension = None

    @classmethod
    def from_options(cls, dimension=HASHED_DIMENSION, base_url='', model='', timeout=60.0, attempts=3, backoff=1.0):
        """Return the embedder configured by the embedding options."""
        raise NotImplementedError

    @property
    def provider_id(self):
        """Return the identifier node-embedding caches are keyed by."""
        raise NotImplementedError

    def embed(self, texts):
        """Return one float vector (numpy array) per text."""
        texts = list(texts)
        if not texts:
            raise EmptyInput('embed() needs at least one text')
        return self.vectors(texts)

    def vectors(self, texts):
        raise NotImplementedError


class Hashed(Embedder):
    """Deterministic bag of tokens: each token adds ±1 to the bucket its
    BLAKE2b hash selects. Vectors are not normalized.
    """

    def __init__(self, dimension=HASHED_DIMENSION):
        self.dimension = dimension

    @classmethod
    def from_options(cls, dimension=HASHED_DIMENSION, base_url='', model='', timeout=60.0, attempts=3, backoff=1.0):
        return cls(dimension)

    @property
    def provider_id(self):
        return 'hashed-{}'.format(self.dimension)

    def vectors(self, texts):
        matrix = np.zeros((len(texts), self.dimension))
        for row, text in enumerate(texts):
            for token in tokens(text):
                index, sign = token_bucket(token, self.dimension)
                matrix[row, index] += sign
        return list(matrix)


class Live(Embedder):
    """An HTTP embeddings endpoint (``POST {base_url}/embeddings``)."""

    def __init__(self, base_url, model, timeout=60.0, attempts=3, backoff=1.0, session=None):
        self.model = model
        self.endpoint = JsonEndpoint(base_url, timeout, attempts, backoff, session)

    @classmethod
    def from_options(cls, dimension=HASHED_DIMENSION, base_url='', model='', timeout=60.0, attempts=3, backoff=1.0):
        return cls(base_url, model, timeout, attempts, backoff)

    @property
    def provider_id(self):
        return 'live-{}'.format(self.model)

    def vectors(self, texts):
        reply = self.endpoint.post('embeddings', {'model': self.model, 'input': texts})
        try:
            rows = sorted(reply['data'], key=lambda item: item['index'])
            vectors = [np.asarray(item['embedding'], dtype=float) for item in rows]
        except (KeyError, TypeError, ValueError):
            raise TransportError(200, 'malformed embeddings reply') from None
        if len(vectors) != len(texts):
            raise TransportError(200, '{} embeddings for {} texts'.format(len(vectors), len(texts)))
        dimensions = {len(v) for v in vectors} | ({self.dimension} if self.dimension else set())
        if len(dimensions) > 1:
            raise DimensionMismatch('provider returned dimensions {}'.format(sorted(dimensions)))
        self.dimension = dimensions.pop()
        if not all(np.isfinite(v).all() for v in vectors):
            raise TransportError(200, 'non-finite embedding values')
        return vectors
