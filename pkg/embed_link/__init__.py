from .cache import NodeEmbeddings
from .embedding import (HASHED_DIMENSION, DimensionMismatch, Embedder, EmptyInput, Hashed, Live, ZeroVector,
                        cosine, token_bucket, tokens)
from .linking import EmptyGraph, LinkResult, link_entities, similarities
