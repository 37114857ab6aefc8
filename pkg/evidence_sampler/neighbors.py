"""Neighbor-based Exploration
=============================
Take every triple touching a seed, then expand the new neighbors whose names
are close enough to the question.
"""
import logging

import numpy as np

from embed_link import Hashed, NodeEmbeddings, similarities
from .subgraph import EvidenceSubgraph, Kind, SamplerConfig, validate_seeds

logger = logging.getLogger(__name__)


def relevance(graph, nodes, question, embedder, embeddings=None):
    """Return {node: cosine of its name with `question`}. Undefined cosines
    (zero vectors) count as -1.
    """
    if not nodes:
        return {}
    embeddings = embeddings or NodeEmbeddings.for_graph(graph, embedder)
    vector, = embedder.embed([question])
    if not np.any(vector):
        logger.warning('the question embeds to the zero vector')
        return {node: -1.0 for node in nodes}
    scores = np.nan_to_num(similarities(embeddings, vector), nan=-1.0, neginf=-1.0)
    return {node: float(scores[embeddings.rows[node]]) for node in nodes}


def explore_neighbors(graph, seeds, question, config=SamplerConfig(), embedder=None, embeddings=None):
    """Return the neighbor-based :class:`.EvidenceSubgraph` around `seeds`.
    Relevance is measured with `embedder` (hashed by default).
    """
    embedder = embedder or Hashed()
    seeds = validate_seeds(graph, seeds)
    first = sorted({index for seed in seeds for index in graph.incident(seed)})
    seed_set = set(seeds)
    fresh = sorted({node for i in first for node in graph.triples[i].key[::2]} - seed_set)
    scores = relevance(graph, fresh, question, embedder, embeddings)
    expanded = [node for node in fresh if scores[node] >= config.relevance_threshold]
    taken = set(first)
    second = sorted({index for node in expanded for index in graph.incident(node)} - taken)
    logger.debug('neighbors of %d seeds: %d adjacent triples, %d of %d neighbors expanded to %d more',
                 len(seeds), len(first), len(expanded), len(fresh), len(second))
    return EvidenceSubgraph(Kind.NEIGHBOR, tuple(graph.triples[i] for i in first + second), core=len(first))
