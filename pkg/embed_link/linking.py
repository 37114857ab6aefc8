"""Entity Linking
=================
Map question entities to their nearest graph nodes by cosine similarity.
"""
import logging
from dataclasses import dataclass

import numpy as np

from errors import InputError
from kg_store import normalize_name
from .cache import NodeEmbeddings

logger = logging.getLogger(__name__)


class EmptyGraph(InputError):
    """There are no nodes to link to."""


@dataclass(frozen=True)
class LinkResult:
    query_entity: str
    linked_node: str
    similarity: float


def similarities(embeddings, vector):
    """Return the cosine of `vector` with every row (-inf for zero rows)."""
    norm = np.linalg.norm(vector)
    with np.errstate(divide='ignore', invalid='ignore'):
        scores = embeddings.matrix @ vector / (embeddings.norms * norm)
    scores = np.where(embeddings.norms > 0, np.clip(scores, -1.0, 1.0), -np.inf)
    return scores


def link_entities(query_entities, graph, embedder, embeddings=None, min_similarity=None):
    """Return one :class:`LinkResult` per query entity that links, deduplicated
    by node (first occurrence kept).

    A query whose normalized name is a node links to it with similarity 1.0.
    Others link to the most similar node, ties going to the smallest node id.
    Below `min_similarity` (when set) the entity is dropped.
    """
    if not graph.nodes:
        raise EmptyGraph('cannot link entities into an empty graph')
    queries = [q for q in query_entities if normalize_name(q)]
    inexact = [q for q in queries if normalize_name(q) not in graph.nodes]
    vectors = dict(zip(inexact, embedder.embed(inexact))) if inexact else {}
    if inexact and embeddings is None:
        embeddings = NodeEmbeddings.for_graph(graph, embedder)
    results, linked = [], set()
    for query in queries:
        node = normalize_name(query)
        if node in graph.nodes:
            result = LinkResult(query, node, 1.0)
        else:
            vector = vectors[query]
            if not np.any(vector):
                logger.warning('cannot link %r: it embeds to the zero vector', query)
                continue
            scores = similarities(embeddings, vector)
            best = int(np.argmax(scores))
            if not np.isfinite(scores[best]):
                logger.warning('cannot link %r: no node has a direction', query)
                continue
            result = LinkResult(query, embeddings.node_ids[best], float(scores[best]))
            if min_similarity is not None and result.similarity < min_similarity:
                logger.info('dropped %r: best match %r at %.3f', query, result.linked_node, result.similarity)
                continue
        if result.linked_node not in linked:
            linked.add(result.linked_node)
            results.append(result)
    return results
