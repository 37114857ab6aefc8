"""Path-based Exploration
=========================
Connect the question's seed nodes with short paths.

Starting from the smallest seed, repeatedly search up to `hop_bound` hops for
the nearest seed not yet visited and walk to it. When none is in reach the
current segment closes and the smallest unvisited seed starts the next one.
Traversal ignores edge direction.
"""
import logging

import networkx as nx

from .subgraph import EvidenceSubgraph, Kind, SamplerConfig, ordered_unique, validate_seeds

logger = logging.getLogger(__name__)


def smallest_path(view, distances, start, target):
    """Return the lexicographically smallest shortest path from `start` to `target`."""
    best = {start: (start,)}

    def walk(node):
        if node not in best:
            level = distances[node] - 1
            best[node] = min(walk(prev) for prev in view.adj[node] if distances.get(prev) == level) + (node,)
        return best[node]

    return list(walk(target))


def nearest(view, start, candidates, hop_bound):
    """Return the path to the nearest of `candidates` within `hop_bound` hops
    (ties to the smaller target), or None.
    """
    distances = nx.single_source_shortest_path_length(view, start, cutoff=hop_bound)
    reached = [(distances[c], c) for c in candidates if c in distances]
    if not reached:
        return None
    _, target = min(reached)
    return smallest_path(view, distances, start, target)


def chain(graph, segment):
    """Render a segment as ``node->relation->node->...`` with display names."""
    parts = [graph.name(segment[0])]
    for a, b in zip(segment, segment[1:]):
        parts += [graph.triples[graph.between(a, b)].relation, graph.name(b)]
    return '->'.join(parts)


def explore_paths(graph, seeds, config=SamplerConfig()):
    """Return the path-based :class:`.EvidenceSubgraph` connecting `seeds`."""
    remaining = validate_seeds(graph, seeds)
    if not remaining:
        return EvidenceSubgraph(Kind.PATH)
    view = graph.undirected
    start = remaining.pop(0)
    segments, current = [], [start]
    while remaining:
        path = nearest(view, start, remaining, config.hop_bound)
        if path is None:
            segments.append(tuple(current))
            start = remaining.pop(0)
            current = [start]
        else:
            current += path[1:]
            start = path[-1]
            remaining.remove(start)
    segments.append(tuple(current))
    indexes = ordered_unique(graph.between(a, b) for segment in segments for a, b in zip(segment, segment[1:]))
    logger.debug('paths over %d seeds: %d segments, %d triples', len(seeds), len(segments), len(indexes))
    return EvidenceSubgraph(Kind.PATH, tuple(graph.triples[i] for i in indexes), tuple(segments),
                            tuple(chain(graph, segment) for segment in segments))
