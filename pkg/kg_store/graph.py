"""Knowledge Graph
==================
Immutable snapshots of deduplicated triples with adjacency and name indexes.

Triples are kept in canonical order (sorted by their normalized identity),
so a graph built from the same triples in any order has the same
:attr:`KnowledgeGraph.snapshot_id`.
"""
import hashlib
import logging
from bisect import bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from errors import InputError
from .triples import normalize_name

logger = logging.getLogger(__name__)

DIRECTIONS = ('out', 'in', 'both')


class UnknownNode(InputError):
    """The node id is not in the graph."""
    def __init__(self, node):
        super().__init__('unknown node {!r}'.format(node))
        self.node = node


@dataclass(frozen=True)
class Node:
    """A graph node: `id` is the normalized name, `name` the display name."""
    id: str
    name: str


def deduplicate(triples):
    """Return one triple per identity, the one with the earliest provenance."""
    kept = {}
    for triple in triples:
        current = kept.get(triple.key)
        if current is None or triple.provenance < current.provenance:
            kept[triple.key] = triple
    return list(kept.values())


class KnowledgeGraph:
    """A graph snapshot. Build it with :meth:`from_triples`."""

    def __init__(self, triples):
        self.triples = tuple(sorted(deduplicate(triples), key=lambda t: t.key))
        self.nodes = {}
        self.out_index = defaultdict(list)
        self.in_index = defaultdict(list)
        for index, triple in enumerate(self.triples):
            head, _, tail = triple.key
            self.nodes.setdefault(head, Node(head, triple.head))
            self.nodes.setdefault(tail, Node(tail, triple.tail))
            self.out_index[head].append((triple.relation, tail, index))
            self.in_index[tail].append((triple.relation, head, index))
        self.out_index.default_factory = self.in_index.default_factory = None

    @classmethod
    def from_triples(cls, triples):
        """Return the graph induced by `triples` (deduplicated, earliest year kept)."""
        return cls(triples)

    def __len__(self):
        return len(self.triples)

    def __contains__(self, node):
        return node in self.nodes

    def __repr__(self):
        return '<KnowledgeGraph {} nodes, {} triples, {}>'.format(
            len(self.nodes), len(self.triples), self.snapshot_id[:12])

    @cached_property
    def snapshot_id(self):
        """Return the SHA-256 of the canonical TSV serialization."""
        from .tsv import serialize_kg
        return hashlib.sha256(serialize_kg(self).encode('utf-8')).hexdigest()

    @property
    def node_ids(self):
        """Return the node ids in sorted order."""
        return sorted(self.nodes)

    def node_id(self, name):
        """Return the node id for a display or normalized `name`."""
        node = normalize_name(name)
        if node not in self.nodes:
            raise UnknownNode(name)
        return node

    def name(self, node):
        """Return the display name of `node`."""
        try:
            return self.nodes[node].name
        except KeyError:
            raise UnknownNode(node) from None

    def neighbors(self, node, direction='both'):
        """Return (relation, neighbor id) pairs of `node` in triple-index order."""
        if node not in self.nodes:
            raise UnknownNode(node)
        if direction not in DIRECTIONS:
            raise InputError('direction must be one of {}'.format(', '.join(DIRECTIONS)))
        edges = []
        if direction in ('out', 'both'):
            edges += self.out_index.get(node, [])
        if direction in ('in', 'both'):
            edges += self.in_index.get(node, [])
        return [(relation, neighbor) for relation, neighbor, _ in sorted(edges, key=lambda e: e[2])]

    def incident(self, node):
        """Return the sorted indexes of the triples touching `node`."""
        if node not in self.nodes:
            raise UnknownNode(node)
        return sorted(index for _, _, index in self.out_index.get(node, []) + self.in_index.get(node, []))

    @cached_property
    def undirected(self):
        """Return the traversal view: an undirected networkx MultiGraph whose
        edges are keyed by triple index.
        """
        graph = nx.MultiGraph()
        graph.add_nodes_from(sorted(self.nodes))
        for index, triple in enumerate(self.triples):
            head, _, tail = triple.key
            graph.add_edge(head, tail, key=index)
        return graph

    def between(self, a, b):
        """Return the lowest triple index joining nodes `a` and `b` (either direction)."""
        return min(self.undirected[a][b])

    @cached_property
    def years(self):
        return sorted(triple.year for triple in self.triples)

    def snapshot_until(self, year):
        """Return the subgraph of triples published in or before `year`."""
        if not self.triples or year >= self.years[-1]:
            return self
        if bisect_right(self.years, year) == 0:
            return KnowledgeGraph(())
        return KnowledgeGraph(t for t in self.triples if t.year <= year)

    def stats(self):
        """Return the node, relation and triple counts, and triples per year."""
        return {
            '#Nodes': len(self.nodes),
            '#Relations': len({triple.key[1] for triple in self.triples}),
            '#Triples': len(self.triples),
            'triples_per_year': {str(y): n for y, n in sorted(Counter(self.years).items())},
        }
