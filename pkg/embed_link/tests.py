"""Test Embedding and Linking
=============================
"""
import itertools
import math
import os
import random
import tempfile
from collections import Counter
from fractions import Fraction
from unittest import TestCase

import numpy as np

from embed_link import (DimensionMismatch, Embedder, EmptyGraph, EmptyInput, Hashed, Live, NodeEmbeddings,
                        ZeroVector, cosine, link_entities, token_bucket, tokens)
from kg_store import KnowledgeGraph, Triple
from testing import StubProvider


def graph_of(*pairs):
    return KnowledgeGraph.from_triples(Triple(h, 'r', t, '1', 2015) for h, t in pairs)


class FixedEmbedder(Embedder):
    """Embeds names from a table."""

    made = itertools.count()

    def __init__(self, table):
        self.table = {k: np.asarray(v, dtype=float) for k, v in table.items()}
        self.serial = next(self.made)

    @property
    def provider_id(self):
        return 'fixed-{}'.format(self.serial)

    def vectors(self, texts):
        return [self.table[text] for text in texts]


class TestHashed(TestCase):
    """Test the :class:`.Hashed` embedder."""

    def setUp(self):
        self.embedder = Hashed()

    def test_deterministic(self):
        """The same text embeds identically."""
        first, = self.embedder.embed(['x'])
        second, = self.embedder.embed(['x'])
        self.assertTrue(np.array_equal(first, second))
        self.assertEqual(len(first), 256)

    def test_empty(self):
        """Nothing to embed is an error."""
        self.assertRaises(EmptyInput, self.embedder.embed, [])

    def test_bag_of_tokens(self):
        """Token order does not matter; counts are explicit."""
        a, b = self.embedder.embed(['amyloid beta amyloid', 'Amyloid amyloid, BETA'])
        self.assertTrue(np.array_equal(a, b))
        expected = np.zeros(256)
        for token, count in Counter(tokens('amyloid beta amyloid')).items():
            index, sign = token_bucket(token, 256)
            expected[index] += sign * count
        self.assertTrue(np.array_equal(a, expected))

    def test_provider_id(self):
        """The id names the dimension."""
        self.assertEqual(Hashed(64).provider_id, 'hashed-64')
        self.assertIs(Embedder['hashed'], Hashed)
        self.assertEqual(Embedder['HASHED'].from_options(64).provider_id, 'hashed-64')
        self.assertEqual(Embedder['live'].from_options(base_url='http://localhost', model='m').provider_id, 'live-m')


class TestCosine(TestCase):
    """Test :func:`.cosine`."""

    def test_identity(self):
        """cos(v, v) = 1."""
        self.assertEqual(cosine([3.0, -4.0, 1e-3], [3.0, -4.0, 1e-3]), 1.0)

    def test_orthogonal(self):
        """cos((1,0),(0,1)) = 0."""
        self.assertEqual(cosine([1, 0], [0, 1]), 0.0)

    def test_errors(self):
        """Mismatched and zero vectors are rejected."""
        self.assertRaises(DimensionMismatch, cosine, [1, 0], [1, 0, 0])
        self.assertRaises(ZeroVector, cosine, [0, 0], [1, 0])

    def test_reference(self):
        """Random 8-dimensional pairs match an exact rational computation."""
        rng = random.Random(1)
        for _ in range(100):
            a = [rng.uniform(-10, 10) for _ in range(8)]
            b = [rng.uniform(-10, 10) for _ in range(8)]
            dot = sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))
            norms = sum(Fraction(x) ** 2 for x in a) * sum(Fraction(y) ** 2 for y in b)
            reference = float(dot) / math.sqrt(float(norms))
            self.assertAlmostEqual(cosine(a, b), reference, delta=1e-12)


class TestLinkEntities(TestCase):
    """Test :func:`.link_entities`."""

    def setUp(self):
        NodeEmbeddings.clear()
        self.graph = graph_of(("alzheimer's disease", 'amyloid beta'), ('APOE4', 'amyloid beta'))

    def test_exact(self):
        """Exact normalized names link with similarity 1.0."""
        result, = link_entities(["Alzheimer’s  Disease"], self.graph, Hashed())
        self.assertEqual((result.linked_node, result.similarity), ("alzheimer's disease", 1.0))

    def test_nearest(self):
        """Inexact names link to the most similar node."""
        result, = link_entities(['amyloid beta peptide'], self.graph, Hashed())
        self.assertEqual(result.linked_node, 'amyloid beta')
        self.assertLess(result.similarity, 1.0)

    def test_tie(self):
        """Equal similarities go to the smaller name."""
        embedder = FixedEmbedder({'zeta': [1, 0], 'alpha': [1, 0], 'query': [1, 1]})
        result, = link_entities(['query'], graph_of(('zeta', 'alpha')), embedder)
        self.assertEqual(result.linked_node, 'alpha')

    def test_dedup(self):
        """Entities linking to one node collapse to the first."""
        results = link_entities(['APOE4', 'apoe4', 'amyloid beta'], self.graph, Hashed())
        self.assertEqual([r.query_entity for r in results], ['APOE4', 'amyloid beta'])

    def test_min_similarity(self):
        """Entities below the floor are dropped."""
        self.assertEqual(link_entities(['amyloid beta peptide'], self.graph, Hashed(), min_similarity=0.99), [])

    def test_zero_vector(self):
        """Entities without tokens are dropped."""
        self.assertEqual(link_entities(['---'], self.graph, Hashed()), [])

    def test_empty_graph(self):
        """Linking into no nodes is an error."""
        self.assertRaises(EmptyGraph, link_entities, ['x'], KnowledgeGraph.from_triples([]), Hashed())

    def test_brute_force(self):
        """On a random 20-node graph linking equals an exhaustive scan."""
        rng = random.Random(4)
        names = ['n{}'.format(i) for i in range(20)]
        table = {name: [rng.gauss(0, 1) for _ in range(6)] for name in names}
        queries = ['q{}'.format(i) for i in range(15)]
        table.update({q: [rng.gauss(0, 1) for _ in range(6)] for q in queries})
        graph = graph_of(*zip(names, names[1:]))
        embedder = FixedEmbedder(table)
        results = link_entities(queries, graph, embedder)
        expected, seen = [], set()
        for q in queries:
            scores = {n: cosine(table[q], table[n]) for n in names}
            top = max(scores.values())
            best = min(n for n in names if scores[n] == top)
            if best not in seen:
                seen.add(best)
                expected.append((q, best))
        self.assertEqual([(r.query_entity, r.linked_node) for r in results], expected)
        self.assertLessEqual(len(results), len(queries))
        self.assertTrue(all(r.linked_node in graph for r in results))

    def test_scaling(self):
        """Scaling every embedding by a positive constant changes no link."""
        rng = random.Random(9)
        names = ['n{}'.format(i) for i in range(10)]
        table = {name: [rng.gauss(0, 1) for _ in range(4)] for name in names + ['q1', 'q2', 'q3']}
        graph = graph_of(*zip(names, names[1:]))
        plain = link_entities(['q1', 'q2', 'q3'], graph, FixedEmbedder(table))
        scaled = link_entities(['q1', 'q2', 'q3'], graph,
                               FixedEmbedder({k: [7.5 * x for x in v] for k, v in table.items()}))
        self.assertEqual([r.linked_node for r in plain], [r.linked_node for r in scaled])


class TestNodeEmbeddings(TestCase):
    """Test the :class:`.NodeEmbeddings` cache."""

    def setUp(self):
        NodeEmbeddings.clear()
        self.graph = graph_of(('APOE4', 'amyloid beta'), ('TREM2', 'microglia'))

    def test_memo(self):
        """One computation per snapshot and provider."""
        embedder = Hashed()
        self.assertIs(NodeEmbeddings.for_graph(self.graph, embedder), NodeEmbeddings.for_graph(self.graph, embedder))

    def test_memo_bounded(self):
        """Snapshots of every year keep at most MEMO_SIZE entries in memory."""
        graph = KnowledgeGraph.from_triples(Triple('G{}'.format(year), 'r', 'AD', '1', year)
                                            for year in range(2011, 2022))
        embedder = Hashed(16)
        snapshots = [graph.snapshot_until(year) for year in range(2011, 2022)]
        for snapshot in snapshots:
            NodeEmbeddings.for_graph(snapshot, embedder)
        self.assertEqual(len(NodeEmbeddings._memo), NodeEmbeddings.MEMO_SIZE)
        self.assertIn((snapshots[-1].snapshot_id, embedder.provider_id), NodeEmbeddings._memo)
        self.assertNotIn((snapshots[0].snapshot_id, embedder.provider_id), NodeEmbeddings._memo)
        self.assertEqual(NodeEmbeddings._pending, {})

    def test_memo_recent(self):
        """A lookup makes its snapshot the most recently used."""
        embedder = Hashed(16)
        first = NodeEmbeddings.for_graph(self.graph, embedder)
        for n in range(NodeEmbeddings.MEMO_SIZE - 1):
            NodeEmbeddings.for_graph(graph_of(('X{}'.format(n), 'Y')), embedder)
        self.assertIs(NodeEmbeddings.for_graph(self.graph, embedder), first)
        NodeEmbeddings.for_graph(graph_of(('Z', 'Y')), embedder)
        self.assertIs(NodeEmbeddings.for_graph(self.graph, embedder), first)

    def test_save_load(self):
        """Embeddings persist as JSON lines."""
        with tempfile.TemporaryDirectory() as directory:
            computed = NodeEmbeddings.for_graph(self.graph, Hashed(), directory)
            self.assertEqual(len(os.listdir(directory)), 1)
            NodeEmbeddings.clear()
            loaded = NodeEmbeddings.for_graph(self.graph, Hashed(), directory)
            self.assertIsNot(loaded, computed)
            self.assertTrue(np.array_equal(loaded.matrix, computed.matrix))
            self.assertEqual(loaded.node_ids, self.graph.node_ids)


class TestLiveEmbedder(TestCase):
    """Test :class:`.Live` embeddings against the stub server."""

    def setUp(self):
        self.stub = StubProvider(dimension=4, failures=[500])
        self.embedder = Live(self.stub.start(), 'stub-embedder', timeout=5, backoff=0)

    def tearDown(self):
        self.stub.stop()

    def test_embed(self):
        """Vectors come back in input order after one retry."""
        vectors = self.embedder.embed(['tau', 'amyloid'])
        self.assertEqual([list(v) for v in vectors], [[3.0, 1.0, 0.0, 0.0], [7.0, 1.0, 0.0, 0.0]])
        self.assertEqual(self.embedder.dimension, 4)
        self.assertEqual(self.embedder.provider_id, 'live-stub-embedder')
