"""Test Knowledge Graph Store
=============================
"""
import random
from unittest import TestCase

from kg_store import (HEADER, InvalidTriple, KnowledgeGraph, MalformedRow, Method, Triple, UnknownNode,
                      normalize_name, parse_kg, serialize_kg)
from testing import read_fixture


def triple(head, relation, tail, year=2015, doc='1', method=Method.GENERATIVE):
    return Triple(head, relation, tail, doc, year, method)


def random_triples(rng, n, nodes=40, relations=8):
    names = ['node {}'.format(i) for i in range(nodes)]
    made = []
    while len(made) < n:
        head, tail = rng.sample(names, 2)
        made.append(triple(head, 'rel {}'.format(rng.randrange(relations)), tail,
                           year=rng.randint(2011, 2021), doc=str(rng.randint(1, 99))))
    return made


class TestTriple(TestCase):
    """Test :class:`.Triple`."""

    def test_normalize(self):
        """Identity folds case, whitespace and typographic quotes."""
        self.assertEqual(normalize_name('  Alzheimer’s   Disease '), "alzheimer's disease")
        self.assertEqual(triple('APOE4', 'ASSOCIATES', 'AD').key, triple('apoe4', 'associates', ' ad').key)

    def test_display(self):
        """Display casing is kept, whitespace collapsed."""
        self.assertEqual(triple(' APOE4 ', 'ASSOCIATES', 'Alzheimer’s  disease').render(),
                         'APOE4->ASSOCIATES->Alzheimer’s disease')

    def test_invalid(self):
        """Empty fields and self-loops are rejected."""
        self.assertRaises(InvalidTriple, triple, ' ', 'r', 'b')
        self.assertRaises(InvalidTriple, triple, 'Tau', 'is', 'TAU')

    def test_generated_not_identity(self):
        """The generated flag does not affect equality."""
        a = Triple('a', 'r', 'b', '1', 2015, Method.PAIRWISE, generated=True)
        self.assertEqual(a, Triple('a', 'r', 'b', '1', 2015, Method.PAIRWISE))


class TestFromTriples(TestCase):
    """Test :meth:`.KnowledgeGraph.from_triples`."""

    def test_empty(self):
        """No triples, no nodes."""
        graph = KnowledgeGraph.from_triples([])
        self.assertEqual((len(graph.nodes), len(graph.triples)), (0, 0))

    def test_single(self):
        """One triple, two nodes, one out entry."""
        graph = KnowledgeGraph.from_triples([triple('a', 'r', 'b')])
        self.assertEqual(len(graph.nodes), 2)
        self.assertEqual(graph.out_index['a'], [('r', 'b', 0)])
        self.assertEqual(graph.in_index['b'], [('r', 'a', 0)])

    def test_dedup_earliest(self):
        """Duplicates keep the earliest year."""
        graph = KnowledgeGraph.from_triples([triple('a', 'r', 'b', 2015, '9'), triple('A', 'R', 'B', 2012, '7')])
        self.assertEqual(len(graph.triples), 1)
        self.assertEqual((graph.triples[0].year, graph.triples[0].source_doc), (2012, '7'))

    def test_random_counts(self):
        """Counts match a naive set construction."""
        rng = random.Random(11)
        triples = random_triples(rng, 500)
        graph = KnowledgeGraph.from_triples(triples)
        keys = {t.key for t in triples}
        self.assertEqual(len(graph.triples), len(keys))
        self.assertEqual(len(graph.nodes), len({k[0] for k in keys} | {k[2] for k in keys}))
        self.assertEqual(graph.stats()['#Relations'], len({k[1] for k in keys}))

    def test_index_consistency(self):
        """Each triple has exactly one out and one in entry."""
        graph = KnowledgeGraph.from_triples(random_triples(random.Random(3), 200))
        outs = sorted(i for entries in graph.out_index.values() for _, _, i in entries)
        ins = sorted(i for entries in graph.in_index.values() for _, _, i in entries)
        self.assertEqual(outs, list(range(len(graph.triples))))
        self.assertEqual(ins, outs)

    def test_snapshot_id_order_free(self):
        """Insertion order does not change the snapshot id."""
        triples = random_triples(random.Random(5), 100)
        shuffled = list(triples)
        random.Random(6).shuffle(shuffled)
        self.assertEqual(KnowledgeGraph.from_triples(triples).snapshot_id,
                         KnowledgeGraph.from_triples(shuffled).snapshot_id)

    def test_stats(self):
        """Statistics mirror the Table 1 layout."""
        graph = parse_kg(read_fixture('minicorpus_generative.tsv'))
        stats = graph.stats()
        self.assertEqual(stats['#Triples'], 51)
        self.assertEqual(stats['triples_per_year']['2011'], 2)
        self.assertEqual(sum(stats['triples_per_year'].values()), 51)


class TestNeighbors(TestCase):
    """Test :meth:`.KnowledgeGraph.neighbors`."""

    def test_star(self):
        """The hub of a star has degree n-1."""
        graph = KnowledgeGraph.from_triples([triple('hub', 'r', 'leaf {}'.format(i)) for i in range(9)])
        self.assertEqual(len(graph.neighbors('hub')), 9)
        self.assertEqual(graph.neighbors('leaf 3'), [('r', 'hub')])
        self.assertEqual(graph.neighbors('leaf 3', 'out'), [])

    def test_unknown(self):
        """Absent ids are UnknownNode."""
        graph = KnowledgeGraph.from_triples([triple('a', 'r', 'b')])
        self.assertRaises(UnknownNode, graph.neighbors, 'c')
        self.assertRaises(UnknownNode, graph.name, 'c')

    def test_naive_scan(self):
        """Adjacency matches a scan of the raw triples."""
        graph = KnowledgeGraph.from_triples(random_triples(random.Random(8), 300))
        for node in graph.node_ids:
            expected = []
            for t in graph.triples:
                head, _, tail = t.key
                if head == node:
                    expected.append((t.relation, tail))
                elif tail == node:
                    expected.append((t.relation, head))
            self.assertEqual(graph.neighbors(node), expected)

    def test_undirected(self):
        """The traversal view ignores direction."""
        graph = KnowledgeGraph.from_triples([triple('a', 'r', 'b'), triple('c', 's', 'b')])
        self.assertTrue(graph.undirected.has_edge('b', 'a'))
        self.assertEqual(graph.between('b', 'c'), 1)
        self.assertEqual(graph.incident('b'), [0, 1])


class TestSnapshots(TestCase):
    """Test :meth:`.KnowledgeGraph.snapshot_until`."""

    def setUp(self):
        self.graph = parse_kg(read_fixture('minicorpus_generative.tsv'))

    def test_before(self):
        """A year before every triple gives the empty graph."""
        self.assertEqual(len(self.graph.snapshot_until(2000).triples), 0)

    def test_after(self):
        """A year after every triple gives the same snapshot."""
        self.assertEqual(self.graph.snapshot_until(2030).snapshot_id, self.graph.snapshot_id)

    def test_monotone(self):
        """Triple counts never decrease, and earlier snapshots are subsets."""
        rng = random.Random(2)
        graph = KnowledgeGraph.from_triples(random_triples(rng, 300))
        previous = set()
        for year in range(2011, 2022):
            keys = {t.key for t in graph.snapshot_until(year).triples}
            self.assertTrue(previous <= keys)
            previous = keys
        self.assertEqual(len(previous), len(graph.triples))


class TestTsv(TestCase):
    """Test :func:`.serialize_kg` and :func:`.parse_kg`."""

    def test_round_trip(self):
        """The golden mini-corpus graph round-trips byte for byte."""
        text = read_fixture('minicorpus_generative.tsv')
        graph = parse_kg(text)
        self.assertEqual(serialize_kg(graph), text)
        self.assertEqual(parse_kg(serialize_kg(graph)).snapshot_id, graph.snapshot_id)

    def test_empty(self):
        """An empty graph is a header-only file."""
        self.assertEqual(serialize_kg(KnowledgeGraph.from_triples([])), HEADER + '\n')

    def test_four_columns(self):
        """A row with 4 columns is malformed."""
        with self.assertRaises(MalformedRow) as context:
            parse_kg(HEADER + '\na\tr\tb\t1\n')
        self.assertEqual(context.exception.line_no, 2)

    def test_bad_year(self):
        """Years must be integers."""
        self.assertRaises(MalformedRow, parse_kg, HEADER + '\na\tr\tb\t1\tlast\tgenerative\n')

    def test_escapes(self):
        """Backslashes inside fields survive."""
        graph = KnowledgeGraph.from_triples([triple('a\\b', 'r', 'c d')])
        self.assertIn('a\\\\b', serialize_kg(graph))
        self.assertEqual(parse_kg(serialize_kg(graph)).triples, graph.triples)
