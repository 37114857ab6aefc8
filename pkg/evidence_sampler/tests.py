"""Test Evidence Sampling
=======================
"""
import json
import random
from collections import deque
from unittest import TestCase

import numpy as np

from embed_link import Hashed, NodeEmbeddings, cosine
from errors import InputError
from evidence_sampler import (EvidenceBundle, EvidenceSubgraph, Kind, SamplerConfig, UnknownSeed,
                              build_describe_prompt, explore_neighbors, explore_paths, extract_question_entities,
                              parse_entities, prune, sample_evidence, verbalize)
from kg_store import KnowledgeGraph, Triple
from llm_gateway import Gateway, Scripted, Tracer
from testing import MultipleTests

EVIDENCE = "Path-based Evidence 1: 'Entorhinal cortex' is a part of 'brain'."


def graph_of(*edges):
    """Return a graph of (head, relation, tail) or (head, tail) edges."""
    return KnowledgeGraph.from_triples(
        Triple(*(edge if len(edge) == 3 else (edge[0], 'r', edge[1])), source_doc='1', year=2015) for edge in edges)


def random_graph(rng):
    names = ['n{:02d}'.format(i) for i in range(rng.randint(2, 50))]
    edges = [tuple(rng.sample(names, 2)) + ('r{}'.format(rng.randint(0, 2)),) for _ in range(rng.randint(1, 2 * len(names)))]
    graph = graph_of(*((h, r, t) for h, t, r in edges))
    seeds = rng.sample(graph.node_ids, min(len(graph.node_ids), rng.randint(1, 5)))
    return graph, seeds


def adjacency(graph):
    adjacent = {node: set() for node in graph.nodes}
    for head, _, tail in (t.key for t in graph.triples):
        adjacent[head].add(tail)
        adjacent[tail].add(head)
    return adjacent


def distances(adjacent, start):
    """Plain breadth-first search without a bound."""
    found, queue = {start: 0}, deque([start])
    while queue:
        node = queue.popleft()
        for other in adjacent[node]:
            if other not in found:
                found[other] = found[node] + 1
                queue.append(other)
    return found


def gateway(*rules):
    return Tracer(Gateway(Scripted(rules)))


class TestQuestionEntities(TestCase):
    """Test :func:`.extract_question_entities`."""

    def test_listing(self):
        """A comma-separated reply is the entity list."""
        entities = extract_question_entities('Which region?', gateway(('Which', 'entorhinal cortex, temporal lobe')))
        self.assertEqual(entities, ['entorhinal cortex', 'temporal lobe'])

    def test_empty(self):
        """An empty reply has no entities."""
        self.assertEqual(extract_question_entities('Which region?', gateway(('Which', ''))), [])

    def test_duplicates(self):
        """Names equal after normalization appear once."""
        self.assertEqual(parse_entities('APOE, apoe'), ['APOE'])

    def test_formatting(self):
        """Labels, bullets, quotes and brackets are handled."""
        self.assertEqual(parse_entities('Entities: "tau", (18)F-THK-5117\n- amyloid beta.\nNone'),
                         ['tau', '(18)F-THK-5117', 'amyloid beta'])

    def test_prompt(self):
        """The prompt asks for domain-specific entities."""
        tracer = gateway(('domain-specific entities', 'tau'))
        extract_question_entities('Where do tangles form?', tracer)
        self.assertEqual(len(tracer.keys), 1)


class TestExplorePaths(TestCase):
    """Test :func:`.explore_paths`."""

    def test_single_seed(self):
        """One seed gives one empty segment."""
        subgraph = explore_paths(graph_of(('a', 'b')), ['a'])
        self.assertEqual(subgraph.segments, (('a',),))
        self.assertEqual(len(subgraph), 0)

    def test_chain(self):
        """a-b-c with seeds a and c is one segment through b."""
        graph = graph_of(('a', 'r1', 'b'), ('c', 'r2', 'b'))
        subgraph = explore_paths(graph, ['c', 'a'], SamplerConfig(hop_bound=2))
        self.assertEqual(subgraph.segments, (('a', 'b', 'c'),))
        self.assertEqual(subgraph.lines(), ['a->r1->b', 'c->r2->b'])
        self.assertEqual(subgraph.chains, ('a->r1->b->r2->c',))

    def test_out_of_reach(self):
        """Seeds beyond the hop bound start new segments."""
        subgraph = explore_paths(graph_of(('a', 'b'), ('b', 'c')), ['a', 'c'], SamplerConfig(hop_bound=1))
        self.assertEqual(subgraph.segments, (('a',), ('c',)))
        self.assertEqual(len(subgraph), 0)

    def test_ties(self):
        """Equal paths go through the smaller intermediate node."""
        graph = graph_of(('a', 'y'), ('y', 'd'), ('a', 'x'), ('x', 'd'))
        self.assertEqual(explore_paths(graph, ['a', 'd']).segments, (('a', 'x', 'd'),))

    def test_nearest_first(self):
        """The nearest candidate is visited before the smaller one."""
        graph = graph_of(('s', 'z'), ('s', 'm'), ('m', 'b'))
        self.assertEqual(explore_paths(graph, ['s', 'b', 'z'], SamplerConfig(hop_bound=3)).segments,
                         (('b', 'm', 's', 'z'),))

    def test_unknown(self):
        """Seeds must be graph nodes."""
        self.assertRaises(UnknownSeed, explore_paths, graph_of(('a', 'b')), ['a', 'q'])

    def test_config(self):
        """Bounds are validated."""
        self.assertRaises(InputError, SamplerConfig, hop_bound=0)
        self.assertRaises(InputError, SamplerConfig, max_triples=0)


def check_paths(self, trial, _):
    """Segments are valid walks that agree with a plain BFS."""
    rng = random.Random(trial)
    graph, seeds = random_graph(rng)
    hop_bound = rng.randint(1, 3)
    subgraph = explore_paths(graph, seeds, SamplerConfig(hop_bound=hop_bound))
    adjacent = adjacency(graph)
    remaining = sorted(set(seeds))
    for segment in subgraph.segments:
        self.assertEqual(segment[0], remaining[0])
        current, position = remaining.pop(0), 0
        for i in range(1, len(segment)):
            self.assertIn(segment[i], adjacent[segment[i - 1]])
            if segment[i] in remaining:
                found = distances(adjacent, current)
                reach = min((found[c], c) for c in remaining if found.get(c, hop_bound + 1) <= hop_bound)
                self.assertEqual(reach, (i - position, segment[i]))
                remaining.remove(segment[i])
                current, position = segment[i], i
        self.assertEqual(position, len(segment) - 1)
        found = distances(adjacent, current)
        self.assertFalse([c for c in remaining if found.get(c, hop_bound + 1) <= hop_bound])
    self.assertEqual(remaining, [])
    self.assertTrue(set(subgraph.triples) <= set(graph.triples))


class TestPathOracle(MultipleTests):
    """Path exploration against a brute-force BFS on random graphs."""


for trial in range(200):
    TestPathOracle.generate_test(check_paths, trial)


class TestExploreNeighbors(TestCase):
    """Test :func:`.explore_neighbors`."""

    def setUp(self):
        NodeEmbeddings.clear()
        self.graph = graph_of(('amyloid beta', 'APOE4'), ('APOE4', 'tau'), ('tau', 'microglia'),
                              ('amyloid beta', 'plaques'), ('plaques', 'senile plaques'), ('x', 'y'))

    def edges(self, subgraph):
        return {(t.head, t.tail) for t in subgraph.triples}

    def test_first_hop_only(self):
        """An unreachable threshold keeps the seeds' own triples."""
        subgraph = explore_neighbors(self.graph, ['amyloid beta'], 'q', SamplerConfig(relevance_threshold=1.01))
        self.assertEqual(self.edges(subgraph), {('amyloid beta', 'APOE4'), ('amyloid beta', 'plaques')})
        self.assertEqual(subgraph.core, 2)

    def test_second_hop(self):
        """The lowest threshold expands every neighbor."""
        subgraph = explore_neighbors(self.graph, ['amyloid beta'], 'q', SamplerConfig(relevance_threshold=-1))
        self.assertEqual(self.edges(subgraph), {('amyloid beta', 'APOE4'), ('amyloid beta', 'plaques'),
                                                ('APOE4', 'tau'), ('plaques', 'senile plaques')})
        self.assertEqual(subgraph.core, 2)

    def test_relevance(self):
        """Only neighbors resembling the question are expanded."""
        subgraph = explore_neighbors(self.graph, ['amyloid beta'], 'What forms plaques?')
        self.assertIn(('plaques', 'senile plaques'), self.edges(subgraph))
        self.assertNotIn(('APOE4', 'tau'), self.edges(subgraph))

    def test_monotone(self):
        """Raising the threshold never adds triples."""
        rng = random.Random(3)
        for _ in range(20):
            graph, seeds = random_graph(rng)
            question = ' '.join(rng.sample(graph.node_ids, min(3, len(graph.node_ids))))
            found = [set(explore_neighbors(graph, seeds, question, SamplerConfig(relevance_threshold=tau)).triples)
                     for tau in (-1.0, 0.05, 0.3, 0.6, 1.01)]
            for larger, smaller in zip(found, found[1:]):
                self.assertTrue(smaller <= larger)

    def test_unknown(self):
        """Seeds must be graph nodes."""
        self.assertRaises(UnknownSeed, explore_neighbors, self.graph, ['nothing'], 'q')


def check_neighbors(self, trial, _):
    """Neighbor exploration equals a set-based two-phase expansion."""
    rng = random.Random(1000 + trial)
    graph, seeds = random_graph(rng)
    question = ' '.join(rng.sample(graph.node_ids, min(len(graph.node_ids), rng.randint(1, 4))) + ['disease'])
    tau = rng.choice([-1.0, 0.05, 0.3, 0.6, 1.01])
    subgraph = explore_neighbors(graph, seeds, question, SamplerConfig(relevance_threshold=tau))
    embedder = Hashed()
    target, = embedder.embed([question])

    def score(node):
        vector, = embedder.embed([graph.name(node)])
        return cosine(vector, target) if np.any(vector) and np.any(target) else -1.0

    touching = lambda nodes: {t for t in graph.triples if t.key[0] in nodes or t.key[2] in nodes}
    first = touching(set(seeds))
    fresh = {node for t in first for node in t.key[::2]} - set(seeds)
    second = touching({node for node in fresh if score(node) >= tau})
    self.assertEqual(set(subgraph.triples), first | second)
    self.assertEqual(set(subgraph.triples[:subgraph.core]), first)
    self.assertEqual(len(subgraph.triples), len(set(subgraph.triples)))


class TestNeighborOracle(MultipleTests):
    """Neighbor exploration against a naive oracle on random graphs."""


for trial in range(200):
    TestNeighborOracle.generate_test(check_neighbors, trial)


class TestPrune(TestCase):
    """Test :func:`.prune`."""

    def setUp(self):
        leaves = ['l{:02d}'.format(i) for i in range(25)]
        edges = [('hub', leaf) for leaf in leaves]
        edges += [(leaf, '{}-m{}'.format(leaf, j)) for leaf in leaves for j in range(3)]
        self.graph = graph_of(*edges)
        self.subgraph = explore_neighbors(self.graph, ['hub'], 'q', SamplerConfig(relevance_threshold=-1))

    def test_under_cap(self):
        """A small subgraph is unchanged."""
        self.assertEqual(prune(self.subgraph, SamplerConfig(max_triples=100)), self.subgraph)

    def test_truncate(self):
        """Seed-adjacent triples survive truncation first."""
        self.assertEqual(len(self.subgraph), 100)
        pruned = prune(self.subgraph, SamplerConfig(max_triples=40))
        self.assertEqual(len(pruned), 40)
        self.assertEqual(pruned.core, 25)
        self.assertTrue(all(t.head == 'hub' for t in pruned.triples[:25]))

    def test_idempotent(self):
        """Pruning twice is pruning once."""
        config = SamplerConfig(max_triples=30)
        once = prune(self.subgraph, config)
        self.assertEqual(prune(once, config), once)

    def test_duplicates(self):
        """Repeated triples across segments are dropped."""
        triple = self.graph.triples[0]
        subgraph = EvidenceSubgraph(Kind.PATH, (triple, self.graph.triples[1], triple))
        self.assertEqual(prune(subgraph).triples, (triple, self.graph.triples[1]))


class TestVerbalize(TestCase):
    """Test :func:`.verbalize`."""

    def setUp(self):
        graph = graph_of(('entorhinal cortex', 'is a part of', 'brain'), ('temporal lobe', 'affected by', 'AD'))
        self.subgraph = EvidenceSubgraph(Kind.PATH, graph.triples)

    def test_labelled(self):
        """Labelled lines are the sentences."""
        sentences = verbalize(self.subgraph, gateway(('name them as Path-based Evidence', EVIDENCE)))
        self.assertEqual(sentences, ["'Entorhinal cortex' is a part of 'brain'."])

    def test_fallback(self):
        """Unlabelled replies fall back to one templated sentence per triple."""
        sentences = verbalize(self.subgraph, gateway(('Output:', 'I cannot help with that.')))
        self.assertEqual(sentences, ["'entorhinal cortex' is a part of 'brain'.", "'temporal lobe' affected by 'AD'."])

    def test_empty(self):
        """Nothing to describe makes no call."""
        tracer = gateway()
        self.assertEqual(verbalize(EvidenceSubgraph(Kind.NEIGHBOR), tracer), [])
        self.assertEqual(tracer.keys, [])

    def test_prompt(self):
        """The prompt lists the triples and names the label."""
        prompt = build_describe_prompt(self.subgraph).user_prompt
        self.assertIn('entorhinal cortex->is a part of->brain\ntemporal lobe->affected by->AD', prompt)
        self.assertIn('name them as Path-based Evidence 1, Path-based Evidence 2,...', prompt)

    def test_continuation(self):
        """Wrapped sentences are joined, numbering orders them."""
        text = 'Neighbor-based Evidence 2: second.\nNeighbor-based Evidence 1: first\npart.'
        subgraph = EvidenceSubgraph(Kind.NEIGHBOR, self.subgraph.triples)
        self.assertEqual(verbalize(subgraph, gateway(('Output:', text))), ['first part.', 'second.'])


class TestSampleEvidence(TestCase):
    """Test :func:`.sample_evidence`."""

    def setUp(self):
        NodeEmbeddings.clear()
        self.graph = graph_of(('a', 'b'), ('b', 'c'), ('c', 'd'))

    def test_no_seeds(self):
        """Without seeds both families are empty."""
        bundle = sample_evidence(self.graph, [], 'q')
        self.assertEqual(bundle, EvidenceBundle())
        self.assertFalse(bundle.path or bundle.neighbor)

    def test_bundle(self):
        """Both families are sampled and pruned."""
        bundle = sample_evidence(self.graph, ['a', 'c'], 'q', SamplerConfig(relevance_threshold=1.01, max_triples=2))
        path, neighbor = bundle
        self.assertEqual(path.lines(), ['a->r->b', 'b->r->c'])
        self.assertEqual(len(neighbor), 2)
        dump = json.loads(bundle.to_json('s1'))
        self.assertEqual(dump['path']['segments'], ['a->r->b->r->c'])
        self.assertEqual(dump['neighbor']['kind'], 'neighbor')
