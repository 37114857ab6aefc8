"""Test Self-aware Knowledge Retrieval
=====================================
"""
from unittest import TestCase

from errors import InputError
from evidence_sampler import EvidenceBundle, EvidenceSubgraph, Kind
from kg_store import KnowledgeGraph, Triple
from llm_gateway import Gateway, Provider, Scripted, Tracer
from self_retrieval import (EmptySubgraph, RankedEvidence, build_rerank_prompt, parse_rerank_output, rerank,
                            retrieve)

PATH_TRIPLES = [
    ('entorhinal cortex', 'is a part of', 'brain'),
    ('entorhinal cortex', 'associates', "mouse with Alzheimer's disease"),
    ('temporal lobe', 'affected by', "Alzheimer's disease"),
    ("mouse with Alzheimer's disease", 'brain region', 'temporal lobe'),
]

RERANKED = ('Reranked Triples1: entorhinal cortex ->is a part of ->brain\n'
            'Reranked Triples2: entorhinal cortex ->associates ->mouse with Alzheimer’s disease\n'
            'Reranked Triples3: temporal lobe ->affected by ->Alzheimer’s disease')


def subgraph_of(edges, kind=Kind.PATH):
    graph = KnowledgeGraph.from_triples(Triple(h, r, t, '1', 2016) for h, r, t in edges)
    return EvidenceSubgraph(kind, graph.triples)


class Echo(Provider):
    """Answers a rerank prompt by repeating its graph lines in order."""

    def complete(self, request):
        graph = request.user_prompt.split('Graph:\n', 1)[1].split('\n\nQuestion:', 1)[0]
        return '\n'.join('Reranked Triple{}: {}'.format(i, line) for i, line in enumerate(graph.splitlines(), 1))


class TestRerankPrompt(TestCase):
    """Test :func:`.build_rerank_prompt`."""

    def setUp(self):
        self.subgraph = subgraph_of(PATH_TRIPLES)

    def test_instruction(self):
        """The instruction names retrieve_k and the tag is self_retrieve."""
        request = build_rerank_prompt('Which area?', self.subgraph, 5)
        self.assertIn('output at most 5 important and relevant triples', request.user_prompt)
        self.assertIn('Reranked Triple5: xxx ——> xxx', request.user_prompt)
        self.assertNotIn('Reranked Triple6', request.user_prompt)
        self.assertEqual(request.tag, 'self_retrieve')

    def test_lines(self):
        """One line per triple plus the fixed scaffold."""
        for k in (1, 3, 5):
            prompt = build_rerank_prompt('Which area?', self.subgraph, k).user_prompt
            self.assertEqual(len(prompt.splitlines()), len(self.subgraph.triples) + k + 9)
        self.assertIn('entorhinal cortex->is a part of->brain\n', prompt)

    def test_empty(self):
        """An empty subgraph cannot be reranked."""
        self.assertRaises(EmptySubgraph, build_rerank_prompt, 'q', EvidenceSubgraph(Kind.PATH))
        self.assertRaises(InputError, build_rerank_prompt, 'q', self.subgraph, 0)


class TestParseRerank(TestCase):
    """Test :func:`.parse_rerank_output`."""

    def setUp(self):
        self.candidates = subgraph_of(PATH_TRIPLES).triples

    def render(self, ranked):
        return [str(t) for t in ranked.triples]

    def test_case_study(self):
        """The three echoed lines match in the model's order."""
        ranked = parse_rerank_output(RERANKED, self.candidates)
        self.assertEqual(self.render(ranked), [
            'entorhinal cortex->is a part of->brain',
            "entorhinal cortex->associates->mouse with Alzheimer's disease",
            "temporal lobe->affected by->Alzheimer's disease"])
        self.assertEqual(ranked.unmatched_lines, 0)
        self.assertEqual(ranked.raw_response, RERANKED)

    def test_duplicates(self):
        """A triple repeated is kept once, at its first rank."""
        text = ('Reranked Triple1: temporal lobe -> affected by -> AD\n'
                "Reranked Triple2: temporal lobe —> affected by —> Alzheimer's disease\n"
                "Reranked Triple3: Temporal Lobe --> AFFECTED BY --> Alzheimer's disease")
        ranked = parse_rerank_output(text, self.candidates)
        self.assertEqual(self.render(ranked), ["temporal lobe->affected by->Alzheimer's disease"])
        self.assertEqual(ranked.unmatched_lines, 1)

    def test_hallucinated(self):
        """Lines naming no candidate are counted, not kept."""
        text = 'Reranked Triple1: entorhinal cortex -> is a part of -> brain\nReranked Triple2: tau -> binds -> THK'
        ranked = parse_rerank_output(text, self.candidates)
        self.assertEqual(len(ranked), 1)
        self.assertEqual(ranked.unmatched_lines, 1)

    def test_pair_match(self):
        """A reworded relation still matches by its ends."""
        ranked = parse_rerank_output('Reranked Triple1: entorhinal cortex ——> belongs to ——> brain.', self.candidates)
        self.assertEqual(self.render(ranked), ['entorhinal cortex->is a part of->brain'])

    def test_numbering(self):
        """Lines are taken in ascending number and cut at retrieve_k."""
        text = ('Reranked Triple2: temporal lobe -> affected by -> alzheimer\'s disease\n'
                'Reranked Triple1: entorhinal cortex -> is a part of -> brain\n'
                'Reranked Triple3: entorhinal cortex -> associates -> mouse with alzheimer\'s disease')
        ranked = parse_rerank_output(text, self.candidates, retrieve_k=2)
        self.assertEqual(self.render(ranked), ['entorhinal cortex->is a part of->brain',
                                               "temporal lobe->affected by->Alzheimer's disease"])
        self.assertEqual(ranked.retrieve_k, 2)

    def test_total(self):
        """Arbitrary text parses to empty evidence."""
        for text in ('', 'no idea', 'Reranked Triple1: xxx ——> xxx', 'Reranked Triple: a -> b -> c', '\x00->'):
            ranked = parse_rerank_output(text, self.candidates)
            self.assertEqual(ranked.triples, ())


class TestRetrieve(TestCase):
    """Test :func:`.retrieve`."""

    def setUp(self):
        self.bundle = EvidenceBundle(
            subgraph_of(PATH_TRIPLES),
            subgraph_of([("Alzheimer's disease", 'causes', 'neuronal death'),
                         ("Alzheimer's disease", 'affects', 'human')], Kind.NEIGHBOR))

    def test_echo(self):
        """An echoing model returns each family unchanged up to retrieve_k."""
        path, neighbor = retrieve('q', self.bundle, Gateway(Echo()), retrieve_k=5)
        self.assertEqual(path.triples, self.bundle.path.triples)
        self.assertEqual(neighbor.triples, self.bundle.neighbor.triples)
        path, _ = retrieve('q', self.bundle, Gateway(Echo()), retrieve_k=2)
        self.assertEqual(path.triples, self.bundle.path.triples[:2])

    def test_separate(self):
        """Each family is reranked by its own call."""
        tracer = Tracer(Gateway(Scripted([
            ('causes->neuronal death', 'Reranked Triple1: human -> affects -> nobody\n'
                                       "Reranked Triple2: Alzheimer's disease -> affects -> human"),
            ('Please rerank', RERANKED)])))
        path, neighbor = retrieve('q', self.bundle, tracer)
        self.assertEqual(len(tracer.keys), 2)
        self.assertEqual((len(path), len(neighbor)), (3, 1))
        self.assertEqual(neighbor.unmatched_lines, 1)
        self.assertEqual(neighbor.as_subgraph().kind, Kind.NEIGHBOR)

    def test_empty_family(self):
        """An empty family makes no call."""
        tracer = Tracer(Gateway(Echo()))
        path, neighbor = retrieve('q', EvidenceBundle(neighbor=self.bundle.neighbor), tracer)
        self.assertEqual(path, RankedEvidence(Kind.PATH))
        self.assertEqual(len(neighbor), 2)
        self.assertEqual(len(tracer.keys), 1)

    def test_joint(self):
        """Joint reranking makes one call and splits by family."""
        tracer = Tracer(Gateway(Echo()))
        path, neighbor = retrieve('q', self.bundle, tracer, retrieve_k=5, joint=True)
        self.assertEqual(len(tracer.keys), 1)
        self.assertEqual(path.triples, self.bundle.path.triples)
        self.assertEqual(neighbor.triples, self.bundle.neighbor.triples[:1])

    def test_rerank_single(self):
        """Reranking one subgraph keeps its kind."""
        ranked = rerank('q', self.bundle.neighbor, Gateway(Echo()))
        self.assertEqual(ranked.kind, Kind.NEIGHBOR)
