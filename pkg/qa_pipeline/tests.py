"""Test Question Answering
========================
"""
import json
import os
import tempfile
from unittest import TestCase

from errors import InputError
from evidence_sampler import Kind
from kg_store import read_kg
from llm_gateway import ExchangeStore, Gateway, Record, Replay, Scripted
from qa_pipeline import (InvalidSample, Mode, PipelineConfig, QASample, answer, answer_all, build_inference_prompt,
                         dump_predictions, dump_subgraphs, evidence_block, extract_answer, load_samples,
                         read_samples)
from testing import fixture, read_fixture

CASE_STUDY_OUTPUT = json.loads(read_fixture('casestudy_script.json'))[-1]['response']


def sample(**fields):
    data = dict(id='q1', dataset='MedQA', question='Which gene?', options={'A': 'APOE', 'B': 'APP'}, gold='A')
    data.update(fields)
    return QASample(**data)


def case_study():
    return (read_samples(fixture('casestudy_question.jsonl'))[0], read_kg(fixture('casestudy_kg.tsv')),
            Scripted.from_file(fixture('casestudy_script.json')))


class TestSamples(TestCase):
    """Test :class:`.QASample` and the JSON-lines reader."""

    def test_valid(self):
        """Options render one per line."""
        self.assertEqual(sample().render_options(), 'A. APOE\nB. APP')
        self.assertEqual(sample().letters, 'AB')
        self.assertEqual(sample().text('stem'), 'Which gene?')
        self.assertEqual(sample().text(), 'Which gene?\nA. APOE\nB. APP')

    def test_invalid(self):
        """Gold must be an option and letters run from A."""
        self.assertRaises(InvalidSample, sample, gold='C')
        self.assertRaises(InvalidSample, sample, options={'A': 'x', 'C': 'y'})
        self.assertRaises(InvalidSample, sample, options={'A': 'x'}, gold='A')
        self.assertRaises(InvalidSample, sample, options={c: c for c in 'ABCDEF'})
        self.assertRaises(InvalidSample, sample, question='')
        self.assertTrue(issubclass(InvalidSample, InputError))

    def test_load(self):
        """The bundled benchmark has 40 samples in four datasets."""
        samples = read_samples(fixture('benchmark.jsonl'))
        self.assertEqual(len(samples), 40)
        self.assertEqual(sorted({s.dataset for s in samples}), ['MMLU', 'MedMCQA', 'MedQA', 'QA4MRE'])
        self.assertEqual(samples[0].gold, 'B')

    def test_load_errors(self):
        """Duplicate ids, bad JSON and missing fields are rejected."""
        line = json.dumps(sample().as_dict())
        self.assertRaises(InvalidSample, load_samples, line + '\n' + line)
        self.assertRaises(InvalidSample, load_samples, '{"id": ')
        self.assertRaises(InvalidSample, load_samples, '{"id": "x", "question": "q"}')
        self.assertEqual(load_samples('\n' + line + '\n\n'), [sample()])

    def test_option_order(self):
        """Options are kept in letter order whatever the file order."""
        loaded = QASample.from_dict({'id': 'x', 'question': 'q', 'options': {'B': 'b', 'A': 'a'}, 'gold': 'B'})
        self.assertEqual(loaded.letters, 'AB')
        self.assertEqual(loaded.dataset, 'Other')


class TestExtractAnswer(TestCase):
    """Test :func:`.extract_answer`."""

    def test_option(self):
        """The case-study reasoning ends in "(option D)"."""
        self.assertEqual(extract_answer(CASE_STUDY_OUTPUT, 'ABCD'), 'D')

    def test_answer_is(self):
        """"answer is" wins and its last occurrence counts."""
        self.assertEqual(extract_answer('So the answer is: A. resembles', 'ABCD'), 'A')
        self.assertEqual(extract_answer('The answer is B, no wait, the answer is (C)', 'ABCD'), 'C')
        self.assertEqual(extract_answer('The answer is B (option C)', 'ABCD'), 'B')

    def test_line_initial(self):
        """A line starting "X." is the last resort."""
        self.assertEqual(extract_answer('A. is wrong\nC. is right', 'ABCD'), 'C')

    def test_none(self):
        """No recognisable choice, or a letter outside the options, gives None."""
        self.assertIsNone(extract_answer('no idea', 'ABCD'))
        self.assertIsNone(extract_answer('the answer is E', 'ABCD'))
        self.assertIsNone(extract_answer('', 'AB'))


class TestInferencePrompt(TestCase):
    """Test :func:`.build_inference_prompt`."""

    def test_baseline(self):
        """Without evidence the prompt is plain chain of thought."""
        request = build_inference_prompt(sample())
        self.assertNotIn('Evidence', request.user_prompt)
        self.assertEqual(request.user_prompt, "Question: Which gene?\nA. APOE\nB. APP\nAnswer: Let's think step by step:")
        self.assertEqual(request.tag, 'inference')

    def test_evidence(self):
        """Path evidence comes before neighbor evidence, each numbered from 1."""
        prompt = build_inference_prompt(sample(), ['p1', 'p2'], ['n1']).user_prompt
        self.assertIn('You have some medical knowledge information in the following:\n'
                      '###Path-based Evidence 1: p1\nPath-based Evidence 2: p2\n'
                      '###Neighbor-based Evidence 1: n1\n', prompt)
        self.assertTrue(prompt.endswith("Answer: Let's think step by step:"))
        self.assertNotIn('Path-based', build_inference_prompt(sample(), (), ['n1']).user_prompt)

    def test_block(self):
        self.assertEqual(evidence_block(Kind.NEIGHBOR, []), '')
        self.assertEqual(evidence_block(Kind.PATH, ['a']), '###Path-based Evidence 1: a')


class TestAnswer(TestCase):
    """Test :func:`.answer` end to end with scripted models."""

    def setUp(self):
        self.sample, self.graph, self.script = case_study()

    def test_case_study(self):
        """The case study picks D from the three reranked path triples."""
        store = ExchangeStore()
        prediction = answer(self.sample, self.graph, PipelineConfig(), Gateway(Record(self.script, store)))
        self.assertEqual(prediction.predicted, self.sample.gold)
        self.assertEqual(prediction.predicted, 'D')
        self.assertEqual(len(prediction.trace), 6)
        self.assertEqual(len(store), 6)
        path, neighbor = prediction.evidence_used
        self.assertEqual([str(t) for t in path.triples], [
            'entorhinal cortex->is a part of->brain',
            "entorhinal cortex->associates->mouse with Alzheimer's disease",
            "temporal lobe->affected by->Alzheimer's disease"])
        self.assertEqual(len(neighbor), 5)
        inference = store.get(prediction.trace[-1]).request
        self.assertEqual(inference.tag, 'inference')
        self.assertIn("###Path-based Evidence 1: 'Entorhinal cortex' is a part of 'brain'.", inference.user_prompt)
        self.assertIn('###Neighbor-based Evidence 1:', inference.user_prompt)
        self.assertEqual(prediction.bundle.path.segments[0][:2], ("alzheimer's disease", 'temporal lobe'))

    def test_replay(self):
        """A recorded run replays to the same prediction."""
        store = ExchangeStore()
        first = answer(self.sample, self.graph, PipelineConfig(), Gateway(Record(self.script, store)))
        second = answer(self.sample, self.graph, PipelineConfig(), Gateway(Replay(store)))
        self.assertEqual(first.to_json(), second.to_json())
        self.assertEqual(first, second)

    def test_unlinked(self):
        """No entities means a baseline answer, still predicted."""
        gateway = Gateway(Scripted([('domain-specific entities', ''), ("Let's think", 'The answer is C.')]))
        prediction = answer(self.sample, self.graph, PipelineConfig(), gateway)
        self.assertEqual(prediction.mode, Mode.BASELINE.value)
        self.assertEqual(prediction.predicted, 'C')
        self.assertEqual(len(prediction.trace), 2)
        config = PipelineConfig(min_similarity=0.99)
        gateway = Gateway(Scripted([('domain-specific entities', 'quarks'), ("Let's think", 'The answer is C.')]))
        self.assertEqual(answer(self.sample, self.graph, config, gateway).mode, 'baseline')

    def test_baseline(self):
        """Baseline mode makes the inference call only."""
        gateway = Gateway(Scripted([("Let's think", 'The answer is A.')]))
        prediction = answer(self.sample, self.graph, PipelineConfig(mode='baseline'), gateway)
        self.assertEqual((prediction.predicted, len(prediction.trace)), ('A', 1))
        self.assertEqual(prediction.evidence_used[0].triples, ())

    def test_no_self_retrieval(self):
        """Without reranking the pruned subgraphs are verbalized whole."""
        rules = [rule for rule in self.script.rules if 'rerank' not in rule[0] and '->' not in rule[0]]
        prediction = answer(self.sample, self.graph, PipelineConfig(mode=Mode.NO_SELF_RETRIEVAL),
                            Gateway(Scripted(rules)))
        self.assertEqual(prediction.predicted, 'D')
        self.assertEqual(len(prediction.trace), 4)
        path = prediction.evidence_used[0]
        self.assertEqual(path.triples, prediction.bundle.path.triples)
        self.assertEqual(path.retrieve_k, len(path.triples))

    def test_failure(self):
        """A provider failure marks the sample failed instead of raising."""
        prediction = answer(self.sample, self.graph, PipelineConfig(), Gateway(Scripted(self.script.rules[:-1])))
        self.assertTrue(prediction.failed)
        self.assertIsNone(prediction.predicted)
        self.assertIn('inference', prediction.error)
        prediction = answer(self.sample, self.graph, PipelineConfig(), Gateway(Replay(ExchangeStore())))
        self.assertEqual((prediction.status, len(prediction.trace)), ('failed', 1))

    def test_config(self):
        """Bad settings are input errors."""
        self.assertRaises(InputError, PipelineConfig, mode='oracle')
        self.assertRaises(InputError, PipelineConfig, retrieve_k=0)
        self.assertRaises(InputError, PipelineConfig, entity_scope='options')
        self.assertEqual(PipelineConfig(mode='baseline').as_dict()['mode'], 'baseline')


class TestAnswerAll(TestCase):
    """Test :func:`.answer_all` and the dumps."""

    def setUp(self):
        self.samples = read_samples(fixture('benchmark.jsonl'))
        rules = [('domain-specific entities', '')]
        rules += [(s.question, 'So the answer is: {}.'.format(s.gold)) for s in self.samples]
        self.gateway = Gateway(Scripted(rules), concurrency=4)
        self.graph = read_kg(fixture('casestudy_kg.tsv'))

    def test_order(self):
        """Predictions come back in sample order."""
        predictions = answer_all(self.samples, self.graph, PipelineConfig(), self.gateway)
        self.assertEqual([p.sample_id for p in predictions], [s.id for s in self.samples])
        self.assertEqual([p.predicted for p in predictions], [s.gold for s in self.samples])
        self.assertEqual(answer_all([], self.graph, PipelineConfig(), self.gateway), [])

    def test_dumps(self):
        """Predictions and subgraphs are written as JSON lines."""
        sample, graph, script = case_study()
        predictions = answer_all([sample], graph, PipelineConfig(), Gateway(script))
        with tempfile.TemporaryDirectory() as directory:
            dump_predictions(predictions, os.path.join(directory, 'predictions.jsonl'))
            dump_subgraphs(predictions, os.path.join(directory, 'subgraphs.jsonl'))
            with open(os.path.join(directory, 'predictions.jsonl'), encoding='utf-8') as fp:
                dumped = [json.loads(line) for line in fp]
            with open(os.path.join(directory, 'subgraphs.jsonl'), encoding='utf-8') as fp:
                subgraphs = [json.loads(line) for line in fp]
        self.assertEqual(dumped[0]['predicted'], 'D')
        self.assertEqual(len(dumped[0]['trace']), 6)
        self.assertEqual(len(dumped[0]['evidence']['path']), 3)
        self.assertEqual(len(subgraphs), 1)
