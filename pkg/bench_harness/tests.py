"""Test the Benchmark Harness
==========================
"""
import csv
import os
import random
import tempfile
from unittest import TestCase

from bench_harness import (DEFAULT_KEYWORDS, DEFAULT_KS, EMPTY, DatasetScore, EvalReport, evaluate, evolution_curve,
                           filter_report, keyword_filter, leave_one_out, llm_judge, query_length_stats,
                           read_verdict, run_evaluation, sampling_times, score, sweep_k, write_evolution, write_loo,
                           write_sweep)
from errors import InputError
from kg_store import read_kg
from llm_gateway import ExchangeStore, Gateway, Replay, Scripted
from qa_pipeline import PipelineConfig, Prediction, QASample, read_samples
from testing import fixture

DALK_ACCURACY = {'MMLU': 0.5, 'MedMCQA': 0.5, 'MedQA': 0.6, 'QA4MRE': 0.75}


def benchmark():
    return read_samples(fixture('benchmark.jsonl'))


def qa_gateway():
    return Gateway(Scripted.from_file(fixture('qa_script.json')), concurrency=4)


def mentions(sample, keyword):
    """Independent recount of the keyword rule."""
    text = ' '.join([sample.question] + list(sample.options.values()))
    return keyword.lower() in text.lower()


def sample(sample_id, dataset='MedQA', question='Which one?', gold='A'):
    return QASample(sample_id, dataset, question, {'A': 'yes', 'B': 'no'}, gold)


def read_rows(path):
    with open(path, newline='', encoding='utf-8') as fp:
        return list(csv.DictReader(fp))


class TestKeywordFilter(TestCase):
    """Test :func:`.keyword_filter`."""

    def test_benchmark(self):
        """28 of the 40 bundled questions mention a keyword."""
        samples = benchmark()
        candidates, rejected = keyword_filter(samples)
        self.assertEqual((len(candidates), len(rejected)), (28, 12))
        self.assertEqual(candidates, [s for s in samples if any(mentions(s, k) for k in DEFAULT_KEYWORDS)])

    def test_rules(self):
        """Matching ignores case, reaches into options and words."""
        candidates, rejected = keyword_filter([
            sample('1', question='Which APOE allele?'), sample('2', question="Is Alzheimer's inherited?"),
            QASample('3', 'MMLU', 'Which cell?', {'A': 'microglial cell', 'B': 'neuron'}, 'A'),
            sample('4', question='Which bone?')])
        self.assertEqual([s.id for s in candidates], ['1', '2', '3'])
        self.assertEqual([s.id for s in rejected], ['4'])

    def test_empty_keywords(self):
        self.assertRaises(InputError, keyword_filter, [sample('1')], [])
        self.assertRaises(InputError, keyword_filter, [sample('1')], ['  '])


class TestJudge(TestCase):
    """Test :func:`.llm_judge`."""

    def test_verdicts(self):
        """Only a leading yes or no decides."""
        self.assertEqual(read_verdict('Yes'), 'accepted')
        self.assertEqual(read_verdict('no.'), 'rejected')
        self.assertEqual(read_verdict(' "YES", it is'), 'accepted')
        self.assertEqual(read_verdict('maybe'), 'ambiguous')
        self.assertEqual(read_verdict('Not sure, yes'), 'ambiguous')
        self.assertEqual(read_verdict(''), 'ambiguous')

    def test_judge(self):
        """Yes accepts, No and anything else reject."""
        candidates = [sample('1', question='Is it amyloid?'), sample('2', question='Is it dementia?'),
                      sample('3', question='Is it aging?')]
        gateway = Gateway(Scripted([('amyloid', 'Yes'), ('dementia', 'No.'), ('aging', 'maybe')]))
        with self.assertLogs('bench_harness.filtering', 'WARNING'):
            accepted, results = llm_judge(candidates, gateway)
        self.assertEqual([s.id for s in accepted], ['1'])
        self.assertEqual([r.verdict for r in results], ['accepted', 'rejected', 'ambiguous'])

    def test_prompt(self):
        """The judge prompt lists the options inline."""
        gateway = Gateway(Scripted([("related to Alzheimer's Disease? Answer:\n", 'bad'),
                                    ('Please answer yes or no.\nQuestion: Which one?\na).yes b).no\nIs the', 'Yes')]))
        accepted, _ = llm_judge([sample('1')], gateway)
        self.assertEqual(len(accepted), 1)

    def test_failure(self):
        """A provider failure fails the sample, not the run."""
        accepted, results = llm_judge([sample('1'), sample('2')], Gateway(Replay(ExchangeStore())))
        self.assertEqual(accepted, [])
        self.assertEqual({r.verdict for r in results}, {'failed'})
        self.assertTrue(results[0].error)

    def test_always_yes(self):
        """A judge that always agrees keeps the keyword candidates."""
        samples = benchmark()
        candidates, _ = keyword_filter(samples)
        accepted, results = llm_judge(candidates, Gateway(Scripted.from_file(fixture('judge_script.json'))))
        self.assertEqual(accepted, candidates)
        report = filter_report(samples, candidates, results)
        self.assertEqual(report['total']['samples'], 40)
        self.assertEqual(report['total']['keyword_candidates'], 28)
        self.assertEqual(report['total']['accepted'], 28)
        self.assertEqual(report['datasets']['MedMCQA']['keyword_candidates'], 9)
        self.assertEqual(report['datasets']['QA4MRE']['rejected'], 0)


class TestScore(TestCase):
    """Test :func:`.score` and :class:`.EvalReport`."""

    def test_accuracy(self):
        """Three of four correct is 0.75."""
        samples = [sample(str(i)) for i in range(4)]
        predictions = [Prediction(str(i), predicted='A' if i else 'B') for i in range(4)]
        report = score(samples, predictions)
        self.assertEqual(report.per_dataset, {'MedQA': DatasetScore(4, 3)})
        self.assertEqual(report.macro, 0.75)

    def test_macro(self):
        """The macro average ignores dataset sizes; the micro one pools samples."""
        samples = [sample('1', 'MedQA'), sample('2', 'MedQA'), sample('3', 'MMLU'), sample('4', 'MMLU'),
                   sample('5', 'MMLU'), sample('6', 'MMLU')]
        predictions = [Prediction(s.id, predicted='A' if s.id in '13456' else 'B') for s in samples]
        report = score(samples, predictions)
        self.assertEqual(report.macro, 0.75)
        self.assertAlmostEqual(report.micro, 5 / 6)

    def test_failures(self):
        """Failed and unanswered samples are incorrect and counted."""
        samples = [sample('1'), sample('2'), sample('3')]
        predictions = [Prediction('1', predicted='A'), Prediction('2', status='failed', error='boom'),
                       Prediction('3')]
        report = score(samples, predictions)
        self.assertEqual((report.correct, report.failures, report.unanswered), (1, 1, 1))

    def test_order(self):
        """Shuffling the samples leaves the report unchanged."""
        samples = benchmark()
        predictions = [Prediction(s.id, predicted='B') for s in samples]
        shuffled = list(samples)
        random.Random(7).shuffle(shuffled)
        self.assertEqual(score(shuffled, predictions).to_json(), score(samples, predictions).to_json())

    def test_empty(self):
        """An empty report is marked rather than divided by zero."""
        report = EvalReport()
        self.assertTrue(report.empty)
        self.assertIsNone(report.macro)
        self.assertTrue(report.as_dict()['empty'])


class TestEvaluate(TestCase):
    """Test :func:`.evaluate` on the bundled graph and benchmark."""

    def setUp(self):
        self.samples = benchmark()
        self.graph = read_kg(fixture('minicorpus_generative.tsv'))
        self.config = PipelineConfig()

    def test_dalk(self):
        """Neighbor evidence steers every answer to B."""
        report = evaluate(self.samples, self.graph, self.config, qa_gateway())
        self.assertEqual({name: s.accuracy for name, s in report.per_dataset.items()}, DALK_ACCURACY)
        self.assertAlmostEqual(report.macro, 0.5875)
        self.assertAlmostEqual(report.micro, 0.575)
        self.assertEqual(report.failures, 0)

    def test_baseline(self):
        """Without evidence every answer is A."""
        report = evaluate(self.samples, self.graph, self.config, qa_gateway(), mode='baseline')
        self.assertAlmostEqual(report.macro, 0.24375)
        self.assertAlmostEqual(report.micro, 0.25)

    def test_no_self_retrieval(self):
        report = evaluate(self.samples, self.graph, self.config, qa_gateway(), mode='no_self_retrieval')
        self.assertAlmostEqual(report.macro, 0.5875)

    def test_deterministic(self):
        """Equal fingerprints give identical reports."""
        first = evaluate(self.samples, self.graph, self.config, qa_gateway())
        second = evaluate(self.samples, self.graph, self.config, qa_gateway(), workers=1)
        self.assertEqual(first.to_json(), second.to_json())
        baseline = evaluate(self.samples, self.graph, self.config, qa_gateway(), mode='baseline')
        self.assertNotEqual(first.fingerprint, baseline.fingerprint)

    def test_failures(self):
        """A model that cannot answer fails every sample."""
        gateway = Gateway(Scripted([('domain-specific entities', '')]))
        report = evaluate(self.samples, self.graph, self.config, gateway)
        self.assertEqual((report.failures, report.macro), (40, 0.0))

    def test_timing(self):
        """Sampling time is averaged per dataset."""
        evaluation = run_evaluation(self.samples[:10], self.graph, self.config, qa_gateway())
        times = sampling_times(self.samples[:10], evaluation.predictions)
        self.assertEqual(list(times), ['MedQA'])
        self.assertGreater(times['MedQA'], 0.0)


class TestAnalyses(TestCase):
    """Test the sweep, leave-one-out and evolution analyses."""

    def setUp(self):
        self.samples = benchmark()
        self.graph = read_kg(fixture('minicorpus_generative.tsv'))
        self.config = PipelineConfig()

    def test_sweep(self):
        """Every default k is evaluated under its own fingerprint."""
        reports = sweep_k(self.samples, self.graph, self.config, qa_gateway())
        self.assertEqual(list(reports), list(DEFAULT_KS))
        self.assertEqual({round(r.macro, 6) for r in reports.values()}, {0.5875})
        self.assertEqual(len({r.fingerprint for r in reports.values()}), 6)
        self.assertRaises(InputError, sweep_k, self.samples, self.graph, self.config, qa_gateway(), [0])
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'sweep.csv')
            write_sweep(reports, path)
            rows = read_rows(path)
        self.assertEqual(len(rows), 6 * 5)
        self.assertEqual(rows[4], {'k': '1', 'dataset': 'AVG', 'accuracy': '0.5875'})

    def test_leave_one_out(self):
        """Removals match a recount and the remainder is rescored."""
        reports = leave_one_out(self.samples, self.graph, self.config, qa_gateway())
        self.assertEqual(list(reports), list(DEFAULT_KEYWORDS))
        for keyword, report in reports.items():
            kept = [s for s in self.samples if not mentions(s, keyword)]
            self.assertEqual(report.n + sum(mentions(s, keyword) for s in self.samples), 40)
            self.assertEqual(report.correct, sum(s.gold == 'B' for s in kept))
        full = evaluate(self.samples, self.graph, self.config, qa_gateway())
        unmatched = leave_one_out(self.samples, self.graph, self.config, qa_gateway(), ['Prion'])
        self.assertEqual(unmatched['Prion'], full)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'loo.csv')
            write_loo(reports, 40, path)
            rows = read_rows(path)
        self.assertEqual([row['keyword'] for row in rows], list(DEFAULT_KEYWORDS))
        self.assertEqual(rows[0]['removed'], '3')

    def test_leave_everything_out(self):
        """A keyword in every sample leaves an empty report."""
        samples = [sample('1', question='Dementia?'), sample('2', question='Early dementia?')]
        predictions = [Prediction('1', predicted='A'), Prediction('2', predicted='A')]
        reports = leave_one_out(samples, self.graph, self.config, None, ['Dementia'], predictions=predictions)
        self.assertTrue(reports['Dementia'].empty)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'loo.csv')
            write_loo(reports, 2, path)
            self.assertEqual(read_rows(path)[0]['macro'], EMPTY)

    def test_evolution(self):
        """The graph only grows and the last year is the full graph."""
        points = evolution_curve(self.samples, self.graph, self.config, qa_gateway())
        self.assertEqual([p.year for p in points], list(range(2011, 2022)))
        counts = [p.triples for p in points]
        self.assertEqual(counts, sorted(counts))
        self.assertEqual(counts[-1], len(self.graph.triples))
        self.assertEqual(points[-1].report, evaluate(self.samples, self.graph, self.config, qa_gateway()))
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'evolution.csv')
            write_evolution(points, path)
            rows = read_rows(path)
        self.assertEqual(list(rows[0]), ['year', 'triples', 'accuracy'])
        self.assertEqual(rows[-1]['accuracy'], '0.5875')

    def test_query_lengths(self):
        """Stem word counts are averaged per dataset present."""
        self.assertEqual(query_length_stats([sample('1', question='one two three four five')]), {'MedQA': 5.0})
        self.assertEqual(query_length_stats([]), {})
        stats = query_length_stats(benchmark())
        self.assertEqual(list(stats), ['MMLU', 'MedMCQA', 'MedQA', 'QA4MRE'])
