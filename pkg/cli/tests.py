"""Test
=======
"""
import contextlib
import csv
import io
import json
import os
import tempfile
from unittest import TestCase

from cli import CLI, UnknownCommand
from cli.commands import Dalk
from testing import fixture, read_fixture

SCRIPTED = ['--provider-mode', 'scripted', '--log-level', 'WARNING']


class MyCLI:
    """Test CLI."""

    def foo(self, args):
        "Foo."
        return 'Executed Foo ' + ','.join(args)


class TestCLI(TestCase):
    """Test a :class:`.CLI`."""

    def setUp(self):
        self.cli = CLI('Test CLI.', {('-f', '--foo'): MyCLI.foo})

    def test_options(self):
        """Test CLI options."""
        self.assertEqual(self.cli.options, ['-f --foo\tFoo.'])

    def test_str(self):
        """Test str(CLI)."""
        self.assertTrue(str(self.cli).startswith('Test CLI.\n\nUsage: python . <command> [options]\n'))
        self.assertIn('-f --foo\tFoo.', str(self.cli))

    def test_execute(self):
        """Test CLI execute."""
        self.assertEqual(self.cli(MyCLI(), ['--foo', 'a', 'b']), 'Executed Foo a,b')
        self.assertRaises(UnknownCommand, self.cli, MyCLI(), ['--bar'])


class TestCommands(TestCase):
    """Run the DALK commands end to end with scripted models."""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.out = self.directory.name

    def tearDown(self):
        self.directory.cleanup()

    def run_dalk(self, *argv):
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout):
            code = Dalk.run_application(list(argv))
        return code, stdout.getvalue()

    def path(self, *names):
        return os.path.join(self.out, *names)

    def read(self, *names):
        with open(self.path(*names), encoding='utf-8') as fp:
            return fp.read()

    def test_help(self):
        """Every command is listed."""
        code, text = self.run_dalk('--help')
        self.assertEqual(code, 0)
        for command in ('build-kg', 'answer', 'eval', 'sweep', 'loo', 'evolve', 'filter-qa', 'stats'):
            self.assertIn(command, text)
        self.assertEqual(self.run_dalk('frobnicate')[0], 2)

    def test_build_kg(self):
        """The mini-corpus builds the golden graph."""
        code, text = self.run_dalk('build-kg', '--corpus', fixture('minicorpus.pubtator'),
                                   '--years', fixture('minicorpus_years.tsv'), '--method', 'generative',
                                   '--out', self.out, '--script', fixture('minicorpus_generative.json'), *SCRIPTED)
        self.assertEqual(code, 0)
        self.assertEqual(self.read('kg.tsv'), read_fixture('minicorpus_generative.tsv'))
        stats = json.loads(self.read('stats.json'))
        self.assertEqual((stats['#Corpus'], stats['#Triples']), (20, 51))
        self.assertEqual(json.loads(text), stats)
        self.assertEqual(json.loads(self.read('build_report.json'))['triples_kept'], 51)
        self.assertIn('PROVIDER_MODE = scripted', json.loads(self.read('config.json'))['config'])

    def test_build_kg_errors(self):
        """Unknown methods and unreadable corpora are input errors."""
        self.assertEqual(self.run_dalk('build-kg', '--corpus', fixture('minicorpus.pubtator'), '--method', 'magic',
                                       '--out', self.out)[0], 2)
        self.assertEqual(self.run_dalk('build-kg', '--corpus', self.path('missing.pubtator'), '--out', self.out,
                                       '--script', fixture('qa_script.json'), *SCRIPTED)[0], 2)

    def test_empty_corpus(self):
        """An empty corpus builds an empty graph."""
        corpus = self.path('empty.pubtator')
        with open(corpus, 'w', encoding='utf-8'):
            pass
        code, _ = self.run_dalk('build-kg', '--corpus', corpus, '--out', self.path('kg'),
                                '--script', fixture('qa_script.json'), *SCRIPTED)
        self.assertEqual(code, 0)
        self.assertEqual(self.read('kg', 'kg.tsv').count('\n'), 1)

    def test_answer(self):
        """The case study answers D."""
        code, text = self.run_dalk('answer', '--kg', fixture('casestudy_kg.tsv'),
                                   '--question-file', fixture('casestudy_question.jsonl'),
                                   '--script', fixture('casestudy_script.json'), *SCRIPTED)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(text)['predicted'], 'D')

    def test_answer_errors(self):
        """A missing graph is an input error, a failing model a provider error."""
        self.assertEqual(self.run_dalk('answer', '--kg', self.path('missing.tsv'),
                                       '--question-file', fixture('casestudy_question.jsonl'),
                                       '--script', fixture('casestudy_script.json'), *SCRIPTED)[0], 2)
        code, text = self.run_dalk('answer', '--kg', fixture('casestudy_kg.tsv'),
                                   '--question-file', fixture('casestudy_question.jsonl'),
                                   '--provider-mode', 'replay', '--cache', self.path('empty.jsonl'),
                                   '--log-level', 'CRITICAL')
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(text)['status'], 'failed')

    def test_unknown_modes(self):
        """Unknown provider and embedding modes are input errors."""
        args = ['answer', '--kg', fixture('casestudy_kg.tsv'), '--question-file', fixture('casestudy_question.jsonl'),
                '--script', fixture('casestudy_script.json'), '--log-level', 'CRITICAL']
        self.assertEqual(self.run_dalk(*args, '--provider-mode', 'psychic')[0], 2)
        self.assertEqual(self.run_dalk(*args, '--provider-mode', 'scripted', '--embedding-mode', 'psychic')[0], 2)

    def test_replay(self):
        """A recorded answer replays byte for byte."""
        cache = self.path('cache.jsonl')
        args = ['answer', '--kg', fixture('casestudy_kg.tsv'), '--question-file', fixture('casestudy_question.jsonl')]
        recorded = self.run_dalk(*args, '--script', fixture('casestudy_script.json'), '--cache', cache, *SCRIPTED)
        replayed = self.run_dalk(*args, '--provider-mode', 'replay', '--cache', cache)
        self.assertEqual(recorded, replayed)

    def test_eval(self):
        """Evaluation writes the same report twice."""
        args = ['eval', '--kg', fixture('minicorpus_generative.tsv'), '--samples', fixture('benchmark.jsonl'),
                '--script', fixture('qa_script.json'), '--dump-subgraphs', '--timing', *SCRIPTED]
        code, text = self.run_dalk(*args, '--out', self.path('first'))
        self.assertEqual(code, 0)
        report = json.loads(self.read('first', 'report.json'))
        self.assertEqual(json.loads(text), report)
        self.assertAlmostEqual(report['macro_avg'], 0.5875)
        self.assertEqual(report['samples'], 40)
        self.assertEqual(self.read('first', 'predictions.jsonl').count('\n'), 40)
        self.assertEqual(self.read('first', 'subgraphs.jsonl').count('\n'), 40)
        self.assertEqual(sorted(json.loads(self.read('first', 'timing.json'))),
                         ['MMLU', 'MedMCQA', 'MedQA', 'QA4MRE'])
        self.run_dalk(*args, '--out', self.path('second'))
        self.assertEqual(self.read('first', 'report.json'), self.read('second', 'report.json'))
        self.assertEqual(self.read('first', 'predictions.jsonl'), self.read('second', 'predictions.jsonl'))

    def test_baseline_eval(self):
        code, _ = self.run_dalk('eval', '--kg', fixture('minicorpus_generative.tsv'), '--samples',
                                fixture('benchmark.jsonl'), '--mode', 'baseline', '--out', self.out,
                                '--script', fixture('qa_script.json'), *SCRIPTED)
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(self.read('report.json'))['macro_avg'], 0.24375)

    def test_analyses(self):
        """sweep, loo and evolve write their CSV files."""
        common = ['--kg', fixture('minicorpus_generative.tsv'), '--samples', fixture('benchmark.jsonl'),
                  '--script', fixture('qa_script.json'), *SCRIPTED]
        self.assertEqual(self.run_dalk('sweep', *common, '--sweep-ks', '1,5', '--out', self.path('sweep'))[0], 0)
        self.assertEqual(self.run_dalk('loo', *common, '--out', self.path('loo'))[0], 0)
        self.assertEqual(self.run_dalk('evolve', *common, '--years', '2011,2021', '--out', self.path('evolve'))[0], 0)
        with open(self.path('sweep', 'sweep.csv'), newline='', encoding='utf-8') as fp:
            self.assertEqual(len(list(csv.DictReader(fp))), 10)
        with open(self.path('loo', 'loo.csv'), newline='', encoding='utf-8') as fp:
            self.assertEqual(len(list(csv.DictReader(fp))), 7)
        with open(self.path('evolve', 'evolution.csv'), newline='', encoding='utf-8') as fp:
            rows = list(csv.DictReader(fp))
        self.assertEqual([row['year'] for row in rows], ['2011', '2021'])
        self.assertEqual(rows[-1]['triples'], '51')

    def test_filter_qa(self):
        """A judge that always agrees keeps the keyword candidates."""
        code, text = self.run_dalk('filter-qa', '--samples', fixture('benchmark.jsonl'), '--out', self.out,
                                   '--script', fixture('judge_script.json'), *SCRIPTED)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(text)['accepted'], 28)
        self.assertEqual(self.read('filtered.jsonl').count('\n'), 28)
        self.assertEqual(json.loads(self.read('filter_report.json'))['total']['keyword_candidates'], 28)
        code, text = self.run_dalk('filter-qa', '--samples', fixture('benchmark.jsonl'), '--out', self.path('kw'),
                                   '--no-judge', '--keywords', 'APOE', '--log-level', 'WARNING')
        self.assertEqual(code, 0)
        self.assertEqual(self.read('kw', 'filtered.jsonl').count('\n'), 4)

    def test_stats(self):
        code, text = self.run_dalk('stats', '--kg', fixture('minicorpus_generative.tsv'),
                                   '--samples', fixture('benchmark.jsonl'))
        self.assertEqual(code, 0)
        stats = json.loads(text)
        self.assertEqual(stats['#Triples'], 51)
        self.assertEqual(sorted(stats['query_length']), ['MMLU', 'MedMCQA', 'MedQA', 'QA4MRE'])
