"""DALK Commands
================
Each command parses its own flags. Every option of
:mod:`application.defaults` is also a flag (``RETRIEVE_K`` is
``--retrieve-k``), and ``--config`` names a TOML file of options.

Commands writing to ``--out`` also write ``config.json``, the options the
run used (never the API key).
"""
import argparse
import json
import logging
import os

from application import EXIT_OK, EXIT_PROVIDER, CLIApplication, Config, configure_logging, options
from bench_harness import (Evaluation, evolution_curve, filter_report, keyword_filter, leave_one_out, llm_judge,
                           query_length_stats, run_evaluation, sampling_times, sweep_k, write_evolution,
                           write_filter_report, write_loo, write_report, write_sweep)
from corpus import attach_years, parse_pubtator, read_year_map
from embed_link import Embedder
from errors import InputError
from evidence_sampler import SamplerConfig
from kg_construct import KGBuilder
from kg_store import Method, read_kg, write_kg
from llm_gateway import PromptTemplate, RequestSettings, open_gateway
from qa_pipeline import (Mode, PipelineConfig, answer_all, dump_predictions, dump_subgraphs, read_samples,
                         write_samples)

logger = logging.getLogger(__name__)


def flag(key):
    return '--' + key.lower().replace('_', '-')


def parser_for(prog, description, exclude=()):
    """Return an argument parser with ``--config`` and a flag per option."""
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument('--config', help='TOML file of options')
    group = parser.add_argument_group('options')
    for key, default in options().items():
        if key in exclude:
            continue
        if isinstance(default, bool):
            group.add_argument(flag(key), dest=key, action='store_const', const=True, default=None,
                               help='(default: off)')
        else:
            shown = ','.join(map(str, default)) if isinstance(default, list) else default
            group.add_argument(flag(key), dest=key, default=None, metavar=key,
                               help='(default: {})'.format(shown or 'unset'))
    return parser


def read_text(path, role):
    try:
        with open(path, encoding='utf-8') as fp:
            return fp.read()
    except OSError as error:
        raise InputError('cannot read {} {}: {}'.format(role, path, error.strerror)) from None


def write_json(data, path):
    with open(path, 'w', encoding='utf-8') as fp:
        json.dump(data, fp, indent=2, sort_keys=True, ensure_ascii=False)
        fp.write('\n')


def graph_stats(graph, documents=None):
    """Return the graph statistics with the number of source documents."""
    if documents is None:
        documents = len({triple.source_doc for triple in graph.triples})
    return {'#Corpus': documents, **graph.stats()}


class Dalk(CLIApplication):
    """DALK: knowledge graph augmented question answering."""

    config = None

    def load(self, parser, args):
        """Parse `args`, set up the config and logging; return the parsed args."""
        parsed = parser.parse_args(args)
        self.config = Config(parsed.config, overrides={key: getattr(parsed, key, None) for key in options()})
        configure_logging(self.config.LOG_LEVEL)
        PromptTemplate.override_dir = self.config.PROMPT_DIR or None
        return parsed

    def output(self, path, command):
        """Create the output directory and record the run's options there."""
        try:
            os.makedirs(path, exist_ok=True)
        except OSError as error:
            raise InputError('cannot create output directory {}: {}'.format(path, error.strerror)) from None
        write_json({'command': command, 'config': self.config.json()}, os.path.join(path, 'config.json'))
        return lambda name: os.path.join(path, name)

    def gateway(self):
        c = self.config
        return open_gateway(c.PROVIDER_MODE, c.BASE_URL, c.CACHE or None, c.SCRIPT or None, c.CONCURRENCY,
                            c.TIMEOUT, c.RETRY_ATTEMPTS, c.RETRY_BACKOFF)

    def embedder(self):
        c = self.config
        return Embedder[c.EMBEDDING_MODE].from_options(c.EMBEDDING_DIM, c.BASE_URL, c.EMBEDDING_MODEL, c.TIMEOUT,
                                                       c.RETRY_ATTEMPTS, c.RETRY_BACKOFF)

    def settings(self):
        return RequestSettings(self.config.MODEL, self.config.TEMPERATURE, self.config.MAX_TOKENS)

    def pipeline(self, mode=Mode.DALK):
        c = self.config
        return PipelineConfig(mode, SamplerConfig(c.HOP_BOUND, c.RELEVANCE_THRESHOLD, c.MAX_TRIPLES), c.RETRIEVE_K,
                              c.JOINT_RERANK, None if c.MIN_SIMILARITY <= -1 else c.MIN_SIMILARITY,
                              c.ENTITY_SCOPE, self.settings())

    def benchmark_parser(self, prog, description):
        parser = parser_for(prog, description)
        parser.add_argument('--kg', required=True, help='knowledge graph TSV')
        parser.add_argument('--samples', required=True, help='questions (JSON lines)')
        parser.add_argument('--out', required=True, help='output directory')
        return parser

    def build_kg(self, args):
        """Build a knowledge graph from a PubTator corpus."""
        parser = parser_for('build-kg', self.build_kg.__doc__, exclude=('YEARS',))
        parser.add_argument('--corpus', required=True, help='PubTator file')
        parser.add_argument('--years', help='year map TSV (doc_id, year)')
        parser.add_argument('--method', default=Method.GENERATIVE.value, choices=[m.value for m in Method])
        parser.add_argument('--out', required=True, help='output directory')
        parsed = self.load(parser, args)
        docs = parse_pubtator(read_text(parsed.corpus, 'corpus'), strict=self.config.STRICT)
        year_map = read_year_map(read_text(parsed.years, 'year map')) if parsed.years else {}
        docs = attach_years(docs, year_map, self.config.STRICT, self.config.DEFAULT_YEAR)
        builder = KGBuilder(self.gateway(), self.settings(), self.config.PROMPT_SCOPE)
        graph = builder.build(docs, parsed.method)
        out = self.output(parsed.out, 'build-kg')
        write_kg(graph, out('kg.tsv'))
        stats = graph_stats(graph, len(docs))
        write_json(stats, out('stats.json'))
        with open(out('build_report.json'), 'w', encoding='utf-8') as fp:
            fp.write(builder.report.to_json())
        return json.dumps(stats, indent=2, sort_keys=True)

    def answer(self, args):
        """Answer questions and print one prediction per line."""
        parser = parser_for('answer', self.answer.__doc__)
        parser.add_argument('--kg', required=True, help='knowledge graph TSV')
        parser.add_argument('--question-file', required=True, help='questions (JSON lines)')
        parser.add_argument('--mode', default=Mode.DALK.value, choices=[m.value for m in Mode])
        parser.add_argument('--out', help='output directory for predictions and subgraphs')
        parsed = self.load(parser, args)
        graph, samples = read_kg(parsed.kg), read_samples(parsed.question_file)
        predictions = answer_all(samples, graph, self.pipeline(parsed.mode), self.gateway(), self.embedder())
        if parsed.out:
            out = self.output(parsed.out, 'answer')
            dump_predictions(predictions, out('predictions.jsonl'))
            dump_subgraphs(predictions, out('subgraphs.jsonl'))
        for prediction in predictions:
            print(prediction.to_json())
        failed = sum(p.failed for p in predictions)
        if failed:
            logger.error('%d of %d samples failed', failed, len(predictions))
            return EXIT_PROVIDER
        return EXIT_OK

    def evaluate(self, args):
        """Evaluate a benchmark and write its report."""
        parser = self.benchmark_parser('eval', self.evaluate.__doc__)
        parser.add_argument('--mode', default=Mode.DALK.value, choices=[m.value for m in Mode])
        parser.add_argument('--dump-subgraphs', action='store_true', help='write subgraphs.jsonl')
        parser.add_argument('--timing', action='store_true', help='write timing.json')
        parsed = self.load(parser, args)
        graph, samples = read_kg(parsed.kg), read_samples(parsed.samples)
        evaluation = run_evaluation(samples, graph, self.pipeline(parsed.mode), self.gateway(), self.embedder())
        out = self.output(parsed.out, 'eval')
        self.write_evaluation(evaluation, out)
        if parsed.dump_subgraphs:
            dump_subgraphs(evaluation.predictions, out('subgraphs.jsonl'))
        if parsed.timing:
            write_json(sampling_times(samples, evaluation.predictions), out('timing.json'))
        return evaluation.report.to_json().rstrip('\n')

    def write_evaluation(self, evaluation: Evaluation, out):
        write_report(evaluation.report, out('report.json'))
        dump_predictions(evaluation.predictions, out('predictions.jsonl'))

    def sweep(self, args):
        """Evaluate with each retrieve_k of SWEEP_KS."""
        parsed = self.load(self.benchmark_parser('sweep', self.sweep.__doc__), args)
        graph, samples = read_kg(parsed.kg), read_samples(parsed.samples)
        reports = sweep_k(samples, graph, self.pipeline(), self.gateway(), self.config.SWEEP_KS, self.embedder())
        out = self.output(parsed.out, 'sweep')
        write_sweep(reports, out('sweep.csv'))
        write_json({str(k): report.as_dict() for k, report in reports.items()}, out('sweep.json'))
        return '\n'.join('k={}\tmacro={}'.format(k, report.macro) for k, report in reports.items())

    def loo(self, args):
        """Evaluate leaving out the samples of each keyword in turn."""
        parsed = self.load(self.benchmark_parser('loo', self.loo.__doc__), args)
        graph, samples = read_kg(parsed.kg), read_samples(parsed.samples)
        evaluation = run_evaluation(samples, graph, self.pipeline(), self.gateway(), self.embedder())
        reports = leave_one_out(samples, graph, self.pipeline(), None, self.config.KEYWORDS,
                                predictions=evaluation.predictions)
        out = self.output(parsed.out, 'loo')
        self.write_evaluation(evaluation, out)
        write_loo(reports, len(samples), out('loo.csv'))
        write_json({keyword: report.as_dict() for keyword, report in reports.items()}, out('loo.json'))
        return '\n'.join('w/o {}\tmacro={}\tmicro={}'.format(k, r.macro, r.micro) for k, r in reports.items())

    def evolve(self, args):
        """Evaluate against the graph as it stood at the end of each of YEARS."""
        parsed = self.load(self.benchmark_parser('evolve', self.evolve.__doc__), args)
        graph, samples = read_kg(parsed.kg), read_samples(parsed.samples)
        points = evolution_curve(samples, graph, self.pipeline(), self.gateway(), self.config.YEARS, self.embedder())
        out = self.output(parsed.out, 'evolve')
        write_evolution(points, out('evolution.csv'))
        return '\n'.join('{}\t{}\t{}'.format(p.year, p.triples, p.report.macro) for p in points)

    def filter_qa(self, args):
        """Keep the questions matching KEYWORDS that the model judges on topic."""
        parser = parser_for('filter-qa', self.filter_qa.__doc__)
        parser.add_argument('--samples', required=True, help='questions (JSON lines)')
        parser.add_argument('--out', required=True, help='output directory')
        parser.add_argument('--no-judge', action='store_true', help='apply the keyword filter only')
        parsed = self.load(parser, args)
        samples = read_samples(parsed.samples)
        candidates, _ = keyword_filter(samples, self.config.KEYWORDS)
        accepted, results = candidates, []
        if not parsed.no_judge:
            accepted, results = llm_judge(candidates, self.gateway(), self.settings())
        out = self.output(parsed.out, 'filter-qa')
        write_samples(accepted, out('filtered.jsonl'))
        report = filter_report(samples, candidates, results, self.config.KEYWORDS)
        write_filter_report(report, out('filter_report.json'))
        return json.dumps(report['total'], sort_keys=True)

    def stats(self, args):
        """Print knowledge graph statistics and question lengths."""
        parser = parser_for('stats', self.stats.__doc__)
        parser.add_argument('--kg', required=True, help='knowledge graph TSV')
        parser.add_argument('--samples', help='questions (JSON lines)')
        parser.add_argument('--out', help='output directory for stats.json')
        parsed = self.load(parser, args)
        stats = graph_stats(read_kg(parsed.kg))
        if parsed.samples:
            stats['query_length'] = query_length_stats(read_samples(parsed.samples))
        if parsed.out:
            write_json(stats, self.output(parsed.out, 'stats')('stats.json'))
        return json.dumps(stats, indent=2, sort_keys=True)

    _cmds = {
        ('build-kg',): build_kg,
        ('answer',): answer,
        ('eval',): evaluate,
        ('sweep',): sweep,
        ('loo',): loo,
        ('evolve',): evolve,
        ('filter-qa',): filter_qa,
        ('stats',): stats,
    }
