"""Experiments
============
Accuracy on a benchmark, and the analyses around it: the retrieve_k sweep,
keyword leave-one-out, accuracy as the graph grows year by year, question
lengths and evidence sampling time.
"""
import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from embed_link import Hashed
from errors import InputError
from qa_pipeline import Mode, answer_all
from .filtering import DEFAULT_KEYWORDS, check_keywords, matches
from .report import EvalReport, fingerprint, score

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 3, 5, 10, 20, 30)
DEFAULT_YEARS = tuple(range(2011, 2022))
EMPTY = 'empty'
"""Written to CSV cells in place of the accuracy of an empty report."""


@dataclass
class Evaluation:
    """A report with the predictions it was scored from."""
    report: EvalReport
    predictions: List


def run_evaluation(samples, graph, config, gateway, embedder=None, workers=None):
    """Answer `samples` against `graph` and return the :class:`Evaluation`."""
    samples = list(samples)
    predictions = answer_all(samples, graph, config, gateway, embedder, workers)
    report = score(samples, predictions, fingerprint(graph, config))
    logger.info('%s on %d samples: macro %s, micro %s, %d failed', config.mode.value, report.n,
                report.macro, report.micro, report.failures)
    return Evaluation(report, predictions)


def evaluate(samples, graph, config, gateway, mode=None, embedder=None, workers=None):
    """Return the :class:`.EvalReport` of `samples` in `mode` (default: the config's)."""
    if mode is not None:
        config = replace(config, mode=Mode(mode))
    return run_evaluation(samples, graph, config, gateway, embedder, workers).report


def sweep_k(samples, graph, config, gateway, ks=DEFAULT_KS, embedder=None, workers=None):
    """Return {k: report} evaluating with each retrieve_k in `ks`."""
    ks = list(ks)
    if not ks or any(k < 1 for k in ks):
        raise InputError('sweep needs retrieve_k values of at least 1, not {}'.format(ks))
    embedder = embedder or Hashed()
    return {k: evaluate(samples, graph, replace(config, retrieve_k=k), gateway, embedder=embedder, workers=workers)
            for k in ks}


def leave_one_out(samples, graph, config, gateway, keywords=DEFAULT_KEYWORDS, embedder=None, workers=None,
                  predictions=None):
    """Return {keyword: report} scoring the samples that do not match each keyword.

    Every sample is answered once (or `predictions` are reused) and each
    report rescored from those answers.
    """
    keywords = check_keywords(keywords)
    samples = list(samples)
    if predictions is None:
        predictions = run_evaluation(samples, graph, config, gateway, embedder, workers).predictions
    digest = fingerprint(graph, config)
    reports = {}
    for keyword in keywords:
        kept = [sample for sample in samples if not matches(sample, keyword)]
        reports[keyword] = score(kept, predictions, digest)
        if not kept:
            logger.warning('keyword %r matches every sample', keyword)
    return reports


@dataclass(frozen=True)
class EvolutionPoint:
    year: int
    triples: int
    report: EvalReport


def evolution_curve(samples, graph, config, gateway, years=DEFAULT_YEARS, embedder=None, workers=None):
    """Return one :class:`EvolutionPoint` per year, evaluated on the graph of
    the triples published up to that year.
    """
    years = sorted(set(years))
    if not years:
        raise InputError('evolution needs at least one year')
    embedder = embedder or Hashed()
    points = []
    for year in years:
        snapshot = graph.snapshot_until(year)
        report = evaluate(samples, snapshot, config, gateway, embedder=embedder, workers=workers)
        points.append(EvolutionPoint(year, len(snapshot.triples), report))
    return points


def query_length_stats(samples):
    """Return the average word count of the question stems, per dataset."""
    lengths = defaultdict(list)
    for sample in samples:
        lengths[sample.dataset].append(len(sample.question.split()))
    return {name: float(np.mean(counts)) for name, counts in sorted(lengths.items())}


def sampling_times(samples, predictions):
    """Return the average evidence sampling seconds, per dataset."""
    by_id = {prediction.sample_id: prediction for prediction in predictions}
    seconds = defaultdict(list)
    for sample in samples:
        seconds[sample.dataset].append(by_id[sample.id].sampling_seconds)
    return {name: float(np.mean(values)) for name, values in sorted(seconds.items())}


def accuracy_cell(value):
    return EMPTY if value is None else '{:.4f}'.format(value)


def write_rows(path, fieldnames, rows):
    with open(path, 'w', newline='', encoding='utf-8') as fp:
        writer = csv.DictWriter(fp, fieldnames=fieldnames, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


def write_evolution(points, path):
    """Write ``year,triples,accuracy`` rows, accuracy being the macro average."""
    write_rows(path, ['year', 'triples', 'accuracy'],
               ({'year': p.year, 'triples': p.triples, 'accuracy': accuracy_cell(p.report.macro)} for p in points))


def write_sweep(reports, path):
    """Write ``k,dataset,accuracy`` rows: one per dataset, then AVG (macro) per k."""
    rows = []
    for k, report in reports.items():
        rows += [{'k': k, 'dataset': name, 'accuracy': accuracy_cell(s.accuracy)}
                 for name, s in report.per_dataset.items()]
        rows.append({'k': k, 'dataset': 'AVG', 'accuracy': accuracy_cell(report.macro)})
    write_rows(path, ['k', 'dataset', 'accuracy'], rows)


def write_loo(reports, total, path):
    """Write ``keyword,removed,samples,macro,micro`` rows."""
    write_rows(path, ['keyword', 'removed', 'samples', 'macro', 'micro'], (
        {'keyword': keyword, 'removed': total - report.n, 'samples': report.n,
         'macro': accuracy_cell(report.macro), 'micro': accuracy_cell(report.micro)}
        for keyword, report in reports.items()))
