"""Evaluation Reports
===================
Accuracy per dataset, their unweighted (macro) mean and the pooled (micro)
accuracy. A report with no samples is marked empty instead of dividing by
zero.
"""
import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

from llm_gateway import canonical_json


@dataclass(frozen=True)
class DatasetScore:
    n: int
    correct: int

    @property
    def accuracy(self):
        return self.correct / self.n

    def as_dict(self):
        return {'n': self.n, 'correct': self.correct, 'accuracy': self.accuracy}


@dataclass(frozen=True)
class EvalReport:
    """Scores of one evaluation; `fingerprint` identifies the graph snapshot
    and configuration that produced them.
    """
    per_dataset: Dict[str, DatasetScore] = field(default_factory=dict)
    failures: int = 0
    unanswered: int = 0
    fingerprint: str = ''

    @property
    def n(self):
        return sum(score.n for score in self.per_dataset.values())

    @property
    def correct(self):
        return sum(score.correct for score in self.per_dataset.values())

    @property
    def empty(self):
        return not self.n

    @property
    def macro(self) -> Optional[float]:
        if self.empty:
            return None
        return sum(score.accuracy for score in self.per_dataset.values()) / len(self.per_dataset)

    @property
    def micro(self) -> Optional[float]:
        return None if self.empty else self.correct / self.n

    def as_dict(self):
        return {
            'per_dataset': {name: score.as_dict() for name, score in self.per_dataset.items()},
            'macro_avg': self.macro, 'micro_avg': self.micro, 'samples': self.n,
            'failures': self.failures, 'unanswered': self.unanswered,
            'fingerprint': self.fingerprint, 'empty': self.empty,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + '\n'


def fingerprint(graph, config):
    """Return the digest of the graph snapshot and the pipeline configuration."""
    text = canonical_json({'snapshot_id': graph.snapshot_id, 'config': config.as_dict()})
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def score(samples, predictions, fingerprint=''):
    """Return the :class:`EvalReport` of `predictions` against `samples`.
    Failed and unanswered samples count as incorrect.
    """
    by_id = {prediction.sample_id: prediction for prediction in predictions}
    n, correct = Counter(), Counter()
    failures = unanswered = 0
    for sample in samples:
        prediction = by_id[sample.id]
        n[sample.dataset] += 1
        if prediction.failed:
            failures += 1
        elif prediction.predicted is None:
            unanswered += 1
        elif prediction.predicted == sample.gold:
            correct[sample.dataset] += 1
    per_dataset = {name: DatasetScore(n[name], correct[name]) for name in sorted(n)}
    return EvalReport(per_dataset, failures, unanswered, fingerprint)


def write_report(report, path):
    with open(path, 'w', encoding='utf-8') as fp:
        fp.write(report.to_json())
