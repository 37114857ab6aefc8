"""Question Samples
==================
Multiple-choice questions, read from JSON lines::

    {"id": "medqa-1", "dataset": "MedQA", "question": "...",
     "options": {"A": "...", "B": "..."}, "gold": "B"}
"""
import json
import string
from dataclasses import dataclass
from typing import Dict

from errors import InputError

DATASETS = ('MedQA', 'MedMCQA', 'MMLU', 'QA4MRE')
"""The benchmark datasets; any other dataset name is accepted as is."""


class InvalidSample(InputError):
    """A question sample is malformed."""


@dataclass(frozen=True)
class QASample:
    """One multiple-choice question with 2 to 5 options lettered from A."""
    id: str
    dataset: str
    question: str
    options: Dict[str, str]
    gold: str

    def __post_init__(self):
        if not self.id or not self.question:
            raise InvalidSample('sample {!r} needs an id and a question'.format(self.id))
        letters = ''.join(self.options)
        if not 2 <= len(letters) <= 5 or letters != string.ascii_uppercase[:len(letters)]:
            raise InvalidSample('sample {}: options must be lettered A.. with 2 to 5 entries, not {}'.format(
                self.id, ', '.join(self.options)))
        if self.gold not in self.options:
            raise InvalidSample('sample {}: gold {!r} is not an option'.format(self.id, self.gold))

    def __hash__(self):
        return hash(self.id)

    @property
    def letters(self):
        return ''.join(self.options)

    def render_options(self):
        """Return the options as ``A. text`` lines."""
        return '\n'.join('{}. {}'.format(letter, text) for letter, text in self.options.items())

    def text(self, scope='full'):
        """Return the question stem, followed by the options unless `scope` is "stem"."""
        if scope == 'stem':
            return self.question
        return '{}\n{}'.format(self.question, self.render_options())

    def as_dict(self):
        return {'id': self.id, 'dataset': self.dataset, 'question': self.question,
                'options': dict(self.options), 'gold': self.gold}

    @classmethod
    def from_dict(cls, data):
        try:
            options = {str(k).strip(): str(v) for k, v in dict(data['options']).items()}
            return cls(str(data['id']), str(data.get('dataset') or 'Other'), str(data['question']),
                       dict(sorted(options.items())), str(data['gold']).strip())
        except (KeyError, TypeError, ValueError) as error:
            if isinstance(error, InputError):
                raise
            raise InvalidSample('sample is missing {}'.format(error)) from None


def load_samples(text):
    """Return the samples of JSON-lines `text`; ids must be unique."""
    samples, ids = [], set()
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            sample = QASample.from_dict(json.loads(line))
        except ValueError as error:
            raise InvalidSample('line {}: {}'.format(line_no, error)) from None
        if sample.id in ids:
            raise InvalidSample('line {}: duplicate sample id {}'.format(line_no, sample.id))
        ids.add(sample.id)
        samples.append(sample)
    return samples


def read_samples(path):
    try:
        with open(path, encoding='utf-8') as fp:
            text = fp.read()
    except OSError as error:
        raise InputError('cannot read samples: {}'.format(error)) from None
    return load_samples(text)


def write_samples(samples, path):
    with open(path, 'w', encoding='utf-8') as fp:
        for sample in samples:
            fp.write(json.dumps(sample.as_dict(), ensure_ascii=False) + '\n')
