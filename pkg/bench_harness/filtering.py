"""Benchmark Curation
====================
Samples are kept when a domain keyword occurs in their question or options,
and then when a model judges them related to Alzheimer's disease.
"""
import json
import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from errors import InputError, ProviderError
from llm_gateway import RequestSettings, templates

logger = logging.getLogger(__name__)

template = templates(__file__)

DEFAULT_KEYWORDS = ('Aging', 'Alzheimer', 'Amyloid beta', 'APOE', 'Dementia', 'Lipoprotein', 'Microglia')
VERDICTS = ('accepted', 'rejected', 'ambiguous', 'failed')
YES_NO = re.compile(r'^\W*(yes|no)\b', re.IGNORECASE)


def check_keywords(keywords):
    keywords = [keyword for keyword in keywords if keyword.strip()]
    if not keywords:
        raise InputError('the keyword list is empty')
    return keywords


def searchable(sample):
    return '\n'.join([sample.question, *sample.options.values()]).casefold()


def matches(sample, keyword):
    """Return True if `keyword` occurs, ignoring case, in the question or an option."""
    return keyword.casefold() in searchable(sample)


def keyword_filter(samples, keywords=DEFAULT_KEYWORDS):
    """Return (candidates, rejected): the samples matching any of `keywords`, and the rest."""
    keywords = check_keywords(keywords)
    candidates, rejected = [], []
    for sample in samples:
        (candidates if any(matches(sample, keyword) for keyword in keywords) else rejected).append(sample)
    logger.info('keyword filter kept %d of %d samples', len(candidates), len(candidates) + len(rejected))
    return candidates, rejected


@dataclass(frozen=True)
class JudgeResult:
    sample_id: str
    dataset: str
    verdict: str
    response: str = ''
    error: str = ''

    @property
    def accepted(self):
        return self.verdict == 'accepted'


def build_judge_prompt(sample, settings=RequestSettings()):
    options = ' '.join('{}).{}'.format(letter.lower(), text) for letter, text in sample.options.items())
    return settings.request(template('judge').format(question=sample.question, options=options), 'judge')


def read_verdict(text):
    """Return "accepted" or "rejected" for a reply opening with yes or no, else "ambiguous"."""
    match = YES_NO.match(text)
    if not match:
        return 'ambiguous'
    return 'accepted' if match.group(1).lower() == 'yes' else 'rejected'


def judge(sample, gateway, settings=RequestSettings()):
    """Return the :class:`JudgeResult` of one sample."""
    try:
        response = gateway.complete(build_judge_prompt(sample, settings))
    except ProviderError as error:
        logger.error('judging %s failed: %s', sample.id, error)
        return JudgeResult(sample.id, sample.dataset, 'failed', error=str(error))
    verdict = read_verdict(response)
    if verdict == 'ambiguous':
        logger.warning('sample %s: judge reply %r is neither yes nor no, rejected', sample.id, response[:60])
    return JudgeResult(sample.id, sample.dataset, verdict, response)


def llm_judge(candidates, gateway, settings=RequestSettings(), workers=None):
    """Return (accepted samples, judge results), both in candidate order."""
    candidates = list(candidates)
    if not candidates:
        return [], []
    workers = workers or getattr(gateway, 'concurrency', 1)
    with ThreadPoolExecutor(max_workers=min(workers, len(candidates))) as pool:
        results = list(pool.map(lambda sample: judge(sample, gateway, settings), candidates))
    accepted = [sample for sample, result in zip(candidates, results) if result.accepted]
    logger.info('judge accepted %d of %d candidates', len(accepted), len(candidates))
    return accepted, results


def filter_report(samples, candidates, results, keywords=DEFAULT_KEYWORDS):
    """Return the per-dataset counts of each curation stage."""
    datasets = {}
    for sample in samples:
        datasets.setdefault(sample.dataset, Counter(samples=0, keyword_candidates=0,
                                                    **{verdict: 0 for verdict in VERDICTS}))
        datasets[sample.dataset]['samples'] += 1
    for sample in candidates:
        datasets[sample.dataset]['keyword_candidates'] += 1
    for result in results:
        datasets[result.dataset][result.verdict] += 1
    total = sum(datasets.values(), Counter())
    return {'keywords': list(keywords),
            'datasets': {name: dict(counts) for name, counts in sorted(datasets.items())},
            'total': {key: total[key] for key in ['samples', 'keyword_candidates', *VERDICTS]},
            'judged': [asdict(result) for result in results]}


def write_filter_report(report, path):
    with open(path, 'w', encoding='utf-8') as fp:
        json.dump(report, fp, indent=2, ensure_ascii=False)
        fp.write('\n')
