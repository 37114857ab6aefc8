"""Self-aware Knowledge Retrieval
================================
The model reranks the sampled triples for the question and keeps at most
`retrieve_k`. Its echoes are matched back to the candidates, so nothing it
invents survives.
"""
import logging
import re
from dataclasses import dataclass
from typing import Tuple

from errors import InputError
from evidence_sampler import EvidenceSubgraph, Kind
from kg_store import Triple, normalize_name
from llm_gateway import RequestSettings, templates

logger = logging.getLogger(__name__)

template = templates(__file__)

DEFAULT_RETRIEVE_K = 5
LINE = re.compile(r'^\s*\W*Reranked\s+Triples?\s*(\d+)\s*[:：]\s*(.*)$', re.IGNORECASE)
ARROW = re.compile(r'\s*(?:[—–-]{1,2}>|→)\s*')


class EmptySubgraph(InputError):
    """There are no triples to rerank."""


@dataclass(frozen=True)
class RankedEvidence:
    """The triples kept for one evidence family, best first."""
    kind: Kind
    triples: Tuple[Triple, ...] = ()
    retrieve_k: int = DEFAULT_RETRIEVE_K
    raw_response: str = ''
    unmatched_lines: int = 0

    def __len__(self):
        return len(self.triples)

    def __bool__(self):
        return bool(self.triples)

    def as_subgraph(self):
        """Return the kept triples as an :class:`.EvidenceSubgraph` for verbalization."""
        return EvidenceSubgraph(self.kind, self.triples)

    def as_dict(self):
        return {'kind': self.kind.value, 'triples': [t.render() for t in self.triples],
                'unmatched_lines': self.unmatched_lines}


def check_k(retrieve_k):
    if retrieve_k < 1:
        raise InputError('retrieve_k must be at least 1, not {}'.format(retrieve_k))


def build_rerank_prompt(question, subgraph, retrieve_k=DEFAULT_RETRIEVE_K, settings=RequestSettings()):
    """Return the ``self_retrieve`` request ranking `subgraph` for `question`."""
    check_k(retrieve_k)
    if not subgraph.triples:
        raise EmptySubgraph('no {} triples to rerank'.format(subgraph.kind.value))
    scaffold = '\n'.join('Reranked Triple{}: xxx ——> xxx'.format(i) for i in range(1, retrieve_k + 1))
    prompt = template('self_retrieve').format(graph='\n'.join(subgraph.lines()), question=question,
                                              retrieve_k=retrieve_k, scaffold=scaffold)
    return settings.request(prompt, 'self_retrieve')


def clean(field):
    return normalize_name(field.strip().strip('."\'`'))


def ranked_payloads(text):
    """Return the payloads of "Reranked Triple N:" lines in ascending N."""
    lines = [(int(m.group(1)), m.group(2)) for m in map(LINE.match, text.splitlines()) if m]
    return [payload for _, payload in sorted(lines, key=lambda line: line[0])]


def parse_rerank_output(text, candidates, retrieve_k=DEFAULT_RETRIEVE_K, kind=Kind.PATH):
    """Return the :class:`RankedEvidence` a rerank reply selects from
    `candidates`. A line matches by its full normalized triple, else by its
    (head, tail) pair; other lines are counted as unmatched.
    """
    check_k(retrieve_k)
    by_key, by_pair = {}, {}
    for triple in candidates:
        by_key.setdefault(triple.key, triple)
        by_pair.setdefault(triple.key[::2], triple)
    chosen, unmatched = [], 0
    for payload in ranked_payloads(text):
        fields = [clean(field) for field in ARROW.split(payload)]
        fields = [field for field in fields if field]
        triple = None
        if len(fields) == 3:
            triple = by_key.get(tuple(fields))
        if triple is None and len(fields) >= 2:
            triple = by_pair.get((fields[0], fields[-1]))
        if triple is None:
            unmatched += 1
            logger.debug('unmatched rerank line %r', payload)
        elif triple not in chosen:
            chosen.append(triple)
    if not chosen:
        logger.warning('rerank reply matched none of %d candidates', len(candidates))
    return RankedEvidence(kind, tuple(chosen[:retrieve_k]), retrieve_k, text, unmatched)


def rerank(question, subgraph, gateway, retrieve_k=DEFAULT_RETRIEVE_K, settings=RequestSettings()):
    """Return the reranked evidence of one subgraph (no call when it is empty)."""
    if not subgraph.triples:
        return RankedEvidence(subgraph.kind, retrieve_k=retrieve_k)
    text = gateway.complete(build_rerank_prompt(question, subgraph, retrieve_k, settings))
    return parse_rerank_output(text, subgraph.triples, retrieve_k, subgraph.kind)


def rerank_jointly(question, bundle, gateway, retrieve_k=DEFAULT_RETRIEVE_K, settings=RequestSettings()):
    """Rerank the union of both families in one call and split the result
    back, path triples taking precedence for triples in both.
    """
    union = EvidenceSubgraph(Kind.PATH, tuple(dict.fromkeys(bundle.path.triples + bundle.neighbor.triples)))
    if not union.triples:
        return RankedEvidence(Kind.PATH, retrieve_k=retrieve_k), RankedEvidence(Kind.NEIGHBOR, retrieve_k=retrieve_k)
    text = gateway.complete(build_rerank_prompt(question, union, retrieve_k, settings))
    joint = parse_rerank_output(text, union.triples, retrieve_k)
    on_path = set(bundle.path.triples)
    return (RankedEvidence(Kind.PATH, tuple(t for t in joint.triples if t in on_path), retrieve_k, text,
                           joint.unmatched_lines),
            RankedEvidence(Kind.NEIGHBOR, tuple(t for t in joint.triples if t not in on_path), retrieve_k, text))


def retrieve(question, bundle, gateway, retrieve_k=DEFAULT_RETRIEVE_K, settings=RequestSettings(), joint=False):
    """Return (path, neighbor) :class:`RankedEvidence` for an evidence bundle,
    reranking each family separately unless `joint`.
    """
    if joint:
        return rerank_jointly(question, bundle, gateway, retrieve_k, settings)
    return (rerank(question, bundle.path, gateway, retrieve_k, settings),
            rerank(question, bundle.neighbor, gateway, retrieve_k, settings))
