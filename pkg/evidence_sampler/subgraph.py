"""Evidence Subgraphs
====================
The triples sampled around a question, kept in priority order so that
pruning is a truncation.
"""
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from errors import InputError
from kg_store import Triple


class UnknownSeed(InputError):
    """A seed is not a node of the graph."""
    def __init__(self, seed):
        super().__init__('seed {!r} is not a graph node'.format(seed))
        self.seed = seed


class Kind(str, Enum):
    PATH = 'path'
    NEIGHBOR = 'neighbor'

    @property
    def label(self):
        """Return the evidence label used in prompts."""
        return 'Path-based Evidence' if self is Kind.PATH else 'Neighbor-based Evidence'


@dataclass(frozen=True)
class SamplerConfig:
    """`hop_bound` limits each path search, `relevance_threshold` is the cosine a
    neighbor needs to be expanded, `max_triples` caps each pruned subgraph.
    """
    hop_bound: int = 2
    relevance_threshold: float = 0.5
    max_triples: int = 40

    def __post_init__(self):
        if self.hop_bound < 1:
            raise InputError('hop bound must be at least 1, not {}'.format(self.hop_bound))
        if self.max_triples < 1:
            raise InputError('max triples must be at least 1, not {}'.format(self.max_triples))
        if not math.isfinite(self.relevance_threshold):
            raise InputError('relevance threshold must be a finite number')


@dataclass(frozen=True)
class EvidenceSubgraph:
    """Sampled evidence of one `kind`.

    `triples` are in priority order: for paths, segment order then position;
    for neighbors, the `core` seed-adjacent triples first, then the expanded
    ones, each in canonical order. Path subgraphs carry their `segments` as
    node-id chains, and `chains` renders them with relations.
    """
    kind: Kind
    triples: Tuple[Triple, ...] = ()
    segments: Tuple[Tuple[str, ...], ...] = ()
    chains: Tuple[str, ...] = ()
    core: int = 0
    sentences: Optional[Tuple[str, ...]] = None

    def __len__(self):
        return len(self.triples)

    def __bool__(self):
        return bool(self.triples)

    def lines(self, arrow='->'):
        return [triple.render(arrow) for triple in self.triples]

    def with_sentences(self, sentences):
        return replace(self, sentences=tuple(sentences))

    def as_dict(self):
        """Return the JSON form of the subgraph dump."""
        return {
            'kind': self.kind.value,
            'segments': list(self.chains),
            'triples': self.lines(),
            'sentences': list(self.sentences) if self.sentences is not None else None,
        }


def ordered_unique(items):
    seen, unique = set(), []
    for item in items:
        if item not in seen:
            seen.add(item)
            unique.append(item)
    return unique


def validate_seeds(graph, seeds):
    """Return the distinct seeds in sorted order, or raise :class:`UnknownSeed`."""
    for seed in seeds:
        if seed not in graph:
            raise UnknownSeed(seed)
    return sorted(set(seeds))


def prune(subgraph, config=SamplerConfig()):
    """Return `subgraph` without duplicate triples, truncated to
    ``config.max_triples`` in priority order.
    """
    triples = ordered_unique(subgraph.triples)
    core = len(ordered_unique(subgraph.triples[:subgraph.core]))
    if len(triples) > config.max_triples:
        triples = triples[:config.max_triples]
    return replace(subgraph, triples=tuple(triples), core=min(core, len(triples)))
