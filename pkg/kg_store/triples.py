"""Triples
==========
A triple is a (head, relation, tail) assertion stamped with the document
and year it was extracted from. Identity is the normalized form of the
three fields: trimmed, whitespace collapsed, typographic quotes folded and
lowercased. Display casing is kept as extracted.
"""
from dataclasses import dataclass, field
from enum import Enum

from errors import InputError

QUOTES = str.maketrans({'’': "'", '‘': "'", '“': '"', '”': '"'})


def display_name(text):
    """Trim and collapse whitespace."""
    return ' '.join(str(text).split())


def normalize_name(text):
    """Return the identity form of an entity or relation name."""
    return display_name(text).translate(QUOTES).lower()


class Method(str, Enum):
    """How a triple was extracted."""
    GENERATIVE = 'generative'
    PAIRWISE = 'pairwise'


class InvalidTriple(InputError):
    """A triple has an empty field or is a self-loop."""


@dataclass(frozen=True)
class Triple:
    """One provenance-stamped assertion. `generated` marks a pair-wise
    relation the model wrote itself instead of choosing from the menu; it
    is not part of identity and not serialized.
    """
    head: str
    relation: str
    tail: str
    source_doc: str
    year: int
    method: Method = Method.GENERATIVE
    generated: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ('head', 'relation', 'tail'):
            value = display_name(getattr(self, name))
            if not value:
                raise InvalidTriple('triple {} must not be empty'.format(name))
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'method', Method(self.method))
        object.__setattr__(self, 'year', int(self.year))
        if normalize_name(self.head) == normalize_name(self.tail):
            raise InvalidTriple('self-loop on {!r}'.format(self.head))

    @property
    def key(self):
        """Return the normalized (head, relation, tail) identity."""
        return normalize_name(self.head), normalize_name(self.relation), normalize_name(self.tail)

    @property
    def provenance(self):
        """Return the order deduplication keeps the minimum of."""
        return self.year, self.source_doc, self.method.value

    def render(self, arrow='->'):
        """Return ``head->relation->tail``."""
        return arrow.join((self.head, self.relation, self.tail))

    def __str__(self):
        return self.render()
