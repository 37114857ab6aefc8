"""Pair-wise Relation Extraction
=================================
One prompt per entity pair: the model picks a relation from the menu for
the pair's Hetionet types, says there is none, or writes its own.
"""
import logging
import re
import string
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

from corpus import EntityMention, MissingYear
from errors import InputError
from kg_store import InvalidTriple, Method, Triple
from llm_gateway import RequestSettings, templates
from .generative import distinct_entities
from .tables import relation_candidates

logger = logging.getLogger(__name__)

template = templates(__file__)

NO_RELATION = 'no-relation'
OTHERS = 'others, please specify by generating a short predicate in 5 words.'
MAX_PREDICATE_WORDS = 5

ANSWER = re.compile(r'(?i:answer\s+is)\s*:?\s*\(?([A-Z])(?![A-Za-z])')
OTHERS_ECHO = re.compile(r'^others\b[\s,.;:()-]*(?:please\s+specify\b[^:.]*[:.]?\s*)?', re.IGNORECASE)


@dataclass(frozen=True)
class EntityPair:
    """Two distinct entities of a document (head first in text order) and the
    relations their types allow.
    """
    head: EntityMention
    tail: EntityMention
    candidates: Tuple[str, ...]

    @property
    def options(self):
        """Return the option texts: candidates, then no-relation, then others."""
        return self.candidates + (NO_RELATION, OTHERS)

    @property
    def letters(self):
        return string.ascii_uppercase[:len(self.options)]

    def render_options(self):
        return ' '.join('{}. {}'.format(letter, option) for letter, option in zip(self.letters, self.options))


def enumerate_pairs(doc, scope='abstract'):
    """Return (pairs, excluded): every unordered pair of distinct entities
    whose types have candidate relations, and the number of pairs left out
    because a type has no Hetionet match.
    """
    pairs, excluded = [], 0
    for head, tail in combinations(distinct_entities(doc.scoped(scope)[1]), 2):
        candidates = relation_candidates(head.entity_type, tail.entity_type)
        if candidates:
            pairs.append(EntityPair(head, tail, candidates))
        else:
            excluded += 1
    return pairs, excluded


def build_pairwise_prompt(pair, doc, settings=RequestSettings(), scope='abstract'):
    """Return the ``re_pairwise`` request for `pair`."""
    if not pair.candidates:
        raise InputError('pair {} / {} has no candidate relations'.format(pair.head.surface, pair.tail.surface))
    text, mentions = doc.scoped(scope)
    prompt = template('re_pairwise').format(
        abstract=text, entities=', '.join(m.surface for m in distinct_entities(mentions)),
        head=pair.head.surface, head_type=pair.head.entity_type.value,
        tail=pair.tail.surface, tail_type=pair.tail.entity_type.value,
        options=pair.render_options())
    return settings.request(prompt, 're_pairwise')


def read_choice(text, pair):
    """Return (option, rest of line) for the last "answer is: X" naming one of
    the pair's letters, or None.
    """
    for match in reversed(list(ANSWER.finditer(text))):
        letter = match.group(1)
        if letter in pair.letters:
            rest = text[match.end():].split('\n', 1)[0]
            return pair.options[pair.letters.index(letter)], rest
    return None


def others_predicate(rest):
    """Return the short predicate written after an "others" answer."""
    rest = OTHERS_ECHO.sub('', rest.strip().lstrip('.):,- ').strip())
    words = rest.strip(' ."\'').split()
    return ' '.join(words[:MAX_PREDICATE_WORDS])


def parse_pairwise_output(text, pair, doc) -> Optional[Triple]:
    """Return the triple a pair-wise reply asserts, or None for no relation
    and for replies without a recognizable choice.
    """
    if doc.year is None:
        raise MissingYear(doc.doc_id)
    choice = read_choice(text, pair)
    if choice is None:
        logger.warning('document %s: no choice for %s / %s in %r',
                       doc.doc_id, pair.head.surface, pair.tail.surface, text[-80:])
        return None
    option, rest = choice
    if option == NO_RELATION:
        return None
    generated = option == OTHERS
    relation = others_predicate(rest) if generated else option
    try:
        return Triple(pair.head.surface, relation, pair.tail.surface, doc.doc_id, doc.year,
                      Method.PAIRWISE, generated=generated)
    except InvalidTriple as error:
        logger.warning('document %s: %s', doc.doc_id, error)
        return None
