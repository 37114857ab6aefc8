"""Generative Relation Extraction
=================================
One prompt per document; the model writes every triple it finds as
``head | relation | tail``.
"""
import logging
import re

from corpus import MissingYear
from errors import InputError
from kg_store import InvalidTriple, Method, Triple, normalize_name
from llm_gateway import RequestSettings, templates
from .tables import RELATION_MENU

logger = logging.getLogger(__name__)

template = templates(__file__)

BULLET = re.compile(r'^\s*(?:[-*•]|\d+[.)])\s+')
QUOTES = '"\'“”‘’`'


class TooFewEntities(InputError):
    """A document needs two distinct entities for relation extraction."""
    def __init__(self, doc_id, count):
        super().__init__('document {} has {} distinct entities, need 2'.format(doc_id, count))
        self.doc_id = doc_id


def distinct_entities(mentions):
    """Return the first mention of each normalized surface, in text order."""
    seen, entities = set(), []
    for mention in mentions:
        key = normalize_name(mention.surface)
        if key and key not in seen:
            seen.add(key)
            entities.append(mention)
    return entities


def build_generative_prompt(doc, settings=RequestSettings(), scope='abstract'):
    """Return the ``re_generative`` request for `doc`."""
    text, mentions = doc.scoped(scope)
    entities = distinct_entities(mentions)
    if len(entities) < 2:
        raise TooFewEntities(doc.doc_id, len(entities))
    prompt = template('re_generative').format(
        relations=', '.join(RELATION_MENU), abstract=text,
        entities=', '.join(m.surface for m in entities))
    return settings.request(prompt, 're_generative')


def split_top_level(text):
    """Split on newlines and on commas outside brackets."""
    parts, depth, current = [], 0, []
    for char in text:
        if char in '([{':
            depth += 1
        elif char in ')]}':
            depth = max(0, depth - 1)
        if char == '\n' or (char == ',' and depth == 0):
            parts.append(''.join(current))
            current = []
        else:
            current.append(char)
    parts.append(''.join(current))
    return [part.strip() for part in parts if part.strip()]


def parse_generative_output(text, doc):
    """Return (triples, rejected_count) parsed from a generative reply."""
    if doc.year is None:
        raise MissingYear(doc.doc_id)
    triples, rejected = [], 0
    for candidate in split_top_level(text):
        fields = [f.strip().strip(QUOTES).strip() for f in BULLET.sub('', candidate).strip(QUOTES).split('|')]
        if len(fields) != 3:
            rejected += 1
            logger.warning('document %s: rejected %r (%d fields)', doc.doc_id, candidate, len(fields))
            continue
        try:
            triples.append(Triple(*fields, source_doc=doc.doc_id, year=doc.year, method=Method.GENERATIVE))
        except InvalidTriple as error:
            rejected += 1
            logger.warning('document %s: rejected %r (%s)', doc.doc_id, candidate, error)
    return triples, rejected
