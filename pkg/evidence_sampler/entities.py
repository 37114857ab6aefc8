"""Question Entities
===================
"""
import logging
import re

from kg_construct import split_top_level
from kg_store import normalize_name
from llm_gateway import RequestSettings, templates

logger = logging.getLogger(__name__)

template = templates(__file__)

LABEL = re.compile(r'^\s*(?:entities|entity)\s*:\s*', re.IGNORECASE)
BULLET = re.compile(r'^\s*(?:[-*•]|\d+[.)])\s+')
NOTHING = {'none', 'n/a', 'no entities'}


def build_entity_prompt(question, settings=RequestSettings()):
    return settings.request(template('extract_entities').format(question=question), 'extract_entities')


def parse_entities(text):
    """Return the distinct names of a comma or newline separated listing."""
    names, seen = [], set()
    for part in split_top_level(text):
        name = BULLET.sub('', LABEL.sub('', part)).strip().strip('"\'`').rstrip('.').strip()
        key = normalize_name(name)
        if key and key not in NOTHING and key not in seen:
            seen.add(key)
            names.append(name)
    return names


def extract_question_entities(question, gateway, settings=RequestSettings()):
    """Return the domain entities the model finds in `question` (may be empty)."""
    names = parse_entities(gateway.complete(build_entity_prompt(question, settings)))
    logger.debug('question entities: %s', names)
    return names
