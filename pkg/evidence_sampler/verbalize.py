"""Subgraph Verbalization
=========================
The model restates each evidence triple as a sentence, labelled
``Path-based Evidence N:`` or ``Neighbor-based Evidence N:``.
"""
import logging
import re

from llm_gateway import RequestSettings, templates

logger = logging.getLogger(__name__)

template = templates(__file__)


def build_describe_prompt(subgraph, settings=RequestSettings()):
    prompt = template('describe').format(triples='\n'.join(subgraph.lines()), label=subgraph.kind.label)
    return settings.request(prompt, 'describe')


def fallback_sentences(subgraph):
    """Return one templated sentence per triple."""
    return ["'{}' {} '{}'.".format(t.head, t.relation, t.tail) for t in subgraph.triples]


def parse_sentences(text, label):
    """Return the sentences labelled `label` in ascending number; lines that
    follow a labelled line continue its sentence.
    """
    marker = re.compile(r'^\s*\W*{}\s*(\d+)\s*:\s*(.*)$'.format(re.escape(label)), re.IGNORECASE)
    found, current = [], None
    for line in text.splitlines():
        match = marker.match(line)
        if match:
            current = [int(match.group(1)), match.group(2).strip()]
            found.append(current)
        elif current is not None and line.strip():
            current[1] = '{} {}'.format(current[1], line.strip()).strip()
        else:
            current = None
    return [sentence for _, sentence in sorted(found, key=lambda item: item[0]) if sentence]


def verbalize(subgraph, gateway, settings=RequestSettings()):
    """Return evidence sentences for `subgraph`; templated ones when the reply
    has no labelled lines.
    """
    if not subgraph:
        return []
    sentences = parse_sentences(gateway.complete(build_describe_prompt(subgraph, settings)), subgraph.kind.label)
    if not sentences:
        logger.warning('no %s lines in the description, using templates', subgraph.kind.label)
        return fallback_sentences(subgraph)
    return sentences
