"""Knowledge Graph TSV
======================
Columns ``head relation tail source_doc year method``, UTF-8, one header
line. Backslash, tab and newline inside fields are escaped as ``\\\\``,
``\\t`` and ``\\n``.
"""
import re

from errors import InputError
from .graph import KnowledgeGraph
from .triples import Method, Triple

COLUMNS = ('head', 'relation', 'tail', 'source_doc', 'year', 'method')
HEADER = '\t'.join(COLUMNS)

ESCAPES = {'\\': '\\\\', '\t': '\\t', '\n': '\\n'}
UNESCAPES = {v: k for k, v in ESCAPES.items()}


class MalformedRow(InputError):
    """A TSV row does not have the six columns, or a column does not parse."""
    def __init__(self, line_no, reason=''):
        super().__init__('line {}: malformed knowledge graph row{}'.format(
            line_no, ': ' + reason if reason else ''))
        self.line_no = line_no


def escape(field):
    return re.sub(r'[\\\t\n]', lambda m: ESCAPES[m.group()], str(field))


def unescape(field):
    return re.sub(r'\\[\\tn]', lambda m: UNESCAPES[m.group()], field)


def serialize_kg(graph):
    """Return the TSV text of `graph` (header only when empty)."""
    rows = [HEADER]
    for t in graph.triples:
        rows.append('\t'.join(escape(f) for f in (t.head, t.relation, t.tail, t.source_doc, t.year,
                                                     t.method.value)))
    return '\n'.join(rows) + '\n'


def parse_kg(text):
    """Return the :class:`KnowledgeGraph` serialized in `text`."""
    lines = text.replace('\r\n', '\n').split('\n')
    if lines[0] != HEADER:
        raise MalformedRow(1, 'expected header {!r}'.format(HEADER))
    triples = []
    for line_no, line in enumerate(lines[1:], 2):
        if not line:
            continue
        fields = line.split('\t')
        if len(fields) != len(COLUMNS):
            raise MalformedRow(line_no, '{} columns'.format(len(fields)))
        head, relation, tail, source_doc, year, method = map(unescape, fields)
        try:
            triples.append(Triple(head, relation, tail, source_doc, int(year), Method(method)))
        except ValueError as error:
            raise MalformedRow(line_no, str(error)) from None
    return KnowledgeGraph.from_triples(triples)


def write_kg(graph, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        fp.write(serialize_kg(graph))


def read_kg(path):
    try:
        with open(path, encoding='utf-8') as fp:
            return parse_kg(fp.read())
    except OSError as error:
        raise InputError('cannot read knowledge graph: {}'.format(error)) from None
