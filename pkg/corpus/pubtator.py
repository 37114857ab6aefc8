"""PubTator Documents
=====================
Parse and serialize the PubTator interchange format::

    PMID|t|Title text
    PMID|a|Abstract text
    PMID<TAB>start<TAB>end<TAB>mention<TAB>type<TAB>id

Blocks are separated by blank lines. Annotation offsets are character offsets
into ``title + ' ' + abstract``.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Union

from errors import InputError

logger = logging.getLogger(__name__)

TEXT_RE = re.compile(r'^([^|\t]+)\|([ta])\|(.*)$')

MIN_YEAR, MAX_YEAR = 1900, 2100


class MalformedLine(InputError):
    """A line is not valid PubTator."""
    def __init__(self, line_no, line=''):
        super().__init__('line {}: malformed PubTator line: {!r}'.format(line_no, line[:80]))
        self.line_no = line_no


class OffsetOutOfRange(InputError):
    """An annotation span does not index the document text."""
    def __init__(self, doc_id, start, end):
        super().__init__('document {}: span {}-{} is out of range'.format(doc_id, start, end))
        self.doc_id, self.start, self.end = doc_id, start, end


class MentionMismatch(InputError):
    """An annotation's mention text differs from the text it indexes."""
    def __init__(self, doc_id, start, end, surface, text):
        super().__init__('document {}: span {}-{} is {!r}, annotation says {!r}'.format(
            doc_id, start, end, text, surface))
        self.doc_id, self.start, self.end = doc_id, start, end


class DuplicateDocId(InputError):
    """The same PMID appears in two blocks."""
    def __init__(self, doc_id):
        super().__init__('duplicate document id {}'.format(doc_id))
        self.doc_id = doc_id


class EntityType(str, Enum):
    """The PubTator bioconcept types."""
    GENE = 'Gene'
    CHEMICAL = 'Chemical'
    DISEASE = 'Disease'
    MUTATION = 'Mutation'
    SPECIES = 'Species'
    CELL_LINE = 'CellLine'

    @classmethod
    def parse(cls, label):
        """Return the EntityType called `label`, or an :class:`OtherType`."""
        try:
            return cls(label)
        except ValueError:
            return OtherType(label)


@dataclass(frozen=True)
class OtherType:
    """A type string PubTator emitted that is not one of the six bioconcepts."""
    value: str

    def __str__(self):
        return self.value


def collapse(text):
    """Collapse runs of whitespace to single spaces and trim."""
    return ' '.join(text.split())


@dataclass(frozen=True)
class EntityMention:
    """A typed entity span inside a document's ``title + ' ' + abstract``."""
    surface: str
    start: int
    end: int
    entity_type: Union[EntityType, OtherType]
    concept_id: Optional[str] = None


@dataclass(frozen=True)
class AnnotatedDocument:
    """One abstract with its entity mentions; `year` is the provenance year."""
    doc_id: str
    title: str
    abstract_text: str
    mentions: tuple = ()
    year: Optional[int] = None

    def __post_init__(self):
        if not self.doc_id:
            raise InputError('document id must not be empty')
        if self.year is not None and not MIN_YEAR <= self.year <= MAX_YEAR:
            raise InputError('document {}: year {} outside [{}, {}]'.format(
                self.doc_id, self.year, MIN_YEAR, MAX_YEAR))
        ordered = tuple(sorted(self.mentions, key=lambda m: (m.start, m.end)))
        object.__setattr__(self, 'mentions', ordered)

    @property
    def text(self):
        """Return the annotated text: title, one space, abstract."""
        return '{} {}'.format(self.title, self.abstract_text)

    @property
    def abstract_offset(self):
        """Return the offset at which the abstract starts in :attr:`text`."""
        return len(self.title) + 1

    def scoped(self, scope='abstract'):
        """Return (text, mentions) used for prompting.
        `scope` is "abstract" (abstract text and the mentions inside it)
        or "full" (title and abstract).
        """
        if scope == 'full':
            return self.text, self.mentions
        offset = self.abstract_offset
        return self.abstract_text, tuple(m for m in self.mentions if m.start >= offset)

    def with_year(self, year):
        return replace(self, year=year)


@dataclass
class PubTatorParser:
    """A PubTator parser.

    In strict mode the first problem raises. In lenient mode offending
    annotation lines are dropped (and counted in `dropped_annotations`),
    blocks without a title/abstract pair are dropped (`dropped_blocks`), and
    repeated PMIDs keep their first block.
    """
    strict: bool = True
    dropped_annotations: int = 0
    dropped_blocks: int = 0
    warnings: List[str] = field(default_factory=list)

    def __call__(self, stream):
        """Parse `stream` (str) and return a list of AnnotatedDocument."""
        docs, seen = [], set()
        for block in self.blocks(stream):
            doc = self.block(block)
            if doc is None:
                continue
            if doc.doc_id in seen:
                self.problem(DuplicateDocId(doc.doc_id), block=True)
                continue
            seen.add(doc.doc_id)
            docs.append(doc)
        return docs

    def blocks(self, stream):
        """Yield lists of (line_no, line) separated by blank lines."""
        block = []
        for line_no, line in enumerate(stream.replace('\r\n', '\n').replace('\r', '\n').split('\n'), 1):
            if line.strip():
                block.append((line_no, line))
            elif block:
                yield block
                block = []
        if block:
            yield block

    def problem(self, error, block=False):
        """Raise `error` when strict, otherwise log and count it."""
        if self.strict:
            raise error
        logger.warning('%s (dropped %s)', error, 'document' if block else 'annotation')
        self.warnings.append(str(error))
        if block:
            self.dropped_blocks += 1
        else:
            self.dropped_annotations += 1

    def block(self, block):
        """Parse one block into an AnnotatedDocument (None if dropped)."""
        header = []
        for (line_no, line), kind in zip(block, 'ta'):
            match = TEXT_RE.match(line)
            if not match or match.group(2) != kind or (header and match.group(1) != header[0].group(1)):
                return self.problem(MalformedLine(line_no, line), block=True)
            header.append(match)
        if len(header) < 2:
            return self.problem(MalformedLine(*block[-1]), block=True)
        doc_id, title, abstract = header[0].group(1), header[0].group(3), header[1].group(3)
        text = '{} {}'.format(title, abstract)
        mentions = []
        for line_no, line in block[2:]:
            try:
                mentions.append(self.annotation(doc_id, text, line_no, line))
            except InputError as error:
                self.problem(error)
        return AnnotatedDocument(doc_id, title, abstract, tuple(mentions))

    def annotation(self, doc_id, text, line_no, line):
        """Parse and validate one annotation line."""
        fields = line.split('\t')
        if len(fields) not in (5, 6) or fields[0] != doc_id:
            raise MalformedLine(line_no, line)
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError:
            raise MalformedLine(line_no, line) from None
        if not 0 <= start < end <= len(text):
            raise OffsetOutOfRange(doc_id, start, end)
        surface = fields[3]
        if collapse(text[start:end]) != collapse(surface):
            raise MentionMismatch(doc_id, start, end, surface, text[start:end])
        return EntityMention(surface, start, end, EntityType.parse(fields[4]),
                             fields[5] if len(fields) == 6 else None)


def parse_pubtator(stream, strict=True):
    """Parse PubTator text into a list of :class:`AnnotatedDocument`."""
    return PubTatorParser(strict=strict)(stream)


def serialize_pubtator(docs):
    """Return PubTator text for `docs` (inverse of :func:`parse_pubtator`)."""
    return '\n'.join(serialize_document(doc) for doc in docs)


def serialize_document(doc):
    lines = ['{}|t|{}'.format(doc.doc_id, doc.title), '{}|a|{}'.format(doc.doc_id, doc.abstract_text)]
    for m in doc.mentions:
        fields = [doc.doc_id, str(m.start), str(m.end), m.surface, m.entity_type.value]
        if m.concept_id is not None:
            fields.append(m.concept_id)
        lines.append('\t'.join(fields))
    return '\n'.join(lines) + '\n'


def normalize_pubtator(stream):
    """Normalize line endings and trailing blank lines, as serialization does."""
    lines = stream.replace('\r\n', '\n').replace('\r', '\n').rstrip('\n').split('\n')
    return '\n'.join(line.rstrip() if not line.strip() else line for line in lines) + '\n'
