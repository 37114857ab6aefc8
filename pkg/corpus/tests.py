"""Test Corpus
==============
"""
import random
from unittest import TestCase

from corpus import (AnnotatedDocument, DuplicateDocId, EntityMention, EntityType, MalformedLine,
                    MentionMismatch, MissingYear, OffsetOutOfRange, OtherType, PubTatorParser,
                    attach_years, collapse, normalize_pubtator, parse_pubtator, read_year_map,
                    serialize_pubtator)
from errors import InputError
from testing import read_fixture


class TestParsePubTator(TestCase):
    """Test :func:`.parse_pubtator`."""

    def test_minimal(self):
        """A title and abstract with no annotations is one document."""
        docs = parse_pubtator('1|t|T.\n1|a|A.\n')
        self.assertEqual(len(docs), 1)
        self.assertEqual(docs[0].doc_id, '1')
        self.assertEqual(docs[0].text, 'T. A.')
        self.assertEqual(docs[0].mentions, ())

    def test_offsets_include_title(self):
        """Offsets index title + one space + abstract."""
        doc, = parse_pubtator('7|t|APOE4 study\n7|a|APOE4 raises risk.\n7\t0\t5\tAPOE4\tGene\t348\n'
                              '7\t12\t17\tAPOE4\tGene\t348\n')
        self.assertEqual([(m.start, m.end) for m in doc.mentions], [(0, 5), (12, 17)])
        self.assertEqual(doc.abstract_offset, 12)
        self.assertEqual(doc.mentions[0].entity_type, EntityType.GENE)
        self.assertEqual(doc.mentions[0].concept_id, '348')

    def test_degenerate_span(self):
        """An annotation with end <= start is out of range."""
        with self.assertRaises(OffsetOutOfRange):
            parse_pubtator('1|t|Tau\n1|a|Tau.\n1\t2\t2\tTau\tGene\t4137\n')

    def test_span_past_text(self):
        """An annotation past the end of the text is out of range."""
        with self.assertRaises(OffsetOutOfRange) as context:
            parse_pubtator('1|t|Tau\n1|a|Tau.\n1\t4\t40\tTau\tGene\t4137\n')
        self.assertEqual(context.exception.doc_id, '1')

    def test_mention_mismatch(self):
        """The mention text must be the text at the span."""
        with self.assertRaises(MentionMismatch):
            parse_pubtator('1|t|Tau\n1|a|Tau.\n1\t0\t3\tAPP\tGene\t351\n')

    def test_malformed_line(self):
        """A relation line (4 columns) is malformed in strict mode."""
        with self.assertRaises(MalformedLine) as context:
            parse_pubtator('1|t|Tau\n1|a|Tau.\n1\tCID\tD1\tD2\n')
        self.assertEqual(context.exception.line_no, 3)

    def test_missing_abstract(self):
        """A block without its abstract line is malformed."""
        with self.assertRaises(MalformedLine):
            parse_pubtator('1|t|Tau\n1\t0\t3\tTau\tGene\t4137\n')

    def test_duplicate_doc_id(self):
        """A PMID may only appear once."""
        with self.assertRaises(DuplicateDocId):
            parse_pubtator('1|t|T.\n1|a|A.\n\n1|t|T.\n1|a|A.\n')

    def test_lenient(self):
        """Lenient mode drops offending annotations, not documents."""
        parser = PubTatorParser(strict=False)
        docs = parser('1|t|Tau\n1|a|Tau and APP.\n1\t0\t3\tTau\tGene\t4137\n1\t4\t99\tTau\tGene\t4137\n'
                      '1\tCID\tD1\tD2\n\n1|t|Again\n1|a|A.\n')
        self.assertEqual(len(docs), 1)
        self.assertEqual(len(docs[0].mentions), 1)
        self.assertEqual(parser.dropped_annotations, 2)
        self.assertEqual(parser.dropped_blocks, 1)

    def test_unknown_type(self):
        """Unknown type strings become OtherType."""
        doc, = parse_pubtator('1|t|Tau\n1|a|A.\n1\t0\t3\tTau\tProteinDomain\t\n')
        self.assertEqual(doc.mentions[0].entity_type, OtherType('ProteinDomain'))
        self.assertEqual(doc.mentions[0].concept_id, '')

    def test_unicode_offsets(self):
        """Offsets count characters, not bytes."""
        doc = parse_pubtator(read_fixture('roundtrip.pubtator'))[0]
        first = doc.mentions[0]
        self.assertEqual(first.surface, 'β-amyloid')
        self.assertEqual((first.start, first.end), (8, 17))

    def test_crlf(self):
        """Windows line endings are accepted."""
        docs = parse_pubtator('1|t|T.\r\n1|a|A.\r\n\r\n2|t|U.\r\n2|a|B.\r\n')
        self.assertEqual([d.doc_id for d in docs], ['1', '2'])

    def test_order_preserving(self):
        """Documents come back in input order."""
        docs = parse_pubtator(read_fixture('minicorpus.pubtator'))
        self.assertEqual(len(docs), 20)
        self.assertEqual(docs[0].doc_id, '1000001')
        self.assertEqual(docs[-1].doc_id, '1000020')


class TestRoundTrip(TestCase):
    """Test serialize(parse(x)) = normalize(x)."""

    def test_fixture(self):
        """The three document fixture round-trips byte for byte."""
        text = read_fixture('roundtrip.pubtator')
        self.assertEqual(serialize_pubtator(parse_pubtator(text)), normalize_pubtator(text))

    def test_minicorpus(self):
        """The mini-corpus round-trips."""
        text = read_fixture('minicorpus.pubtator')
        self.assertEqual(serialize_pubtator(parse_pubtator(text)), normalize_pubtator(text))

    def test_trailing_blank_lines(self):
        """Trailing blank lines and CRLF are normalized away."""
        text = '1|t|T.\r\n1|a|A.\r\n\r\n\r\n'
        self.assertEqual(serialize_pubtator(parse_pubtator(text)), '1|t|T.\n1|a|A.\n')


class TestRandomDocuments(TestCase):
    """Mention spans of random documents always index their surface."""

    WORDS = ['amyloid', 'beta', 'APOE', 'tau', 'microglia', 'TREM2', 'dementia', 'β-secretase']

    def random_document(self, rng, doc_id):
        title = ' '.join(rng.choice(self.WORDS) for _ in range(rng.randint(1, 4)))
        abstract = ' '.join(rng.choice(self.WORDS) for _ in range(rng.randint(1, 12)))
        text = '{} {}'.format(title, abstract)
        lines = ['{}|t|{}'.format(doc_id, title), '{}|a|{}'.format(doc_id, abstract)]
        position, spans = 0, []
        for word in text.split(' '):
            if rng.random() < 0.5:
                spans.append((position, position + len(word), word))
            position += len(word) + 1
        lines += ['{}\t{}\t{}\t{}\tGene\t1'.format(doc_id, s, e, w) for s, e, w in spans]
        return '\n'.join(lines) + '\n'

    def test_random(self):
        """Parsed spans equal the referenced substrings."""
        rng = random.Random(7)
        text = '\n'.join(self.random_document(rng, str(i)) for i in range(1, 51))
        docs = parse_pubtator(text)
        self.assertEqual(len(docs), 50)
        for doc in docs:
            for m in doc.mentions:
                self.assertEqual(collapse(doc.text[m.start:m.end]), collapse(m.surface))
        self.assertEqual(serialize_pubtator(docs), normalize_pubtator(text))


class TestDocument(TestCase):
    """Test :class:`.AnnotatedDocument`."""

    def test_sorted_mentions(self):
        """Mentions are kept sorted by (start, end)."""
        later = EntityMention('A.', 3, 5, EntityType.GENE)
        earlier = EntityMention('T.', 0, 2, EntityType.GENE)
        doc = AnnotatedDocument('1', 'T.', 'A.', (later, earlier))
        self.assertEqual(doc.mentions, (earlier, later))

    def test_year_range(self):
        """Years outside [1900, 2100] are rejected."""
        self.assertRaises(InputError, AnnotatedDocument, '1', 'T', 'A', (), 1850)
        self.assertRaises(InputError, AnnotatedDocument, '', 'T', 'A')

    def test_scoped(self):
        """Abstract scope keeps only mentions inside the abstract."""
        doc = parse_pubtator(read_fixture('minicorpus.pubtator'))[0]
        text, mentions = doc.scoped('abstract')
        self.assertEqual(text, doc.abstract_text)
        self.assertTrue(all(m.start >= doc.abstract_offset for m in mentions))
        self.assertEqual(doc.scoped('full'), (doc.text, doc.mentions))


class TestYears(TestCase):
    """Test year maps and :func:`.attach_years`."""

    def setUp(self):
        self.docs = parse_pubtator('1|t|T.\n1|a|A.\n\n2|t|U.\n2|a|B.\n')

    def test_attach(self):
        """Mapped documents get their year."""
        docs = attach_years(self.docs, {'1': 2015, '2': 2019})
        self.assertEqual([d.year for d in docs], [2015, 2019])

    def test_strict_missing(self):
        """Strict mode raises MissingYear."""
        with self.assertRaises(MissingYear) as context:
            attach_years(self.docs, {})
        self.assertEqual(context.exception.doc_id, '1')

    def test_lenient_default(self):
        """Lenient mode gives unmapped documents the default year."""
        docs = attach_years(self.docs, {'2': 2019}, strict=False, default_year=2011)
        self.assertEqual([d.year for d in docs], [2011, 2019])

    def test_read_year_map(self):
        """Year maps are doc_id<TAB>year."""
        years = read_year_map(read_fixture('minicorpus_years.tsv'))
        self.assertEqual(len(years), 20)
        self.assertEqual(years['1000001'], 2011)
        self.assertEqual(years['1000020'], 2021)

    def test_read_year_map_malformed(self):
        """A row without a numeric year is malformed."""
        with self.assertRaises(MalformedLine):
            read_year_map('1\tlast year\n')
        for year in ('2²', '٢٠١١', '-2011'):
            with self.assertRaises(MalformedLine):
                read_year_map('1\t{}\n'.format(year))
