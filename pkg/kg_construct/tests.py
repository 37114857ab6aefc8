"""Test Knowledge Graph Construction
===================================
"""
from unittest import TestCase

from corpus import AnnotatedDocument, EntityMention, EntityType, MissingYear, attach_years, parse_pubtator, read_year_map
from errors import InputError
from kg_construct import (NO_RELATION, OTHERS, RELATION_CANDIDATES, RELATION_MENU, TYPE_MATCH, EntityPair,
                          KGBuilder, TooFewEntities, build_generative_prompt, build_pairwise_prompt,
                          construct_kg, enumerate_pairs, parse_generative_output, parse_pairwise_output,
                          read_choice, relation_candidates, split_top_level)
from kg_store import Method, serialize_kg
from llm_gateway import Gateway, Scripted
from testing import fixture, read_fixture

THIAMINE_OUTPUT = (
    "Thiamine deficiency | downregulates | TPP, Thiamine deficiency | regulates | Alzheimer's disease, "
    "Alzheimer's disease | involves | beta-secretase, Amyloid precursor protein | produces | beta-amyloid, "
    "Amyloid precursor protein | in | neuroblastoma, BACE1 | is | beta-secretase, BACE1 | regulates | "
    "beta-amyloid, Abeta | is | beta-amyloid, Abeta | in | mice, Abeta | causes | reactive oxygen species, "
    "Abeta | regulates | ROS")


def document(doc_id, abstract, entities, year=2015, title='Title'):
    """Return a document whose abstract mentions each (surface, type) of `entities`."""
    text = '{} {}'.format(title, abstract)
    mentions = []
    for surface, entity_type in entities:
        start = text.index(surface, len(title) + 1)
        mentions.append(EntityMention(surface, start, start + len(surface), entity_type))
    return AnnotatedDocument(doc_id, title, abstract, tuple(mentions), year)


def gateway(*rules):
    return Gateway(Scripted(rules), concurrency=2)


def mini_corpus():
    docs = parse_pubtator(read_fixture('minicorpus.pubtator'))
    return attach_years(docs, read_year_map(read_fixture('minicorpus_years.tsv')))


def pair_of(*candidates):
    head = EntityMention('sclerosis', 0, 9, EntityType.DISEASE)
    tail = EntityMention('multiple sclerosis', 20, 38, EntityType.DISEASE)
    return EntityPair(head, tail, tuple(candidates))


class TestTables(TestCase):
    """Test the Hetionet tables."""

    def test_type_match(self):
        """Three PubTator types map to Hetionet."""
        self.assertEqual(TYPE_MATCH, {EntityType.GENE: 'genes', EntityType.CHEMICAL: 'compounds',
                                      EntityType.DISEASE: 'diseases'})

    def test_relation_candidates(self):
        """Six type pairs carry candidate relations, order-free."""
        self.assertEqual(len(RELATION_CANDIDATES), 6)
        self.assertEqual(relation_candidates(EntityType.GENE, EntityType.GENE),
                         ('covaries', 'interacts', 'regulates'))
        self.assertEqual(relation_candidates(EntityType.DISEASE, EntityType.GENE),
                         ('downregulates', 'associates', 'upregulates'))
        self.assertEqual(relation_candidates(EntityType.CHEMICAL, EntityType.DISEASE), ('treats', 'palliates'))
        self.assertEqual(relation_candidates(EntityType.SPECIES, EntityType.GENE), ())

    def test_menu(self):
        """The generative menu lists ten relations."""
        self.assertEqual(len(RELATION_MENU), 10)
        self.assertEqual(RELATION_MENU[0], 'covaries')


class TestGenerative(TestCase):
    """Test generative extraction."""

    def setUp(self):
        self.doc = document('9', 'APOE4 and Tau in AD. APOE4 again.',
                            [('APOE4', EntityType.GENE), ('Tau', EntityType.GENE), ('AD', EntityType.DISEASE)])

    def test_prompt(self):
        """The prompt carries the format instruction and each entity once."""
        request = build_generative_prompt(self.doc)
        self.assertIn('Output all the extract triples in the format of "head | relation | tail".',
                      request.user_prompt)
        self.assertIn('Entity: APOE4, Tau, AD\n', request.user_prompt)
        self.assertIn('Abstract: APOE4 and Tau in AD. APOE4 again.', request.user_prompt)
        self.assertEqual(request.tag, 're_generative')

    def test_too_few_entities(self):
        """A document naming one entity cannot be prompted."""
        doc = document('3', 'Tau and Tau.', [('Tau', EntityType.GENE)])
        self.assertRaises(TooFewEntities, build_generative_prompt, doc)

    def test_parse_single(self):
        """One line is one triple, with the document's provenance."""
        (triple,), rejected = parse_generative_output('Thiamine deficiency | downregulates | TPP', self.doc)
        self.assertEqual((triple.head, triple.relation, triple.tail), ('Thiamine deficiency', 'downregulates', 'TPP'))
        self.assertEqual((triple.source_doc, triple.year, triple.method), ('9', 2015, Method.GENERATIVE))
        self.assertEqual(rejected, 0)

    def test_parse_listing(self):
        """A comma-separated listing of eleven triples parses completely."""
        triples, rejected = parse_generative_output(THIAMINE_OUTPUT, self.doc)
        self.assertEqual(len(triples), 11)
        self.assertEqual(rejected, 0)
        self.assertEqual(str(triples[-1]), 'Abeta -> regulates -> ROS')

    def test_parse_rejects(self):
        """Lines without three fields are counted, not kept."""
        triples, rejected = parse_generative_output('a | b\n- x | y | z\n1. "p | q | r"', self.doc)
        self.assertEqual([t.head for t in triples], ['x', 'p'])
        self.assertEqual(rejected, 1)

    def test_brackets(self):
        """Commas inside brackets do not split."""
        self.assertEqual(split_top_level('A (x, y) | in | B, C | of | D'), ['A (x, y) | in | B', 'C | of | D'])

    def test_missing_year(self):
        """Parsing needs the document year."""
        self.assertRaises(MissingYear, parse_generative_output, 'a | b | c', self.doc.with_year(None))


class TestPairs(TestCase):
    """Test pair enumeration and prompts."""

    def test_gene_disease(self):
        """A gene and a disease make one pair."""
        doc = document('1', 'APOE4 in AD.', [('APOE4', EntityType.GENE), ('AD', EntityType.DISEASE)])
        (pair,), excluded = enumerate_pairs(doc)
        self.assertEqual((pair.head.surface, pair.tail.surface), ('APOE4', 'AD'))
        self.assertEqual(pair.candidates, ('downregulates', 'associates', 'upregulates'))
        self.assertEqual(excluded, 0)

    def test_unmapped(self):
        """Pairs with an unmapped type are excluded."""
        doc = document('1', 'APOE4 in mice.', [('APOE4', EntityType.GENE), ('mice', EntityType.SPECIES)])
        self.assertEqual(enumerate_pairs(doc), ([], 1))

    def test_genes(self):
        """n distinct genes make n(n-1)/2 pairs."""
        for n in range(2, 7):
            names = ['G{}'.format(i) for i in range(n)]
            doc = document('1', ' '.join(names), [(name, EntityType.GENE) for name in names])
            self.assertEqual(len(enumerate_pairs(doc)[0]), n * (n - 1) // 2)

    def test_options(self):
        """Options follow the candidates with no-relation and others."""
        self.assertEqual(pair_of('resembles').render_options(), 'A. resembles B. no-relation C. ' + OTHERS)
        pair = pair_of('treats', 'palliates')
        self.assertEqual(pair.letters, 'ABCD')
        self.assertEqual(pair.options[2], NO_RELATION)

    def test_prompt(self):
        """The prompt names both entities with their types."""
        doc = document('1', "APOE4 in Alzheimer's disease.",
                       [('APOE4', EntityType.GENE), ("Alzheimer's disease", EntityType.DISEASE)])
        (pair,), _ = enumerate_pairs(doc)
        request = build_pairwise_prompt(pair, doc)
        self.assertIn('predict the relationship between Gene entity "APOE4" and Disease entity '
                      '"Alzheimer\'s disease", first choose from the following options: A. downregulates',
                      request.user_prompt)
        self.assertTrue(request.user_prompt.endswith("Answer: Let's think step by step:"))
        self.assertEqual(request.tag, 're_pairwise')


class TestPairwiseParse(TestCase):
    """Test :func:`.parse_pairwise_output`."""

    def setUp(self):
        self.pair = pair_of('resembles')
        self.doc = document('5', 'sclerosis and multiple sclerosis.', [])

    def test_candidate(self):
        """A candidate letter gives that relation."""
        triple = parse_pairwise_output('They are related. So the answer is: A. resembles', self.pair, self.doc)
        self.assertEqual((triple.head, triple.relation, triple.tail), ('sclerosis', 'resembles', 'multiple sclerosis'))
        self.assertEqual(triple.method, Method.PAIRWISE)
        self.assertFalse(triple.generated)

    def test_no_relation(self):
        """No-relation gives no triple."""
        self.assertIsNone(parse_pairwise_output('So the answer is: B. no-relation', self.pair, self.doc))

    def test_unrecognized(self):
        """Replies without a legal letter give no triple."""
        self.assertIsNone(parse_pairwise_output('They resemble each other.', self.pair, self.doc))
        self.assertIsNone(read_choice('So the answer is: F.', self.pair))

    def test_last_answer_wins(self):
        """The final answer counts."""
        text = 'At first the answer is: A. But on reflection the answer is: B. no-relation'
        self.assertEqual(read_choice(text, self.pair)[0], NO_RELATION)

    def test_others(self):
        """An "others" answer takes its short predicate and is flagged."""
        text = 'So the answer is: C. others, please specify: slows progression of'
        triple = parse_pairwise_output(text, self.pair, self.doc)
        self.assertEqual(triple.relation, 'slows progression of')
        self.assertTrue(triple.generated)

    def test_others_echo(self):
        """The echoed option text is dropped with or without a colon."""
        for text in ('So the answer is: C. others, inhibits',
                     'So the answer is: C. others: inhibits',
                     'So the answer is: C. ' + OTHERS + ' inhibits'):
            self.assertEqual(parse_pairwise_output(text, self.pair, self.doc).relation, 'inhibits')

    def test_others_truncated(self):
        """Generated predicates keep at most five words."""
        triple = parse_pairwise_output('answer is: C. one two three four five six', self.pair, self.doc)
        self.assertEqual(triple.relation, 'one two three four five')


class TestConstructKG(TestCase):
    """Test :func:`.construct_kg`."""

    def test_empty(self):
        """No documents make an empty graph."""
        graph = construct_kg([], Method.GENERATIVE, gateway())
        self.assertEqual(len(graph.triples), 0)

    def test_unknown_method(self):
        """Only the two methods are accepted."""
        self.assertRaises(InputError, construct_kg, [], 'ner', gateway())

    def test_missing_year(self):
        """Every document needs a year."""
        doc = document('1', 'APOE4 in AD.', [('APOE4', EntityType.GENE), ('AD', EntityType.DISEASE)], year=None)
        self.assertRaises(MissingYear, construct_kg, [doc], 'generative', gateway())

    def test_earliest_year(self):
        """A triple found in several documents keeps the earliest."""
        entities = [('APOE4', EntityType.GENE), ('AD', EntityType.DISEASE)]
        docs = [document('1', 'APOE4 in AD.', entities, 2015), document('2', 'APOE4 and AD.', entities, 2012)]
        graph = construct_kg(docs, 'generative', gateway(('Abstract', 'APOE4 | associates | AD')))
        triple, = graph.triples
        self.assertEqual((triple.year, triple.source_doc), (2012, '2'))

    def test_skipped(self):
        """Documents with too few entities are skipped and counted."""
        builder = KGBuilder(gateway(('Abstract', 'APOE4 | associates | AD')))
        docs = [document('1', 'APOE4 in AD.', [('APOE4', EntityType.GENE), ('AD', EntityType.DISEASE)]),
                document('2', 'Only Tau.', [('Tau', EntityType.GENE)])]
        builder.build(docs, 'generative')
        self.assertEqual(builder.report.skipped_documents, 1)
        self.assertEqual(builder.report.triples_kept, 1)
        self.assertIn('"skipped_documents": 1', builder.report.to_json())

    def test_mini_corpus_generative(self):
        """The scripted mini-corpus builds the expected graph."""
        builder = KGBuilder(Gateway(Scripted.from_file(fixture('minicorpus_generative.json'))))
        graph = builder.build(mini_corpus(), Method.GENERATIVE)
        self.assertEqual(serialize_kg(graph), read_fixture('minicorpus_generative.tsv'))
        report = builder.report
        self.assertEqual((report.documents, report.candidates, report.rejected), (20, 55, 1))
        self.assertEqual((report.triples_extracted, report.triples_kept), (54, 51))

    def test_mini_corpus_pairwise(self):
        """Pair-wise extraction asks about more candidates than generative lines."""
        builder = KGBuilder(Gateway(Scripted.from_file(fixture('minicorpus_pairwise.json'))))
        graph = builder.build(mini_corpus(), Method.PAIRWISE)
        report = builder.report
        self.assertEqual((report.candidates, report.pairs_excluded), (98, 15))
        self.assertGreaterEqual(report.candidates, 55)
        self.assertEqual((report.unparseable, report.generated), (2, 1))
        generated, = [t for t in graph.triples if t.generated]
        self.assertEqual((generated.head, generated.relation, generated.tail),
                         ('GSK3B', 'inhibits kinase activity', 'Lithium'))
        self.assertTrue(all(t.method is Method.PAIRWISE for t in graph.triples))
