"""Knowledge Graph Construction
===============================
Run one relation-extraction method over a corpus and assemble the graph.
"""
import json
import logging
from dataclasses import asdict, dataclass

from corpus import MissingYear
from errors import InputError
from kg_store import KnowledgeGraph, Method
from llm_gateway import RequestSettings
from .generative import TooFewEntities, build_generative_prompt, parse_generative_output
from .pairwise import NO_RELATION, build_pairwise_prompt, enumerate_pairs, parse_pairwise_output, read_choice

logger = logging.getLogger(__name__)


@dataclass
class BuildReport:
    """What a construction run did. `candidates` counts generative triple
    lines, or pair-wise pairs queried.
    """
    method: str
    documents: int = 0
    skipped_documents: int = 0
    failed_documents: int = 0
    candidates: int = 0
    rejected: int = 0
    pairs_excluded: int = 0
    no_relation: int = 0
    unparseable: int = 0
    generated: int = 0
    triples_extracted: int = 0
    triples_kept: int = 0

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + '\n'


class KGBuilder:
    """Builds graphs through `gateway`; :attr:`report` describes the last build."""

    def __init__(self, gateway, settings=RequestSettings(), scope='abstract'):
        self.gateway, self.settings, self.scope = gateway, settings, scope
        self.report = None

    def build(self, docs, method):
        """Return the :class:`.KnowledgeGraph` extracted from `docs` with `method`."""
        try:
            method = Method(method)
        except ValueError:
            raise InputError('{}: unknown construction method (choose from {})'.format(
                method, ', '.join(m.value for m in Method))) from None
        docs = list(docs)
        for doc in docs:
            if doc.year is None:
                raise MissingYear(doc.doc_id)
        self.report = BuildReport(method.value, documents=len(docs))
        extract = self.generative if method is Method.GENERATIVE else self.pairwise
        triples = extract(docs)
        graph = KnowledgeGraph.from_triples(triples)
        self.report.triples_extracted = len(triples)
        self.report.triples_kept = len(graph.triples)
        logger.info('%s: %d documents, %d triples extracted, %d kept',
                    method.value, len(docs), len(triples), len(graph.triples))
        return graph

    def generative(self, docs):
        jobs = []
        for doc in docs:
            try:
                jobs.append((doc, build_generative_prompt(doc, self.settings, self.scope)))
            except TooFewEntities as error:
                logger.info('skipped: %s', error)
                self.report.skipped_documents += 1
        responses = self.gateway.complete_batch([request for _, request in jobs])
        triples = []
        for (doc, _), text in zip(jobs, responses):
            try:
                found, rejected = parse_generative_output(text, doc)
            except InputError as error:
                logger.warning('document %s failed: %s', doc.doc_id, error)
                self.report.failed_documents += 1
                continue
            self.report.candidates += len(found) + rejected
            self.report.rejected += rejected
            triples += found
        return triples

    def pairwise(self, docs):
        jobs = []
        for doc in docs:
            pairs, excluded = enumerate_pairs(doc, self.scope)
            self.report.pairs_excluded += excluded
            if not pairs:
                self.report.skipped_documents += 1
            jobs += [(doc, pair, build_pairwise_prompt(pair, doc, self.settings, self.scope)) for pair in pairs]
        responses = self.gateway.complete_batch([request for _, _, request in jobs])
        triples = []
        for (doc, pair, _), text in zip(jobs, responses):
            self.report.candidates += 1
            choice = read_choice(text, pair)
            if choice is None:
                self.report.unparseable += 1
            elif choice[0] == NO_RELATION:
                self.report.no_relation += 1
                continue
            triple = parse_pairwise_output(text, pair, doc)
            if triple is not None:
                self.report.generated += triple.generated
                triples.append(triple)
            elif choice is not None:
                self.report.rejected += 1
        return triples


def construct_kg(docs, method, gateway, settings=RequestSettings(), scope='abstract'):
    """Return the graph `method` extracts from `docs` (see :class:`KGBuilder`)."""
    return KGBuilder(gateway, settings, scope).build(docs, method)
