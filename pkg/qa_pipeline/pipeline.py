"""Question Answering Pipeline
==============================
entities -> linking -> path and neighbor sampling -> pruning -> reranking ->
verbalization -> inference -> answer extraction.
"""
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from embed_link import Hashed, link_entities
from errors import InputError, ProviderError
from evidence_sampler import (EvidenceBundle, Kind, SamplerConfig, extract_question_entities, sample_evidence,
                              verbalize)
from llm_gateway import RequestSettings, Tracer
from self_retrieval import DEFAULT_RETRIEVE_K, RankedEvidence, retrieve
from .inference import build_inference_prompt, extract_answer

logger = logging.getLogger(__name__)

ENTITY_SCOPES = ('full', 'stem')


class Mode(str, Enum):
    DALK = 'dalk'
    NO_SELF_RETRIEVAL = 'no_self_retrieval'
    BASELINE = 'baseline'


@dataclass(frozen=True)
class PipelineConfig:
    """How questions are answered. `entity_scope` "full" shows the options to
    entity extraction and reranking, "stem" only the question.
    """
    mode: Mode = Mode.DALK
    sampler: SamplerConfig = SamplerConfig()
    retrieve_k: int = DEFAULT_RETRIEVE_K
    joint_rerank: bool = False
    min_similarity: Optional[float] = None
    entity_scope: str = 'full'
    settings: RequestSettings = RequestSettings()

    def __post_init__(self):
        try:
            object.__setattr__(self, 'mode', Mode(self.mode))
        except ValueError:
            raise InputError('{}: unknown mode (choose from {})'.format(
                self.mode, ', '.join(m.value for m in Mode))) from None
        if self.entity_scope not in ENTITY_SCOPES:
            raise InputError('entity scope must be one of {}'.format(', '.join(ENTITY_SCOPES)))
        if self.retrieve_k < 1:
            raise InputError('retrieve_k must be at least 1, not {}'.format(self.retrieve_k))

    def as_dict(self):
        """Return the settings that determine predictions."""
        data = asdict(self)
        data['mode'] = self.mode.value
        return data


@dataclass
class Prediction:
    """The outcome for one sample. `trace` holds the cache key of every model
    call made for it, in call order.
    """
    sample_id: str
    predicted: Optional[str] = None
    raw_response: str = ''
    evidence_used: Tuple[RankedEvidence, RankedEvidence] = (RankedEvidence(Kind.PATH), RankedEvidence(Kind.NEIGHBOR))
    trace: List[str] = field(default_factory=list)
    mode: str = Mode.DALK.value
    status: str = 'ok'
    error: str = ''
    sampling_seconds: float = field(default=0.0, compare=False)
    bundle: Optional[EvidenceBundle] = field(default=None, compare=False)

    @property
    def failed(self):
        return self.status != 'ok'

    def as_dict(self):
        return {
            'sample_id': self.sample_id, 'predicted': self.predicted, 'mode': self.mode, 'status': self.status,
            'error': self.error, 'raw_response': self.raw_response,
            'evidence': {ranked.kind.value: [t.render() for t in ranked.triples] for ranked in self.evidence_used},
            'trace': self.trace,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), ensure_ascii=False, sort_keys=True)


def unranked(subgraph):
    """Return a whole subgraph as evidence, for runs without reranking."""
    return RankedEvidence(subgraph.kind, subgraph.triples, max(1, len(subgraph.triples)))


def answer(sample, graph, config, gateway, embedder=None, embeddings=None):
    """Return the :class:`Prediction` for `sample`. Provider failures are
    recorded on the prediction instead of raised.
    """
    tracer = Tracer(gateway)
    prediction = Prediction(sample.id, mode=config.mode.value, trace=tracer.keys)
    try:
        path_sentences, neighbor_sentences = (), ()
        if config.mode is not Mode.BASELINE:
            path_sentences, neighbor_sentences = gather_evidence(
                sample, graph, config, tracer, embedder or Hashed(), embeddings, prediction)
        request = build_inference_prompt(sample, path_sentences, neighbor_sentences, config.settings)
        prediction.raw_response = tracer.complete(request)
        prediction.predicted = extract_answer(prediction.raw_response, sample.letters)
    except ProviderError as error:
        logger.error('sample %s failed: %s', sample.id, error)
        prediction.status, prediction.error = 'failed', str(error)
    return prediction


def gather_evidence(sample, graph, config, tracer, embedder, embeddings, prediction):
    """Sample, rerank and verbalize evidence; return (path, neighbor) sentences."""
    text = sample.text(config.entity_scope)
    entities = extract_question_entities(text, tracer, config.settings)
    links = link_entities(entities, graph, embedder, embeddings, config.min_similarity) \
        if entities and graph.nodes else []
    if not links:
        logger.info('sample %s: no entity links to the graph, answering without evidence', sample.id)
        prediction.mode = Mode.BASELINE.value
        return (), ()
    started = time.perf_counter()
    bundle = sample_evidence(graph, [link.linked_node for link in links], text, config.sampler, embedder, embeddings)
    prediction.sampling_seconds = time.perf_counter() - started
    if config.mode is Mode.NO_SELF_RETRIEVAL:
        ranked = unranked(bundle.path), unranked(bundle.neighbor)
    else:
        ranked = retrieve(text, bundle, tracer, config.retrieve_k, config.settings, config.joint_rerank)
    prediction.evidence_used = ranked
    sentences = [verbalize(evidence.as_subgraph(), tracer, config.settings) for evidence in ranked]
    prediction.bundle = EvidenceBundle(bundle.path.with_sentences(sentences[0]),
                                       bundle.neighbor.with_sentences(sentences[1]))
    return sentences[0], sentences[1]


def answer_all(samples, graph, config, gateway, embedder=None, workers=None):
    """Return the predictions for `samples` in order, answering up to
    `workers` (default: the gateway concurrency) at once.
    """
    samples = list(samples)
    if not samples:
        return []
    embedder = embedder or Hashed()
    workers = workers or getattr(gateway, 'concurrency', 1)
    with ThreadPoolExecutor(max_workers=min(workers, len(samples))) as pool:
        predictions = list(pool.map(lambda s: answer(s, graph, config, gateway, embedder), samples))
    failed = sum(p.failed for p in predictions)
    logger.info('answered %d samples in %s mode, %d failed', len(predictions), config.mode.value, failed)
    return predictions


def dump_predictions(predictions, path):
    """Write `predictions` as JSON lines."""
    with open(path, 'w', encoding='utf-8') as fp:
        for prediction in predictions:
            fp.write(prediction.to_json() + '\n')


def dump_subgraphs(predictions, path):
    """Write the sampled subgraphs of `predictions` as JSON lines."""
    with open(path, 'w', encoding='utf-8') as fp:
        for prediction in predictions:
            if prediction.bundle is not None:
                fp.write(prediction.bundle.to_json(prediction.sample_id) + '\n')
