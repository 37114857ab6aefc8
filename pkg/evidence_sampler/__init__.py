from .entities import build_entity_prompt, extract_question_entities, parse_entities
from .neighbors import explore_neighbors, relevance
from .paths import explore_paths, nearest
from .sampler import EvidenceBundle, sample_evidence
from .subgraph import EvidenceSubgraph, Kind, SamplerConfig, UnknownSeed, prune
from .verbalize import build_describe_prompt, fallback_sentences, parse_sentences, verbalize
