from kg_store import Method, Triple
from .builder import BuildReport, KGBuilder, construct_kg
from .generative import (TooFewEntities, build_generative_prompt, distinct_entities, parse_generative_output,
                         split_top_level)
from .pairwise import (NO_RELATION, OTHERS, EntityPair, build_pairwise_prompt, enumerate_pairs,
                       parse_pairwise_output, read_choice)
from .tables import RELATION_CANDIDATES, RELATION_MENU, TYPE_MATCH, hetionet_type, relation_candidates
