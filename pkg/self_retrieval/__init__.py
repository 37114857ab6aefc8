from .rerank import (DEFAULT_RETRIEVE_K, EmptySubgraph, RankedEvidence, build_rerank_prompt, parse_rerank_output,
                     rerank, rerank_jointly, retrieve)
