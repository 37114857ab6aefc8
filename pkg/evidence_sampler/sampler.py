"""Evidence Sampling
===================
"""
import json
from dataclasses import dataclass

from .neighbors import explore_neighbors
from .paths import explore_paths
from .subgraph import EvidenceSubgraph, Kind, SamplerConfig, prune


@dataclass(frozen=True)
class EvidenceBundle:
    """Both evidence families sampled for one question."""
    path: EvidenceSubgraph = EvidenceSubgraph(Kind.PATH)
    neighbor: EvidenceSubgraph = EvidenceSubgraph(Kind.NEIGHBOR)

    def __iter__(self):
        return iter((self.path, self.neighbor))

    def to_json(self, sample_id):
        """Return one line of the subgraph dump."""
        return json.dumps({'sample_id': sample_id, 'path': self.path.as_dict(),
                           'neighbor': self.neighbor.as_dict()}, ensure_ascii=False)


def sample_evidence(graph, seeds, question, config=SamplerConfig(), embedder=None, embeddings=None):
    """Return the pruned path and neighbor subgraphs around `seeds`."""
    if not seeds:
        return EvidenceBundle()
    return EvidenceBundle(prune(explore_paths(graph, seeds, config), config),
                          prune(explore_neighbors(graph, seeds, question, config, embedder, embeddings), config))
