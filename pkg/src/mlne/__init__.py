"""mlne: multi-level network embedding.

Learns node vectors that jointly preserve shared triangles, overlapping
community co-membership and random-walk neighborhoods through one
weighted negative-sampling objective, and evaluates them on node
classification and network reconstruction.
"""

from .affiliations import Affiliations, read_affiliations, write_affiliations
from .communities import BigClamConfig, detect, edge_probability, fit_bigclam, log_likelihood
from .errors import MlneError
from .evaluation import classify_and_score, micro_macro_f1, reconstruct_and_score
from .graph import Graph, LabelTable, degree_distribution, load_edge_list, load_labels
from .structure import (PairWeightTable, compute_community_overlap,
                        compute_involvement, compute_triad_matrix,
                        empirical_conditionals, merge_pair_weights)
from .training import NoiseSampler, TrainConfig, pair_similarity, train
from .walks import WalkConfig, count_cooccurrences, generate_walks

__version__ = "0.1.0"

__all__ = [
    "Affiliations", "BigClamConfig", "Graph", "LabelTable", "MlneError",
    "NoiseSampler", "PairWeightTable", "TrainConfig", "WalkConfig",
    "classify_and_score", "compute_community_overlap", "compute_involvement",
    "compute_triad_matrix", "count_cooccurrences", "degree_distribution",
    "detect", "edge_probability", "empirical_conditionals", "fit_bigclam",
    "generate_walks", "load_edge_list", "load_labels", "log_likelihood",
    "merge_pair_weights", "micro_macro_f1", "pair_similarity",
    "read_affiliations", "reconstruct_and_score", "train",
    "write_affiliations",
]
