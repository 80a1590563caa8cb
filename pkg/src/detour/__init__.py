"""Landmark-based positional features for graphs.

Pipeline: cluster the graph, pick the most central node of each cluster as a
landmark, give every node its vector of hop distances to the landmarks, and
encode cluster identity through the eigenvectors of the landmark graph's
normalized Laplacian. A companion theory lab evaluates closed-form bounds on
landmark detour distances in random-graph models and measures them in
simulation, and a link-prediction harness scores edges with ranking metrics.
"""

from .graph import (
    UNREACHABLE,
    ComponentMap,
    Graph,
    IngestReport,
    bfs_distances,
    connected_components,
    load_edge_list,
)
from .clustering import Partition, cluster_plan, fluidc, fluidc_multi, hierarchical_partition
from .landmarks import (
    LandmarkProfile,
    centrality,
    distance_vectors,
    min_detour,
    min_detour_many,
    select_landmarks,
)
from .spectral import (
    LandmarkGraph,
    SpectralEncoding,
    assign_memberships,
    build_landmark_graph,
    eigendecompose,
    jacobi_eigh,
    normalized_laplacian,
    spectral_encode,
)
from .randgraph import GenSpec, gen_ba, gen_er, gen_hidden, sample_power_hidden
from .theory import (
    EULER_GAMMA,
    ModelParams,
    RankRow,
    SimRecord,
    SimReport,
    ba_detour_bound,
    ba_mean_distance,
    ba_top_pool_bound,
    detour_ccdf,
    detour_mean_from_ccdf,
    er_detour_bound,
    er_mean_distance,
    general_detour_bound,
    landmark_rank_experiment,
    run_detour_study,
    simulate_detour,
    top_pool_second_moment,
)
from .linkeval import (
    EvalSplit,
    ScoredPairs,
    adamic_adar_scores,
    common_neighbor_scores,
    detour_scores,
    metric_auc,
    metric_hits_at_k,
    metric_mrr,
    score_pairs,
    split_edges,
)
from .features import FeatureSet, preprocess, read_features, write_features

__version__ = "0.1.0"
