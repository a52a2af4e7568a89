"""Attributed degree-corrected SBM benchmark generator and sweep harness."""

from .baselines import (
    SplitSpec,
    kmeans,
    label_propagation,
    make_few_shot_split,
    nearest_centroid,
    spectral_graph_clustering,
)
from .bundle import DatasetBundle, generate, read_bundle, write_bundle
from .config import (
    SCHEMA_VERSION,
    GeneratorConfig,
    ScenarioConfig,
    SplitParams,
    apply_parameter,
)
from .features import (
    BssWssRatio,
    EdgeFeatureParams,
    FeatureAssignment,
    FeatureParams,
    MembershipMode,
    build_feature_memberships,
    feature_separation_stats,
    sample_centers,
    sample_edge_features,
    sample_node_features,
)
from .metrics import (
    AggregateStat,
    aggregate,
    classification_accuracy,
    clustering_accuracy,
    nmi,
)
from .sbm import (
    BlockMatrix,
    ClusterAssignment,
    Graph,
    GraphParams,
    GraphStats,
    PowerLawParams,
    ThetaVector,
    build_block_matrix,
    detectability_threshold,
    graph_stats,
    sample_degree_propensities,
    sample_graph,
    sample_memberships,
)
from .scenarios import (
    ScenarioResult,
    calibrate_feature_signal,
    preset_scenario,
    run_scenario,
    write_aggregates_csv,
    write_results_csv,
)

__version__ = "0.1.0"
