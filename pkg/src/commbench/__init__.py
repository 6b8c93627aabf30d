"""Benchmark networks with planted community structure.

Three seed models (configuration model, preferential attachment, and its
evolutionary-game variant) feed a degree-preserving rewiring stage that
plants ground-truth communities at a target mixing coefficient; topology
reports and NMI scoring close the loop.
"""

from .config import SweepConfig, load_config
from .detection import (
    DetectionResult,
    detect_fast_greedy,
    detect_label_propagation,
    detect_louvain,
    modularity,
)
from .evaluation import ConfusionTable, confusion, nmi
from .generators import (
    BaParams,
    CmParams,
    EvParams,
    EvState,
    generate_ba,
    generate_cm,
    generate_ev,
    play_pd_round,
)
from .graph import Graph, Partition, double_edge_swap, single_source_distances
from .io import ingest_external_partition, io_roundtrip, load_network, save_network
from .metrics import (
    TopologyReport,
    average_distance,
    centrality,
    centralization,
    degree_assortativity,
    fit_power_law_exponent,
    measure_topology,
    transitivity,
)
from .planting import (
    PlantedNetwork,
    PlantingParams,
    assign_communities,
    measure_mixing,
    mu_limit,
    plant,
    rewire_to_mixing,
)
from .rng import RandomSource
from .sampling import (
    DegreeSequence,
    PowerLawSpec,
    build_community_sizes,
    build_degree_sequence,
    sample_power_law,
)
from .sweep import SweepResult, SweepRow, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BaParams",
    "CmParams",
    "ConfusionTable",
    "DegreeSequence",
    "DetectionResult",
    "EvParams",
    "EvState",
    "Graph",
    "Partition",
    "PlantedNetwork",
    "PlantingParams",
    "PowerLawSpec",
    "RandomSource",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "TopologyReport",
    "assign_communities",
    "average_distance",
    "build_community_sizes",
    "build_degree_sequence",
    "centrality",
    "centralization",
    "confusion",
    "degree_assortativity",
    "detect_fast_greedy",
    "detect_label_propagation",
    "detect_louvain",
    "double_edge_swap",
    "fit_power_law_exponent",
    "generate_ba",
    "generate_cm",
    "generate_ev",
    "ingest_external_partition",
    "io_roundtrip",
    "load_config",
    "load_network",
    "measure_mixing",
    "measure_topology",
    "modularity",
    "mu_limit",
    "nmi",
    "plant",
    "play_pd_round",
    "rewire_to_mixing",
    "run_sweep",
    "sample_power_law",
    "save_network",
    "single_source_distances",
    "transitivity",
]
