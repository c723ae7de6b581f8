"""Task-level demonstration-set selection for visual in-context learning.

Model-agnostic engine for picking a single demonstration set per task:
Top-K and Greedy search strategies plus Random, exhaustive (Oracle*), and
nearest-neighbor baselines, driven against pluggable score oracles, with an
experiment harness for seeded runs, complexity audits, and task-vs-sample
level analyses.
"""

from .core import (
    DemoSet,
    EMPTY_SET,
    Sample,
    SampleId,
    SplitSpec,
    Utility,
    canonicalize,
    enumerate_subsets,
    make_split,
    subset_count,
)
from .errors import DemoselectError
from .external import ExternalConfig, ExternalEvaluator, external_evaluate
from .harness import (
    CoincidenceResult,
    ExperimentConfig,
    OracleSpec,
    RankHistogram,
    Report,
    StrategySpec,
    audit_calls,
    coincidence_analysis,
    rank_frequency,
    run_experiment,
)
from .landscape import (
    LandscapeParams,
    PlantedSpec,
    SyntheticEvaluator,
    synth_evaluate,
)
from .manifest import ingest_manifest
from .metrics import BinaryMask, PixelImage, binary_iou, mean_iou, mse_scaled, to_utility
from .oracle import (
    Evaluator,
    OneShotMatrix,
    OneShotMatrixEvaluator,
    SubsetTable,
    SubsetTableEvaluator,
    aggregate_heldout_score,
    brute_force_best,
    load_one_shot_matrix,
    load_subset_table,
    save_one_shot_matrix,
    save_subset_table,
    tabulated_evaluate,
)
from .strategies import (
    Holdout,
    RandomBaseline,
    SelectionResult,
    TraceStep,
    select_exhaustive,
    select_greedy,
    select_nearest_neighbor,
    select_random_baseline,
    select_top_k,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "CoincidenceResult",
    "DemoSet",
    "DemoselectError",
    "EMPTY_SET",
    "Evaluator",
    "ExperimentConfig",
    "ExternalConfig",
    "ExternalEvaluator",
    "Holdout",
    "LandscapeParams",
    "OneShotMatrix",
    "OneShotMatrixEvaluator",
    "OracleSpec",
    "PixelImage",
    "PlantedSpec",
    "RandomBaseline",
    "RankHistogram",
    "Report",
    "Sample",
    "SampleId",
    "SelectionResult",
    "SplitSpec",
    "StrategySpec",
    "SubsetTable",
    "SubsetTableEvaluator",
    "SyntheticEvaluator",
    "TraceStep",
    "Utility",
    "aggregate_heldout_score",
    "audit_calls",
    "binary_iou",
    "brute_force_best",
    "canonicalize",
    "coincidence_analysis",
    "enumerate_subsets",
    "external_evaluate",
    "ingest_manifest",
    "load_one_shot_matrix",
    "load_subset_table",
    "make_split",
    "mean_iou",
    "mse_scaled",
    "rank_frequency",
    "run_experiment",
    "save_one_shot_matrix",
    "save_subset_table",
    "select_exhaustive",
    "select_greedy",
    "select_nearest_neighbor",
    "select_random_baseline",
    "select_top_k",
    "subset_count",
    "synth_evaluate",
    "tabulated_evaluate",
    "to_utility",
]
