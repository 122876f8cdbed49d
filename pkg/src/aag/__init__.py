"""Correlated-subspace discovery and per-subspace anomaly detection.

The pipeline: discretize tabular data, group attributes into highly
correlated subspaces by agglomerative search over partition-based
information measures, then train a weighted ensemble of per-subspace
minimum-volume detectors.
"""

__version__ = "0.1.0"

from .ensemble import (
    EnsembleModel,
    SubspaceDetector,
    classify,
    classify_table,
    detector_predict,
    fit_detector,
    fit_ensemble,
    split_indices,
)
from .errors import (
    AagError,
    GenerationError,
    ParseError,
    SchemaError,
    UndefinedStabilityError,
    UnusableColumnError,
)
from .evaluation import (
    BenchmarkSplit,
    EvalReport,
    StabilityReport,
    f1_score,
    generate_setting1,
    generate_setting3,
    stability_index,
)
from .grouping import (
    MergeEvent,
    PairCache,
    Subspace,
    SubspaceSet,
    jaccard,
    run_aag,
    should_unify,
)
from .measures import (
    conditional_entropy,
    entropy,
    induce_partition,
    interaction_information,
    joint_entropy,
    multi_attribute_measure,
    mutual_information,
    normalized_measure,
    rokhlin_distance,
    symmetric_uncertainty,
    total_correlation,
)
from .preprocess import (
    PreprocessModel,
    RawColumn,
    RawTable,
    apply_preprocessor,
    fit_preprocessor,
    load_csv,
)
from .table import DiscreteTable, Partition, table_from_rows, validate_attrs

__all__ = [
    "AagError",
    "BenchmarkSplit",
    "DiscreteTable",
    "EnsembleModel",
    "EvalReport",
    "GenerationError",
    "MergeEvent",
    "PairCache",
    "ParseError",
    "Partition",
    "PreprocessModel",
    "RawColumn",
    "RawTable",
    "SchemaError",
    "StabilityReport",
    "Subspace",
    "SubspaceDetector",
    "SubspaceSet",
    "UndefinedStabilityError",
    "UnusableColumnError",
    "apply_preprocessor",
    "classify",
    "classify_table",
    "conditional_entropy",
    "detector_predict",
    "entropy",
    "f1_score",
    "fit_detector",
    "fit_ensemble",
    "fit_preprocessor",
    "generate_setting1",
    "generate_setting3",
    "induce_partition",
    "interaction_information",
    "jaccard",
    "joint_entropy",
    "load_csv",
    "multi_attribute_measure",
    "mutual_information",
    "normalized_measure",
    "rokhlin_distance",
    "run_aag",
    "should_unify",
    "split_indices",
    "stability_index",
    "symmetric_uncertainty",
    "table_from_rows",
    "total_correlation",
    "validate_attrs",
]
