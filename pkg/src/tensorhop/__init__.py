"""Path-occurrence tensors for graphs, depth-axis compression, and
tensor-slice graph convolution, with verification tooling and synthetic
node-classification benchmarks."""

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    IntegerOverflowError,
    ParseError,
    ResourceLimitError,
    TensorHopError,
)
from .experiments import (
    ExperimentConfig,
    LabeledGraph,
    RunResult,
    compare,
    format_table,
    generate_sbm,
    load_dataset,
    run_experiment,
    save_dataset,
    summarize,
)
from .graph import (
    Graph,
    adjacency,
    matrix_power,
    normalize_sym,
    parse_edge_list,
    serialize_edge_list,
)
from .layers import (
    LayerStack,
    glorot_uniform,
    gradient_check,
    mixhop_backward,
    mixhop_forward,
    softmax_cross_entropy,
    thop_backward,
    thop_forward,
)
from .models import (
    MixHopClassifier,
    THopClassifier,
    classifier_from_checkpoint,
    load_checkpoint,
    masked_accuracy,
    save_checkpoint,
)
from .reduce import (
    FiberPCA,
    ReducedTensor,
    SignRandomProjection,
    SumReducer,
    apply_reduction,
    fibers_of,
    fit_reducer,
    make_reducer,
    projection_matrix,
    reducer_from_json,
    reducer_to_json,
)
from .tensorio import read_tensor, write_tensor
from .tensors import (
    DEFAULT_ENUMERATION_CAP,
    IdentityReport,
    NormalizedTensor,
    PathTensor,
    Semantics,
    SimplePathSet,
    VerificationResult,
    build_simple_path_tensor,
    build_walk_tensor,
    check_occurrence_sum,
    count_matrix,
    enumerate_simple_paths,
    multiset_cardinality,
    normalize_tensor,
    simple_path_count_matrix,
    sum_reduce_fiber,
    verify_graph_identities,
)

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "DimensionError",
    "ExperimentConfig",
    "FiberPCA",
    "Graph",
    "IdentityReport",
    "IntegerOverflowError",
    "LabeledGraph",
    "LayerStack",
    "MixHopClassifier",
    "NormalizedTensor",
    "ParseError",
    "PathTensor",
    "ReducedTensor",
    "ResourceLimitError",
    "RunResult",
    "Semantics",
    "SignRandomProjection",
    "SimplePathSet",
    "SumReducer",
    "THopClassifier",
    "TensorHopError",
    "VerificationResult",
    "adjacency",
    "apply_reduction",
    "build_simple_path_tensor",
    "build_walk_tensor",
    "check_occurrence_sum",
    "classifier_from_checkpoint",
    "compare",
    "count_matrix",
    "enumerate_simple_paths",
    "fibers_of",
    "fit_reducer",
    "format_table",
    "generate_sbm",
    "glorot_uniform",
    "gradient_check",
    "load_checkpoint",
    "load_dataset",
    "make_reducer",
    "masked_accuracy",
    "matrix_power",
    "mixhop_backward",
    "mixhop_forward",
    "multiset_cardinality",
    "normalize_sym",
    "normalize_tensor",
    "parse_edge_list",
    "projection_matrix",
    "read_tensor",
    "reducer_from_json",
    "reducer_to_json",
    "run_experiment",
    "save_checkpoint",
    "save_dataset",
    "serialize_edge_list",
    "simple_path_count_matrix",
    "softmax_cross_entropy",
    "sum_reduce_fiber",
    "summarize",
    "thop_backward",
    "thop_forward",
    "verify_graph_identities",
    "write_tensor",
]
