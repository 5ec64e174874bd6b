"""Mining maximal co-movement patterns from camera-sequence trajectories."""

from .baselines import mine_apriori, mine_cmc
from .bench import BenchResult, bench_cell, run_bench, write_bench_csv
from .clustering import (
    CameraTimeline,
    MetaCluster,
    TemporalCluster,
    TokenSequence,
    build_meta_clusters,
    build_timelines,
    encode_objects,
    merge_meta_clusters,
    temporal_clusters,
)
from .dataio import (
    CameraSpec,
    Dataset,
    ReductionInstance,
    SyntheticConfig,
    convert_gps,
    gen_clique_reduction,
    gen_synthetic,
    load_dataset,
    load_patterns,
    read_cameras,
    read_dataset,
    read_patterns,
    read_trajectories,
    save_dataset,
    save_patterns,
    write_dataset,
    write_patterns,
)
from .evaluate import EvalResult, evaluate, span_iou
from .miners import ALGORITHMS, VARIANTS, mine
from .model import (
    CameraNetwork,
    CamflowError,
    CoMovementPattern,
    DataFormatError,
    MiningParams,
    ObjectId,
    PathValidationError,
    TravelPath,
    Visit,
    attach_spans,
    build_camera_network,
    dominates,
    eps_reachable,
    is_subpath,
    pattern_span,
    validate_path,
    virtualize_overlapping_cameras,
)
from .oracle import OracleSizeError, max_cliques, mine_bruteforce
from .tcs import (
    CandidateSequence,
    TcsTree,
    build_tcs_tree,
    count_frequent_substrings,
    encode_camera_tokens,
    frequent_sequences,
    substring_maximal,
)
from .verify import (
    MiningStats,
    VerifyUnit,
    eliminate_dominated_hashed,
    eliminate_dominated_naive,
    intersect_verify,
    sliding_window_verify,
)

__version__ = "0.1.0"
