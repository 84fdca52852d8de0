"""Sorting with positional predictions or cheap unreliable comparisons.

Three augmented sorters (dirty-clean BST insertion, finger-tree
displacement sort, two-sided doubling insertion), their error measures,
instance generators, classical baselines, and a seeded benchmark harness.
"""

from .baselines import BASELINES, run_baseline
from .core import (
    NEG_INF,
    POS_INF,
    ComparisonLedger,
    ItemArray,
    Permutation,
    PositionalPrediction,
    SeededRng,
    counted_compare,
    derive_seed,
    is_permutation_of,
    rank_permutation,
    verify_sorted,
)
from .dirty_clean import (
    GALLOPING,
    LINEAR,
    HedgeState,
    SearchTree,
    dirty_clean_sort,
    insert_one,
    majority_dirty,
    multi_predictor_sort,
)
from .displacement import FingerTree, bucket_sort_by_prediction, displacement_sort, finger_insert
from .generators import (
    DamageSet,
    Instance,
    gen_block_permutation,
    gen_class,
    gen_decay,
    gen_dirty_damaged,
    gen_probabilistic,
    gen_probabilistic_oracle,
    ingest_ranking_csv,
    kwiksort_fas,
)
from .harness import (
    ALGORITHM_TAGS,
    ExperimentConfig,
    ExperimentRecord,
    SETTINGS,
    make_plotdata,
    read_csv,
    run_algorithm,
    run_experiment,
    run_verification,
    summarize,
    write_csv,
    write_plotdata_csv,
)
from .metrics import (
    ErrorProfile,
    compute_error_profile,
    dirty_errors,
    displacement_errors,
    expected_dirty_errors,
    global_error_d,
    one_sided_errors,
    sum_log2_plus2,
)
from .oracles import (
    DamagedPairOracle,
    DirtyOracle,
    ExactOracle,
    FlippedPairsOracle,
    InvertedOracle,
    OrderInducedOracle,
    PredictionOrderOracle,
    ProbabilisticOracle,
)
from .two_sided import (
    InsertionAudit,
    boundary_left,
    boundary_right,
    one_sided_insertion_sort,
    two_sided_sort,
)

__version__ = "0.1.0"
