"""Boolean-function pattern algebra and an exact simulator for the
single-query pattern classifier (BFPQC)."""

__version__ = "0.1.0"

from .classifier import (
    Balanced,
    ClassificationResult,
    LeftCluster,
    OracleSpec,
    Promised,
    RightCluster,
    Verdict,
    classify,
    play_game,
    run_circuit,
)
from .knowledge import (
    ClusterKnowledge,
    check_consistency,
    derive_knowledge,
    enumerate_completions,
    propagate_bit,
)
from .limits import SizeLimitError
from .patterns import (
    FunctionClassId,
    PatternBasis,
    PatternVector,
    basis_B,
    basis_I,
    basis_product,
    evaluate,
    extended_product,
    from_truth_table,
    is_orthogonal,
    negate,
    parse,
    product,
    verify_basis,
    xor,
)
from .statevector import (
    DenseOperator,
    OutcomeDistribution,
    StateVector,
    apply_ci2,
    apply_classifier,
    apply_phase_oracle,
    classifier_matrix,
    hadamard_all,
    measure_distribution,
    pattern_ket,
    perfect_superposition,
    sample,
)
