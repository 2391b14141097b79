"""Exact and Monte Carlo analysis of read-attacks on quantum string seals."""

from .analysis import (
    DecodeMatrix,
    TradeoffPoint,
    average_fidelity,
    bit_seal_point,
    decode_matrix,
    decode_probabilities,
    escape_probability,
    flat_posterior_mass,
    mutual_information,
    tradeoff_sweep,
)
from .attacks import (
    AttackCoefficients,
    AttackOutcome,
    MeasurementFamily,
    coin_toss_attack,
    coin_toss_escape_probability,
    coin_toss_probabilities,
    measurement_family,
    run_attack,
)
from .claims import ClaimResult, format_report, run_claims
from .errors import ResourceError, UsageError, ValidationError
from .linalg import (
    DenseOperator,
    StateVector,
    apply_and_normalize,
    fidelity,
    tensor_product,
)
from .montecarlo import (
    CoinTossStrategy,
    EmpiricalStats,
    ExperimentConfig,
    ExplicitSealSpec,
    FamilyStrategy,
    chi_square_check,
    run_experiment,
    stats_record,
)
from .seals import (
    OverlapMatrix,
    ProductSealSpec,
    SealedState,
    load_overlap_matrix,
    overlap_matrix,
    product_seal,
    save_overlap_matrix,
    seal_from_overlaps,
    verify_seal,
)

__version__ = "0.1.0"

__all__ = [
    "AttackCoefficients",
    "AttackOutcome",
    "ClaimResult",
    "CoinTossStrategy",
    "DecodeMatrix",
    "DenseOperator",
    "EmpiricalStats",
    "ExperimentConfig",
    "ExplicitSealSpec",
    "FamilyStrategy",
    "MeasurementFamily",
    "OverlapMatrix",
    "ProductSealSpec",
    "ResourceError",
    "SealedState",
    "StateVector",
    "TradeoffPoint",
    "UsageError",
    "ValidationError",
    "apply_and_normalize",
    "average_fidelity",
    "bit_seal_point",
    "chi_square_check",
    "coin_toss_attack",
    "coin_toss_escape_probability",
    "coin_toss_probabilities",
    "decode_matrix",
    "decode_probabilities",
    "escape_probability",
    "fidelity",
    "flat_posterior_mass",
    "format_report",
    "load_overlap_matrix",
    "measurement_family",
    "mutual_information",
    "overlap_matrix",
    "product_seal",
    "run_attack",
    "run_claims",
    "run_experiment",
    "save_overlap_matrix",
    "seal_from_overlaps",
    "stats_record",
    "tensor_product",
    "tradeoff_sweep",
    "verify_seal",
]
