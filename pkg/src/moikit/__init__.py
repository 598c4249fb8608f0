"""Finite-dimensional multilinear Schur multipliers, multiple operator
integrals, symbol factorizations and completely-bounded-norm certification
for normal matrices."""

from .errors import (
    ChainMismatch,
    DimensionMismatch,
    MoikitError,
    MultiplicityNotOne,
    NonSquare,
    NotBilinear,
    NotInCommutant,
    NotNormal,
    OrderMismatch,
    ParseError,
    RankInsufficient,
    RankTooLarge,
    RankTooSmall,
    ShapeError,
    SpectrumMismatch,
)
from .factorization import (
    FactorizationData,
    block_realization,
    sup_norm_product,
    synthesize_symbol,
    truncate,
)
from .moi import (
    bimodule_check,
    connection_check,
    divided_difference_symbol,
    functional_calculus,
    moi_apply,
    truncation_stability,
)
from .norms import (
    NormEstimate,
    TheoremReport,
    bilinear_oracle,
    default_ranks,
    lower_bound_search,
    upper_bound_search,
    verify_theorem,
)
from .schur import (
    SymbolTensor,
    apply_multiplier,
    argmax_atoms,
    constant_symbol,
    delta_witness_kernels,
    elementary_symbol,
    multiplier_s2_norm,
)
from .spectral import (
    Kernel,
    NormalOperator,
    WeightedSpectrum,
    diagonal_operator,
    hs_norm,
    kernel_to_operator,
    norms_and_pairing,
    op_norm,
    operator_to_kernel,
    spectral_decompose,
    trace_pairing,
)

__version__ = "0.1.0"

__all__ = [
    "MoikitError", "ShapeError", "NonSquare", "NotNormal",
    "DimensionMismatch", "ChainMismatch", "OrderMismatch",
    "SpectrumMismatch", "NotInCommutant", "MultiplicityNotOne",
    "RankTooLarge", "RankTooSmall", "RankInsufficient", "NotBilinear",
    "ParseError",
    "WeightedSpectrum", "NormalOperator", "Kernel",
    "spectral_decompose", "diagonal_operator", "kernel_to_operator",
    "operator_to_kernel", "op_norm", "hs_norm", "trace_pairing",
    "norms_and_pairing",
    "SymbolTensor", "constant_symbol", "elementary_symbol",
    "apply_multiplier", "multiplier_s2_norm", "argmax_atoms",
    "delta_witness_kernels",
    "functional_calculus", "moi_apply", "bimodule_check",
    "connection_check", "truncation_stability", "divided_difference_symbol",
    "FactorizationData", "synthesize_symbol", "sup_norm_product",
    "block_realization", "truncate",
    "NormEstimate", "TheoremReport", "default_ranks", "upper_bound_search",
    "lower_bound_search", "bilinear_oracle", "verify_theorem",
]
