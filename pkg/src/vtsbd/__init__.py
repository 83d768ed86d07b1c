"""Singularity-free bidiagonal decompositions of Vandermonde-type matrices."""

from .errors import (
    DimensionMismatch,
    DistinctNodesRequired,
    DomainError,
    NotRepresentable,
    ParseError,
    SBDError,
    SingularFormula,
    SingularPivot,
    ZeroDenominator,
)
from .families import (
    FAMILIES,
    NodeConfig,
    SplitParams,
    basis_eval,
    dense_matrix,
    q_binomial,
    q_integer,
    sbd,
    sbd_rbv_scaled,
    split_params,
    weight_sum,
)
from .oracle import (
    VerificationReport,
    compare_sbd,
    exact_rank,
    minor,
    neville_bd,
    tn_sample_check,
)
from .sbd_core import (
    BidiagonalFactor,
    FactorSequence,
    OrdinaryBD,
    SingularityFreeBD,
    bd_expand,
    fix_bottom_right,
    reconstruct,
    reconstruct_sbd,
    sbd_expand,
    sbd_from_factors,
    split_bd,
    v_matrix,
)
from .scalars import BINARY64, RATIONAL, ScalarKind, bigfloat, parse_scalar, relative_error

__version__ = "0.1.0"
