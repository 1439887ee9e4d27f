"""Oscillator-like algebras built from orthogonal-polynomial recurrence data."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    PolynomialTable,
    RationalSequence,
    RecurrenceSystem,
    beckers,
    custom,
    eval_orthonormal,
    family,
    hermite_prob,
    jacobi,
    laguerre,
    monic_polynomials,
    seq_eval,
)
from .moments import (  # noqa: E402
    MomentTable,
    moments_from_recurrence,
    moments_to_recurrence,
    orthonormality_gram,
    symmetric_identity_check,
)
from .operators import (  # noqa: E402
    OperatorKind,
    TruncatedOperator,
    build_operator,
    commutator,
    d_sequence,
    D_closed_form,
    D_iterated,
    verify_commutation,
    verify_position,
)
from .closure import ClosureConfig, ClosureReport, lie_closure, structure_constants  # noqa: E402
from .classify import ClassificationResult, classify, classify_symmetric, detect_degree  # noqa: E402
