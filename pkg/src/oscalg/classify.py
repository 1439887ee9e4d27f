"""Exact finite-dimensionality test for the oscillator-like algebra.

The algebra generated by {I, A, A^dagger, N} is finite dimensional (and then
four dimensional) exactly when b_n^2 is a polynomial of degree <= 2 in n,
a_n is a polynomial of degree <= 1, and the quadratic law for b_n^2 vanishes
at n = -1, i.e. alpha_0 - alpha_1 + alpha_2 = 0. Everything here is rational
arithmetic; no floating point is involved.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import (
    DEFAULT_PROBE,
    RationalSequence,
    RecurrenceSystem,
    format_scalar,
    poly_eval,
    seq_eval,
    simplify_ratio,
)
from .errors import InsufficientTable, NotSymmetric


class Verdict(enum.Enum):
    FINITE = "Finite"
    INFINITE = "Infinite"


UNBOUNDED = "Unbounded"
Degree = Union[int, str]

_EXTRA_CHECKS = 8


def _differences_constant_order(values: list, max_order: int) -> Optional[int]:
    diffs = list(values)
    for k in range(max_order + 1):
        if len(diffs) >= 2 and all(d == diffs[0] for d in diffs):
            return k
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    return None


def detect_degree(seq: RationalSequence, probe: int = DEFAULT_PROBE) -> Degree:
    """Degree of the polynomial law of ``seq`` in n, or ``UNBOUNDED``.

    A rational law is decided exactly after cancelling common factors; explicit
    table entries must agree with that law. A pure table is decided by the
    smallest k whose k-th differences over the table are constant.
    """
    if probe < 8:
        raise ValueError(f"probe must be >= 8, got {probe}")
    if not seq.has_law:
        if len(seq.table) < 3:
            raise InsufficientTable(f"table of length {len(seq.table)} is too short to decide a degree")
        k = _differences_constant_order(list(seq.table), min(probe, len(seq.table)) - 2)
        return UNBOUNDED if k is None else k
    num, den = simplify_ratio(seq.num, seq.den)
    if len(den) > 1:
        return UNBOUNDED
    if seq.table is not None:
        if any(poly_eval(num, n) != v for n, v in enumerate(seq.table)):
            return UNBOUNDED
    return max(len(num) - 1, 0)


def _bounded(deg: Degree, limit: int) -> bool:
    return deg != UNBOUNDED and deg <= limit


@dataclass(frozen=True)
class ClassificationResult:
    verdict: Verdict
    p_a: Degree
    deg_b2: Degree
    alpha: Optional[tuple]
    beta: Optional[tuple]
    boundary_consistent: bool
    label: str = ""

    @property
    def is_finite(self) -> bool:
        return self.verdict is Verdict.FINITE

    def to_json(self) -> dict:
        def deg(d):
            return d if d != UNBOUNDED else "unbounded"

        return {
            "label": self.label,
            "verdict": self.verdict.value,
            "p_a": deg(self.p_a),
            "deg_b2": deg(self.deg_b2),
            "alpha": None if self.alpha is None else [format_scalar(v) for v in self.alpha],
            "beta": None if self.beta is None else [format_scalar(v) for v in self.beta],
            "boundary_consistent": self.boundary_consistent,
        }


def _available(seq: RationalSequence, probe: int) -> int:
    """Number of leading indices at which ``seq`` can be evaluated (<= probe+1)."""
    if seq.has_law:
        return probe + 1
    return min(len(seq.table), probe + 1)


def fit_quadratic(seq: RationalSequence, probe: int = DEFAULT_PROBE) -> Optional[tuple]:
    """(alpha_0, alpha_1, alpha_2) interpolated at n = 0, 1, 2 and re-checked."""
    v0, v1, v2 = (seq_eval(seq, n) for n in range(3))
    a2 = (v2 - 2 * v1 + v0) / 2
    a1 = v1 - v0 - a2
    coeffs = (v0, a1, a2)
    upto = min(3 + _EXTRA_CHECKS, _available(seq, probe))
    for n in range(3, upto):
        if seq_eval(seq, n) != v0 + a1 * n + a2 * n * n:
            return None
    return coeffs


def fit_linear(values) -> Optional[tuple]:
    v0, v1 = values[0], values[1]
    slope = v1 - v0
    for n, v in enumerate(values[2:], start=2):
        if v != v0 + slope * n:
            return None
    return v0, slope


def _diagonal_values(sys: RecurrenceSystem, probe: int) -> list:
    upto = min(2 + _EXTRA_CHECKS, _available(sys.a, probe))
    return [sys.a_value(n) for n in range(upto)]


def classify(sys: RecurrenceSystem, probe: int = DEFAULT_PROBE) -> ClassificationResult:
    deg_b2 = detect_degree(sys.b2, probe)
    p_a = detect_degree(sys.a, probe)
    alpha = fit_quadratic(sys.b2, probe) if _bounded(deg_b2, 2) else None
    if _bounded(deg_b2, 2) and alpha is None:
        deg_b2 = UNBOUNDED
    beta = fit_linear(_diagonal_values(sys, probe)) if _bounded(p_a, 1) else None
    if _bounded(p_a, 1) and beta is None:
        p_a = UNBOUNDED
    return _result(sys, p_a, deg_b2, alpha, beta)


def _result(sys, p_a, deg_b2, alpha, beta) -> ClassificationResult:
    consistent = alpha is not None and alpha[0] - alpha[1] + alpha[2] == 0
    finite = _bounded(deg_b2, 2) and _bounded(p_a, 1) and consistent
    return ClassificationResult(Verdict.FINITE if finite else Verdict.INFINITE,
                                p_a, deg_b2, alpha, beta, consistent, sys.label)


def classify_symmetric(sys: RecurrenceSystem, probe: int = DEFAULT_PROBE) -> ClassificationResult:
    """Symmetric-case criterion: b_n^2 quadratic with b^2(-1) = 0, beta fixed to 0."""
    for n in range(_available(sys.a, probe)):
        if sys.a_value(n) != 0:
            raise NotSymmetric(f"a_{n} = {format_scalar(sys.a_value(n))} is nonzero")
    deg_b2 = detect_degree(sys.b2, probe)
    alpha = fit_quadratic(sys.b2, probe) if _bounded(deg_b2, 2) else None
    if _bounded(deg_b2, 2) and alpha is None:
        deg_b2 = UNBOUNDED
    return _result(sys, 0, deg_b2, alpha, (Fraction(0), Fraction(0)))


def closing_coefficients(result: ClassificationResult) -> dict:
    """Coefficients of the closing brackets implied by a Finite verdict.

    [N, A^dagger] = A^dagger - sqrt2*beta_1 N - sqrt2*beta_0 I,  [N, A] = -A,
    [A, A^dagger] = 4 alpha_2 N + 2(alpha_1 - alpha_2) I + sqrt2*beta_1 A.
    Values are floats; beta may carry a square root.
    """
    if not result.is_finite:
        raise ValueError("closing relations exist only for a Finite verdict")
    a0, a1, a2 = (float(v) for v in result.alpha)
    b0, b1 = (float(v) for v in result.beta)
    r2 = 2 ** 0.5
    return {
        "[N,A†]": {"A†": 1.0, "N": -r2 * b1, "I": -r2 * b0},
        "[N,A]": {"A": -1.0},
        "[A,A†]": {"N": 4 * a2, "I": 2 * (a1 - a2), "A": r2 * b1},
    }

