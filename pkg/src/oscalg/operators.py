"""Truncated Fock-space matrices for the ladder, number and diagonal operators.

Basis vector ``e_n`` stands for ``Psi_n``; operators act on column vectors, so
the lowering operator has its entries on the superdiagonal. Truncation to M
levels is exact for every entry the operator itself defines, but products
lose the contributions that would pass through level M and above; the
``corrupted_tail`` metadata counts the trailing levels that may be affected.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .core import RecurrenceSystem, eval_orthonormal
from .errors import DimensionMismatch, IndexOutOfDomain, TruncationTooSmall
from .surd import Surd

SQRT2 = math.sqrt(2.0)


class OperatorKind(enum.Enum):
    A = "A"
    Adag = "A†"
    As = "a_s"
    Asdag = "a_s†"
    Nop = "N"
    Identity = "I"
    D = "D"
    BofN = "B(N)"
    BofNplusI = "B(N+I)"
    fofN = "f(N)"
    Q = "Q"


_LADDERS = {OperatorKind.A, OperatorKind.Adag, OperatorKind.As, OperatorKind.Asdag, OperatorKind.Q}


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    entries: np.ndarray
    bandwidth: int
    corrupted_tail: int
    label: str = field(default="")

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def interior(self) -> np.ndarray:
        """The block unaffected by truncation."""
        w = self.dim - self.corrupted_tail
        return self.entries[:w, :w]

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        _check_dims(self, other)
        return TruncatedOperator(self.entries + other.entries,
                                 max(self.bandwidth, other.bandwidth),
                                 max(self.corrupted_tail, other.corrupted_tail),
                                 f"({self.label}+{other.label})")

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        _check_dims(self, other)
        return TruncatedOperator(self.entries - other.entries,
                                 max(self.bandwidth, other.bandwidth),
                                 max(self.corrupted_tail, other.corrupted_tail),
                                 f"({self.label}-{other.label})")

    def scale(self, c: float) -> "TruncatedOperator":
        return TruncatedOperator(c * self.entries, self.bandwidth, self.corrupted_tail,
                                 f"{c:g}*{self.label}")

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        _check_dims(self, other)
        return TruncatedOperator(self.entries @ other.entries,
                                 min(self.bandwidth + other.bandwidth, self.dim - 1),
                                 max(self.corrupted_tail, other.corrupted_tail)
                                 + min(self.bandwidth, other.bandwidth),
                                 f"{self.label}{other.label}")


def _check_dims(x: TruncatedOperator, y: TruncatedOperator) -> None:
    if x.dim != y.dim:
        raise DimensionMismatch(f"operator dimensions differ: {x.dim} vs {y.dim}")


def _diag(values, label) -> TruncatedOperator:
    return TruncatedOperator(np.diag(np.asarray(values, dtype=float)), 0, 0, label)


def build_operator(kind: OperatorKind | str, sys: RecurrenceSystem, M: int) -> TruncatedOperator:
    """Matrix of ``kind`` on the first M levels, with b_n = +sqrt(b2(n)).

    ``f(N)`` needs a_{-1}; its n = 0 entry is set to 0 (a_{-1} := a_0). Every
    identity it enters is premultiplied by the lowering operator, which kills
    that entry anyway.
    """
    if isinstance(kind, str):
        kind = OperatorKind[kind]
    if M < 4:
        raise TruncationTooSmall(f"truncation M={M} is below 4")
    sys.require_positive(M - 1)
    levels = range(M)
    b = np.array([sys.b_float(n) for n in levels])
    a = np.array([sys.a_float(n) for n in levels])
    label = kind.value
    if kind is OperatorKind.Identity:
        return _diag(np.ones(M), label)
    if kind is OperatorKind.Nop:
        return _diag(np.arange(M), label)
    if kind is OperatorKind.D:
        return _diag(SQRT2 * a, label)
    if kind is OperatorKind.BofN:
        return _diag([float(sys.b2_value(n - 1)) for n in levels], label)
    if kind is OperatorKind.BofNplusI:
        return _diag([float(sys.b2_value(n)) for n in levels], label)
    if kind is OperatorKind.fofN:
        diffs = [0.0] + [float(sys.a_value(n) - sys.a_value(n - 1)) for n in range(1, M)]
        return _diag(SQRT2 * np.array(diffs), label)

    raising = np.diag(SQRT2 * b[:-1], -1)  # e_n -> sqrt2 b_n e_{n+1}
    if kind is OperatorKind.Asdag:
        mat = raising
    elif kind in (OperatorKind.As, OperatorKind.A):
        mat = raising.T.copy()
    elif kind is OperatorKind.Adag:
        mat = raising + np.diag(SQRT2 * a)
    else:  # Q = (A + A^dagger)/sqrt2
        mat = (raising.T + raising) / SQRT2 + np.diag(a)
    return TruncatedOperator(mat, 1, 1, label)


def operator_set(sys: RecurrenceSystem, M: int) -> dict:
    return {kind: build_operator(kind, sys, M) for kind in OperatorKind}


def commutator(X: TruncatedOperator, Y: TruncatedOperator) -> TruncatedOperator:
    """XY - YX with bandwidth and truncation-tail bookkeeping."""
    _check_dims(X, Y)
    entries = X.entries @ Y.entries - Y.entries @ X.entries
    return TruncatedOperator(entries,
                             min(X.bandwidth + Y.bandwidth, X.dim - 1),
                             max(X.corrupted_tail, Y.corrupted_tail) + min(X.bandwidth, Y.bandwidth),
                             f"[{X.label},{Y.label}]")


def _window_residual(lhs: TruncatedOperator, rhs: TruncatedOperator) -> float:
    w = lhs.dim - max(lhs.corrupted_tail, rhs.corrupted_tail)
    diff = lhs.entries[:w, :w] - rhs.entries[:w, :w]
    return float(np.max(np.abs(diff))) if diff.size else 0.0


@dataclass
class CommutationReport:
    """Named max-abs residuals on interior windows."""

    residuals: dict
    diagnostics: dict
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def to_json(self) -> dict:
        return {"residuals": self.residuals, "diagnostics": self.diagnostics,
                "tol": self.tol, "passed": self.passed}


def verify_commutation(sys: RecurrenceSystem, M: int = 64, tol: float = 1e-10) -> CommutationReport:
    """Check the ladder-operator commutation relations numerically.

    Gated residuals: the three symmetric relations, [N,A] = -A,
    [N,A^dagger] = a_s^dagger, and [A,A^dagger] = 2(B(N+I) - B(N)) + A f(N).
    The diagnostic ``printed_2Af_form`` measures the variant with 2 A f(N),
    which is nonzero whenever a_n is not constant.
    """
    if M < 16:
        raise TruncationTooSmall(f"verify_commutation needs M >= 16, got {M}")
    ops = operator_set(sys, M)
    K = OperatorKind
    A, Adag, As, Asdag = ops[K.A], ops[K.Adag], ops[K.As], ops[K.Asdag]
    N, B, Bp, f = ops[K.Nop], ops[K.BofN], ops[K.BofNplusI], ops[K.fofN]
    bdiff = (Bp - B).scale(2.0)
    AA = commutator(A, Adag)
    residuals = {
        "[a_s,a_s†]=2(B(N+I)-B(N))": _window_residual(commutator(As, Asdag), bdiff),
        "[N,a_s†]=a_s†": _window_residual(commutator(N, Asdag), Asdag),
        "[N,a_s]=-a_s": _window_residual(commutator(N, As), As.scale(-1.0)),
        "[N,A]=-A": _window_residual(commutator(N, A), A.scale(-1.0)),
        "[N,A†]=a_s†": _window_residual(commutator(N, Adag), Asdag),
        "[A,A†]=2(B(N+I)-B(N))+Af(N)": _window_residual(AA, bdiff + A @ f),
    }
    diagnostics = {
        "[N,A†]=A†-D": _window_residual(commutator(N, Adag), Adag - ops[K.D]),
        "printed_2Af_form": _window_residual(AA, bdiff + (A @ f).scale(2.0)),
    }
    return CommutationReport(residuals, diagnostics, tol)


def verify_position(sys: RecurrenceSystem, M: int, xs) -> float:
    """max over x, n < M-1 of |(Q v)_n - x Psi_n(x)| / (1 + |x Psi_n(x)|)."""
    if M < 8:
        raise TruncationTooSmall(f"verify_position needs M >= 8, got {M}")
    Q = build_operator(OperatorKind.Q, sys, M).entries
    worst = 0.0
    for x in xs:
        v = np.array(eval_orthonormal(sys, x, M - 1))
        lhs = (Q @ v)[: M - 1]
        rhs = x * v[: M - 1]
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs)))))
    return worst


def d_sequence(sys: RecurrenceSystem, k: int, n: int):
    """k-th backward difference of a_n at n (exact)."""
    if k < 1:
        raise IndexOutOfDomain(f"difference order must be >= 1, got {k}")
    if n < k:
        raise IndexOutOfDomain(f"d^({k})_{n} would read a at a negative index")
    vals = [sys.a_value(i) for i in range(n - k, n + 1)]
    for _ in range(k):
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return vals[0]


def D_closed_form(sys: RecurrenceSystem, k: int, M: int) -> TruncatedOperator:
    """D_k e_n = sqrt2^(k+1) b_{n-1}...b_{n-k} d_n^(k) e_{n-k}, zero for n < k."""
    if k < 1 or 2 * k >= M:
        raise TruncationTooSmall(f"need 1 <= k < M/2, got k={k}, M={M}")
    sys.require_positive(M - 1)
    mat = np.zeros((M, M))
    pref = SQRT2 ** (k + 1)
    for n in range(k, M):
        prod = math.prod(sys.b_float(n - i) for i in range(1, k + 1))
        mat[n - k, n] = pref * prod * float(d_sequence(sys, k, n))
    return TruncatedOperator(mat, k, k + 1, f"D_{k}")


def _mp_scalar(value):
    if isinstance(value, Surd):
        return (mpmath.mpf(value.rational.numerator) / value.rational.denominator
                + mpmath.mpf(value.coeff.numerator) / value.coeff.denominator
                * mpmath.sqrt(value.radicand))
    value = Fraction(value)
    return mpmath.mpf(value.numerator) / value.denominator


def _tridiagonal_commutator(sub, diag, sup, Y):
    """[X, Y] for tridiagonal X given by its three diagonals (object arrays)."""
    M = Y.shape[0]
    XY = np.empty_like(Y)
    YX = np.empty_like(Y)
    for i in range(M):
        row = diag[i] * Y[i]
        if i + 1 < M:
            row = row + sup[i] * Y[i + 1]
        if i >= 1:
            row = row + sub[i - 1] * Y[i - 1]
        XY[i] = row
    for j in range(M):
        col = Y[:, j] * diag[j]
        if j >= 1:
            col = col + Y[:, j - 1] * sup[j - 1]
        if j + 1 < M:
            col = col + Y[:, j + 1] * sub[j]
        YX[:, j] = col
    return XY - YX


def D_iterated(sys: RecurrenceSystem, k: int, M: int,
               bracket: OperatorKind = OperatorKind.A, dps: int | None = 50) -> TruncatedOperator:
    """D_k = [X, D_{k-1}], D_0 = D, with X the lowering operator by default.

    Passing ``bracket=OperatorKind.Adag`` gives the raising variant, which does
    not match the lowering closed form. With ``dps`` set, the commutators run in
    mpmath at that many digits: the lowering chain cancels entries of size
    ~b^(2k) down to O(1) or to exactly zero, which double precision cannot
    resolve to 1e-10 for k >= 3.
    """
    if k < 1 or 2 * k >= M:
        raise TruncationTooSmall(f"need 1 <= k < M/2, got k={k}, M={M}")
    if bracket not in (OperatorKind.A, OperatorKind.Adag, OperatorKind.As, OperatorKind.Asdag):
        raise ValueError(f"bracket must be a ladder operator, got {bracket}")
    if dps is None:
        X = build_operator(bracket, sys, M)
        Dk = build_operator(OperatorKind.D, sys, M)
        for _ in range(k):
            Dk = commutator(X, Dk)
        return Dk
    sys.require_positive(M - 1)
    with mpmath.workdps(dps):
        zero = mpmath.mpf(0)
        r2 = mpmath.sqrt(2)
        ladder = np.array([r2 * mpmath.sqrt(_mp_scalar(sys.b2_value(n))) for n in range(M - 1)],
                          dtype=object)
        a = np.array([r2 * _mp_scalar(sys.a_value(n)) for n in range(M)], dtype=object)
        zeros_off = np.array([zero] * (M - 1), dtype=object)
        zeros_diag = np.array([zero] * M, dtype=object)
        if bracket in (OperatorKind.A, OperatorKind.As):
            sub, diag, sup = zeros_off, zeros_diag, ladder
        elif bracket is OperatorKind.Asdag:
            sub, diag, sup = ladder, zeros_diag, zeros_off
        else:
            sub, diag, sup = ladder, a, zeros_off
        Y = np.empty((M, M), dtype=object)
        Y.fill(zero)
        for n in range(M):
            Y[n, n] = a[n]
        tail = 0
        for _ in range(k):
            Y = _tridiagonal_commutator(sub, diag, sup, Y)
            tail += 1
        entries = np.array([[float(v) for v in row] for row in Y], dtype=float)
    return TruncatedOperator(entries, k, tail, f"D_{k}")


def compare_interior(X: TruncatedOperator, Y: TruncatedOperator) -> float:
    return _window_residual(X, Y)


def dump_csv(op: TruncatedOperator) -> str:
    """``row,col,value`` lines for the nonzero entries, row-major."""
    lines = ["row,col,value"]
    rows, cols = np.nonzero(op.entries)
    for r, c in zip(rows.tolist(), cols.tolist()):
        lines.append(f"{r},{c},{float(op.entries[r, c])!r}")
    return "\n".join(lines) + "\n"
