"""Moments <-> recurrence coefficients, exactly.

The forward map runs the moment-recursion table. Its textbook form,
``A[k][n] = b_n A[k-1][n+1] + a_n A[k-1][n] + b_{n-1} A[k-1][n-1]``, multiplies
by square roots, so we run the rescaled table ``C[k][n] = A[k][n] / sqrt(h_n)``
(the coefficient of ``P_n`` when ``x**k`` is expanded in the monic basis)::

    C[k][n] = b_n^2 C[k-1][n+1] + a_n C[k-1][n] + C[k-1][n-1]

which is rational end to end and has ``C[k][0] = A[k][0] = mu_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import RecurrenceSystem, monic_polynomials, parse_rational, format_scalar
from .errors import InsufficientMoments, MalformedSpec, NotPositiveDefinite, NotSymmetric


@dataclass(frozen=True)
class MomentTable:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(
            v if not isinstance(v, (int, str)) else Fraction(v) for v in self.values))
        if len(self.values) < 3:
            raise InsufficientMoments("a moment table needs at least mu_0..mu_2")
        if self.values[0] != 1:
            raise MalformedSpec(f"mu_0 must be 1, got {self.values[0]}")

    @property
    def K(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def to_json(self) -> dict:
        return {"moments": [format_scalar(v) for v in self.values]}

    @classmethod
    def from_json(cls, doc) -> "MomentTable":
        if not isinstance(doc, dict) or not isinstance(doc.get("moments"), list):
            raise MalformedSpec('moment file must look like {"moments": ["p/q", ...]}')
        return cls(tuple(parse_rational(v) for v in doc["moments"]))


def recursion_table(a: Sequence, b2: Sequence, K: int) -> list[list]:
    """Rows 0..K of the rescaled table; row k holds columns 0..k.

    ``a`` and ``b2`` must cover indices 0..K-1 (entries beyond what a given row
    reaches are never read).
    """
    rows = [[Fraction(1)]]
    for k in range(1, K + 1):
        prev = rows[-1]
        row = []
        for n in range(k + 1):
            v = prev[n - 1] if n >= 1 else Fraction(0)
            if n < k:
                v = v + a[n] * prev[n]
            if n + 1 < k:
                v = v + b2[n] * prev[n + 1]
            row.append(v)
        rows.append(row)
    return rows


def moments_from_recurrence(sys: RecurrenceSystem, K: int) -> MomentTable:
    """Exact mu_0..mu_K of the orthogonality measure of ``sys``."""
    # mu_K only reaches a_0..a_{K//2} and b2_0..b2_{(K-1)//2}
    reach = K // 2 + 1
    sys.require_positive((K - 1) // 2)
    a = [sys.a_value(n) for n in range(reach)] + [Fraction(0)] * (K - reach)
    b2 = [sys.b2_value(n) for n in range((K + 1) // 2)] + [Fraction(0)] * (K - (K + 1) // 2)
    rows = recursion_table(a, b2, K)
    return MomentTable(tuple(row[0] for row in rows))


def _column0(a, b2, k):
    return recursion_table(a, b2, k)[k][0]


def moments_to_recurrence(mom: MomentTable, N: int | None = None):
    """Recover ``(a_0..a_{N-1}, b2_0..b2_{N-1})`` from mu_0..mu_{2N}.

    Unknowns are solved in the order a_0, b2_0, a_1, b2_1, ...: a_n first enters
    mu_{2n+1} and b2_n first enters mu_{2n+2}, each linearly, so each is
    isolated from one equation by evaluating that moment with the unknown set
    to 0 and to 1.
    """
    if N is None:
        N = mom.K // 2
    if mom.K < 2 * N:
        raise InsufficientMoments(f"need mu_0..mu_{2 * N}, have mu_0..mu_{mom.K}")
    a: list = []
    b2: list = []
    for n in range(N):
        for target, unknowns in ((2 * n + 1, a), (2 * n + 2, b2)):
            unknowns.append(Fraction(0))
            # coefficients above index n never reach column 0 of this row
            pad_a = a + [Fraction(0)] * (target - len(a))
            pad_b = b2 + [Fraction(0)] * (target - len(b2))
            at_zero = _column0(pad_a, pad_b, target)
            if unknowns is a:
                pad_a[n] = Fraction(1)
            else:
                pad_b[n] = Fraction(1)
            slope = _column0(pad_a, pad_b, target) - at_zero
            if slope == 0:
                raise NotPositiveDefinite(f"degenerate moment data at order {target}")
            unknowns[n] = (mom[target] - at_zero) / slope
        if b2[n] <= 0:
            raise NotPositiveDefinite(
                f"recovered b_{n}^2 = {format_scalar(b2[n])} <= 0; the measure has at most "
                f"{n + 1} support points or the moments are invalid")
    return a, b2


def orthonormality_gram(sys: RecurrenceSystem, mom: MomentTable, N: int) -> float:
    """max |<Psi_m, Psi_n> - delta_mn| over 0 <= m, n <= N under ``mom``."""
    if mom.K < 2 * N:
        raise InsufficientMoments(f"need mu_0..mu_{2 * N}, have mu_0..mu_{mom.K}")
    table = monic_polynomials(sys, N)
    worst = 0.0
    for m in range(N + 1):
        pm = table.monic_coeffs[m]
        for n in range(m, N + 1):
            pn = table.monic_coeffs[n]
            g = Fraction(0)
            for i, ci in enumerate(pm):
                if ci == 0:
                    continue
                for j, cj in enumerate(pn):
                    if cj != 0:
                        g = g + ci * cj * mom[i + j]
            scale = math.sqrt(float(table.squared_norms[m]) * float(table.squared_norms[n]))
            dev = abs(float(g) / scale - (1.0 if m == n else 0.0))
            worst = max(worst, dev)
    return worst


def even_coefficient(b2: Sequence[Fraction], p: int, upper: int) -> Fraction:
    """Nested sum  sum_{k1<=upper} b2[k1] sum_{k2<=k1-2} b2[k2] ... (p factors).

    This is |coefficient of x^(n-2p)| in the symmetric monic P_n when
    ``upper = n - 2``: the sum runs over p pairwise non-adjacent indices.
    Empty product (p = 0) is 1, empty sum is 0.
    """
    memo: dict = {}

    def rec(p, upper):
        if p == 0:
            return Fraction(1)
        key = (p, upper)
        if key not in memo:
            total = Fraction(0)
            for k in range(2 * p - 2, upper + 1):
                total += b2[k] * rec(p - 1, k - 2)
            memo[key] = total
        return memo[key]

    return rec(p, upper)


def symmetric_identity_check(sys: RecurrenceSystem, mom: MomentTable, N: int) -> list:
    """Exact residuals of the symmetric moment identity for n = 0..N.

    For each n, evaluates
        sum_{m,s <= n//2} (-1)^(m+s) c_m c_s mu_{2n-2m-2s+2} / (b_0^2 ... b_{n-1}^2)
    minus (b_{n-1}^2 + b_n^2), where c_m is :func:`even_coefficient` with
    upper index n-2.
    """
    if mom.K < 2 * N + 2:
        raise InsufficientMoments(f"need mu_0..mu_{2 * N + 2}, have mu_0..mu_{mom.K}")
    for k in range(1, mom.K + 1, 2):
        if mom[k] != 0:
            raise NotSymmetric(f"odd moment mu_{k} = {format_scalar(mom[k])} is nonzero")
    for n in range(N + 1):
        if sys.a_value(n) != 0:
            raise NotSymmetric(f"a_{n} = {format_scalar(sys.a_value(n))} is nonzero")
    sys.require_positive(N)
    b2 = [sys.b2_value(n) for n in range(N + 1)]
    residuals = []
    fact = Fraction(1)
    for n in range(N + 1):
        coeffs = [even_coefficient(b2, m, n - 2) for m in range(n // 2 + 1)]
        lhs = Fraction(0)
        for m, cm in enumerate(coeffs):
            for s, cs in enumerate(coeffs):
                lhs += (-1) ** (m + s) * cm * cs * mom[2 * n - 2 * m - 2 * s + 2]
        lhs /= fact
        rhs = sys.b2_value(n - 1) + b2[n]
        residuals.append(lhs - rhs)
        fact *= b2[n]
    return residuals
