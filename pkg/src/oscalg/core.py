"""Exact recurrence systems and the canonical orthonormal polynomial family.

A recurrence system is the pair of sequences ``(a_n, b_n^2)`` driving

    x Psi_n = b_n Psi_{n+1} + a_n Psi_n + b_{n-1} Psi_{n-1},   Psi_0 = 1, b_{-1} = 0.

Coefficients are held exactly as rational functions of ``n`` (optionally with a
table of explicit leading values). ``b_n`` is always the positive root of the
stored ``b_n^2``, so every generated polynomial has a positive leading
coefficient; classical Laguerre tables differ from this by ``(-1)^n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DenominatorZero,
    IndexOutOfDomain,
    InvalidParameter,
    MalformedSpec,
    NonPositiveB2,
    UnknownFamily,
)
from .surd import Surd, squarefree_split

DEFAULT_PROBE = 64


# -- rationals at the I/O boundary -------------------------------------------

def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ints are accepted as-is)."""
    if isinstance(text, bool):
        raise MalformedSpec(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedSpec(f"rationals must be strings 'p/q' or 'p', got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise MalformedSpec(f"not a rational: {text!r}") from None
    if q == 0:
        raise MalformedSpec(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_scalar(value) -> str:
    """Exact text form: ``"p/q"``, ``"p"`` or ``"r+c*sqrt(d)"``."""
    if isinstance(value, Surd):
        return str(value)
    return str(Fraction(value))


# -- polynomials in n (ascending coefficient lists) ---------------------------

def _trim(coeffs: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_eval(coeffs: Sequence[Fraction], n) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return _trim(out)


def poly_from_roots(roots: Sequence[Fraction], scale=1) -> list[Fraction]:
    """Coefficients of ``scale * prod (n - r)``."""
    out = [Fraction(scale)]
    for r in roots:
        out = poly_mul(out, [-Fraction(r), Fraction(1)])
    return out


def poly_divmod(p: Sequence[Fraction], q: Sequence[Fraction]):
    p, q = _trim(p), _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        factor = rem[-1] / q[-1]
        quot[shift] = factor
        for i, qc in enumerate(q):
            rem[shift + i] -= factor * qc
        rem = _trim(rem)
    return _trim(quot), rem


def poly_gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd over Q."""
    a, b = _trim(p), _trim(q)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def simplify_ratio(num: Sequence[Fraction], den: Sequence[Fraction]):
    """Cancel the common factor of ``num/den``; denominator made monic."""
    num, den = _trim(num), _trim(den)
    if not num:
        return [], [Fraction(1)]
    g = poly_gcd(num, den)
    num, _ = poly_divmod(num, g)
    den, _ = poly_divmod(den, g)
    lead = den[-1]
    return [c / lead for c in num], [c / lead for c in den]


# -- sequences and systems ----------------------------------------------------

@dataclass(frozen=True)
class RationalSequence:
    """``n -> num(n)/den(n)`` with optional explicit values for n = 0, 1, ...

    ``num``/``den`` may both be ``None`` for a pure table; evaluating past the
    end of such a table raises :class:`IndexOutOfDomain`.
    """

    num: Optional[tuple[Fraction, ...]] = None
    den: Optional[tuple[Fraction, ...]] = (Fraction(1),)
    table: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.num is None:
            if self.table is None:
                raise MalformedSpec("sequence needs a rational law or a table")
            object.__setattr__(self, "den", None)
        else:
            num = tuple(Fraction(c) for c in self.num)
            den = tuple(Fraction(c) for c in (self.den or (1,)))
            if not _trim(den):
                raise MalformedSpec("denominator polynomial is identically zero")
            object.__setattr__(self, "num", num)
            object.__setattr__(self, "den", den)
        if self.table is not None:
            object.__setattr__(self, "table", tuple(Fraction(v) for v in self.table))

    @classmethod
    def polynomial(cls, *coeffs) -> "RationalSequence":
        return cls(num=tuple(Fraction(c) for c in coeffs))

    @classmethod
    def constant(cls, value) -> "RationalSequence":
        return cls(num=(Fraction(value),))

    @classmethod
    def from_table(cls, values) -> "RationalSequence":
        return cls(num=None, table=tuple(values))

    @property
    def has_law(self) -> bool:
        return self.num is not None

    def __call__(self, n: int) -> Fraction:
        return seq_eval(self, n)

    def scaled(self, c) -> "RationalSequence":
        c = Fraction(c)
        num = None if self.num is None else tuple(c * x for x in self.num)
        table = None if self.table is None else tuple(c * x for x in self.table)
        return RationalSequence(num=num, den=self.den, table=table)


def seq_eval(seq: RationalSequence, n: int) -> Fraction:
    """Exact value of ``seq`` at ``n`` (table entries take precedence)."""
    if seq.table is not None and 0 <= n < len(seq.table):
        return seq.table[n]
    if seq.num is None:
        raise IndexOutOfDomain(f"index {n} outside table of length {len(seq.table)}")
    q = poly_eval(seq.den, n)
    if q == 0:
        raise DenominatorZero(f"denominator vanishes at n={n}")
    return poly_eval(seq.num, n) / q


@dataclass(frozen=True)
class RecurrenceSystem:
    """Recurrence data ``(a, b2)``.

    The true diagonal coefficient is ``a(n) * sqrt(a_radicand)``; the radicand
    is 1 except for families whose diagonal is a rational multiple of a fixed
    square root. ``b_{-1} = 0`` is used unconditionally by every consumer.
    """

    a: RationalSequence
    b2: RationalSequence
    label: str = "custom"
    a_radicand: int = 1

    def a_value(self, n: int):
        """Exact diagonal coefficient (Fraction, or Surd when a_radicand > 1)."""
        v = seq_eval(self.a, n)
        if self.a_radicand == 1:
            return v
        return Surd.make(0, v, self.a_radicand)

    def b2_value(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        return seq_eval(self.b2, n)

    def a_float(self, n: int) -> float:
        return float(self.a_value(n))

    def b_float(self, n: int) -> float:
        return math.sqrt(self.b2_value(n)) if n >= 0 else 0.0

    def validate(self, upto: int = DEFAULT_PROBE) -> "RecurrenceSystem":
        """Check evaluability and ``b2(n) > 0`` for ``0 <= n <= upto``."""
        for n in range(upto + 1):
            seq_eval(self.a, n)
            if self.b2_value(n) <= 0:
                raise NonPositiveB2(f"b2({n}) = {self.b2_value(n)} is not positive")
        return self

    def require_positive(self, upto: int) -> None:
        for n in range(upto + 1):
            if self.b2_value(n) <= 0:
                raise NonPositiveB2(f"b2({n}) = {self.b2_value(n)} is not positive")

    def scaled(self, c) -> "RecurrenceSystem":
        """The system ``(c*a, c^2*b2)``, i.e. the polynomials in x/c."""
        c = Fraction(c)
        return RecurrenceSystem(self.a.scaled(c), self.b2.scaled(c * c),
                                f"{self.label}*{c}", self.a_radicand)


# -- built-in families ----------------------------------------------------------

def _check_weight_exponent(name: str, value: Fraction) -> None:
    if value <= -1:
        raise InvalidParameter(f"{name} = {value} must exceed -1 (non-normalizable weight)")


def laguerre(alpha=0) -> RecurrenceSystem:
    alpha = Fraction(alpha)
    _check_weight_exponent("alpha", alpha)
    a = RationalSequence.polynomial(alpha + 1, 2)
    b2 = RationalSequence(num=tuple(poly_from_roots([-1, -(alpha + 1)])))
    return RecurrenceSystem(a, b2, f"laguerre(alpha={alpha})")


def jacobi(alpha=0, beta=0) -> RecurrenceSystem:
    """Weight proportional to (1-x)^alpha (1+x)^beta on [-1, 1]."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    _check_weight_exponent("alpha", alpha)
    _check_weight_exponent("beta", beta)
    s = alpha + beta
    label = f"jacobi(alpha={alpha}, beta={beta})"
    # n = 0 entries come from the degree-one polynomial directly; the general
    # law has removable or genuine 0/0 there when alpha+beta is 0 or -1
    a0 = (beta - alpha) / (s + 2)
    b20 = 4 * (alpha + 1) * (beta + 1) / ((s + 2) ** 2 * (s + 3))
    if alpha == beta:
        a = RationalSequence(num=(), table=(a0,))
    else:
        # (beta^2 - alpha^2) / ((2n+s)(2n+s+2))
        a = RationalSequence(num=(beta * beta - alpha * alpha,),
                             den=tuple(poly_from_roots([-s / 2, -(s + 2) / 2], 4)),
                             table=(a0,))
    num = poly_from_roots([-1, -(1 + alpha), -(1 + beta), -(s + 1)], 4)
    # (2n+s+1)(2n+s+2)^2(2n+s+3) = 16 (n+(s+1)/2)(n+(s+2)/2)^2(n+(s+3)/2)
    den = poly_from_roots([-(s + 1) / 2, -(s + 2) / 2, -(s + 2) / 2, -(s + 3) / 2], 16)
    b2 = RationalSequence(num=tuple(num), den=tuple(den), table=(b20,))
    return RecurrenceSystem(a, b2, label)


def hermite_prob() -> RecurrenceSystem:
    """Standard normal weight: a_n = 0, b_n^2 = n + 1."""
    return RecurrenceSystem(RationalSequence.constant(0),
                            RationalSequence.polynomial(1, 1), "hermite_prob")


def beckers(lam=0) -> RecurrenceSystem:
    """Shifted oscillator with ``A^dagger = a^dagger + lam*I``.

    Needs b_n^2 = (n+1)/2 and a_n = lam/sqrt(2) = (lam/2) sqrt(2).
    """
    lam = Fraction(lam)
    c, d = squarefree_split(Fraction(1, 2))
    a = RationalSequence.constant(lam * c)
    b2 = RationalSequence.polynomial(Fraction(1, 2), Fraction(1, 2))
    return RecurrenceSystem(a, b2, f"beckers(lambda={lam})", a_radicand=d)


def custom(a: RationalSequence, b2: RationalSequence, label: str = "custom") -> RecurrenceSystem:
    return RecurrenceSystem(a, b2, label)


_FAMILIES = {
    "laguerre": laguerre,
    "jacobi": jacobi,
    "hermite_prob": hermite_prob,
    "hermite": hermite_prob,
    "beckers": beckers,
}


def family(kind: str, *params, probe: int = DEFAULT_PROBE, **kwargs) -> RecurrenceSystem:
    """Build and validate a named family.

    ``family("laguerre", 0)``, ``family("jacobi", 1, 2)``, ``family("beckers", "3/2")``.
    """
    try:
        ctor = _FAMILIES[kind]
    except KeyError:
        raise UnknownFamily(f"unknown family {kind!r}; expected one of "
                            f"{', '.join(sorted(set(_FAMILIES)))}") from None
    params = [parse_rational(p) if isinstance(p, str) else p for p in params]
    kwargs = {k: parse_rational(v) if isinstance(v, str) else v for k, v in kwargs.items()}
    return ctor(*params, **kwargs).validate(probe)


# -- custom family JSON ------------------------------------------------------------

def _sequence_from_json(obj, key: str) -> RationalSequence:
    if not isinstance(obj, dict):
        raise MalformedSpec(f"'{key}' must be an object with 'num'/'den'/'table'")
    unknown = set(obj) - {"num", "den", "table"}
    if unknown:
        raise MalformedSpec(f"unexpected keys in '{key}': {sorted(unknown)}")

    def rats(name):
        val = obj.get(name)
        if val is None:
            return None
        if not isinstance(val, list):
            raise MalformedSpec(f"'{key}.{name}' must be a list")
        return tuple(parse_rational(v) for v in val)

    num, den, table = rats("num"), rats("den"), rats("table")
    if num is None and den is not None:
        raise MalformedSpec(f"'{key}' has 'den' without 'num'")
    if num is None and table is None:
        raise MalformedSpec(f"'{key}' needs 'num' or 'table'")
    return RationalSequence(num=num, den=den if den is not None else (Fraction(1),), table=table)


def system_from_json(doc: dict, probe: int = DEFAULT_PROBE) -> RecurrenceSystem:
    if not isinstance(doc, dict) or "a" not in doc or "b2" not in doc:
        raise MalformedSpec("custom family needs 'a' and 'b2' objects")
    label = doc.get("label", "custom")
    if not isinstance(label, str):
        raise MalformedSpec("'label' must be a string")
    sys = RecurrenceSystem(_sequence_from_json(doc["a"], "a"),
                           _sequence_from_json(doc["b2"], "b2"), label)
    return sys.validate(min([probe] + [len(s.table) - 1 for s in (sys.a, sys.b2)
                                       if not s.has_law]))


def _sequence_to_json(seq: RationalSequence) -> dict:
    out = {}
    if seq.num is not None:
        out["num"] = [format_scalar(c) for c in seq.num]
        out["den"] = [format_scalar(c) for c in seq.den]
    if seq.table is not None:
        out["table"] = [format_scalar(c) for c in seq.table]
    return out


def system_to_json(sys: RecurrenceSystem) -> dict:
    if sys.a_radicand != 1:
        raise MalformedSpec("systems with an irrational diagonal have no JSON form")
    return {"label": sys.label, "a": _sequence_to_json(sys.a), "b2": _sequence_to_json(sys.b2)}


# -- polynomial generation ------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialTable:
    degree_max: int
    monic_coeffs: tuple[tuple, ...]
    squared_norms: tuple[Fraction, ...] = field(repr=False)

    def eval_monic(self, n: int, x: float) -> float:
        acc = 0.0
        for c in reversed(self.monic_coeffs[n]):
            acc = acc * x + float(c)
        return acc

    def eval_orthonormal(self, n: int, x: float) -> float:
        return self.eval_monic(n, x) / math.sqrt(self.squared_norms[n])


def monic_polynomials(sys: RecurrenceSystem, N: int) -> PolynomialTable:
    """Monic P_0..P_N from P_{n+1} = (x - a_n) P_n - b_{n-1}^2 P_{n-1}."""
    sys.require_positive(N - 1)
    polys = [[Fraction(1)]]
    norms = [Fraction(1)]
    prev: list = []
    for n in range(N):
        cur = polys[n]
        an = sys.a_value(n)
        nxt = [Fraction(0)] + list(cur)
        for i, c in enumerate(cur):
            nxt[i] = nxt[i] - an * c
        if n > 0:
            b2 = sys.b2_value(n - 1)
            for i, c in enumerate(prev):
                nxt[i] = nxt[i] - b2 * c
        prev = cur
        polys.append(nxt)
        norms.append(norms[-1] * sys.b2_value(n))
    return PolynomialTable(N, tuple(tuple(p) for p in polys), tuple(norms))


def eval_orthonormal(sys: RecurrenceSystem, x: float, N: int) -> list[float]:
    """Psi_0(x)..Psi_N(x) by the forward three-term recurrence."""
    sys.require_positive(N)
    values = [1.0]
    prev, cur = 0.0, 1.0
    for n in range(N):
        nxt = ((x - sys.a_float(n)) * cur - sys.b_float(n - 1) * prev) / sys.b_float(n)
        prev, cur = cur, nxt
        values.append(cur)
    return values
