import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oscalg import core
from oscalg.core import (
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
    parse_rational,
    seq_eval,
    simplify_ratio,
    system_from_json,
    system_to_json,
)
from oscalg.errors import (
    DenominatorZero,
    IndexOutOfDomain,
    InvalidParameter,
    MalformedSpec,
    NonPositiveB2,
    UnknownFamily,
)
from oscalg.surd import Surd

from oracles import beta_moments, gamma_moments, gaussian_moments, gram_schmidt_recurrence, recurrence_values

F = Fraction


# -- sequences ---------------------------------------------------------------

def test_seq_eval_law_and_table():
    s = RationalSequence(num=(F(1), F(1)), den=(F(1),), table=(F(7),))
    assert seq_eval(s, 0) == 7
    assert seq_eval(s, 3) == 4


def test_seq_eval_denominator_zero():
    s = RationalSequence(num=(F(1),), den=(F(-2), F(1)))
    with pytest.raises(DenominatorZero):
        seq_eval(s, 2)
    assert seq_eval(s, 3) == 1


def test_pure_table_out_of_range():
    s = RationalSequence.from_table([1, 2, 3])
    assert seq_eval(s, 2) == 3
    with pytest.raises(IndexOutOfDomain):
        seq_eval(s, 3)


def test_malformed_sequences():
    with pytest.raises(MalformedSpec):
        RationalSequence(num=None, table=None)
    with pytest.raises(MalformedSpec):
        RationalSequence(num=(F(1),), den=(F(0),))


def test_simplify_ratio_cancels_common_factor():
    # (n+1)(n+2) / (n+1) = n + 2
    num, den = simplify_ratio([F(2), F(3), F(1)], [F(1), F(1)])
    assert len(den) == 1
    assert [c / den[0] for c in num] == [2, 1]


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-2", F(-2)), (" 5/10 ", F(1, 2)), (7, F(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["abc", "1/0", "1.5", True, 0.5, "1/2/3"])
def test_parse_rational_rejects(bad):
    with pytest.raises(MalformedSpec):
        parse_rational(bad)


# -- families ------------------------------------------------------------------

def test_laguerre_coefficients():
    s = laguerre(0)
    assert [s.a_value(n) for n in range(4)] == [1, 3, 5, 7]
    assert [s.b2_value(n) for n in range(4)] == [1, 4, 9, 16]
    s = laguerre(F(5, 2))
    assert s.a_value(0) == F(7, 2)
    assert s.b2_value(0) == F(7, 2)


def test_b2_below_zero_index_is_zero():
    assert laguerre(1).b2_value(-1) == 0


@pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 1), (1, 2), (F(1, 2), F(3, 2)), (F(-1, 2), F(-1, 2)),
                                        (F(-1, 2), F(1, 2))])
def test_jacobi_matches_gram_schmidt(alpha, beta):
    _, a, b2 = gram_schmidt_recurrence(beta_moments(alpha, beta, 12), 6)
    s = jacobi(alpha, beta)
    assert [s.a_value(n) for n in range(6)] == a
    assert [s.b2_value(n) for n in range(6)] == b2


def test_jacobi_12_first_b2():
    assert jacobi(1, 2).b2_value(0) == F(4, 25)


def test_chebyshev_first_kind_b2():
    s = jacobi(F(-1, 2), F(-1, 2))
    assert s.b2_value(0) == F(1, 2)
    assert s.b2_value(1) == F(1, 4)


def test_laguerre_and_hermite_match_gram_schmidt():
    _, a, b2 = gram_schmidt_recurrence(gamma_moments(F(3, 2), 14), 7)
    s = laguerre(F(3, 2))
    assert [s.a_value(n) for n in range(7)] == a and [s.b2_value(n) for n in range(7)] == b2
    _, a, b2 = gram_schmidt_recurrence(gaussian_moments(14), 7)
    s = hermite_prob()
    assert [s.a_value(n) for n in range(7)] == a and [s.b2_value(n) for n in range(7)] == b2


def test_beckers_diagonal_is_exact_surd():
    s = beckers(F(3, 2))
    v = s.a_value(5)
    assert isinstance(v, Surd)
    assert v * v == F(9, 8)
    assert math.isclose(s.a_float(0), 1.5 / math.sqrt(2))
    assert s.b2_value(3) == 2
    assert beckers(0).a_value(0) == 0


def test_family_dispatch_and_errors():
    assert family("hermite").label == family("hermite_prob").label
    assert family("jacobi", "1", "2").b2_value(0) == F(4, 25)
    with pytest.raises(UnknownFamily):
        family("chebyshev")
    with pytest.raises(InvalidParameter):
        family("laguerre", -1)
    with pytest.raises(InvalidParameter):
        jacobi(0, F(-3, 2))


def test_validate_rejects_nonpositive_b2():
    s = custom(RationalSequence.constant(0), RationalSequence.polynomial(3, -1))
    with pytest.raises(NonPositiveB2):
        s.validate(8)
    s.validate(2)


# -- polynomials ------------------------------------------------------------------

def test_hermite_monic_p3():
    table = monic_polynomials(hermite_prob(), 4)
    polys, _, _ = gram_schmidt_recurrence(gaussian_moments(8), 4)
    assert list(table.monic_coeffs[3]) == polys[3] == [0, -3, 0, 1]
    assert list(table.monic_coeffs[4]) == polys[4]
    assert table.squared_norms[3] == 6


def test_laguerre_monic_matches_gram_schmidt():
    polys, _, _ = gram_schmidt_recurrence(gamma_moments(2, 12), 6)
    table = monic_polynomials(laguerre(2), 6)
    assert [list(p) for p in table.monic_coeffs] == polys


def test_eval_orthonormal_laguerre_at_zero():
    # |Psi_n(0)| = 1 for alpha = 0
    vals = eval_orthonormal(laguerre(0), 0.0, 10)
    assert all(math.isclose(abs(v), 1.0, rel_tol=1e-12) for v in vals)


def test_eval_orthonormal_hermite_value():
    vals = eval_orthonormal(hermite_prob(), 1.0, 3)
    assert vals[2] == pytest.approx(0.0, abs=1e-15)
    assert vals[3] == pytest.approx(-2 / math.sqrt(6))


@pytest.mark.parametrize("sys_", [laguerre(F(1, 2)), jacobi(1, 2), hermite_prob(), beckers(1)])
def test_eval_orthonormal_matches_convolution_oracle(sys_):
    N = 8
    a = [sys_.a_float(n) for n in range(N)]
    b2 = [float(sys_.b2_value(n)) for n in range(N)]
    for x in (-0.7, 0.3, 1.9):
        assert eval_orthonormal(sys_, x, N) == pytest.approx(recurrence_values(a, b2, x, N), rel=1e-10, abs=1e-12)


def test_polynomial_table_consistent_with_eval():
    s = jacobi(1, 2)
    table = monic_polynomials(s, 6)
    vals = eval_orthonormal(s, 0.42, 6)
    assert [table.eval_orthonormal(n, 0.42) for n in range(7)] == pytest.approx(vals, rel=1e-10)


_coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)
_pos = st.fractions(min_value=F(1, 4), max_value=4, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(a0=_coef, a1=_coef, c0=_pos, c1=_pos, x=st.floats(min_value=-2, max_value=2))
def test_three_term_recurrence_invariant(a0, a1, c0, c1, x):
    s = custom(RationalSequence.polynomial(a0, a1), RationalSequence.polynomial(c0, c1))
    N = 7
    psi = eval_orthonormal(s, x, N)
    for n in range(N):
        lhs = x * psi[n]
        rhs = s.b_float(n) * psi[n + 1] + s.a_float(n) * psi[n] + s.b_float(n - 1) * (psi[n - 1] if n else 0.0)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(a0=_coef, a1=_coef, c0=_pos, c1=_pos)
def test_squared_norms_are_b2_products(a0, a1, c0, c1):
    s = custom(RationalSequence.polynomial(a0, a1), RationalSequence.polynomial(c0, c1))
    table = monic_polynomials(s, 6)
    acc = F(1)
    for n in range(7):
        assert table.squared_norms[n] == acc
        acc *= s.b2_value(n)


# -- JSON ----------------------------------------------------------------------------

def test_json_roundtrip_custom():
    doc = {"label": "demo", "a": {"num": ["0"]}, "b2": {"num": ["1", "1", "1"]}}
    s = system_from_json(doc)
    again = system_from_json(system_to_json(s))
    assert [again.b2_value(n) for n in range(5)] == [1, 3, 7, 13, 21]
    assert again.label == "demo"


def test_json_roundtrip_jacobi_table_override():
    s = jacobi(1, 2)
    again = system_from_json(system_to_json(s))
    assert all(again.b2_value(n) == s.b2_value(n) for n in range(10))
    assert all(again.a_value(n) == s.a_value(n) for n in range(10))


def test_json_pure_table_validates_its_length():
    doc = {"a": {"table": ["0", "0", "0"]}, "b2": {"table": ["1", "2", "3"]}}
    s = system_from_json(doc)
    assert s.b2_value(2) == 3


@pytest.mark.parametrize("doc", [
    [],
    {"a": {"num": ["0"]}},
    {"a": {"num": ["0"]}, "b2": {"den": ["1"]}},
    {"a": {"num": ["0"]}, "b2": {"num": "1"}},
    {"a": {"num": ["0"]}, "b2": {"num": ["1"], "extra": []}},
    {"a": {"num": ["0"]}, "b2": {"num": ["x"]}},
    {"a": {"num": ["0"]}, "b2": {"num": ["1"]}, "label": 3},
])
def test_json_malformed(doc):
    with pytest.raises(MalformedSpec):
        system_from_json(doc)


def test_json_rejects_irrational_diagonal():
    with pytest.raises(MalformedSpec):
        system_to_json(beckers(1))


def test_scaled_system():
    s = laguerre(0).scaled(2)
    assert s.a_value(1) == 6 and s.b2_value(1) == 16
    assert isinstance(s, RecurrenceSystem)
    assert core.format_scalar(F(-3, 4)) == "-3/4"
