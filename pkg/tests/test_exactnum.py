from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtetra.exactnum import (
    Constraint,
    DegenerateParameterError,
    MissingWitnessError,
    ParameterPoint,
    Q,
    format_q,
    phi21_terminating,
    phi_tilde,
    qbinomial,
    qpochhammer,
    qpow_half,
    sample_parameter_point,
    to_q,
)

# rationals away from the few values that make a Pochhammer factor vanish
small = st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda x: x not in (0, 1, -1))


def naive_poch(z, b, m):
    """Independent oracle in Fraction arithmetic, straight from the product."""
    z, b = Fraction(z), Fraction(b)
    acc = Fraction(1)
    if m >= 0:
        for s in range(m):
            acc *= 1 - z * b**s
        return acc
    for s in range(m, 0):
        acc /= 1 - z * b**s
    return acc


def test_qpow_half_examples():
    p = ParameterPoint({"q": Q(4), "r1": Q(9, 4)}, {"q": Q(2), "r1": Q(-3, 2)})
    assert qpow_half(p, "r1", Fraction(1, 2)) == Q(-3, 2)
    assert qpow_half(p, "r1", 0) == 1
    assert qpow_half(p, "r1", Fraction(-3, 2)) == Q(-3, 2) ** -3
    with pytest.raises(ValueError):
        qpow_half(p, "r1", Fraction(1, 3))


def test_qpow_half_missing_witness():
    p = ParameterPoint({"q": Q(4), "r1": Q(2)}, {"q": Q(2)})
    with pytest.raises(MissingWitnessError):
        qpow_half(p, "r1", Fraction(1, 2))


def test_qpochhammer_examples():
    z, b = Q(2, 3), Q(5, 7)
    assert qpochhammer(z, b, 0) == 1
    assert qpochhammer(z, b, 2) == (1 - z) * (1 - z * b)
    assert qpochhammer(z, b, -1) == 1 / (1 - z / b)


def test_qpochhammer_negative_degenerate():
    with pytest.raises(DegenerateParameterError):
        qpochhammer(Q(3), Q(3), -1)


@settings(max_examples=25, deadline=None)
@given(z=small, b=small)
def test_pochhammer_cocycle(z, b):
    z, b = to_q(z), to_q(b)
    for m in range(-6, 7):
        for n in range(-6, 7):
            try:
                lhs = qpochhammer(z, b, m + n)
                rhs = qpochhammer(z, b, m) * qpochhammer(z * b**m, b, n)
            except DegenerateParameterError:
                continue
            assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(z=small, b=small, m=st.integers(-5, 6))
def test_pochhammer_matches_naive(z, b, m):
    try:
        oracle = naive_poch(z, b, m)
    except ZeroDivisionError:
        return
    assert Fraction(str(qpochhammer(to_q(z), to_q(b), m))) == oracle


def test_qbinomial_examples():
    b = Q(3, 5)
    assert qbinomial(2, 1, b) == 1 + b
    assert qbinomial(3, 5, b) == 0
    assert qbinomial(7, 0, b) == 1


def test_qbinomial_symmetry():
    b = Q(-2, 7)
    for n in range(13):
        for m in range(n + 1):
            assert qbinomial(n, m, b) == qbinomial(n, n - m, b)


def test_phi21_examples():
    b, beta, gamma, z = Q(2, 3), Q(5, 7), Q(-3, 11), Q(7, 2)
    assert phi21_terminating(Q(1), beta, gamma, b, z, 0) == 1
    two_term = 1 + (1 - 1 / b) * (1 - beta) * z / ((1 - gamma) * (1 - b))
    assert phi21_terminating(1 / b, beta, gamma, b, z, 1) == two_term


def test_phi21_rejects_non_terminating():
    with pytest.raises(ValueError):
        phi21_terminating(Q(3), Q(5), Q(7), Q(2), Q(1), 2)


@settings(max_examples=20, deadline=None)
@given(b=small, beta=small, gamma=small, z=small, depth=st.integers(0, 8))
def test_phi21_direct_summation(b, beta, gamma, z, depth):
    alpha = b ** (-depth)
    oracle = Fraction(0)
    try:
        for n in range(depth + 1):
            num = naive_poch(alpha, b, n) * naive_poch(beta, b, n)
            den = naive_poch(gamma, b, n) * naive_poch(b, b, n)
            oracle += num / den * z**n
    except ZeroDivisionError:
        return
    got = phi21_terminating(to_q(alpha), to_q(beta), to_q(gamma), to_q(b), to_q(z), depth)
    assert Fraction(str(got)) == oracle


def test_phi_tilde_examples():
    q, z = Q(3, 2), Q(5, 7)
    b = q * q
    assert phi_tilde(0, z, q) == 1
    assert phi_tilde(1, z, q) == 1
    assert phi_tilde(2, z, q) == 1 - z
    assert phi_tilde(-2, z, q) == 1 / (1 - z / b)


@pytest.mark.parametrize("q", [Q(3, 2), Q(-2, 5), Q(7)])
def test_phi_tilde_recurrence(q):
    z = Q(11, 13)
    for m in range(-8, 9):
        assert phi_tilde(m + 2, z, q) == (1 - z * q**m) * phi_tilde(m, z, q)


def test_sample_point_unconstrained():
    p = sample_parameter_point(1, ["r1", "s1"])
    assert p.q not in (0, 1, -1)
    assert p.root("q") ** 2 == p.q
    for name in p.values:
        assert p.root(name) ** 2 == p[name]


def test_sample_point_constraint_and_determinism():
    c = Constraint("mu1", "mu2", 2)
    p = sample_parameter_point(1, ["mu1", "mu2"], [c])
    assert p["mu1"] == p["mu2"] * p.q**2
    assert p == sample_parameter_point(1, ["mu1", "mu2"], [c])


def test_point_rejects_bad_values():
    with pytest.raises(ValueError):
        ParameterPoint({"q": Q(1)})
    with pytest.raises(ValueError):
        ParameterPoint({"q": Q(2), "r1": Q(0)})
    with pytest.raises(ValueError):
        ParameterPoint({"q": Q(4)}, {"q": Q(3)})


def test_format_and_json_round_trip():
    assert format_q(Q(-3, 4)) == "-3/4"
    assert format_q(Q(5)) == "5"
    p = sample_parameter_point(9, ["r1", "mu2"]).with_ints(d=3)
    assert ParameterPoint.from_json(p.as_json()) == p
