from fractions import Fraction
from math import gcd

import pytest

from qres.errors import QresError
from qres.quotient_kernel import (QuotientType, blowup_2d, blowup_3d, ext_gcd,
                                  invariant_exponents, is_function,
                                  is_normalized_2d, multiplicity_L,
                                  normalize_2d, restrict, same_group,
                                  simplify_type, stabilizer_order)
from qres.wpoly import parse_poly

X = QuotientType.cyclic


@pytest.mark.parametrize("a,b,expected", [(2, 3, (1, -1, 1)), (4, 6, (2, -1, 1)), (7, 0, (7, 1, 0))])
def test_ext_gcd(a, b, expected):
    g, u, v = ext_gcd(a, b)
    assert (g, u, v) == expected
    assert u * a + v * b == g


def test_simplify_drops_trivial_rows():
    assert simplify_type(X(1, 0, 0)).orders == ()
    assert simplify_type(X(2, -1, 3)) == X(2, 1, 1)


def test_simplify_scaling_by_unit():
    t = simplify_type(X(5, 2, 1), scale=3)
    assert t == X(5, 1, 3)
    assert invariant_exponents(t, 12) == invariant_exponents(X(5, 2, 1), 12)
    with pytest.raises(QresError):
        simplify_type(X(4, 1, 1), scale=2)


def test_is_function():
    t = X(2, -1, 3)
    assert is_function(t, parse_poly("x^6"))
    assert not is_function(t, parse_poly("x^5"))
    assert is_function(t, parse_poly("1+y^2"))


def test_normalize_already_normal():
    t = X(2, 1, 1)
    n, phi = normalize_2d(t)
    assert n == t and phi.exps == ((1, 0), (0, 1))


def test_normalize_removes_reflection():
    n, phi = normalize_2d(X(4, 2, 1))
    assert n == X(2, 1, 1)
    assert phi.exps == ((1, 0), (0, 2))


def test_normalize_lattice_x6_23():
    t = X(6, 2, 3)
    n, phi = normalize_2d(t)
    assert is_normalized_2d(n)
    below = invariant_exponents(t, 12)
    pulled = {phi.pull_exponent(e) for e in invariant_exponents(n, 12)}
    assert {e for e in pulled if sum(e) <= 12} == below


def test_stabilizers():
    assert stabilizer_order(X(2, -1, 3), (0,)) == 1
    assert stabilizer_order(QuotientType.smooth(2), (0,)) == 1
    # z-axis of X(q; p, -1, r): the stabilizer has order gcd(q, r).
    for q, p, r in [(4, 1, 2), (6, 5, 3), (9, 2, 6), (5, 3, 7)]:
        assert stabilizer_order(X(q, p, -1, r), (0, 1)) == gcd(q, r)


def test_multiplicity_L():
    assert multiplicity_L(X(2, -1, 3), 0) == 2
    assert multiplicity_L(X(3, 2, -1), 1) == 3
    assert multiplicity_L(QuotientType.smooth(2), 0) == 1


def test_blowup_smooth_23():
    b = blowup_2d(QuotientType.smooth(2), (2, 3))
    assert b.e == 1
    assert same_group(b.charts[0].quotient, simplify_type(X(2, -1, 3)))
    assert same_group(b.charts[1].quotient, simplify_type(X(3, 2, -1)))
    assert b.charts[0].cover == QuotientType.from_rows([[2, -1, 3]])


def test_blowup_on_quotient_point():
    b = blowup_2d(X(2, 1, 1), (2, 3))
    assert b.e == 1
    assert b.charts[0].quotient == X(4, 1, 3)
    assert b.charts[1].quotient == X(6, 1, 1)
    for ch in b.charts:
        n, _ = normalize_2d(ch.cover)
        assert same_group(n, ch.quotient)


def test_blowup_classical():
    b = blowup_2d(QuotientType.smooth(2), (1, 1))
    assert all(ch.quotient.is_trivial() for ch in b.charts)
    b3 = blowup_3d(QuotientType.smooth(3), (1, 1, 1))
    assert all(ch.quotient.is_trivial() for ch in b3.charts)


def test_blowup_rejects_bad_input():
    with pytest.raises(QresError):
        blowup_2d(QuotientType.smooth(2), (2, 4))
    with pytest.raises(QresError):
        blowup_2d(X(4, 2, 1), (1, 1))


def test_blowup_3d_smooth():
    b = blowup_3d(QuotientType.smooth(3), (2, 3, 6))
    expected = [X(2, -1, 3, 6), X(3, 2, -1, 6), X(6, 2, 3, -1)]
    for ch, t in zip(b.charts, expected):
        assert same_group(ch.quotient, t)


def test_blowup_3d_second_step_table():
    # Cusp surface: E1 chart X(2; -1, 3, 6) blown up at [1:0:0] with (1, 2, 4).
    p1, q1, nu1, pa, qa, ma = 2, 3, 6, 1, 2, 4
    b = blowup_3d(X(p1, -1, q1, nu1), (pa, qa, ma))
    d = gcd(p1, qa + pa * q1)
    assert same_group(b.charts[0].quotient, X(p1 * pa // d, -1, (qa + pa * q1) // d, ma))


def _chart1_elements(t, w):
    """Elements of chart 1 by brute force: zeta with phi(zeta . u) in G . phi(u)."""
    p, q, r = w
    out = set()
    for g in t.elements():
        for k in range(p):
            th = (g[0] + k) / Fraction(p)
            out.add((th % 1, (g[1] - q * th) % 1, (g[2] - r * th) % 1))
    return frozenset(out)


@pytest.mark.parametrize("t,w", [
    (X(3, -1, 2, 6), (2, 5, 7)),
    (X(4, -1, 5, 3), (3, 1, 2)),
    (X(2, -1, 3, 6), (1, 1, 2)),
    (QuotientType.from_rows([[2, 1, 1, 0], [3, 0, 1, 2]]), (2, 3, 1)),
])
def test_blowup_3d_chart_group(t, w):
    assert blowup_3d(t, w).charts[0].quotient.elements() == _chart1_elements(t, w)


def test_gluing_pulls_functions_to_functions():
    t = X(5, 1, 2)
    b = blowup_2d(t, (3, 1))
    for ch in b.charts:
        for e in invariant_exponents(t, 10):
            assert is_function(ch.cover, [ch.gluing.pull_exponent(e)])


def test_str():
    assert str(X(2, 1, 1)) == "X(2; 1, 1)"
    assert str(QuotientType.smooth(2)) == "smooth"
