"""Intersection numbers near an exceptional divisor, read off the chart tables.

Used to check the global formulas of intersection_theory against sums of
local numbers computed on the charts of a single weighted blow-up.
"""
from fractions import Fraction
from math import gcd

import sympy
from hypothesis import assume
from hypothesis import strategies as st

from qres.curve_resolver import invariant_localize
from qres.intersection_theory import fulton
from qres.quotient_kernel import QuotientType, blowup_2d
from qres.wpoly import WPoly, root_substitute, strict_transform

X, Y = WPoly.var("x"), WPoly.var("y")


def chart_equations(t, w, g):
    blow = blowup_2d(t, w)
    _, h1 = strict_transform(g, w, 1)
    _, h2 = strict_transform(g, w, 2)
    return blow, root_substitute(h1, "x", blow.e), root_substitute(h2, "y", blow.e)


def _normal_form(chart_type):
    if not chart_type.orders:
        return 1, 0
    return chart_type.orders[0], chart_type.weights[0][1]


def _on_divisor(h1, n):
    """h1(0, y) = y^j0 R(y^n); returns (j0, R as ascending coefficients)."""
    line = {j: c for (i, j), c in h1.terms.items() if i == 0}
    j0 = min(line)
    top = max(line)
    return j0, [line.get(j0 + n * k, Fraction(0)) for k in range((top - j0) // n + 1)]


def exc_dot_strict_local(t, w, g) -> Fraction:
    """E . C^ as the sum of local numbers at the two chart origins and on E minus them."""
    blow, h1, h2 = chart_equations(t, w, g)
    n1 = blow.charts[0].quotient.order()
    n2 = blow.charts[1].quotient.order()
    j0, R = _on_divisor(h1, max(n1, 1))
    origin1 = Fraction(fulton(X, h1), n1)
    away = len(R) - 1  # one point of E for each root of R
    origin2 = Fraction(fulton(Y, h2), n2)
    return origin1 + away + origin2


def strict_dot_strict_local(t, w, g1, g2) -> Fraction:
    """C^ . D^ near E; common points off the origins must have rational y^n."""
    blow, a1, a2 = chart_equations(t, w, g1)
    _, b1, b2 = chart_equations(t, w, g2)
    ch1, ch2 = blow.charts[0].quotient, blow.charts[1].quotient
    total = Fraction(fulton(a1, b1), ch1.order()) + Fraction(fulton(a2, b2), ch2.order())
    n, c = _normal_form(ch1)
    _, Ra = _on_divisor(a1, n)
    _, Rb = _on_divisor(b1, n)
    w_ = sympy.Symbol("w")
    common = sympy.gcd(sympy.Poly(list(reversed(Ra)), w_), sympy.Poly(list(reversed(Rb)), w_))
    for fac, _ in sympy.factor_list(common)[1]:
        fac = sympy.Poly(fac, w_)
        assume(fac.degree() == 1)
        w0 = -Fraction(str(fac.all_coeffs()[1])) / Fraction(str(fac.all_coeffs()[0]))
        total += fulton(invariant_localize(a1, n, c, w0), invariant_localize(b1, n, c, w0))
    return total


@st.composite
def quotient_points(draw, max_order=12, max_weight=9):
    """A normalized X(d; a, b) with d <= 12 and coprime weights (p, q) <= 9."""
    d = draw(st.integers(1, max_order))
    units = [u for u in range(1, d + 1) if gcd(u, d) == 1]
    a = draw(st.sampled_from(units)) % d
    b = draw(st.sampled_from(units)) % d
    t = QuotientType.cyclic(d, a, b) if d > 1 else QuotientType.smooth(2)
    p = draw(st.integers(1, max_weight))
    q = draw(st.integers(1, max_weight).filter(lambda v: gcd(v, p) == 1))
    return t, (p, q)


@st.composite
def semi_invariants(draw, t, max_degree=9):
    """A curve germ x^i0 + c y^j0 + ... whose monomials share one character."""
    d = t.orders[0] if t.orders else 1
    a, b = t.weights[0] if t.orders else (0, 0)
    i0 = draw(st.integers(1, 5))
    chi = (a * i0) % d
    j0 = next(j for j in range(1, d + 1) if (b * j - chi) % d == 0)
    pool = [(i, j) for i in range(max_degree) for j in range(max_degree)
            if 0 < i + j <= max_degree and (a * i + b * j - chi) % d == 0]
    extra = draw(st.lists(st.sampled_from(pool), max_size=3, unique=True))
    coeff = st.integers(-5, 5).filter(bool)
    g = X ** i0 + draw(coeff) * Y ** j0
    for exp in extra:
        g = g + WPoly.monomial(exp, draw(coeff))
    assume(not g.is_zero() and g.constant_term() == 0)
    return g


def no_common_component(g1, g2) -> bool:
    common = sympy.gcd(g1.to_sympy(), g2.to_sympy())
    return sympy.Poly(common, *sympy.symbols("x y")).total_degree() == 0


def local_number(t, g1, g2) -> Fraction:
    return Fraction(fulton(g1, g2), t.order())
