from fractions import Fraction

import pytest
import sympy

from qres.errors import QresError, ScopeError
from qres.wpoly import (WPoly, factor_whomog, initial_form, is_squarefree,
                        parse_poly, root_substitute, strict_transform,
                        translate_point, w_order, w_parts)

P = parse_poly


def test_parse_and_print():
    f = P("(x-1/2)^2*y - 3*x**2")
    assert f.coefficient((0, 1)) == Fraction(1, 4)
    assert f.coefficient((2, 0)) == -3
    assert P(str(f)) == f
    assert P("x^2/4") == WPoly.monomial((2, 0), Fraction(1, 4))
    assert P("x*y*z").vars == ("x", "y", "z")
    with pytest.raises(QresError):
        P("x +")


def test_arithmetic():
    x, y = WPoly.var("x"), WPoly.var("y")
    f = (x + y) ** 3
    assert f.coefficient((1, 2)) == 3
    assert (f - f).is_zero()
    assert f.degree() == 3 and (x * y + x ** 5).order() == 2
    assert f.diff(0) == 3 * (x + y) ** 2


def test_sympy_round_trip():
    f = P("3/2*x^3*y - y^5 + 7")
    assert WPoly.from_sympy(f.to_sympy()) == f


@pytest.mark.parametrize("text,w,nu", [
    ("x^3+y^2", (2, 3), 6),
    ("x^3+y^2", (1, 1), 2),
    ("x^5+x^2*y^2+y^6", (2, 1), 6),
])
def test_w_order(text, w, nu):
    assert w_order(P(text), w) == nu


def test_w_parts():
    parts = w_parts(P("x^3+y^2"), (2, 3))
    assert [p.degree for p in parts] == [6]
    parts = w_parts(P("x^3+y^2+x^4"), (2, 3))
    assert [p.degree for p in parts] == [6, 8]
    assert w_parts(WPoly(), (1, 1)) == []


def test_strict_transform():
    assert strict_transform(P("x^3+y^2"), (2, 3), 1) == (6, P("1+y^2"))
    assert strict_transform(P("x^3+y^2"), (2, 3), 2) == (6, P("x^3+1"))
    assert strict_transform(P("x"), (1, 1), 1) == (1, P("1"))


def test_root_substitute():
    assert root_substitute(P("1+x^2*y"), "x", 2) == P("1+x*y")
    with pytest.raises(QresError):
        root_substitute(P("1+x^3"), "x", 2)


def test_root_substitute_on_quotient_chart():
    # (1, 1) blow-up of X(2; 1, 1) has e = 2; invariance makes the x exponents even.
    nu, h1 = strict_transform(P("x^2+y^4"), (1, 1), 1)
    assert (nu, h1) == (2, P("1+x^2*y^4"))
    assert root_substitute(h1, "x", 2) == P("1+x*y^4")


def test_factor_whomog():
    f = factor_whomog(initial_form(P("x^3+y^2"), (2, 3)))
    assert f.orbit_count() == 1 and f.expand() == P("x^3+y^2")
    f = factor_whomog(initial_form(P("x^2*y^3"), (1, 1)))
    assert (f.e0, f.e_inf, f.factors) == (2, 3, ())
    f = factor_whomog(initial_form(P("x^6-y^6"), (1, 1)))
    assert sorted(str(phi) for phi, _, _ in f.factors) == \
        ["x + y", "x - y", "x^2 + x*y + y^2", "x^2 - x*y + y^2"]
    assert f.expand() == P("x^6-y^6")


def test_squarefree():
    assert is_squarefree(P("x^3+y^2"))
    assert not is_squarefree(P("(x-y)^2*(x+y)"))


def test_translate_point():
    assert translate_point(P("x^2+y^2"), (0, 1)) == P("x^2+y^2+2*y+1")
    with pytest.raises(ScopeError, match="non-rational center"):
        translate_point(P("1+y^2"), (0, sympy.I))


def test_translate_drops_order():
    h = P("(y-x)^2-x^3")
    assert h.order() == 2
    shifted = translate_point(h, (1, 1))
    assert shifted.constant_term() == -1
    moved = translate_point(P("y^2-x^3+x^2"), (0, 0))
    assert w_order(moved, (1, 1)) == 2
