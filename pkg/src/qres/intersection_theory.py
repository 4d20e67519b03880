"""Rational intersection numbers on surfaces with cyclic quotient points.

Global numbers come from the weighted blow-up formulas and from Bezout's
theorem on quotients of weighted projective planes.  Local numbers are
computed on the smooth cover and divided by the group order; the smooth
local number uses Fulton's algorithm, which only needs polynomial
arithmetic over the rationals.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import QresError
from .quotient_kernel import QuotientType
from .wpoly import WPoly, translate_point


def pullback_coeff(nu: int, e: int) -> Fraction:
    """Coefficient of E in the total transform of a curve of weighted order nu."""
    if e < 1:
        raise QresError("e must be positive")
    return Fraction(nu, e)


def exc_self_int(d: int, p: int, q: int, e: int) -> Fraction:
    """Self-intersection -e^2/(dpq) of the exceptional divisor of a (p,q)-blow-up."""
    if min(d, p, q, e) < 1:
        raise QresError("inputs must be positive")
    return Fraction(-e * e, d * p * q)


def exc_dot_strict(d: int, p: int, q: int, e: int, nu: int) -> Fraction:
    """E . C^ = e nu / (dpq)."""
    return Fraction(e * nu, d * p * q)


def strict_dot_strict(cd: Fraction, d: int, p: int, q: int, nu: int, mu: int) -> Fraction:
    """C^ . D^ = C.D - nu mu / (dpq)."""
    return Fraction(cd) - Fraction(nu * mu, d * p * q)


def strict_self_int(d2: Fraction, d: int, p: int, q: int, mu: int) -> Fraction:
    """D^2 after the blow-up, for a compact D of weighted order mu."""
    return Fraction(d2) - Fraction(mu * mu, d * p * q)


def bezout_wp2(deg1: int, deg2: int, d: int, w: Sequence[int], e: int) -> Fraction:
    """Intersection of two curves on P^2_w / mu_d: e deg1 deg2 / (d p q r)."""
    p, q, r = w
    return Fraction(e * deg1 * deg2, d * p * q * r)


def minors_gcd(d: int, a: Sequence[int], w: Sequence[int]) -> int:
    """gcd of d with the 2x2 minors of the matrix with rows w and a."""
    p, q, r = w
    a0, a1, a2 = a
    return gcd(d, p * a1 - q * a0, p * a2 - r * a0, q * a2 - r * a1)


def torus_part(t: QuotientType, w: Sequence[int]) -> int:
    """Number of group elements acting like an element of the weighted C* orbit."""
    count = 0
    for g in t.elements():
        p = w[0]
        for k in range(p):
            theta = (g[0] + k) / Fraction(p)
            if all((wi * theta - gi) % 1 == 0 for wi, gi in zip(w, g)):
                count += 1
                break
    return count


def effective_order(t: QuotientType, w: Sequence[int]) -> int:
    """Order of the group acting effectively on P^2_w, i.e. |G| / |G cap C*_w|."""
    return t.order() // torus_part(t, w)


def bezout_quotient(deg1: int, deg2: int, w: Sequence[int], t: QuotientType) -> Fraction:
    """Bezout number on P^2_w / G for an arbitrary abelian diagonal G."""
    p, q, r = w
    return Fraction(deg1 * deg2, p * q * r * effective_order(t, w))


def _univariate_x(f: WPoly) -> dict:
    """f(x, 0) as {power: coeff}."""
    return {e[0]: c for e, c in f.terms.items() if e[1] == 0}


def fulton(f: WPoly, g: WPoly) -> int:
    """Intersection multiplicity of f = 0 and g = 0 at the origin of C^2."""
    if f.vars != g.vars or len(f.vars) != 2:
        raise QresError("fulton needs two bivariate polynomials in the same variables")
    total = 0
    y = (0, 1)
    for _ in range(100000):
        if f.is_zero() or g.is_zero():
            raise QresError("common component: zero polynomial")
        if f.constant_term() or g.constant_term():
            return total
        fx, gx = _univariate_x(f), _univariate_x(g)
        if not fx and not gx:
            raise QresError("common component y = 0")
        if not fx or not gx:
            if not fx:
                f, g = g, f
                fx, gx = gx, fx
            # g is divisible by y: I(f, g) = I(f, y) + I(f, g / y).
            total += min(fx)
            g = g.divide_monomial(y)
            continue
        r, s = max(fx), max(gx)
        if r > s:
            f, g, fx, gx, r, s = g, f, gx, fx, s, r
        # Kill the top coefficient of g(x, 0) with a multiple of f.
        g = g * fx[r] - f * WPoly.monomial((s - r, 0), gx[s], f.vars)
    raise QresError("fulton did not terminate")


def intersection_at(f: WPoly, g: WPoly, point: Sequence = (0, 0)) -> int:
    if any(point):
        f, g = translate_point(f, point), translate_point(g, point)
    return fulton(f, g)


def local_int(t: QuotientType, germ1: WPoly, germ2: WPoly) -> Fraction:
    """(1/|G|) times the smooth intersection number of the germs on the cover.

    The germs are equations in the cover coordinates of the chart whose
    group is ``t``; the point is the origin.
    """
    return Fraction(fulton(germ1, germ2), t.order())
