"""Characteristic polynomials of the monodromy as formal products.

A CharProduct is prod (t^m - 1)^{a_m}.  All operations act on the
exponent map; expansion into coefficients happens only on request.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from .errors import QresError


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@dataclass(frozen=True)
class CharProduct:
    """prod (t^m - 1)^{a_m}, stored canonically without zero exponents."""

    factors: tuple  # sorted tuple of (m, a)

    def __init__(self, exps: Mapping[int, int] | Iterable | None = None):
        merged: dict[int, int] = {}
        items = exps.items() if isinstance(exps, Mapping) else (exps or ())
        for m, a in items:
            if m < 1:
                raise QresError(f"order {m} must be positive")
            merged[m] = merged.get(m, 0) + int(a)
        object.__setattr__(self, "factors", tuple(sorted((m, a) for m, a in merged.items() if a)))

    @classmethod
    def one(cls) -> "CharProduct":
        return cls({})

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __mul__(self, other: "CharProduct") -> "CharProduct":
        out = self.as_dict()
        for m, a in other.factors:
            out[m] = out.get(m, 0) + a
        return CharProduct(out)

    def __pow__(self, k: int) -> "CharProduct":
        return CharProduct({m: a * k for m, a in self.factors})

    def inverse(self) -> "CharProduct":
        return self ** -1

    def degree(self) -> int:
        return sum(m * a for m, a in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for m, a in sorted(self.factors, key=lambda f: (-f[1] > 0, -f[0])):
            base = "(t-1)" if m == 1 else f"(t^{m}-1)"
            parts.append(base if a == 1 else f"{base}^{a}")
        return "".join(parts)


@dataclass(frozen=True)
class CyclotomicVector:
    """prod Phi_d^{c_d}."""

    exps: tuple  # sorted tuple of (d, c) with c != 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    def is_polynomial(self) -> bool:
        return all(c >= 0 for _, c in self.exps)

    def degree(self) -> int:
        return sum(_euler_phi(d) * c for d, c in self.exps)

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "".join(f"Phi_{d}" + ("" if c == 1 else f"^{c}") for d, c in self.exps)


def acampo(strata: Iterable, n: int) -> CharProduct:
    """[1/(t-1) prod (t^m - 1)^chi]^((-1)^n) from (m, chi) pairs.

    No strata at all means nothing was blown up, i.e. a smooth germ, and
    the answer is 1.
    """
    strata = list(strata)
    if not strata:
        return CharProduct.one()
    exps: dict[int, int] = {1: -1}
    for m, chi in strata:
        if chi == 0:
            continue
        m = Fraction(m)
        if m.denominator != 1 or m < 1:
            raise QresError(f"stratum multiplicity {m} is not a positive integer")
        exps[int(m)] = exps.get(int(m), 0) + int(chi)
    cp = CharProduct(exps)
    return cp if n % 2 == 0 else cp.inverse()


def milnor_from_strata(strata: Iterable, n: int) -> int:
    """(-1)^n [-1 + sum m chi]; zero for an empty list (smooth germ)."""
    strata = list(strata)
    if not strata:
        return 0
    total = -1 + sum(int(Fraction(m) * chi) for m, chi in strata if chi)
    # chi = 0 strata are inert even when their multiplicity is fractional.
    return total if n % 2 == 0 else -total


def milnor(cp: CharProduct, n: int | None = None) -> int:
    """Degree of the product, cross-checked against the expanded polynomial.

    ``n`` is accepted for symmetry with the A'Campo formula; the sign is
    already part of ``cp``.
    """
    deg = cp.degree()
    coeffs = expand(cp)
    if len(coeffs) - 1 != deg:
        raise QresError(f"degree mismatch: {deg} vs expanded {len(coeffs) - 1}")
    return deg


def substitute_power(cp: CharProduct, s: int) -> CharProduct:
    """t -> t^s."""
    if s < 1:
        raise QresError("power must be positive")
    return CharProduct({m * s: a for m, a in cp.factors})


def delta_k(cp: CharProduct, k: int) -> CharProduct:
    """(t^m - 1)^a -> (t^(m/g) - 1)^(g a) with g = gcd(m, k)."""
    if k < 1:
        raise QresError("k must be positive")
    out: dict[int, int] = {}
    for m, a in cp.factors:
        g = gcd(m, k)
        out[m // g] = out.get(m // g, 0) + g * a
    return CharProduct(out)


def closed_sis(chi_comp: int, m: int, deltas: Iterable[CharProduct]) -> CharProduct:
    """(t^m - 1)^chi / (t - 1) * prod Delta_P(t^(m+1))."""
    out = CharProduct({m: chi_comp}) * CharProduct({1: -1})
    for d in deltas:
        out = out * substitute_power(d, m + 1)
    return out


def closed_yls(chi_comp: int, m: int, k: int, deltas: Iterable[CharProduct]) -> CharProduct:
    """(t^m - 1)^chi / (t - 1) * prod Delta^k_P(t^(m+k))."""
    out = CharProduct({m: chi_comp}) * CharProduct({1: -1})
    for d in deltas:
        out = out * substitute_power(delta_k(d, k), m + k)
    return out


def to_cyclotomic(cp: CharProduct) -> CyclotomicVector:
    """Rewrite with t^m - 1 = prod over d | m of Phi_d."""
    out: dict[int, int] = {}
    for m, a in cp.factors:
        for d in _divisors(m):
            out[d] = out.get(d, 0) + a
    return CyclotomicVector(tuple(sorted((d, c) for d, c in out.items() if c)))


def _poly_mul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _poly_divexact(f: list[int], g: list[int]) -> list[int]:
    f = list(f)
    q = [0] * (len(f) - len(g) + 1)
    lead = g[-1]
    for i in range(len(q) - 1, -1, -1):
        c = f[i + len(g) - 1]
        if c % lead:
            raise QresError("inexact polynomial division")
        c //= lead
        q[i] = c
        if c:
            for j, b in enumerate(g):
                f[i + j] -= c * b
    if any(f[: len(g) - 1]):
        raise QresError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n in ascending order."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _poly_divexact(num, list(cyclotomic(d)))
    return tuple(num)


def expand_cyclotomic(vec: CyclotomicVector) -> list[int]:
    if not vec.is_polynomial():
        raise QresError(f"{vec} is not a polynomial")
    out = [1]
    for d, c in vec.exps:
        for _ in range(c):
            out = _poly_mul(out, list(cyclotomic(d)))
    return out


def expand(cp: CharProduct) -> list[int]:
    """Integer coefficients, ascending degree; fails if cp is not a polynomial."""
    return expand_cyclotomic(to_cyclotomic(cp))


def poly_to_str(coeffs: list[int], var: str = "t") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
