"""Cyclic quotient ambient spaces and weighted blow-up charts.

A type X(d; A) is stored as a list of rows (d_i; a_i0, ..., a_in); the
group is the product of the cyclic groups mu_{d_i} acting diagonally.
Every element of the group is identified with its vector of rotation
angles in [0, 1), which makes group comparisons independent of the
presentation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import QresError

Angles = tuple  # tuple of Fraction in [0, 1)


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with g = gcd(a, b) > 0 and g = u*a + v*b."""
    if a == 0 and b == 0:
        raise ValueError("ext_gcd(0, 0) is undefined")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def inverse_mod(a: int, n: int) -> int:
    g, u, _ = ext_gcd(a, n)
    if g != 1:
        raise QresError(f"{a} is not invertible modulo {n}")
    return u % n


@dataclass(frozen=True)
class QuotientType:
    """The quotient of C^n by a finite abelian diagonal group.

    ``orders[i]`` is d_i and ``weights[i]`` the corresponding row of A.
    A type with no rows is the smooth chart.
    """

    orders: tuple[int, ...]
    weights: tuple[tuple[int, ...], ...]
    dim: int = 2

    def __post_init__(self):
        if len(self.orders) != len(self.weights):
            raise ValueError("orders and weights must have the same length")
        for d, row in zip(self.orders, self.weights):
            if d < 1:
                raise ValueError("orders must be positive")
            if len(row) != self.dim:
                raise ValueError(f"row {row} does not have {self.dim} entries")

    @classmethod
    def cyclic(cls, d: int, *weights: int) -> "QuotientType":
        return cls((d,), (tuple(weights),), len(weights))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], dim: int | None = None) -> "QuotientType":
        """Build from rows written as [d, a_0, ..., a_n]."""
        if dim is None:
            if not rows:
                raise ValueError("dim is required for an empty row list")
            dim = len(rows[0]) - 1
        return cls(tuple(r[0] for r in rows), tuple(tuple(r[1:]) for r in rows), dim)

    @classmethod
    def smooth(cls, dim: int = 2) -> "QuotientType":
        return cls((), (), dim)

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [(d,) + row for d, row in zip(self.orders, self.weights)]

    def elements(self) -> frozenset:
        return _elements(self)

    def order(self) -> int:
        return len(self.elements())

    def is_trivial(self) -> bool:
        return self.order() == 1

    def __str__(self) -> str:
        if not self.orders:
            return "smooth"
        parts = [f"{d}; " + ", ".join(str(a) for a in row)
                 for d, row in zip(self.orders, self.weights)]
        return "X(" + " | ".join(parts) + ")"


@lru_cache(maxsize=4096)
def _elements(t: QuotientType) -> frozenset:
    zero = tuple(Fraction(0) for _ in range(t.dim))
    group = {zero}
    for d, row in zip(t.orders, t.weights):
        gen = tuple(Fraction(a, d) % 1 for a in row)
        new = set(group)
        step = gen
        while step not in group:
            for g in group:
                new.add(tuple((x + y) % 1 for x, y in zip(g, step)))
            step = tuple((x + y) % 1 for x, y in zip(step, gen))
        group = new
    return frozenset(group)


def _angle_order(theta: Fraction) -> int:
    return Fraction(theta).denominator


def group_from_elements(elements: Iterable[Angles], dim: int) -> QuotientType:
    """Present a finite set of angle vectors (assumed a group) by rows."""
    target = frozenset(elements)
    current = QuotientType.smooth(dim)
    # Greedily add elements of largest order until the span is everything.
    for g in sorted(target, key=lambda g: (-lcm(*[_angle_order(a) for a in g]), g)):
        if g in current.elements():
            continue
        n = lcm(*[_angle_order(a) for a in g])
        row = tuple(int(a * n) for a in g)
        current = QuotientType(current.orders + (n,), current.weights + (row,), dim)
        if current.elements() == target:
            break
    if current.elements() != target:
        raise QresError("element set is not closed under addition")
    return current


def same_group(s: QuotientType, t: QuotientType) -> bool:
    """True iff the two presentations define the same action."""
    return s.dim == t.dim and s.elements() == t.elements()


def simplify_type(t: QuotientType, scale: int | None = None) -> QuotientType:
    """Reduce rows modulo their order and drop rows that act trivially.

    ``scale`` multiplies every row by a unit, e.g. X(5; 2, 1) scaled by 3
    becomes X(5; 1, 3).  The underlying group never changes.
    """
    orders, weights = [], []
    for d, row in zip(t.orders, t.weights):
        if scale is not None:
            if gcd(scale, d) != 1:
                raise QresError(f"scale {scale} is not a unit modulo {d}")
            row = tuple(scale * a for a in row)
        row = tuple(a % d for a in row)
        if d == 1 or all(a == 0 for a in row):
            continue
        orders.append(d)
        weights.append(row)
    return QuotientType(tuple(orders), tuple(weights), t.dim)


def _exponents(poly) -> Iterable[tuple[int, ...]]:
    terms = getattr(poly, "terms", None)
    if terms is not None:
        return terms.keys()
    return poly


def is_function(t: QuotientType, poly) -> bool:
    """True iff every monomial of ``poly`` is invariant under the group.

    ``poly`` may be a WPoly or any iterable of exponent tuples.
    """
    for exp in _exponents(poly):
        for d, row in zip(t.orders, t.weights):
            if sum(a * e for a, e in zip(row, exp)) % d:
                return False
    return True


def character(t: QuotientType, exp: Sequence[int]):
    """The character of the monomial with exponent ``exp`` as a function on elements."""
    return lambda g: sum(a * e for a, e in zip(g, exp)) % 1


def semi_invariant_character(t: QuotientType, poly) -> dict | None:
    """Common character of the monomials of ``poly`` or None if they differ."""
    char = None
    for exp in _exponents(poly):
        values = {g: sum(a * e for a, e in zip(g, exp)) % 1 for g in t.elements()}
        if char is None:
            char = values
        elif char != values:
            return None
    return char


def stabilizer(t: QuotientType, zero_coords: Iterable[int]) -> frozenset:
    """Elements fixing a generic point whose coordinates in ``zero_coords`` vanish."""
    zero = set(zero_coords)
    free = [j for j in range(t.dim) if j not in zero]
    return frozenset(g for g in t.elements() if all(g[j] == 0 for j in free))


def stabilizer_order(t: QuotientType, zero_coords: Iterable[int]) -> int:
    """Order of the isotropy group at a generic point of a coordinate stratum.

    The stratum is given by the set of coordinates that vanish on it; the
    remaining coordinates are generic (nonzero).
    """
    return len(stabilizer(t, zero_coords))


def character_order(elements: Iterable[Angles], index: int) -> int:
    """Order of the image of the group under the character of coordinate ``index``."""
    return lcm(*[_angle_order(g[index]) for g in elements])


def multiplicity_L(t: QuotientType, index: int = 0) -> int:
    """lcm over rows of d_i / gcd(d_i, a_i,index): the order of the coordinate character."""
    return lcm(*[d // gcd(d, row[index]) for d, row in zip(t.orders, t.weights)])


def restrict(t: QuotientType, coords: Sequence[int]) -> QuotientType:
    """Image of the group acting on the chosen coordinates only."""
    images = {tuple(g[j] for j in coords) for g in t.elements()}
    return group_from_elements(images, len(coords))


@dataclass(frozen=True)
class MonomialMap:
    """Target coordinates written as monomials in the source coordinates.

    ``exps[j]`` is the exponent vector (in source coordinates) of the
    j-th target coordinate.
    """

    exps: tuple[tuple[int, ...], ...]
    source: QuotientType
    target: QuotientType

    def pull_exponent(self, exp: Sequence[int]) -> tuple[int, ...]:
        n = self.source.dim
        return tuple(sum(e * row[i] for e, row in zip(exp, self.exps)) for i in range(n))

    def pullback(self, poly):
        from .wpoly import WPoly
        out = {}
        for exp, c in poly.terms.items():
            new = self.pull_exponent(exp)
            out[new] = out.get(new, 0) + c
        return WPoly(out, poly.vars)


def is_normalized_2d(t: QuotientType) -> bool:
    """Cyclic, small and free on the torus: one row with gcd(d, a) = gcd(d, b) = 1."""
    t = simplify_type(t)
    if not t.orders:
        return True
    if len(t.orders) != 1 or t.dim != 2:
        return False
    d, (a, b) = t.orders[0], t.weights[0]
    return gcd(d, a) == 1 and gcd(d, b) == 1


def pseudo_reflection_orders(t: QuotientType) -> tuple[int, int]:
    """Orders of the subgroups acting trivially on y (resp. on x)."""
    kx = sum(1 for g in t.elements() if g[1] == 0)
    ky = sum(1 for g in t.elements() if g[0] == 0)
    return kx, ky


def normalize_2d(t: QuotientType, prefer: str = "x") -> tuple[QuotientType, MonomialMap]:
    """Normalize a two dimensional abelian type.

    The pseudo-reflections fixing x = 0 (resp. y = 0) form cyclic groups of
    orders alpha, beta; dividing by them is the map (x, y) -> (x^alpha, y^beta),
    whose image carries the residual action.  That action has no
    pseudo-reflections, so it is cyclic and small.  It is presented as
    X(n; 1, c) when ``prefer == "x"`` and X(n; c, 1) otherwise.
    """
    if t.dim != 2:
        raise QresError("normalize_2d needs a two dimensional type")
    alpha, beta = pseudo_reflection_orders(t)
    images = {((alpha * g[0]) % 1, (beta * g[1]) % 1) for g in t.elements()}
    n = len(images)
    if n == 1:
        normal = QuotientType.smooth(2)
    else:
        gen = next(g for g in sorted(images) if lcm(_angle_order(g[0]), _angle_order(g[1])) == n)
        u, v = int(gen[0] * n), int(gen[1] * n)
        if gcd(u, n) != 1 or gcd(v, n) != 1:
            raise QresError(f"residual action of {t} is not small")
        if prefer == "x":
            normal = QuotientType.cyclic(n, 1, v * inverse_mod(u, n) % n)
        else:
            normal = QuotientType.cyclic(n, u * inverse_mod(v, n) % n, 1)
        assert normal.elements() == frozenset(images)
    return normal, MonomialMap(((alpha, 0), (0, beta)), t, normal)


def invariant_exponents(t: QuotientType, bound: int) -> set[tuple[int, ...]]:
    """All invariant monomial exponents of total degree at most ``bound``."""
    out = set()

    def rec(prefix, left):
        if len(prefix) == t.dim:
            if is_function(t, [prefix]):
                out.add(prefix)
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e)

    rec((), bound)
    return out


@dataclass(frozen=True)
class Chart:
    """One affine chart of a weighted blow-up.

    ``cover`` is the presentation obtained by lifting the base action along
    ``gluing``; ``quotient`` is the working type (normalized in dimension
    2, equal to ``cover`` in dimension 3).  In dimension 2 the normalized
    coordinate is the ``root_index`` coordinate of the cover raised to
    ``root_degree``.
    """

    index: int
    quotient: QuotientType
    cover: QuotientType
    gluing: MonomialMap
    exceptional: int
    root_index: int = 0
    root_degree: int = 1
    divisor_equations: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Blowup:
    weights: tuple[int, ...]
    base: QuotientType
    charts: tuple[Chart, ...]
    e: int = 1


def _cover_rows(t: QuotientType, w: Sequence[int], i: int) -> QuotientType:
    n = t.dim
    P = w[i]
    first = [P] + [(-1 if j == i else w[j]) for j in range(n)]
    rows = [first]
    for d, row in zip(t.orders, t.weights):
        a = row[i]
        rows.append([P * d] + [(a if j == i else P * row[j] - w[j] * a) for j in range(n)])
    return QuotientType.from_rows(rows, n)


def _chart_map(w: Sequence[int], i: int, base: QuotientType, cover: QuotientType) -> MonomialMap:
    n = len(w)
    exps = []
    for j in range(n):
        row = [0] * n
        row[i] = w[j]
        if j != i:
            row[j] = 1
        exps.append(tuple(row))
    return MonomialMap(tuple(exps), cover, base)


def blowup_2d(t: QuotientType, w: tuple[int, int]) -> Blowup:
    """Weighted blow-up of the origin of a normalized X(d; a, b).

    Chart 1 is X(pd/e; 1, (-q + beta p b)/e) with coordinates [(x^e, y)]
    mapping to (x^p, x^q y); chart 2 is X(qd/e; (-p + mu q a)/e, 1) with
    [(x, y^e)] mapping to (x y^p, y^q).  Here e = gcd(d, pb - qa) and
    beta a = mu b = 1 mod d.
    """
    p, q = w
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise QresError(f"weights {w} must be positive and coprime")
    t = simplify_type(t)
    if t.dim != 2 or not is_normalized_2d(t):
        raise QresError(f"blowup_2d needs a normalized type, got {t}")
    if t.orders:
        d, (a, b) = t.orders[0], t.weights[0]
    else:
        d, a, b = 1, 0, 0
    e = gcd(d, p * b - q * a)
    beta = inverse_mod(a, d) if d > 1 else 0
    mu = inverse_mod(b, d) if d > 1 else 0
    n1, n2 = p * d // e, q * d // e
    c1 = (-q + beta * p * b) // e
    c2 = (-p + mu * q * a) // e
    t1 = simplify_type(QuotientType.cyclic(n1, 1, c1))
    t2 = simplify_type(QuotientType.cyclic(n2, c2, 1))
    cover1 = _cover_rows(t, w, 0)
    cover2 = _cover_rows(t, w, 1)
    ch1 = Chart(1, t1, cover1, _chart_map(w, 0, t, cover1), exceptional=0,
                root_index=0, root_degree=e, divisor_equations={"E": 0})
    ch2 = Chart(2, t2, cover2, _chart_map(w, 1, t, cover2), exceptional=1,
                root_index=1, root_degree=e, divisor_equations={"E": 1})
    return Blowup(tuple(w), t, (ch1, ch2), e)


def blowup_3d(t: QuotientType, w: tuple[int, int, int]) -> Blowup:
    """Weighted blow-up of the origin of C^3 / G with weights (P, Q, R).

    Chart i has coordinates sending the i-th coordinate to x_i^{w_i} and the
    others to x_i^{w_j} x_j.  Its group is generated by mu_{w_i} with
    weights (w_0, .., -1, .., w_2) and by the lift of each base row.  The
    presentation is kept as is (no normalization in dimension 3).
    """
    if t.dim != 3:
        raise QresError("blowup_3d needs a three dimensional type")
    if min(w) < 1:
        raise QresError(f"weights {w} must be positive")
    charts = []
    for i in range(3):
        cover = _cover_rows(t, w, i)
        charts.append(Chart(i + 1, cover, cover, _chart_map(w, i, t, cover), exceptional=i,
                            divisor_equations={"E": i}))
    return Blowup(tuple(w), t, tuple(charts))
