"""Embedded Q-resolution of plane curve germs by weighted blow-ups.

Each point under consideration is described by a LocalModel: a normalized
cyclic quotient chart, the strict transform of the curve in normalized
coordinates and the exceptional divisors along the two axes.  A point is
blown up with weights read off its Newton polygon; the points of the new
divisor are its two chart origins plus the orbits of roots of the strict
transform on the first chart.  Non-origin points that are still not
normal crossings are moved to the origin of a smooth chart through
invariant coordinates, which requires the root to be rational.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import QresError, ScopeError
from .intersection_theory import exc_self_int, fulton
from .monodromy import CharProduct, acampo, milnor_from_strata
from .quotient_kernel import (QuotientType, blowup_2d, inverse_mod,
                              multiplicity_L, simplify_type)
from .wpoly import (WPoly, factor_univariate, is_squarefree, root_substitute,
                    strict_transform, w_order)


@dataclass(frozen=True)
class LocalModel:
    """A point of the partial resolution, placed at the origin of its chart.

    ``qtype`` is normalized and presented as X(n; 1, c) or X(n; c, 1).
    ``h`` is the strict transform in the normalized coordinates.  A
    divisor along x = 0 (resp. y = 0) is given by its id and multiplicity.
    """

    qtype: QuotientType
    h: WPoly
    x_div: int | None = None
    y_div: int | None = None
    x_mult: int = 0
    y_mult: int = 0
    where: str = "germ"

    def divisors(self) -> tuple:
        return tuple(d for d in (self.x_div, self.y_div) if d is not None)

    def curve_passes(self) -> bool:
        return self.h.constant_term() == 0


def is_resolved(model: LocalModel) -> bool:
    """True iff the total transform has Q-normal crossings at the chart origin."""
    h = model.h
    if not model.curve_passes():
        return True
    if model.x_div is not None and model.y_div is not None:
        return False
    if model.x_div is not None:
        return h.coefficient((0, 1)) != 0
    if model.y_div is not None:
        return h.coefficient((1, 0)) != 0
    return h.coefficient((1, 0)) != 0 or h.coefficient((0, 1)) != 0


# Newton polygon -----------------------------------------------------------

def newton_faces(h: WPoly) -> list[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
    """Compact faces of the Newton polygon as (start, end, primitive normal (p, q))."""
    pts = sorted(set(h.terms))
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    faces = []
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        if j2 >= j1:
            break
        p, q = j1 - j2, i2 - i1
        g = gcd(p, q)
        faces.append(((i1, j1), (i2, j2), (p // g, q // g)))
    return faces


def newton_weights(h: WPoly) -> tuple[int, int]:
    """Weights (p, q) of the compact Newton face that reaches the lowest total degree.

    Ties go to the larger p + q.  Without compact faces (e.g. h = xy) the
    answer is the ordinary blow-up (1, 1).
    """
    if h.is_zero() or h.constant_term() != 0:
        raise QresError("newton_weights needs a nonzero germ vanishing at the origin")
    if len(h.terms) == 1:
        (exp,) = h.terms
        if max(exp) >= 2:
            raise ScopeError(f"monomial germ {h} has a non-isolated singularity")
    faces = newton_faces(h)
    if not faces:
        return (1, 1)
    best = min(faces, key=lambda f: (min(sum(f[0]), sum(f[1])), -(f[2][0] + f[2][1])))
    return best[2]


# invariant coordinates at orbit points ------------------------------------

def invariant_localize(h: WPoly, n: int, c: int, w0: Fraction) -> WPoly:
    """Rewrite h at the orbit {x = 0, y^n = w0} of X(n; 1, c) in smooth coordinates.

    The new coordinates are u1 = x y^c' (c c' = -1 mod n), which cuts out
    x = 0, and u2 = y^n - w0.  h is first multiplied by a power of y to
    make it invariant; powers of y^n that become negative are cleared by
    a unit.  The result is returned in variables (x, y) = (u1, u2).
    """
    if w0 == 0:
        raise QresError("invariant_localize is for points off the axis")
    if n == 1:
        s, cprime = 0, 0
    else:
        chars = {(i + c * j) % n for i, j in h.terms}
        if len(chars) != 1:
            raise QresError(f"{h} is not semi-invariant on X({n}; 1, {c})")
        cinv = inverse_mod(c, n)
        s = (-chars.pop() * cinv) % n
        cprime = (-cinv) % n
    powers = {}
    for (i, j), coef in h.terms.items():
        k, rem = divmod(j + s - cprime * i, n)
        if rem:
            raise QresError("internal: exponent not divisible after twisting")
        powers[(i, k)] = powers.get((i, k), 0) + coef
    shift = max(0, -min(k for _, k in powers))
    g = WPoly({(i, k + shift): coef for (i, k), coef in powers.items()}, ("x", "y"))
    return g.compose([WPoly.var("x"), WPoly({(0, 1): 1, (0, 0): Fraction(w0)}, ("x", "y"))])


# single blow-up -----------------------------------------------------------

@dataclass(frozen=True)
class PointOnE:
    """A special point (or Galois orbit of points) on a new exceptional divisor.

    ``kind`` is "origin_x" (first chart origin, where E = {x = 0} meets the
    old y-divisor), "origin_y" (second chart origin) or "orbit" for roots
    of the strict transform away from both origins.  For orbits,
    ``factor`` is the irreducible polynomial in w = y^n, ``degree`` the
    number of points and ``multiplicity`` the root multiplicity.
    """

    kind: str
    model: LocalModel | None
    factor: tuple = ()
    degree: int = 1
    multiplicity: int = 0
    value: Fraction | None = None

    @property
    def transverse(self) -> bool:
        return self.kind == "orbit" and self.multiplicity == 1


@dataclass(frozen=True)
class BlowupStep:
    divisor: int
    weights: tuple[int, int]
    center: LocalModel
    nu: int
    e: int
    m: int
    chart_types: tuple[QuotientType, QuotientType]
    h_charts: tuple[WPoly, WPoly]
    points: tuple[PointOnE, ...]


def blowup_model(model: LocalModel, w: tuple[int, int], divisor: int) -> BlowupStep:
    """Blow up the origin of ``model`` with weights ``w`` creating divisor ``divisor``."""
    p, q = w
    blow = blowup_2d(model.qtype, w)
    e = blow.e
    t1, t2 = blow.charts[0].quotient, blow.charts[1].quotient
    nu, h1 = strict_transform(model.h, w, 1)
    _, h2 = strict_transform(model.h, w, 2)
    h1 = root_substitute(h1, "x", e)
    h2 = root_substitute(h2, "y", e)
    m_num = p * model.x_mult + q * model.y_mult + nu
    if m_num % e:
        raise QresError(f"multiplicity {m_num}/{e} of E{divisor} is not an integer")
    m = m_num // e
    tag = f"E{divisor}"
    origin_x = LocalModel(t1, h1, divisor, model.y_div, m, model.y_mult, f"{tag}:origin_x")
    origin_y = LocalModel(t2, h2, model.x_div, divisor, model.x_mult, m, f"{tag}:origin_y")
    points = [PointOnE("origin_x", origin_x)]
    n1 = t1.orders[0] if t1.orders else 1
    c1 = t1.weights[0][1] if t1.orders else 0
    points.extend(_orbit_points(h1, n1, c1, divisor, m, tag))
    points.append(PointOnE("origin_y", origin_y))
    return BlowupStep(divisor, (p, q), model, nu, e, m, (t1, t2), (h1, h2), tuple(points))


def _orbit_points(h1: WPoly, n: int, c: int, divisor: int, m: int, tag: str) -> list[PointOnE]:
    on_e = {j: coef for (i, j), coef in h1.terms.items() if i == 0}
    if not on_e:
        raise QresError("strict transform contains the exceptional divisor")
    j0 = min(on_e)
    coeffs: dict[int, Fraction] = {}
    for j, coef in on_e.items():
        if (j - j0) % n:
            raise QresError("strict transform is not semi-invariant on the divisor")
        coeffs[(j - j0) // n] = coef
    if max(coeffs) == 0:
        return []
    dense = [coeffs.get(k, Fraction(0)) for k in range(max(coeffs) + 1)]
    _, factors = factor_univariate(dense)
    out = []
    for cs, mult in sorted(factors, key=lambda f: (len(f[0]), [str(x) for x in f[0]])):
        deg = len(cs) - 1
        value = -cs[0] if deg == 1 else None
        model = None
        if mult > 1:
            if deg != 1:
                raise ScopeError(
                    f"non-rational center on {tag}: orbit of roots of a degree {deg} factor "
                    "needs a further blow-up")
            local = invariant_localize(h1, n, c, value)
            model = LocalModel(QuotientType.smooth(2), local, divisor, None, m, 0,
                               f"{tag}:orbit w={value}")
        out.append(PointOnE("orbit", model, tuple(cs), deg, mult, value))
    return out


def nt_locus(step: BlowupStep) -> list[tuple[PointOnE, LocalModel]]:
    """Points of the new divisor where the total transform is not yet Q-normal crossing."""
    out = []
    for pt in step.points:
        if pt.kind == "orbit":
            if not pt.transverse:
                out.append((pt, pt.model))
        elif not is_resolved(pt.model):
            out.append((pt, pt.model))
    return out


# resolution ---------------------------------------------------------------

@dataclass
class Stratum2D:
    divisor: int
    kind: str  # "1", "x" or "y"
    chi: int
    m: Fraction

    @property
    def active(self) -> bool:
        return self.chi != 0


@dataclass
class DivisorInfo2D:
    id: int
    weights: tuple[int, int]
    nu: int
    m: int
    e: int
    d: int  # order of the group at the center
    center_type: QuotientType
    chart_types: tuple[QuotientType, QuotientType]
    center_divisors: tuple  # (x_div, y_div) at the center
    center_where: str
    self_int: Fraction
    orbit_degree: int  # number of special points off the two origins
    strata: list = field(default_factory=list)
    children: dict = field(default_factory=dict)  # "origin_x", "origin_y", orbit index -> divisor id

    @property
    def p(self) -> int:
        return self.weights[0]

    @property
    def q(self) -> int:
        return self.weights[1]


@dataclass(frozen=True)
class FinalPoint:
    """A point of the resolution where two divisors or a divisor and the curve meet."""

    divisors: tuple
    order: int
    curve: bool
    where: str
    count: int = 1  # number of geometric points (Galois orbits on E)

    def local_divisor_divisor(self) -> Fraction:
        return Fraction(1, self.order)


@dataclass(frozen=True)
class Branch:
    id: int
    divisor: int | None
    where: str
    count: int  # geometric points, > 1 for a Galois orbit of transverse points
    local: Fraction  # intersection number at each point


@dataclass
class CurveResolution:
    germ: WPoly
    divisors: list[DivisorInfo2D]
    steps: list[BlowupStep]
    finals: list[FinalPoint]
    branches: list[Branch]
    complexity: list = field(default_factory=list)

    @property
    def strata(self) -> list[Stratum2D]:
        return curve_strata(self)

    def divisor(self, a: int) -> DivisorInfo2D:
        return self.divisors[a - 1]

    def charpoly(self) -> CharProduct:
        return curve_charpoly(self)

    def milnor(self) -> int:
        return curve_milnor(self)

    def gamma(self) -> list[tuple[int, int, Fraction]]:
        """Edges of the dual graph: pairs of divisors meeting at a point."""
        return [(f.divisors[0], f.divisors[1], f.local_divisor_divisor())
                for f in self.finals if len(f.divisors) == 2]

    def gamma_plus(self) -> tuple[list, list[Branch]]:
        return self.gamma(), list(self.branches)

    def branch_count(self) -> int:
        return sum(b.count for b in self.branches)

    def intersections(self, a: int) -> dict:
        """E_a . E_b for every neighbour and E_a . C^ from the final points."""
        nbrs: dict[int, Fraction] = {}
        for u, v, val in self.gamma():
            if a in (u, v):
                other = v if u == a else u
                nbrs[other] = nbrs.get(other, Fraction(0)) + val
        curve = sum((b.local * b.count for b in self.branches if b.divisor == a), Fraction(0))
        return {"divisors": nbrs, "curve": curve}

    def projection_defect(self, a: int) -> Fraction:
        """m_a E_a^2 + sum m_b E_a.E_b + E_a.C^, which must vanish."""
        info = self.divisor(a)
        data = self.intersections(a)
        total = info.m * info.self_int + data["curve"]
        for b, val in data["divisors"].items():
            total += self.divisor(b).m * val
        return total

    def is_tree(self) -> bool:
        edges = self.gamma()
        parent = {d.id: d.id for d in self.divisors}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def to_json_dict(self) -> dict:
        from .monodromy import expand
        cp = self.charpoly()
        return {
            "germ": str(self.germ),
            "divisors": [
                {
                    "id": d.id,
                    "weights": list(d.weights),
                    "nu": d.nu,
                    "m": d.m,
                    "e": d.e,
                    "center_order": d.d,
                    "center": d.center_where,
                    "self_intersection": str(d.self_int),
                    "chart_types": [str(t) for t in d.chart_types],
                }
                for d in self.divisors
            ],
            "strata": [
                {"divisor": s.divisor, "j": s.kind, "chi": s.chi, "m": str(s.m), "active": s.active}
                for s in self.strata
            ],
            "gamma": [[u, v, str(val)] for u, v, val in self.gamma()],
            "branches": [
                {"id": b.id, "divisor": b.divisor, "count": b.count, "local": str(b.local), "where": b.where}
                for b in self.branches
            ],
            "charpoly": {"factored": str(cp), "expanded": expand(cp)},
            "milnor": self.milnor(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_dot(self, plus: bool = True) -> str:
        lines = ["graph resolution {"]
        for d in self.divisors:
            label = f"E{d.id} ({d.p},{d.q}) ν={d.nu} m={d.m} self={d.self_int}"
            lines.append(f'  E{d.id} [label="{label}"];')
        for u, v, val in self.gamma():
            lines.append(f'  E{u} -- E{v} [label="{val}"];')
        if plus:
            for b in self.branches:
                lines.append(f'  C{b.id} [shape=point, label=""];')
                if b.divisor is not None:
                    lines.append(f'  E{b.divisor} -- C{b.id} [label="{b.count}x{b.local}"];')
        lines.append("}")
        return "\n".join(lines)


def nt_complexity(model: LocalModel) -> int:
    """Milnor number of h plus its intersection with the local divisors, on the chart cover."""
    h = model.h
    mu = fulton(h.diff(0), h.diff(1)) if h.order() >= 2 else 0
    meet = 0
    if model.x_div is not None:
        meet += fulton(h, WPoly.var("x"))
    if model.y_div is not None:
        meet += fulton(h, WPoly.var("y"))
    return mu + meet


def _weight_source(script: Sequence | None) -> Iterator | None:
    if script is None:
        return None
    return iter([tuple(w) for w in script])


def parse_weight_script(text: str) -> list[tuple[int, int]]:
    """Parse ``"2,3;1,1"`` into [(2, 3), (1, 1)]."""
    out = []
    for chunk in text.replace(" ", "").split(";"):
        if not chunk:
            continue
        a, b = chunk.strip("()").split(",")
        out.append((int(a), int(b)))
    return out


def resolve_curve(h: WPoly, strategy: str | Sequence = "auto", max_blowups: int = 200) -> CurveResolution:
    """Embedded Q-resolution of the germ h = 0 at the origin.

    ``strategy`` is "auto" (Newton weights) or an explicit list of weights
    consumed in the order centers are met (depth first: first chart
    origin, orbits, second chart origin).
    """
    if h.vars != ("x", "y"):
        h = h.with_vars(("x", "y"))
    if h.is_zero() or h.constant_term() != 0:
        raise QresError("the germ must vanish at the origin")
    if not is_squarefree(h):
        raise ScopeError(f"{h} is not reduced; the singularity is not isolated")
    script = None if strategy == "auto" else _weight_source(strategy)
    res = CurveResolution(h, [], [], [], [])
    root = LocalModel(QuotientType.smooth(2), h)
    _process(res, root, script, max_blowups, parent_complexity=None)
    if script is not None and next(script, None) is not None:
        raise QresError("weight script has unused entries")
    _assign_strata(res)
    return res


def _record_final(res: CurveResolution, model: LocalModel) -> None:
    n = model.qtype.order()
    divs = model.divisors()
    curve = model.curve_passes()
    if curve and divs:
        res.branches.append(Branch(len(res.branches) + 1, divs[0], model.where, 1, Fraction(1, n)))
    if len(divs) == 2:
        res.finals.append(FinalPoint(divs, n, curve, model.where))


def _process(res, model, script, max_blowups, parent_complexity):
    if is_resolved(model):
        _record_final(res, model)
        return
    kappa = nt_complexity(model)
    # Newton weights must make progress; scripted weights (e.g. repeated
    # ordinary blow-ups) may stall for a step and are bounded by max_blowups.
    if script is None and parent_complexity is not None and kappa >= parent_complexity:
        raise QresError(f"complexity did not drop at {model.where}: {kappa} >= {parent_complexity}")
    res.complexity.append((model.where, kappa))
    if len(res.steps) >= max_blowups:
        raise QresError("too many blow-ups")
    if script is None:
        w = newton_weights(model.h)
    else:
        w = next(script, None)
        if w is None:
            raise ScopeError("weight script exhausted")
    a = len(res.divisors) + 1
    step = blowup_model(model, w, a)
    p, q = w
    d = model.qtype.order()
    # Formula for the strict transform of a compact divisor through the center.
    if model.x_div is not None:
        res.divisor(model.x_div).self_int -= Fraction(p * p, d * p * q)
    if model.y_div is not None:
        res.divisor(model.y_div).self_int -= Fraction(q * q, d * p * q)
    info = DivisorInfo2D(
        id=a, weights=w, nu=step.nu, m=step.m, e=step.e, d=d,
        center_type=model.qtype, chart_types=step.chart_types,
        center_divisors=(model.x_div, model.y_div), center_where=model.where,
        self_int=exc_self_int(d, p, q, step.e),
        orbit_degree=sum(pt.degree for pt in step.points if pt.kind == "orbit"),
    )
    res.divisors.append(info)
    res.steps.append(step)
    for idx, pt in enumerate(step.points):
        if pt.kind == "orbit":
            if pt.transverse:
                res.branches.append(Branch(len(res.branches) + 1, a, f"E{a}:orbit", pt.degree, Fraction(1)))
                continue
            before = len(res.divisors)
            _process(res, pt.model, script, max_blowups, kappa)
            info.children[idx] = before + 1
        else:
            before = len(res.divisors)
            _process(res, pt.model, script, max_blowups, kappa)
            if len(res.divisors) > before:
                info.children[pt.kind] = before + 1


def _assign_strata(res: CurveResolution) -> None:
    for info, step in zip(res.divisors, res.steps):
        t1, t2 = step.chart_types
        h1, h2 = step.h_charts
        x_open = info.center_divisors[1] is None and h1.constant_term() != 0
        y_open = info.center_divisors[0] is None and h2.constant_term() != 0
        info.strata = [
            Stratum2D(info.id, "1", -info.orbit_degree, Fraction(info.m)),
            Stratum2D(info.id, "x", 1 if x_open else 0, Fraction(info.m, multiplicity_L(t1, 0) if t1.orders else 1)),
            Stratum2D(info.id, "y", 1 if y_open else 0, Fraction(info.m, multiplicity_L(t2, 1) if t2.orders else 1)),
        ]
        for s in info.strata:
            if s.active and s.m.denominator != 1:
                raise QresError(f"stratum multiplicity {s.m} of E{info.id},{s.kind} is not an integer")


def curve_strata(res: CurveResolution) -> list[Stratum2D]:
    return [s for d in res.divisors for s in d.strata]


def curve_charpoly(res: CurveResolution) -> CharProduct:
    if not res.divisors:
        return CharProduct.one()
    return acampo([(s.m, s.chi) for s in curve_strata(res)], 1)


def curve_milnor(res: CurveResolution) -> int:
    if not res.divisors:
        return 0
    return milnor_from_strata([(s.m, s.chi) for s in curve_strata(res)], 1)


def resolve_text(text: str, strategy="auto") -> CurveResolution:
    from .wpoly import parse_poly
    return resolve_curve(parse_poly(text, ("x", "y")), strategy)
