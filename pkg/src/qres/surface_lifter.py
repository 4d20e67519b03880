"""Lift plane-curve Q-resolutions to superisolated and Yomdin-Le surfaces.

For f = f_m + f_{m+k} + ... the blow-up of the origin gives E0 = P^2 and,
near each singular point P of the tangent cone C = {f_m = 0}, the local
equation z^k + h_P(x, y) = 0 with E0 = {z = 0}.  Every weighted blow-up of
the curve resolution at P lifts to one weighted blow-up in dimension 3;
the lifted data (weights, multiplicities, strata) follow from the curve
data by closed formulas.  ``verify_lift`` re-derives them from the
three dimensional chart tables.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .curve_resolver import CurveResolution, Stratum2D, resolve_curve
from .errors import QresError
from .intersection_theory import bezout_quotient
from .monodromy import (CharProduct, acampo, closed_yls, milnor_from_strata,
                        to_cyclotomic)
from .quotient_kernel import (QuotientType, blowup_3d, character_order,
                              group_from_elements, lcm, normalize_2d,
                              pseudo_reflection_orders, restrict, same_group,
                              stabilizer)
from .wpoly import WPoly, strict_transform, w_order


def chi_p2_complement(m: int, sum_mu: int) -> int:
    """Euler characteristic of P^2 minus a reduced curve of degree m."""
    if m < 1:
        raise QresError("degree must be positive")
    return m * m - 3 * m + 3 - sum_mu


@dataclass
class SingularPoint:
    label: str
    germ: WPoly
    resolution: CurveResolution
    mu: int

    @classmethod
    def from_germ(cls, label: str, germ: WPoly, strategy="auto") -> "SingularPoint":
        res = resolve_curve(germ, strategy)
        return cls(label, germ, res, res.milnor())


@dataclass
class SurfaceInput:
    m: int
    k: int
    points: list[SingularPoint] = field(default_factory=list)

    def __post_init__(self):
        if self.m < 2:
            raise QresError("the tangent cone must have degree at least 2")
        if self.k < 1:
            raise QresError("k must be at least 1")

    @property
    def sum_mu(self) -> int:
        return sum(p.mu for p in self.points)

    @classmethod
    def from_germs(cls, m: int, k: int, germs: Sequence, strategy="auto") -> "SurfaceInput":
        pts = [SingularPoint.from_germ(f"P{i + 1}", g, strategy) for i, g in enumerate(germs)]
        return cls(m, k, pts)


@dataclass
class Stratum3D:
    point: str | None  # None for E0
    divisor: int  # 0 for E0
    kind: str  # "0", "1", "x", "y" or "xy"
    chi: int
    m: Fraction | None

    @property
    def active(self) -> bool:
        return self.chi != 0


@dataclass
class DivisorInfo3D:
    point: str
    id: int
    weights: tuple[int, int, int]
    multiplicity: int
    curve_weights: tuple[int, int]
    nu: int
    m2: int
    strata: list[Stratum3D]

    @property
    def key(self) -> tuple[str, int]:
        return (self.point, self.id)


@dataclass
class SurfaceResolution:
    input: SurfaceInput
    e0: Stratum3D
    divisors: list[DivisorInfo3D]

    @property
    def m(self) -> int:
        return self.input.m

    @property
    def k(self) -> int:
        return self.input.k

    @property
    def strata(self) -> list[Stratum3D]:
        return [self.e0] + [s for d in self.divisors for s in d.strata]

    def charpoly(self) -> CharProduct:
        return acampo([(s.m, s.chi) for s in self.strata if s.active], 2)

    def milnor(self) -> int:
        return milnor_from_strata([(s.m, s.chi) for s in self.strata if s.active], 2)

    def closed_formula(self) -> CharProduct:
        return closed_yls(self.e0.chi, self.m, self.k,
                          [p.resolution.charpoly() for p in self.input.points])

    def closed_milnor(self) -> int:
        return (self.m - 1) ** 3 + self.k * self.input.sum_mu

    def to_json_dict(self) -> dict:
        from .monodromy import expand
        cp = self.charpoly()
        return {
            "m": self.m,
            "k": self.k,
            "E0": {"chi": self.e0.chi, "m": self.m},
            "points": [{"label": p.label, "germ": str(p.germ), "mu": p.mu} for p in self.input.points],
            "divisors": [
                {
                    "point": d.point,
                    "id": d.id,
                    "weights": list(d.weights),
                    "multiplicity": d.multiplicity,
                    "strata": [{"j": s.kind, "chi": s.chi, "m": None if s.m is None else str(s.m),
                                "active": s.active} for s in d.strata],
                }
                for d in self.divisors
            ],
            "charpoly": {"factored": str(cp), "expanded": expand(cp)},
            "milnor": self.milnor(),
            "closed_milnor": self.closed_milnor(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_dot(self) -> str:
        lines = ["graph surface {", f'  E0 [label="E0 m={self.m} chi={self.e0.chi}"];']
        for d in self.divisors:
            name = f"{d.point}_E{d.id}"
            lines.append(f'  {name} [label="{d.point} E{d.id} {d.weights} M={d.multiplicity}"];')
            lines.append(f"  E0 -- {name};")
        for p in self.input.points:
            for u, v, _ in p.resolution.gamma():
                lines.append(f"  {p.label}_E{u} -- {p.label}_E{v};")
        lines.append("}")
        return "\n".join(lines)


def lifted_weights(p: int, q: int, nu: int, k: int) -> tuple[int, int, int]:
    g = gcd(k, nu)
    return (k * p // g, k * q // g, nu // g)


def lifted_multiplicity(m: int, k: int, m_a: int) -> int:
    return (m + k) * m_a // gcd(k, m_a)


def _lift_one(chi: int, m2: Fraction, m: int, k: int) -> tuple[int, Fraction | None]:
    if m2.denominator != 1:
        if chi:
            raise QresError(f"active curve stratum with fractional multiplicity {m2}")
        return 0, None
    m2 = int(m2)
    g = gcd(k, m2)
    return -g * chi, Fraction((m + k) * m2, g)


def strata_yls(curve_strata: Sequence[Stratum2D], m: int, k: int, point: str = "P",
               first_divisor: int = 1) -> list[Stratum3D]:
    """Three dimensional strata over the curve strata of one singular point."""
    out = []
    seen = []
    for s in curve_strata:
        if s.divisor not in seen:
            seen.append(s.divisor)
            if s.divisor == first_divisor:
                out.append(Stratum3D(point, s.divisor, "xy", 1, Fraction(m + k)))
            else:
                out.append(Stratum3D(point, s.divisor, "xy", 0, None))
        chi, mult = _lift_one(s.chi, s.m, m, k)
        out.append(Stratum3D(point, s.divisor, s.kind, chi, mult))
    return out


def strata_sis(curve_strata: Sequence[Stratum2D], m: int, point: str = "P") -> list[Stratum3D]:
    return strata_yls(curve_strata, m, 1, point)


def lift_yls(inp: SurfaceInput) -> SurfaceResolution:
    m, k = inp.m, inp.k
    divisors = []
    for pt in inp.points:
        res = pt.resolution
        strata = strata_yls(res.strata, m, k, pt.label)
        for d in res.divisors:
            mine = [s for s in strata if s.divisor == d.id]
            divisors.append(DivisorInfo3D(
                point=pt.label, id=d.id,
                weights=lifted_weights(d.p, d.q, d.nu, k),
                multiplicity=lifted_multiplicity(m, k, d.m),
                curve_weights=d.weights, nu=d.nu, m2=d.m, strata=mine))
    e0 = Stratum3D(None, 0, "0", chi_p2_complement(m, inp.sum_mu), Fraction(m))
    return SurfaceResolution(inp, e0, divisors)


def lift_sis(inp: SurfaceInput) -> SurfaceResolution:
    if inp.k != 1:
        raise QresError("lift_sis needs k = 1; use lift_yls")
    return lift_yls(inp)


# chart level verification --------------------------------------------------

@dataclass
class Check:
    name: str
    where: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)
    strata: list[Stratum3D] = field(default_factory=list)
    surfaces: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name, where, expected, got):
        self.checks.append(Check(name, where, expected, got))

    def summary(self) -> str:
        bad = self.failures()
        head = f"{len(self.checks)} checks, {len(bad)} failed"
        return "\n".join([head] + [f"  FAIL {c.name} at {c.where}: expected {c.expected}, got {c.got}" for c in bad])


@dataclass
class _Model3D:
    group: QuotientType
    F: WPoly
    N: tuple[int, int, int]
    alpha: int
    beta: int


XYZ = ("x", "y", "z")


def _lift_poly_2d(h: WPoly, alpha: int, beta: int) -> WPoly:
    return WPoly({(a * alpha, b * beta, 0): c for (a, b), c in h.terms.items()}, XYZ)


def _on_axis(F: WPoly, axis: int) -> dict[int, Fraction]:
    """Restriction of F to a coordinate axis as {power: coeff}."""
    return {e[axis]: c for e, c in F.terms.items() if all(e[j] == 0 for j in range(3) if j != axis)}


def verify_lift(sres: SurfaceResolution) -> VerifyReport:
    """Recompute the lifted data from the three dimensional chart tables."""
    report = VerifyReport()
    k = sres.k
    lemma = {(s.point, s.divisor, s.kind): s for s in sres.strata if s.point is not None}
    mults = {d.key: d.multiplicity for d in sres.divisors}
    for pt in sres.input.points:
        res = pt.resolution
        if not res.divisors:
            continue
        F = WPoly.monomial((0, 0, k), 1, XYZ) + pt.germ.with_vars(XYZ)
        root = _Model3D(QuotientType.smooth(3), F, (0, 0, sres.m), 1, 1)
        _visit(report, res, pt.label, 1, root, k, lemma, mults)
    return report


def _visit(report, res, label, b, M, k, lemma, mults):
    info = res.divisor(b)
    step = res.steps[b - 1]
    where = f"{label}:E{b}"
    p, q = info.weights
    lam = lcm(M.alpha // gcd(M.alpha, p), M.beta // gcd(M.beta, q))
    p3, q3, nu3 = lam * p // M.alpha, lam * q // M.beta, lam * info.nu
    H = WPoly({e: c for e, c in M.F.terms.items() if e[2] == 0}, XYZ)
    report.add("weighted order of the curve part", where, nu3, w_order(H, (p3, q3, 0)))
    raw = (k * p3, k * q3, nu3)
    g = gcd(*raw)
    omega = tuple(v // g for v in raw)
    P, Q, R = omega
    if M.alpha == 1 and M.beta == 1:
        report.add("3D weights", where, lifted_weights(p, q, info.nu, k), omega)
    ordF = w_order(M.F, omega)
    report.add("order of z^k + H", where, k * R, ordF)
    blow = blowup_3d(M.group, omega)
    G1, G2, G3 = (c.quotient for c in blow.charts)
    Nx, Ny, Nz = M.N
    Nb = P * Nx + Q * Ny + R * Nz + ordF
    F1 = strict_transform(M.F, omega, 1)[1]
    F2 = strict_transform(M.F, omega, 2)[1]
    F3 = strict_transform(M.F, omega, 3)[1]
    report.surfaces[(label, b)] = f"P^2{omega}/{M.group}"

    # Multiplicity of E_b, read in two charts.
    K1 = stabilizer(G1, (0,))
    K2 = stabilizer(G2, (1,))
    report.add("multiplicity chart 1", where, Fraction(mults[(label, b)]), Fraction(Nb, len(K1)))
    report.add("multiplicity chart 2", where, Fraction(mults[(label, b)]), Fraction(Nb, len(K2)))

    # The restriction to E0 = {z = 0} must be the curve chart.
    charts2d = []
    for i, (G, Fi, h2d, t2d) in enumerate(((G1, F1, step.h_charts[0], step.chart_types[0]),
                                            (G2, F2, step.h_charts[1], step.chart_types[1]))):
        plane = restrict(G, (0, 1))
        normal, _ = normalize_2d(plane)
        report.add(f"E0 chart {i + 1} type", where, True, same_group(normal, t2d))
        a_i, b_i = pseudo_reflection_orders(plane)
        restricted = WPoly({e: c for e, c in Fi.terms.items() if e[2] == 0}, XYZ)
        report.add(f"E0 chart {i + 1} equation", where, _lift_poly_2d(h2d, a_i, b_i), restricted)
        charts2d.append((a_i, b_i))

    # Strata of E_b.
    s1 = [g for g in G1.elements() if g[1] == 0]
    lz_s = character_order(s1, 2)
    report.add("fiber count divides k", where, 0, k % lz_s)
    lem = lemma[(label, b, "1")]
    chi_base = res.divisor(b).strata[0].chi
    got = [(chi_base * (-k // lz_s)), Fraction(Nb, len(K1))]
    _compare_stratum(report, where + ",1", lem, got)
    report.add("gcd points on generic fibers", where, gcd(k, info.m), k // lz_s)

    curve_x = F1.constant_term() == 0
    open_x = Ny == 0 and not curve_x
    lz_g1 = character_order(G1.elements(), 2)
    t1 = [g for g in G1.elements() if g[2] == 0]
    m_x = Fraction(Nb, character_order(t1, 0))
    _compare_stratum(report, where + ",x", lemma[(label, b, "x")], [(-k // lz_g1) if open_x else 0, m_x])
    m2x = info.strata[1].m
    if not curve_x and not Ny and m2x.denominator == 1:
        report.add("gcd points on the x line", where, gcd(k, int(m2x)), k // lz_g1)

    curve_y = F2.constant_term() == 0
    open_y = Nx == 0 and not curve_y
    lz_g2 = character_order(G2.elements(), 2)
    t2 = [g for g in G2.elements() if g[2] == 0]
    m_y = Fraction(Nb, character_order(t2, 1))
    _compare_stratum(report, where + ",y", lemma[(label, b, "y")], [(-k // lz_g2) if open_y else 0, m_y])
    m2y = info.strata[2].m
    # The gcd count is only checked on lines meeting no earlier divisor;
    # on E_a cap E_b the chart count can be smaller.
    if not curve_y and not Nx and m2y.denominator == 1:
        report.add("gcd points on the y line", where, gcd(k, int(m2y)), k // lz_g2)

    open_xy = Nx == 0 and Ny == 0 and F3.constant_term() != 0
    m_xy = Fraction(Nb, character_order(G3.elements(), 2))
    _compare_stratum(report, where + ",xy", lemma[(label, b, "xy")], [1 if open_xy else 0, m_xy])

    # (E0 cap E_b) . (V^ cap E_b) on E_b: Bezout against local numbers.
    line1 = _on_axis(F1, 1)
    ord1, deg1 = min(line1), max(line1)
    ly = character_order(G1.elements(), 1)
    nonorigin = Fraction(deg1 - ord1, ly * lz_s)
    origin1 = Fraction(ord1, restrict(G1, (1, 2)).order())
    line2 = _on_axis(F2, 0)
    origin2 = Fraction(min(line2), restrict(G2, (0, 2)).order())
    total = nonorigin + origin1 + origin2
    report.add("Bezout on E_b", where, bezout_quotient(R, k * R, omega, M.group), total)
    curve_nonorigin = sum(pt.degree * pt.multiplicity for pt in step.points if pt.kind == "orbit")
    report.add("E0.V^ versus C.E scaled by O(E_b,z)", where, Fraction(curve_nonorigin, lz_s), nonorigin)
    if b == 1:
        report.add("O(E_1,z) = k/gcd(k, nu_1)", where, k // gcd(k, info.nu), lz_s)

    # Children.
    for key, child in info.children.items():
        if key == "origin_x":
            a1, b1 = charts2d[0]
            cm = _Model3D(G1, F1, (Nb, Ny, Nz), a1, b1)
        elif key == "origin_y":
            a2, b2 = charts2d[1]
            cm = _Model3D(G2, F2, (Nx, Nb, Nz), a2, b2)
        else:
            pt = step.points[key]
            sub = group_from_elements(s1, 3)
            alpha = character_order(s1, 0)
            report.add("orbit chart pseudo-reflections", where, charts2d[0][0], alpha)
            local = _lift_poly_2d(pt.model.h, alpha, 1) + WPoly.monomial((0, 0, k), 1, XYZ)
            cm = _Model3D(sub, local, (Nb, 0, Nz), alpha, 1)
        _visit(report, res, label, child, cm, k, lemma, mults)


def _compare_stratum(report, where, lem: Stratum3D, got):
    chi, mult = got
    report.strata.append(Stratum3D(lem.point, lem.divisor, lem.kind, chi, mult if chi else None))
    report.add("stratum chi", where, lem.chi, chi)
    if lem.chi or chi:
        report.add("stratum multiplicity", where, lem.m, mult)


def verified_equal(sres: SurfaceResolution) -> bool:
    """A'Campo from the lifted strata equals the closed formula as cyclotomic vectors."""
    return to_cyclotomic(sres.charpoly()) == to_cyclotomic(sres.closed_formula())
