"""Command line pipeline: ``qres curve`` and ``qres surface``.

Exit codes: 0 success, 1 other input errors, 2 out of scope (irrational
centers, non-isolated singularities), 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .curve_resolver import CurveResolution, parse_weight_script, resolve_curve
from .errors import QresError, ScopeError, VerificationError
from .monodromy import CharProduct, expand, poly_to_str, to_cyclotomic
from .oracles import classical_charpoly, milnor_jacobian
from .surface_lifter import (SingularPoint, SurfaceInput, SurfaceResolution,
                             chi_p2_complement, lift_yls, verified_equal,
                             verify_lift)
from .wpoly import WPoly, parse_poly

XYZ = ("x", "y", "z")


@dataclass
class JobConfig:
    mode: str  # "curve" or "surface"
    poly: str | None = None
    germs: list[str] = field(default_factory=list)
    mus: list[int] = field(default_factory=list)
    m: int | None = None
    k: int | None = None
    points: list[str] = field(default_factory=list)
    weights: str | None = None
    verify: bool = False
    output: str = "text"

    def __post_init__(self):
        if self.mode not in ("curve", "surface"):
            raise QresError(f"unknown mode {self.mode}")
        if (self.poly is None) == (not self.germs):
            raise QresError("give exactly one of a polynomial or a --germ list")
        if self.mode == "curve" and self.germs:
            raise QresError("curve mode takes a single polynomial")
        if self.germs and (self.m is None or self.k is None):
            raise QresError("--germ needs explicit --m and --k")
        if self.mus and len(self.mus) != len(self.germs):
            raise QresError("--mu must be given once per --germ")


# surface input analysis ----------------------------------------------------

def homogeneous_parts(f: WPoly) -> dict[int, WPoly]:
    parts: dict[int, WPoly] = {}
    for d in sorted({sum(e) for e in f.terms}):
        parts[d] = f.homogeneous_part(d)
    return parts


def detect_mk(f: WPoly) -> tuple[int, int]:
    """Order m of f and the gap k to its next nonzero homogeneous part."""
    if f.is_zero() or f.constant_term() != 0:
        raise QresError("f must vanish at the origin and be nonzero")
    degrees = sorted({sum(e) for e in f.terms})
    m = degrees[0]
    if m == 1:
        raise ScopeError("f has a nonzero linear part: the surface is smooth")
    if len(degrees) == 1:
        raise QresError("f is homogeneous: there is no k (use curve mode on the cone)")
    return m, degrees[1] - m


def _sym(f: WPoly):
    return f.to_sympy()


def check_reduced(fm: WPoly) -> None:
    _, factors = sympy.factor_list(_sym(fm))
    for fac, mult in factors:
        if mult > 1:
            raise ScopeError(f"tangent cone is not reduced: factor ({fac})^{mult}")


def _rational(v) -> Fraction:
    v = sympy.nsimplify(v) if not isinstance(v, sympy.Rational) else v
    if not v.is_rational:
        raise ScopeError(f"singular point with irrational coordinate {v}; pass germs with --germ")
    return Fraction(int(v.p), int(v.q))


def sing_points(fm: WPoly) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Rational singular points of the projective curve fm = 0, normalized."""
    x, y, z = sympy.symbols("x y z")
    F = _sym(fm)
    grads = [sympy.diff(F, v) for v in (x, y, z)]
    found = []
    charts = [((x, y), {z: 1}, lambda a, b: (a, b, 1)),
              ((x,), {y: 1, z: 0}, lambda a: (a, 1, 0)),
              ((), {x: 1, y: 0, z: 0}, lambda: (1, 0, 0))]
    for free, fixed, point in charts:
        eqs = [sympy.expand(g.subs(fixed)) for g in [F] + grads]
        eqs = [e for e in eqs if e != 0]
        if not free:
            if not eqs:
                found.append(point())
            continue
        if not eqs:
            raise ScopeError("tangent cone has a non-isolated singular locus")
        basis = sympy.groebner(eqs, *free, order="lex")
        if list(basis) == [1]:
            continue
        sols = sympy.solve_poly_system(list(basis), *free)
        if sols is None:
            raise ScopeError("tangent cone has a non-isolated singular locus")
        for sol in sols:
            found.append(point(*[_rational(v) for v in sol]))
    return [tuple(Fraction(c) for c in p) for p in found]


def parse_point(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.replace("[", "").replace("]", "").split(":")
    if len(parts) != 3:
        raise QresError(f"projective point {text!r} must look like a:b:c")
    pt = tuple(Fraction(p.strip()) for p in parts)
    if not any(pt):
        raise QresError("[0:0:0] is not a point")
    return pt


def moving_matrix(P: Sequence[Fraction]) -> list[list[Fraction]]:
    """A matrix with A (0,0,1)^T = P, the other columns standard basis vectors."""
    pivot = next(i for i, c in enumerate(P) if c)
    others = [i for i in range(3) if i != pivot]
    A = [[Fraction(0)] * 3 for _ in range(3)]
    for col, i in enumerate(others):
        A[i][col] = Fraction(1)
    for i in range(3):
        A[i][2] = Fraction(P[i])
    return A


def change_coords(f: WPoly, A: list[list[Fraction]]) -> WPoly:
    v = [WPoly.var(n, XYZ) for n in XYZ]
    images = [sum((v[j] * A[i][j] for j in range(3)), WPoly.const(0, XYZ)) for i in range(3)]
    return f.compose(images)


def local_germ(fm: WPoly, P: Sequence[Fraction]) -> WPoly:
    """Germ of fm at P in affine coordinates centered at P."""
    g = change_coords(fm, moving_matrix(P))
    return g.compose([WPoly.var("x"), WPoly.var("y"), WPoly.const(1)])


def check_condition(f: WPoly, points: Sequence, m: int, k: int) -> list:
    """Points of Sing(C) where f_{m+k} vanishes (empty means the condition holds)."""
    fmk = f.homogeneous_part(m + k)
    return [P for P in points if fmk.evaluate(P) == 0]


def _fmt_point(P) -> str:
    return "[" + ":".join(str(c) for c in P) + "]"


# pipeline --------------------------------------------------------------------

def curve_checks(h: WPoly, res: CurveResolution) -> dict:
    cp = res.charpoly()
    mu = res.milnor()
    out = {"jacobian_mu": milnor_jacobian(h)}
    try:
        out["classical"] = str(to_cyclotomic(classical_charpoly(h)))
        classical_ok = to_cyclotomic(classical_charpoly(h)) == to_cyclotomic(cp)
    except ScopeError as exc:
        out["classical"] = f"skipped: {exc}"
        classical_ok = True
    out["ok"] = bool(classical_ok and out["jacobian_mu"] == mu and cp.degree() == mu
                     and res.is_tree())
    return out


def _delta_dict(cp: CharProduct) -> dict:
    coeffs = expand(cp)
    return {
        "factored": str(cp),
        "cyclotomic": str(to_cyclotomic(cp)),
        "expanded": poly_to_str(coeffs),
        "coefficients": coeffs,
    }


def run_curve(job: JobConfig) -> dict:
    h = parse_poly(job.poly, ("x", "y"))
    strategy = parse_weight_script(job.weights) if job.weights else "auto"
    res = resolve_curve(h, strategy)
    cp = res.charpoly()
    doc = {"mode": "curve", "input": job.poly, "curve": res.to_json_dict(),
           "delta": _delta_dict(cp), "milnor": res.milnor()}
    doc["_resolution"] = res
    if job.verify:
        doc["verification"] = curve_checks(h, res)
    return doc


def _surface_input(job: JobConfig) -> tuple[SurfaceInput, list, WPoly | None]:
    if job.germs:
        germs = [parse_poly(g, ("x", "y")) for g in job.germs]
        inp = SurfaceInput.from_germs(job.m, job.k, germs)
        for pt, mu in zip(inp.points, job.mus):
            if pt.mu != mu:
                raise VerificationError(f"{pt.label}: given mu {mu}, computed {pt.mu}")
        return inp, [None] * len(germs), None
    f = parse_poly(job.poly, XYZ)
    m, k = detect_mk(f)
    if job.m is not None and job.m != m or job.k is not None and job.k != k:
        raise QresError(f"detected (m, k) = ({m}, {k}) differs from the given values")
    fm = f.homogeneous_part(m)
    check_reduced(fm)
    if job.points:
        points = [parse_point(p) for p in job.points]
        for P in points:
            germ = local_germ(fm, P)
            if germ.constant_term() or germ.order() < 2:
                raise QresError(f"{_fmt_point(P)} is not a singular point of the tangent cone")
    else:
        points = sing_points(fm)
    bad = check_condition(f, points, m, k)
    if bad:
        raise ScopeError("f_{m+k} vanishes at singular points " + ", ".join(_fmt_point(P) for P in bad))
    pts = [SingularPoint.from_germ(f"P{i + 1}", local_germ(fm, P)) for i, P in enumerate(points)]
    return SurfaceInput(m, k, pts), points, f


def run_surface(job: JobConfig) -> dict:
    inp, coords, _ = _surface_input(job)
    sres = lift_yls(inp)
    cp = sres.charpoly()
    doc = {
        "mode": "surface",
        "input": job.poly if job.poly is not None else {"germs": job.germs, "m": job.m, "k": job.k},
        "m": sres.m,
        "k": sres.k,
        "chi_complement": chi_p2_complement(sres.m, inp.sum_mu),
        "points": [
            {"label": p.label, "coords": None if P is None else _fmt_point(P), "germ": str(p.germ),
             "mu": p.mu, "curve": p.resolution.to_json_dict()}
            for p, P in zip(inp.points, coords)
        ],
        "surface": sres.to_json_dict(),
        "delta": _delta_dict(cp),
        "milnor": sres.milnor(),
    }
    doc["_resolution"] = sres
    if job.verify:
        doc["verification"] = surface_checks(sres)
    return doc


def surface_checks(sres: SurfaceResolution) -> dict:
    report = verify_lift(sres)
    curves = {p.label: curve_checks(p.germ, p.resolution) for p in sres.input.points}
    out = {
        "chart_checks": len(report.checks),
        "chart_failures": [f"{c.name} at {c.where}: expected {c.expected}, got {c.got}"
                           for c in report.failures()],
        "closed_formula": verified_equal(sres),
        "milnor_identity": sres.milnor() == sres.closed_milnor(),
        "degree": len(expand(sres.charpoly())) - 1 == sres.milnor(),
        "curves": curves,
    }
    out["ok"] = bool(report.ok and out["closed_formula"] and out["milnor_identity"]
                     and out["degree"] and all(c["ok"] for c in curves.values()))
    return out


def run(job: JobConfig) -> dict:
    """Run the pipeline and return the result document (plus the live resolution)."""
    return run_curve(job) if job.mode == "curve" else run_surface(job)


def render(doc: dict, output: str) -> str:
    res = doc["_resolution"]
    if output == "json":
        return json.dumps({k: v for k, v in doc.items() if k != "_resolution"}, indent=2)
    if output == "dot":
        return res.to_dot()
    if output == "factored":
        return doc["delta"]["factored"]
    if output == "expanded":
        return doc["delta"]["expanded"]
    lines = []
    if doc["mode"] == "curve":
        for d in res.divisors:
            lines.append(f"E{d.id}: weights {d.weights} nu={d.nu} m={d.m} self={d.self_int}")
    else:
        lines.append(f"m={doc['m']} k={doc['k']} chi(P2 - C)={doc['chi_complement']}")
        for p in doc["points"]:
            lines.append(f"{p['label']} {p['coords'] or ''} germ {p['germ']} mu={p['mu']}".replace("  ", " "))
        for d in res.divisors:
            lines.append(f"{d.point} E{d.id}: weights {d.weights} multiplicity {d.multiplicity}")
    lines.append(f"Delta = {doc['delta']['factored']}")
    lines.append(f"      = {doc['delta']['cyclotomic']}")
    lines.append(f"      = {doc['delta']['expanded']}")
    lines.append(f"mu = {doc['milnor']}")
    if "verification" in doc:
        lines.append("verification: " + ("ok" if doc["verification"]["ok"] else "MISMATCH"))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qres", description="Q-resolutions and monodromy of curve and surface germs.")
    sub = parser.add_subparsers(dest="mode", required=True)

    def outputs(p):
        g = p.add_mutually_exclusive_group()
        for name in ("json", "dot", "factored", "expanded"):
            g.add_argument(f"--{name}", dest="output", action="store_const", const=name)
        p.set_defaults(output="text")
        p.add_argument("--verify", action="store_true", help="run the oracle and chart-level checks")

    c = sub.add_parser("curve", help="plane curve germ at the origin")
    c.add_argument("poly")
    c.add_argument("--weights", help='weight script such as "2,3;1,1"')
    outputs(c)

    s = sub.add_parser("surface", help="superisolated or Yomdin-Le surface germ")
    s.add_argument("poly", nargs="?")
    s.add_argument("--sing", action="append", default=[], metavar="a:b:c",
                   help="singular point of the tangent cone (repeatable)")
    s.add_argument("--germ", action="append", default=[], help="local germ h(x,y) (repeatable)")
    s.add_argument("--mu", action="append", default=[], type=int, help="expected Milnor number per germ")
    s.add_argument("--m", type=int)
    s.add_argument("--k", type=int)
    outputs(s)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "curve":
            job = JobConfig("curve", poly=args.poly, weights=args.weights,
                            verify=args.verify, output=args.output)
        else:
            job = JobConfig("surface", poly=args.poly, germs=args.germ, mus=args.mu, m=args.m,
                            k=args.k, points=args.sing, verify=args.verify, output=args.output)
        doc = run(job)
        print(render(doc, job.output))
    except ScopeError as exc:
        print(f"qres: out of scope: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"qres: verification failed: {exc}", file=sys.stderr)
        return 3
    except QresError as exc:
        print(f"qres: {exc}", file=sys.stderr)
        return 1
    if job.verify and not doc["verification"]["ok"]:
        print("qres: verification mismatch", file=sys.stderr)
        print(json.dumps(doc["verification"], indent=2, default=str), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
