"""Resolve the cusp and a few torus knots, printing each step of the tree."""
from qres.curve_resolver import resolve_curve
from qres.monodromy import expand, poly_to_str, to_cyclotomic
from qres.oracles import classical_charpoly, milnor_jacobian
from qres.wpoly import parse_poly

for text in ["x^3+y^2", "x^5+y^3", "(y^2-x^3)^2-4*x^5*y-x^7"]:
    h = parse_poly(text)
    res = resolve_curve(h)
    print(f"== {text}")
    for d in res.divisors:
        print(f"  E{d.id}: weights {d.weights}, nu {d.nu}, multiplicity {d.m}, self-intersection {d.self_int}")
    cp = res.charpoly()
    print(f"  Delta = {poly_to_str(expand(cp))}  ({to_cyclotomic(cp)})")
    # Cross-check with the Jacobian algebra and the classical resolution.
    same = to_cyclotomic(cp) == to_cyclotomic(classical_charpoly(h))
    print(f"  mu = {res.milnor()} (Jacobian {milnor_jacobian(h)}), classical agrees: {same}")
