import json
from fractions import Fraction

import pytest

from conftest import CURVE_CORPUS, germ
from qres.curve_resolver import (LocalModel, blowup_model, is_resolved,
                                 newton_weights, nt_locus, parse_weight_script,
                                 resolve_curve)
from qres.errors import QresError, ScopeError
from qres.monodromy import CharProduct, expand
from qres.quotient_kernel import QuotientType

SMOOTH = QuotientType.smooth(2)


def test_newton_weights():
    assert newton_weights(germ("x^3+y^2")) == (2, 3)
    assert newton_weights(germ("x^2+y^2")) == (1, 1)
    # Two faces with normals (2, 1) and (2, 3): the face of lowest total
    # degree, ties broken towards the larger p + q.
    assert newton_weights(germ("x^5+x^2*y^2+y^6")) == (2, 3)


def test_nt_locus_cusp_is_empty():
    step = blowup_model(LocalModel(SMOOTH, germ("x^3+y^2")), (2, 3), 1)
    assert nt_locus(step) == []
    orbits = [p for p in step.points if p.kind == "orbit"]
    assert len(orbits) == 1 and orbits[0].degree == 1 and orbits[0].transverse


def test_nt_locus_tangency():
    step = blowup_model(LocalModel(SMOOTH, germ("x^2+y^3")), (1, 1), 1)
    [(pt, model)] = nt_locus(step)
    assert pt.kind == "origin_y"
    assert model.h == germ("y+x^2")
    assert not is_resolved(model)


def test_smooth_germ():
    res = resolve_curve(germ("x+y^3"))
    assert res.divisors == [] and res.strata == []
    assert res.charpoly() == CharProduct.one() and res.milnor() == 0


def test_cusp():
    res = resolve_curve(germ("x^3+y^2"))
    [d] = res.divisors
    assert d.weights == (2, 3) and d.nu == 6 and d.m == 6
    assert d.self_int == Fraction(-1, 6)
    strata = {(s.kind): (s.chi, s.m) for s in res.strata}
    assert strata == {"1": (-1, 6), "x": (1, 3), "y": (1, 2)}
    assert expand(res.charpoly()) == [1, -1, 1]
    assert res.milnor() == 2


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)])
def test_torus_knot_single_blowup(p, q):
    res = resolve_curve(germ(f"x^{p}+y^{q}"))
    [d] = res.divisors
    assert d.weights == (q, p) and d.m == p * q


def test_ordinary_triple_point():
    res = resolve_curve(germ("x^2*y+y^3"))
    [d] = res.divisors
    assert d.weights == (1, 1)
    assert res.branch_count() == 3
    assert res.milnor() == 4


def test_two_step_resolution():
    res = resolve_curve(germ("x^5+x^2*y^2+y^6"))
    assert [d.weights for d in res.divisors] == [(2, 3), (4, 1)]
    assert [d.m for d in res.divisors] == [10, 6]
    assert str(res.divisors[1].center_type) == "X(3; 1, 1)"
    assert res.is_tree()


def test_weight_script():
    assert parse_weight_script("2,3; (1,1)") == [(2, 3), (1, 1)]
    res = resolve_curve(germ("x^3+y^2"), [(1, 1), (1, 1), (1, 1)])
    assert len(res.divisors) == 3
    assert res.charpoly() == resolve_curve(germ("x^3+y^2")).charpoly()
    with pytest.raises(QresError):
        resolve_curve(germ("x^3+y^2"), [(2, 3), (1, 1)])


def test_non_reduced_is_out_of_scope():
    with pytest.raises(ScopeError):
        resolve_curve(germ("(y^2-x^3)^2"))


def test_irrational_center_is_out_of_scope():
    # The tangent directions y = +-sqrt(2) x are a degree 2 orbit that needs
    # a further blow-up.
    with pytest.raises(ScopeError):
        resolve_curve(germ("(y^2-2*x^2)^2-x^5"))


@pytest.mark.parametrize("text", CURVE_CORPUS)
def test_dual_graph_and_projection_formula(text):
    res = resolve_curve(germ(text))
    assert res.is_tree()
    for d in res.divisors:
        assert res.projection_defect(d.id) == 0


def test_outputs():
    res = resolve_curve(germ("(y^2-x^3)*(y^2-x^5)"))
    doc = json.loads(res.to_json())
    assert doc["milnor"] == res.milnor()
    assert len(doc["divisors"]) == len(res.divisors)
    dot = res.to_dot()
    assert dot.startswith("graph resolution {")
    assert "E1 (2,3) ν=12 m=12" in dot
