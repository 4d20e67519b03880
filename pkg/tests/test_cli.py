import json
from fractions import Fraction

import pytest

from qres.cli import (JobConfig, check_condition, detect_mk, local_germ, main,
                      run, sing_points)
from qres.errors import QresError, ScopeError
from qres.wpoly import parse_poly

XYZ = ("x", "y", "z")


def P3(text):
    return parse_poly(text, XYZ)


def test_detect_mk():
    assert detect_mk(P3("y^2*z-x^3+z^4")) == (3, 1)
    assert detect_mk(P3("y^2*z-x^3+z^5")) == (3, 2)
    with pytest.raises(ScopeError):
        detect_mk(P3("x+y+z"))
    with pytest.raises(QresError):
        detect_mk(P3("y^2*z-x^3"))


def test_sing_points_cusp():
    fm = P3("y^2*z-x^3")
    assert sing_points(fm) == [(0, 0, 1)]
    assert local_germ(fm, (0, 0, 1)) == parse_poly("y^2-x^3")


def test_sing_points_smooth_conic():
    assert sing_points(P3("x^2+y^2-z^2")) == []


def test_node_moved_to_111():
    fm = P3("(y-z)^2*z-(x-z)^3-(x-z)^2*z")
    pts = sing_points(fm)
    assert pts == [(Fraction(1), Fraction(1), Fraction(1))]
    h = local_germ(fm, pts[0])
    assert h.constant_term() == 0 and h.order() == 2
    doc = run(JobConfig("curve", poly=str(h), verify=True))
    assert doc["milnor"] == 1 and doc["verification"]["ok"]


def test_sing_points_at_infinity():
    # Lines x = 0, y = 0 and x = y meet at [0:0:1]; the line z = 0 adds three more.
    pts = sing_points(P3("x*y*(x-y)*z"))
    assert set(pts) == {(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 0)}


def test_irrational_points_are_out_of_scope():
    with pytest.raises(ScopeError):
        sing_points(P3("(x^2-2*z^2)*(y^2-z^2)*z"))


def test_check_condition():
    f = P3("y^2*z-x^3+z^4")
    assert check_condition(f, [(0, 0, 1)], 3, 1) == []
    g = P3("y^2*z-x^3+x^4")
    assert check_condition(g, [(0, 0, 1)], 3, 1) == [(0, 0, 1)]
    assert check_condition(f, [], 3, 1) == []


def test_run_examples():
    doc = run(JobConfig("surface", poly="y^2*z-x^3+z^4"))
    assert doc["milnor"] == 10
    assert doc["delta"]["expanded"] == "t^10 + t^9 + t^8 - t^6 - t^5 - t^4 + t^2 + t + 1"
    doc = run(JobConfig("surface", poly="y^2*z-x^3+z^5"))
    assert doc["milnor"] == 12
    assert doc["delta"]["cyclotomic"] == "Phi_3^2Phi_15"
    doc = run(JobConfig("curve", poly="x^3+y^2"))
    assert doc["milnor"] == 2 and doc["delta"]["expanded"] == "t^2 - t + 1"


def test_verify_is_read_only():
    plain = run(JobConfig("surface", poly="y^2*z-x^3+z^5"))
    checked = run(JobConfig("surface", poly="y^2*z-x^3+z^5", verify=True))
    assert checked["verification"]["ok"]
    for key in ("delta", "milnor", "points", "surface"):
        assert plain[key] == checked[key]


def test_job_config_validation():
    with pytest.raises(QresError):
        JobConfig("surface")
    with pytest.raises(QresError):
        JobConfig("surface", poly="x^3", germs=["x^2+y^3"])
    with pytest.raises(QresError):
        JobConfig("surface", germs=["x^2+y^3"])


def test_main_outputs(capsys):
    assert main(["curve", "x^3+y^2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["milnor"] == 2 and doc["delta"]["coefficients"] == [1, -1, 1]
    assert main(["curve", "x^3+y^2", "--dot"]) == 0
    assert "(2,3) ν=6 m=6 self=-1/6" in capsys.readouterr().out
    assert main(["surface", "y^2*z-x^3+z^4", "--factored"]) == 0
    assert capsys.readouterr().out.strip() == "(t^24-1)(t^4-1)(t^3-1)(t^12-1)^-1(t^8-1)^-1(t-1)^-1"
    assert main(["surface", "--germ", "y^2-x^3", "--mu", "2", "--m", "3", "--k", "2", "--expanded"]) == 0
    assert capsys.readouterr().out.strip() == "t^12 + t^11 + t^10 + t^7 + t^6 + t^5 + t^2 + t + 1"


def test_main_exit_codes(capsys):
    assert main(["surface", "y^2*z-x^3+x^4"]) == 2
    assert main(["surface", "x+y+z"]) == 2
    assert main(["curve", "(y^2-2*x^2)^2-x^5"]) == 2
    assert main(["surface", "--germ", "y^2-x^3", "--mu", "3", "--m", "3", "--k", "2"]) == 3
    assert main(["surface", "y^2*z-x^3+z^4", "--verify"]) == 0
    assert main(["surface", "y^2*z-x^3+z^5", "--sing", "1:0:0"]) == 1
    capsys.readouterr()
