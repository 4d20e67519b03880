import pytest

from qres.wpoly import parse_poly

# Plane curve germs with rational centers throughout their resolution.
CURVE_CORPUS = [
    "x^3+y^2",
    "x^5+y^2",
    "x^4+y^3",
    "x^5+y^3",
    "x^3+y^4",
    "x^3+x*y^3",
    "x^3+y^5",
    "y^2-x^7",
    "x^2*y+y^5",
    "x^4-y^4",
    "x*y*(x+y)",
    "(y^2-x^3)*(y^2-x^5)",
    "(y-x^2)^2-x^5",
    "(y^2-x^3)^2-4*x^5*y-x^7",
    "x*(y^2-x^3)",
    "x*y",
    "x^2+y^2",
    "x^5+x^2*y^2+y^6",
    "x^2*y+y^3",
    "x^2*y+y^4",
]

# Surfaces given by a full equation, each with rational singular points.
SURFACE_CORPUS = [
    "y^2*z-x^3+z^4",
    "y^2*z-x^3+z^5",
    "y^2*z-x^3+z^6",
    "x*y*z+x^4+y^4+z^4",
    "x^3+y^3+z^3+x^4",
    "x^2*z^2+y^3*z+x^4+y^5+z^5",
    "(y^2-x^2)*(y^2*z-x^3+x^2*z)*z+y^7+z^7",
    "(x^2-y^2)*(x^2-z^2)*(y^2-z^2)+x^8+y^8+z^8",
]

# (germ, degree m of the tangent cone, generic terms of degree m): the cone
# z^(m - i - j) x^i y^j summed over the germ plus the extra terms has the germ
# type at [0:0:1] and only rational singular points.
CONE_GERMS = [
    ("x^3+y^2", 4, "x^4+y^4"),
    ("x^5+y^2", 6, "x^6+y^6"),
    ("x^4+y^3", 5, "x^5+y^5"),
    ("x^5+y^3", 6, "x^6+y^6"),
    ("x^3+y^4", 5, "x^5+y^5"),
    ("x^3+x*y^3", 5, "x^5+y^5"),
    ("x^3+y^5", 6, "x^6+y^6"),
    ("y^2-x^7", 8, "x^8+y^8"),
    ("x^4-y^4", 5, "x^5+2*y^5"),
    ("x*y*(x+y)", 4, "x^4+y^4"),
    ("(y^2-x^3)*(y^2-x^5)", 9, "x^9+y^9"),
    ("(y-x^2)^2-x^5", 6, "x^6+y^6"),
    ("(y^2-x^3)^2-4*x^5*y-x^7", 8, "x^8+y^8"),
    ("x*(y^2-x^3)", 5, "x^5+y^5"),
    ("x^5+x^2*y^2+y^6", 7, "x^7+y^7"),
    ("x^2*y+y^4", 5, "x^5+y^5"),
]


def cone_surface(text, m, extra, k):
    h = parse_poly(text, ("x", "y"))
    terms = [f"({c})*x^{i}*y^{j}*z^{m - i - j}" for (i, j), c in h.terms.items()]
    return "+".join(terms) + f"+{extra}+z^{m + k}"


GENERATED_SURFACES = [cone_surface(g, m, extra, k) for g, m, extra in CONE_GERMS for k in (1, 2, 3, 6)]


def germ(text):
    return parse_poly(text, ("x", "y"))


@pytest.fixture
def cusp():
    return germ("x^3+y^2")
