"""Exact sparse polynomials in two or three variables with weighted orders.

Coefficients are Fractions and polynomials are immutable.  Factoring over
the rationals is delegated to sympy; everything else is done here with
plain dictionaries.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import QresError, ScopeError

Exponent = tuple


class WPoly:
    """A polynomial stored as {exponent tuple: Fraction}."""

    __slots__ = ("terms", "vars", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, vars: Sequence[str] = ("x", "y")):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c, vars=("x", "y")) -> "WPoly":
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def var(cls, name: str, vars=("x", "y")) -> "WPoly":
        exp = tuple(1 if v == name else 0 for v in vars)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name}")
        return cls({exp: 1}, vars)

    @classmethod
    def monomial(cls, exp, c=1, vars=("x", "y")) -> "WPoly":
        return cls({tuple(exp): c}, vars)

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] | None = None) -> "WPoly":
        return parse_poly(text, vars)

    # basic protocol ---------------------------------------------------
    def _coerce(self, other) -> "WPoly":
        if isinstance(other, WPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return WPoly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0) + c
        return WPoly(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return WPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return WPoly(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, WPoly) else other
        if other is NotImplemented:
            return False
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"WPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[exp]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exp) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def degree(self) -> int:
        if not self.terms:
            raise QresError("degree of the zero polynomial")
        return max(sum(e) for e in self.terms)

    def order(self) -> int:
        """Lowest total degree of a monomial (the multiplicity at the origin)."""
        if not self.terms:
            raise QresError("order of the zero polynomial")
        return min(sum(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def min_exponent(self, i: int) -> int:
        return min(e[i] for e in self.terms)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(point, exp):
                term *= Fraction(v) ** e
            total += term
        return total

    def diff(self, i: int) -> "WPoly":
        out = {}
        for exp, c in self.terms.items():
            if exp[i]:
                new = list(exp)
                new[i] -= 1
                out[tuple(new)] = c * exp[i]
        return WPoly(out, self.vars)

    def homogeneous_part(self, degree: int, weights: Sequence[int] | None = None) -> "WPoly":
        weights = weights or (1,) * len(self.vars)
        return WPoly({e: c for e, c in self.terms.items()
                      if sum(w * x for w, x in zip(weights, e)) == degree}, self.vars)

    def divide_monomial(self, exp) -> "WPoly":
        out = {}
        for e, c in self.terms.items():
            new = tuple(a - b for a, b in zip(e, exp))
            if any(x < 0 for x in new):
                raise QresError(f"{self} is not divisible by the monomial {exp}")
            out[new] = c
        return WPoly(out, self.vars)

    def map_exponents(self, fn) -> "WPoly":
        out: dict = {}
        for e, c in self.terms.items():
            new = tuple(fn(e))
            out[new] = out.get(new, 0) + c
        return WPoly(out, self.vars)

    def compose(self, images: Sequence["WPoly"]) -> "WPoly":
        """Substitute images[i] for the i-th variable."""
        target_vars = images[0].vars
        result = WPoly({}, target_vars)
        cache: dict = {}
        for exp, c in self.terms.items():
            term = WPoly.const(c, target_vars)
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            result = result + term
        return result

    def with_vars(self, vars: Sequence[str]) -> "WPoly":
        """Same coefficients, renamed or padded variables (padding with zero exponents)."""
        vars = tuple(vars)
        n = len(vars)
        if n < len(self.vars):
            if any(any(e[n:]) for e in self.terms):
                raise QresError("cannot drop a variable that occurs")
            return WPoly({e[:n]: c for e, c in self.terms.items()}, vars)
        pad = (0,) * (n - len(self.vars))
        return WPoly({e + pad: c for e, c in self.terms.items()}, vars)

    # sympy bridge -----------------------------------------------------
    def to_sympy(self):
        import sympy
        syms = sympy.symbols(self.vars)
        expr = sympy.Integer(0)
        for exp, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, exp):
                term *= s ** e
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr, vars=("x", "y")) -> "WPoly":
        import sympy
        syms = sympy.symbols(vars)
        poly = sympy.Poly(sympy.expand(expr), *syms)
        out = {}
        for exp, c in poly.terms():
            c = sympy.Rational(c)
            if not c.is_Rational:
                raise ScopeError(f"coefficient {c} is not rational")
            out[tuple(exp)] = Fraction(int(c.p), int(c.q))
        return cls(out, vars)


# parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xyz])|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise QresError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("var", var))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.i = 0
        self.vars = vars

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self) -> WPoly:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        result = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> WPoly:
        result = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                result = result * rhs
            else:
                if any(any(e) for e in rhs.terms) or rhs.is_zero():
                    raise QresError("division is only allowed by a nonzero constant")
                result = result * WPoly.const(1 / rhs.constant_term(), self.vars)
        return result

    def power(self) -> WPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num":
                raise QresError("exponent must be a nonnegative integer")
            base = base ** value
        return base

    def atom(self) -> WPoly:
        kind, value = self.take()
        if kind == "num":
            return WPoly.const(value, self.vars)
        if kind == "var":
            if value not in self.vars:
                raise QresError(f"variable {value} not among {self.vars}")
            return WPoly.var(value, self.vars)
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise QresError("unbalanced parentheses")
            return inner
        if (kind, value) == ("op", "-"):
            return -self.power()
        raise QresError(f"unexpected token {value!r}")


def parse_poly(text: str, vars: Sequence[str] | None = None) -> WPoly:
    """Parse sums of terms like ``-3/2*x^2*y + y^3``; parentheses are accepted too."""
    if vars is None:
        vars = ("x", "y", "z") if "z" in text else ("x", "y")
    tokens = _tokenize(text)
    if not tokens:
        raise QresError("empty polynomial")
    parser = _Parser(tokens, tuple(vars))
    result = parser.expr()
    if parser.i != len(tokens):
        raise QresError(f"trailing input in {text!r}")
    return result


# weighted structure --------------------------------------------------------

@dataclass(frozen=True)
class WHomogPiece:
    weights: tuple
    degree: int
    poly: WPoly

    def __post_init__(self):
        for exp in self.poly.terms:
            if sum(w * e for w, e in zip(self.weights, exp)) != self.degree:
                raise QresError(f"{self.poly} is not {self.weights}-homogeneous of degree {self.degree}")


def _wdeg(exp, w) -> int:
    return sum(a * b for a, b in zip(exp, w))


def w_order(h: WPoly, w: Sequence[int]) -> int:
    """Lowest weighted degree of a monomial of h."""
    if h.is_zero():
        raise QresError("weighted order of the zero polynomial")
    return min(_wdeg(e, w) for e in h.terms)


def w_parts(h: WPoly, w: Sequence[int]) -> list[WHomogPiece]:
    """Weighted homogeneous pieces of h in ascending degree."""
    buckets: dict = {}
    for exp, c in h.terms.items():
        buckets.setdefault(_wdeg(exp, w), {})[exp] = c
    return [WHomogPiece(tuple(w), deg, WPoly(buckets[deg], h.vars)) for deg in sorted(buckets)]


def initial_form(h: WPoly, w: Sequence[int]) -> WHomogPiece:
    return w_parts(h, w)[0]


def strict_transform(h: WPoly, w: Sequence[int], chart: int) -> tuple[int, WPoly]:
    """Pull h back along chart ``chart`` (1-based) of the w-blow-up and divide out E.

    In chart i the i-th coordinate becomes x_i^{w_i} and every other one
    x_i^{w_j} x_j; the returned polynomial is the pull-back divided by
    x_i^nu with nu = w_order(h, w).
    """
    i = chart - 1
    nu = w_order(h, w)

    def move(exp):
        new = list(exp)
        new[i] = _wdeg(exp, w) - nu
        return new

    return nu, h.map_exponents(move)


def root_substitute(h: WPoly, var, d: int) -> WPoly:
    """Replace ``var`` by var^(1/d); every exponent of var must be divisible by d."""
    i = h.vars.index(var) if isinstance(var, str) else var
    for exp in h.terms:
        if exp[i] % d:
            raise QresError(f"exponent {exp[i]} of {h.vars[i]} in {h} is not divisible by {d}")

    def shrink(exp):
        new = list(exp)
        new[i] //= d
        return new

    return h.map_exponents(shrink)


@dataclass(frozen=True)
class WFactorization:
    """h_nu = unit * x^e0 * y^e_inf * prod phi_j^mult_j.

    Each factor is an irreducible binary form phi_j(U, V) evaluated at
    U = x^q, V = y^p; ``univariate`` holds phi_j(U, 1) as a coefficient
    list in ascending powers of U.
    """

    weights: tuple
    degree: int
    unit: Fraction
    e0: int
    e_inf: int
    factors: tuple  # of (WPoly, multiplicity, univariate coefficients)

    def expand(self) -> WPoly:
        vars = ("x", "y")
        out = WPoly.monomial((self.e0, self.e_inf), self.unit, vars)
        for phi, mult, _ in self.factors:
            out = out * phi ** mult
        return out

    def orbit_count(self) -> int:
        """Number of points off the coordinate axes, counted as Galois-orbit degrees."""
        return sum(len(coeffs) - 1 for _, _, coeffs in self.factors)


def factor_univariate(coeffs: Sequence[Fraction]) -> tuple[Fraction, list]:
    """Factor sum c_i u^i over the rationals; returns (content, [(coeffs, mult)])."""
    import sympy
    u = sympy.Symbol("u")
    expr = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * u ** i
               for i, c in enumerate(coeffs))
    content, facs = sympy.factor_list(expr, u)
    out = []
    for f, mult in facs:
        poly = sympy.Poly(f, u)
        cs = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
              for c in reversed(poly.all_coeffs())]
        lead = cs[-1]
        content *= sympy.Rational(lead.numerator, lead.denominator) ** mult
        out.append(([c / lead for c in cs], int(mult)))
    content = sympy.Rational(content)
    return Fraction(int(content.p), int(content.q)), out


def factor_whomog(piece: WHomogPiece) -> WFactorization:
    """Factor a (p,q)-homogeneous polynomial in x, y over the rationals."""
    p, q = piece.weights
    h = piece.poly
    if h.is_zero():
        raise QresError("cannot factor the zero piece")
    e0, e_inf = h.min_exponent(0), h.min_exponent(1)
    g = h.divide_monomial((e0, e_inf))
    rest = piece.degree - p * e0 - q * e_inf
    if rest == 0:
        return WFactorization((p, q), piece.degree, g.constant_term(), e0, e_inf, ())
    if rest % (p * q):
        raise QresError(f"{h} has no pure powers after removing axes; not quasi-homogeneous")
    n = rest // (p * q)
    coeffs = [Fraction(0)] * (n + 1)
    for (i, j), c in g.terms.items():
        coeffs[i // q] = c
    unit, facs = factor_univariate(coeffs)
    factors = []
    for cs, mult in facs:
        deg = len(cs) - 1
        phi = WPoly({(q * s, p * (deg - s)): c for s, c in enumerate(cs)}, ("x", "y"))
        factors.append((phi, mult, tuple(cs)))
    return WFactorization((p, q), piece.degree, unit, e0, e_inf, tuple(factors))


def is_squarefree(h: WPoly) -> bool:
    """True iff h has no repeated factor over the rationals."""
    import sympy
    expr = h.to_sympy()
    _, facs = sympy.factor_list(expr, *sympy.symbols(h.vars))
    return all(m == 1 for _, m in facs)


def _as_rational(value) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    try:
        import sympy
        v = sympy.nsimplify(value) if not isinstance(value, sympy.Basic) else value
        if v.is_Rational:
            return Fraction(int(v.p), int(v.q))
    except (ImportError, TypeError, ValueError, AttributeError, sympy.SympifyError):
        pass
    raise ScopeError(f"non-rational center {value!r}")


def translate_point(h: WPoly, point: Sequence, qtype=None) -> WPoly:
    """Return h(x + x0, y + y0, ...) for a rational point.

    With ``qtype`` given, the point must be fixed by the group (every
    element acts trivially on the coordinates where the point is nonzero),
    otherwise the translated equation would not live on the quotient.
    """
    point = [_as_rational(v) for v in point]
    if qtype is not None:
        moving = [i for i, v in enumerate(point) if v]
        if any(g[i] != 0 for g in qtype.elements() for i in moving):
            raise QresError(f"translation to {point} is not equivariant for {qtype}")
    n = len(h.vars)
    images = []
    for i, v in enumerate(point):
        unit = tuple(1 if j == i else 0 for j in range(n))
        images.append(WPoly({unit: 1, (0,) * n: v}, h.vars))
    return h.compose(images)
