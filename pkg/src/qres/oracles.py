"""Independent ground truth for curve invariants.

Nothing here depends on the weighted machinery: the Milnor number comes
from linear algebra on the Jacobian algebra and the characteristic
polynomial from a classical resolution by ordinary blow-ups on smooth
charts.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import QresError, ScopeError
from .monodromy import CharProduct
from .wpoly import WPoly, factor_univariate, translate_point


def _rank(rows: list[dict]) -> int:
    """Rank of sparse rational row vectors, by Gaussian elimination."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            lead = min(row)
            if lead not in pivots:
                c = row[lead]
                pivots[lead] = {k: v / c for k, v in row.items()}
                rank += 1
                break
            piv = pivots[lead]
            c = row[lead]
            for k, v in piv.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def jacobian_colength(h: WPoly, n: int) -> int:
    """dim Q[x,y] / (h_x, h_y, m^n)."""
    fx, fy = h.diff(0), h.diff(1)
    monos = [(i, d - i) for d in range(n) for i in range(d + 1)]
    rows = []
    for a, b in monos:
        for g in (fx, fy):
            row = {}
            for (i, j), c in g.terms.items():
                if i + a + j + b < n:
                    row[(i + a + j + b, i + a)] = c
            if row:
                rows.append(row)
    return len(monos) - _rank(rows)


def milnor_jacobian(h: WPoly, max_degree: int = 80) -> int:
    """Milnor number at the origin, certified by stabilization of the truncations.

    If the colength is the same for m^n and m^(n+1), then m^n lies in the
    Jacobian ideal of the local ring (Nakayama), so the value is final.
    """
    if h.constant_term() != 0:
        return 0
    prev = None
    for n in range(1, max_degree + 1):
        cur = jacobian_colength(h, n)
        if cur == prev:
            return cur
        prev = cur
    raise ScopeError(f"Jacobian algebra of {h} did not stabilize: non-isolated singularity?")


def quasihomog_mu(p: int, q: int) -> int:
    """Milnor number of x^p + y^q."""
    if p < 2 or q < 2:
        raise QresError("exponents must be at least 2")
    return (p - 1) * (q - 1)


def _nonzero_roots(h_on_line: dict) -> list[tuple[list, int]]:
    """Rational factorization of a univariate polynomial with the root 0 removed."""
    j0 = min(h_on_line)
    top = max(h_on_line)
    if top == j0:
        return []
    dense = [h_on_line.get(j, Fraction(0)) for j in range(j0, top + 1)]
    return factor_univariate(dense)[1]


class _Classical:
    def __init__(self):
        self.pieces: list[tuple[int, int]] = []  # (m_E, chi of open part)

    def run(self, h: WPoly, xdiv: bool, ydiv: bool, mx: int, my: int, depth: int = 0) -> None:
        if depth > 200:
            raise QresError("classical resolution did not terminate")
        if h.constant_term() != 0:
            return
        lin_x, lin_y = h.coefficient((1, 0)), h.coefficient((0, 1))
        if xdiv and ydiv:
            pass
        elif xdiv and lin_y:
            return
        elif ydiv and lin_x:
            return
        elif not xdiv and not ydiv and (lin_x or lin_y):
            return
        nu = h.order()
        m = mx + my + nu
        h1 = h.map_exponents(lambda e: (e[0] + e[1] - nu, e[1]))
        h2 = h.map_exponents(lambda e: (e[0], e[0] + e[1] - nu))
        on_e = {j: c for (i, j), c in h1.terms.items() if i == 0}
        removed = 0
        if ydiv or h1.constant_term() == 0:
            removed += 1
        if xdiv or h2.constant_term() == 0:
            removed += 1
        pending = []
        for coeffs, mult in _nonzero_roots(on_e):
            removed += len(coeffs) - 1
            if mult > 1:
                if len(coeffs) != 2:
                    raise ScopeError("classical oracle needs a rational center")
                pending.append(-coeffs[0] / coeffs[1])
        self.pieces.append((m, 2 - removed))
        self.run(h1, True, ydiv, m, my, depth + 1)
        for y0 in pending:
            self.run(translate_point(h1, (0, y0)), True, False, m, 0, depth + 1)
        self.run(h2, xdiv, True, mx, m, depth + 1)


def classical_charpoly(h: WPoly) -> CharProduct:
    """Characteristic polynomial from a resolution by ordinary blow-ups."""
    if h.constant_term() != 0:
        raise QresError("germ must vanish at the origin")
    runner = _Classical()
    runner.run(h, False, False, 0, 0)
    if not runner.pieces:
        return CharProduct.one()
    exps: dict[int, int] = {1: -1}
    for m, chi in runner.pieces:
        exps[m] = exps.get(m, 0) + chi
    return CharProduct(exps).inverse()
