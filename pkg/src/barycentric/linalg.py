"""Exact linear algebra over Q.

Sparse rows are ``dict[int, Fraction]`` mapping column index to a nonzero
coefficient. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

SparseRow = dict


def _clean(row: Mapping[int, Fraction]) -> SparseRow:
    return {c: Fraction(v) for c, v in row.items() if v != 0}


class RowEchelon:
    """Incrementally maintained reduced row echelon form.

    Each basis row is normalized so that its pivot coefficient is 1 and no
    other basis row has a nonzero entry in that pivot column. The pivot of a
    row is its *largest* nonzero column index, so low indices (the earliest
    carrier points) are left free whenever possible.
    """

    def __init__(self):
        self.rows: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, row: Mapping[int, Fraction]) -> SparseRow:
        r = _clean(row)
        for col in [c for c in r if c in self.rows]:
            coef = r.get(col)
            if not coef:
                continue
            for c, v in self.rows[col].items():
                nv = r.get(c, 0) - coef * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return r

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert ``row``; return True if it enlarged the span."""
        r = self.reduce(row)
        if not r:
            return False
        piv = max(r)
        scale = r[piv]
        r = {c: v / scale for c, v in r.items()}
        for other in self.rows.values():
            coef = other.get(piv)
            if coef:
                for c, v in r.items():
                    nv = other.get(c, 0) - coef * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        self.rows[piv] = r
        return True

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self.reduce(row)


def rank(vectors: Iterable[Sequence[Fraction]]) -> int:
    ech = RowEchelon()
    for v in vectors:
        ech.add({i: x for i, x in enumerate(v)})
    return ech.rank


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([tuple(a - b for a, b in zip(p, base)) for p in points[1:]])


def in_convex_hull(point: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    """Decide ``point in conv(generators)`` exactly.

    Phase one of the simplex method with Bland's rule on the system
    ``sum_j l_j g_j = point, sum_j l_j = 1, l >= 0``.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    p = tuple(Fraction(x) for x in point)
    if any(len(g) != len(p) for g in gens):
        return False
    if p in gens:
        return True
    n = len(gens)
    rows = [[g[i] for g in gens] + [p[i]] for i in range(len(p))]
    rows.append([Fraction(1)] * n + [Fraction(1)])
    for r in rows:
        if r[-1] < 0:
            r[:] = [-v for v in r]
    m = len(rows)
    # columns: n structural, m artificial, then rhs
    tab = [r[:n] + [Fraction(int(i == k)) for k in range(m)] + [r[-1]] for i, r in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize the sum of artificials, i.e. reduced costs = -sum of rows
    cost = [Fraction(0)] * (width + 1)
    for r in tab:
        for j in range(n):
            cost[j] -= r[j]
        cost[-1] -= r[-1]
    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i, r in enumerate(tab):
            if r[entering] > 0:
                ratio = r[-1] / r[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot happen in phase one
            break
        i = best[1]
        pr = tab[i]
        pv = pr[entering]
        pr[:] = [v / pv for v in pr]
        for k, r in enumerate(tab):
            if k != i and r[entering]:
                f = r[entering]
                r[:] = [a - f * b for a, b in zip(r, pr)]
        f = cost[entering]
        cost[:] = [a - f * b for a, b in zip(cost, pr)]
        basis[i] = entering
    return cost[-1] == 0
