"""Exact feasibility for cone membership.

``cone_membership(x, gens, free)`` decides whether ``x`` is a nonnegative
combination of ``gens`` plus an arbitrary combination of ``free``.  It is
a phase-one simplex over :class:`fractions.Fraction` with Bland's rule, so
it terminates and every answer comes with something checkable: the
coefficients when feasible, a Farkas vector ``y`` with ``y.g >= 0``,
``y.f == 0`` and ``y.x < 0`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactlin import dot


@dataclass(frozen=True)
class Membership:
    feasible: bool
    coefficients: tuple[Fraction, ...] | None = None  # for gens then free
    certificate: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.feasible


def cone_membership(
    x: Sequence, gens: Sequence[Sequence], free: Sequence[Sequence] = ()
) -> Membership:
    m = len(x)
    gens = [tuple(g) for g in gens]
    free = [tuple(f) for f in free]
    cols = gens + free + [tuple(-v for v in f) for f in free]
    ncols = len(cols)
    sign = [(-1 if v < 0 else 1) for v in x]

    # tableau rows: structural columns, then artificials, then rhs
    width = ncols + m + 1
    tab = []
    for i in range(m):
        s = sign[i]
        row = [Fraction(s * c[i]) for c in cols]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(Fraction(s * x[i]))
        tab.append(row)
    basis = [ncols + i for i in range(m)]
    cost = [Fraction(0)] * width
    for j in range(ncols):
        cost[j] = -sum(tab[i][j] for i in range(m))
    cost[-1] = -sum(tab[i][-1] for i in range(m))

    while True:
        enter = next((j for j in range(ncols + m) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                key = (tab[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded cannot happen in phase one
            raise AssertionError("phase one unbounded")
        r = best[1]
        piv_row = tab[r]
        p = piv_row[enter]
        if p != 1:
            piv_row = [v / p for v in piv_row]
            tab[r] = piv_row
        nz = [j for j, v in enumerate(piv_row) if v]
        for i in range(m):
            if i != r:
                row = tab[i]
                c = row[enter]
                if c:
                    for j in nz:
                        row[j] -= c * piv_row[j]
        c = cost[enter]
        for j in nz:
            cost[j] -= c * piv_row[j]
        basis[r] = enter

    if cost[-1] != 0:
        # y_k = 1 - reduced cost of artificial k, in the sign-flipped rows
        y = [Fraction(1) - cost[ncols + k] for k in range(m)]
        cert = tuple(-sign[k] * y[k] for k in range(m))
        assert dot(cert, x) < 0
        assert all(dot(cert, g) >= 0 for g in gens)
        assert all(dot(cert, f) == 0 for f in free)
        return Membership(False, certificate=cert)

    values = [Fraction(0)] * (ncols + m)
    for i, b in enumerate(basis):
        values[b] = tab[i][-1]
    ng, nf = len(gens), len(free)
    coef = values[:ng] + [values[ng + k] - values[ng + nf + k] for k in range(nf)]
    for i in range(m):
        assert sum(c * v[i] for c, v in zip(coef, gens + free)) == x[i]
    return Membership(True, coefficients=tuple(coef))
