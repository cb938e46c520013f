"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer work stays in Python ints;
anything that needs division goes through :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]
Matrix = list[list]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [dot(row, v) for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _divide_gcd(v: Iterable[int]) -> IntVector:
    v = tuple(int(x) for x in v)
    g = math.gcd(*v)
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def primitive(v: Iterable[int]) -> IntVector:
    """Divide a nonzero integer vector by the gcd of its entries."""
    v = _divide_gcd(v)
    if not any(v):
        raise ValueError("the zero vector has no primitive multiple")
    return v


def integerize(v: Iterable) -> IntVector:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    v = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in v)) if v else 1
    return _divide_gcd(int(x * den) for x in v)


def _echelon(rows: list[list[int]], ncols: int, reduce: bool = True):
    """Fraction-free row reduction.

    Returns the nonzero rows in echelon form together with their pivot
    columns.  With ``reduce`` every pivot column is cleared in all other
    rows.  Rows are kept primitive so entries stay small.
    """
    rows = [list(map(int, r)) for r in rows if any(r)]
    pivots: list[int] = []
    done: list[list[int]] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(rows) if r[col]), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        if piv[col] < 0:
            piv = [-x for x in piv]
        piv = list(_divide_gcd(piv))
        p = piv[col]
        new_rows = []
        for r in rows:
            c = r[col]
            if c:
                r = [p * x - c * y for x, y in zip(r, piv)]
                if not any(r):
                    continue
                r = list(_divide_gcd(r))
            new_rows.append(r)
        rows = new_rows
        if reduce:
            for k, r in enumerate(done):
                c = r[col]
                if c:
                    r = [p * x - c * y for x, y in zip(r, piv)]
                    done[k] = list(_divide_gcd(r))
                    if done[k][pivots[k]] < 0:
                        done[k] = [-x for x in done[k]]
        done.append(piv)
        pivots.append(col)
        if not rows:
            break
    return done, pivots


def _as_int_rows(m: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row of a rational matrix to integers (row space preserved)."""
    out = []
    for r in m:
        if all(isinstance(x, int) for x in r):
            out.append(list(r))
        else:
            fr = [Fraction(x) for x in r]
            den = math.lcm(*(x.denominator for x in fr)) if fr else 1
            out.append([int(x * den) for x in fr])
    return out


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    if not m:
        return 0
    ncols = len(m[0]) if ncols is None else ncols
    rows, _ = _echelon(_as_int_rows(m), ncols, reduce=False)
    return len(rows)


def independent_rows(m: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset of rows (greedy)."""
    if not m:
        return []
    ncols = len(m[0])
    basis: list[list[int]] = []
    pivots: list[int] = []
    chosen = []
    for i, r in enumerate(_as_int_rows(m)):
        r = list(r)
        for b, pc in zip(basis, pivots):
            c = r[pc]
            if c:
                r = [b[pc] * x - c * y for x, y in zip(r, b)]
        nz = next((j for j, x in enumerate(r) if x), None)
        if nz is None:
            continue
        basis.append(list(_divide_gcd(r)))
        pivots.append(nz)
        chosen.append(i)
        if len(chosen) == ncols:
            break
    return chosen


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[list[RatVector], list[int]]:
    """Reduced row echelon form with unit pivots."""
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    rows, pivots = _echelon(_as_int_rows(m), ncols)
    out = []
    for r, pc in zip(rows, pivots):
        p = r[pc]
        out.append(tuple(Fraction(x, p) for x in r))
    return out, pivots


def canonical_row_basis(m: Sequence[Sequence], ncols: int) -> list[IntVector]:
    """Primitive integer rows of the RREF: a canonical basis of the row space."""
    rows, _ = rref(m, ncols)
    return [integerize(r) for r in rows]


def nullspace(m: Sequence[Sequence], ncols: int) -> list[IntVector]:
    """Integer vectors spanning {x : m x = 0} over the rationals."""
    if not m:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rows, pivots = _echelon(_as_int_rows(m), ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    if not free:
        return []
    den = math.lcm(*(r[pc] for r, pc in zip(rows, pivots))) if rows else 1
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = den
        for r, pc in zip(rows, pivots):
            x[pc] = -r[f] * (den // r[pc])
        basis.append(_divide_gcd(x))
    return basis


def solve_rational(a: Sequence[Sequence], b: Sequence) -> RatVector | None:
    """Some rational x with a x = b, or None when inconsistent."""
    if not a:
        return () if not any(b) else None
    ncols = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    rows, pivots = rref(aug, ncols + 1)
    x = [Fraction(0)] * ncols
    for r, pc in zip(rows, pivots):
        if pc == ncols:
            return None
        x[pc] = r[ncols]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> list[RatVector]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    rows, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [tuple(r[n:]) for r in rows]


def orthogonal_complement(vectors: Sequence[Sequence], n: int) -> list[IntVector]:
    return nullspace(list(vectors), n)


def project_out(v: Sequence, basis: Sequence[Sequence]) -> RatVector:
    """Remove from v its orthogonal projection onto span(basis)."""
    if not basis:
        return tuple(Fraction(x) for x in v)
    gram = [[dot(b, c) for c in basis] for b in basis]
    rhs = [dot(b, v) for b in basis]
    coef = solve_rational(gram, rhs)
    assert coef is not None
    return tuple(
        Fraction(x) - sum(c * b[i] for c, b in zip(coef, basis)) for i, x in enumerate(v)
    )


# -- Smith normal form -------------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form of an integer matrix.

    Returns ``(S, U, W)`` with ``U * m * W == S``, ``U`` and ``W``
    unimodular, and the diagonal of ``S`` nonnegative with each entry
    dividing the next.  Pivots are chosen by smallest magnitude.
    """
    a = [list(map(int, r)) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    w = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in w:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col dst -= q * col src
        for r in a:
            r[dst] -= q * r[src]
        for r in w:
            r[dst] -= q * r[src]

    for t in range(min(nr, nc)):
        while True:
            entries = [
                (abs(a[i][j]), i, j)
                for i in range(t, nr)
                for j in range(t, nc)
                if a[i][j]
            ]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(t, i, a[i][t] // p)
                    clean &= a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(t, j, a[t][j] // p)
                    clean &= a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, -1)
        if t < nr and t < nc and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, w


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    s, _, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


def kernel_basis(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[IntVector]:
    """Lattice basis of the integer kernel {x in Z^n : m x = 0}."""
    if not m:
        n = ncols or 0
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    n = len(m[0])
    s, _, w = smith_normal_form(m)
    r = sum(1 for i in range(min(len(s), n)) if s[i][i])
    return [tuple(w[i][j] for i in range(n)) for j in range(r, n)]


def cokernel_map(m: Sequence[Sequence[int]]) -> list[IntVector]:
    """Rows of an integer map Z^k -> Z^(k-r) whose kernel is the saturation
    of the column space of the k x c matrix ``m``."""
    s, u, _ = smith_normal_form(m)
    r = sum(1 for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i])
    return [tuple(row) for row in u[r:]]


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"not a rational: {s!r}")
