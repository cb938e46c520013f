"""Rational polyhedral cones with both descriptions kept in sync.

A cone is stored by its extreme generators (modulo lineality), a basis of
its lineality space, its facet normals (modulo the equations) and a basis
of the equations.  Every vector is a primitive integer vector and every
list is in a canonical order, so two :class:`PolyCone` values describe the
same cone exactly when they compare equal.

Conversions run the double description method in exact integer
arithmetic::

    >>> c = positive_hull([(1, 0), (1, 1), (0, 1)])
    >>> c.generators
    ((0, 1), (1, 0))
    >>> c.facets
    ((0, 1), (1, 0))
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlin import (
    IntVector,
    canonical_row_basis,
    dot,
    integerize,
    independent_rows,
    inverse,
    nullspace,
    _divide_gcd,
    project_out,
)

_mul = operator.mul


@dataclass(frozen=True)
class PolyCone:
    ambient_dim: int
    generators: tuple[IntVector, ...]
    lineality: tuple[IntVector, ...]
    facets: tuple[IntVector, ...]
    equations: tuple[IntVector, ...]

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.generators and not self.lineality

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        extra = f" + span{list(self.lineality)}" if self.lineality else ""
        return f"PolyCone(pos[{gens}]{extra})"


@dataclass(frozen=True)
class Comparison:
    verdict: str  # "equal", "A_strict_subset", "B_strict_subset", "incomparable"
    witness_a: IntVector | None = None  # in A but not in B
    witness_b: IntVector | None = None  # in B but not in A


# -- double description core -------------------------------------------------


def _clean(rows: Iterable[Sequence]) -> list[IntVector]:
    seen = set()
    out = []
    for r in rows:
        v = integerize(r)
        if any(v) and v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _dd_pointed(h: list[list[int]], basis_rows: list[int]):
    """Double description for {z : h z >= 0} where h has full column rank.

    ``basis_rows`` index an invertible square submatrix.  Returns the
    extreme rays, their zero sets as bitmasks over insertion positions, and
    the row index inserted at each position.
    """
    r = len(basis_rows)
    binv = inverse([h[i] for i in basis_rows])
    rays = [integerize(binv[i][j] for i in range(r)) for j in range(r)]
    full = (1 << r) - 1
    zeros = [full ^ (1 << j) for j in range(r)]
    inserted = list(basis_rows)
    skip = set(basis_rows)

    for idx, row in enumerate(h):
        if idx in skip or not any(row) or not rays:
            continue
        vals = [sum(map(_mul, row, ray)) for ray in rays]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            continue
        pos = [k for k, v in enumerate(vals) if v > 0]
        bit = 1 << len(inserted)
        inserted.append(idx)

        new_rays = []
        new_zeros = []
        if pos:
            cols: dict[int, int] = {}
            for k, z in enumerate(zeros):
                kb = 1 << k
                for b in _bits(z):
                    cols[b] = cols.get(b, 0) | kb
            everyone = (1 << len(rays)) - 1
            need = r - 2
            for p in pos:
                zp = zeros[p]
                vp = vals[p]
                rp = rays[p]
                for q in neg:
                    common = zp & zeros[q]
                    if common.bit_count() < need:
                        continue
                    pair = (1 << p) | (1 << q)
                    m = everyone
                    for b in _bits(common):
                        m &= cols[b]
                        if m == pair:
                            break
                    if m != pair:
                        continue
                    vq = vals[q]
                    new_rays.append(_divide_gcd(vp * y - vq * x for x, y in zip(rp, rays[q])))
                    new_zeros.append(common | bit)

        keep_rays = []
        keep_zeros = []
        for k, v in enumerate(vals):
            if v > 0:
                keep_rays.append(rays[k])
                keep_zeros.append(zeros[k])
            elif v == 0:
                keep_rays.append(rays[k])
                keep_zeros.append(zeros[k] | bit)
        rays = keep_rays + new_rays
        zeros = keep_zeros + new_zeros
    return rays, zeros, inserted


def _maximal_positions(zeros: list[int], npos: int) -> list[int]:
    """Positions whose tight ray sets are maximal proper faces."""
    nrays = len(zeros)
    if nrays == 0:
        return []
    cols = [0] * npos
    for k, z in enumerate(zeros):
        for b in _bits(z):
            cols[b] |= 1 << k
    everyone = (1 << nrays) - 1
    cand = []
    seen = set()
    for p in range(npos):
        c = cols[p]
        if c != everyone and c not in seen:
            seen.add(c)
            cand.append((p, c))
    out = []
    for p, c in cand:
        if not any(d != c and c & d == c for _, d in cand):
            out.append(p)
    return out


def _dd(ineqs: list[IntVector], eqs: list[IntVector], n: int):
    """Extreme rays and lineality of {x : a.x >= 0 for a in ineqs, e.x = 0}.

    Also returns indices of the inequalities that define facets.
    """
    if eqs:
        sub = nullspace(eqs, n)
    else:
        sub = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    s = len(sub)
    ay = [[dot(a, b) for b in sub] for a in ineqs]
    lin_y = nullspace(ay, s) if ay else [tuple(int(i == j) for j in range(s)) for i in range(s)]

    def lift(y):
        return tuple(sum(y[k] * sub[k][i] for k in range(s)) for i in range(n))

    lineality = [lift(y) for y in lin_y]
    basis = independent_rows(ay) if ay else []
    r = len(basis)
    if r == 0:
        return [], lineality, []
    q = [ay[i] for i in basis]
    h = [[dot(a, qk) for qk in q] for a in ay]
    rays_z, zeros, inserted = _dd_pointed(h, basis)
    rays = []
    for z in rays_z:
        y = [sum(z[k] * q[k][j] for k in range(r)) for j in range(s)]
        rays.append(_divide_gcd(lift(y)))
    facet_idx = [inserted[p] for p in _maximal_positions(zeros, len(inserted))]
    return rays, lineality, facet_idx


def _canonical(vectors: Iterable[Sequence], modulo: Sequence[IntVector]) -> tuple[IntVector, ...]:
    out = set()
    for v in vectors:
        w = integerize(project_out(v, modulo)) if modulo else integerize(v)
        if any(w):
            out.add(w)
    return tuple(sorted(out))


def _assemble(n, gens, lin_span, facets, eq_span) -> PolyCone:
    lineality = tuple(canonical_row_basis(lin_span, n)) if lin_span else ()
    equations = tuple(canonical_row_basis(eq_span, n)) if eq_span else ()
    return PolyCone(
        ambient_dim=n,
        generators=_canonical(gens, lineality),
        lineality=lineality,
        facets=_canonical(facets, equations),
        equations=equations,
    )


def h_to_v(facets: Iterable[Sequence], equations: Iterable[Sequence] = (), n: int | None = None) -> PolyCone:
    """The cone {x : f.x >= 0, e.x = 0} with its generators computed."""
    rows = _clean(facets)
    eqs = _clean(equations)
    if n is None:
        n = len((rows or eqs)[0])
    rays, lin, idx = _dd(rows, eqs, n)
    lin = [v for v in lin if any(v)]
    eq_span = nullspace(rays + lin, n) if rays or lin else [
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ]
    return _assemble(n, rays, lin, [rows[i] for i in idx], eq_span)


def v_to_h(generators: Iterable[Sequence], lineality: Iterable[Sequence] = (), n: int | None = None) -> PolyCone:
    """The cone pos(generators) + span(lineality) with its facets computed."""
    rows = _clean(generators)
    lin = _clean(lineality)
    if n is None:
        n = len((rows or lin)[0])
    normals, dual_lin, idx = _dd(rows, lin, n)
    dual_lin = [v for v in dual_lin if any(v)]
    lin_span = nullspace(normals + dual_lin, n) if normals or dual_lin else [
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ]
    return _assemble(n, [rows[i] for i in idx], lin_span, normals, dual_lin)


def positive_hull(generators: Iterable[Sequence], free: Iterable[Sequence] = (), n: int | None = None) -> PolyCone:
    """pos(generators) + span(free)."""
    generators = list(generators)
    free = list(free)
    if n is None:
        if not generators and not free:
            raise ValueError("ambient dimension needed for an empty generator list")
        n = len((generators or free)[0])
    return v_to_h(generators, free, n)


def zero_cone(n: int) -> PolyCone:
    return v_to_h([], [], n)


def intersect(cones: Sequence[PolyCone]) -> PolyCone:
    cones = list(cones)
    if not cones:
        raise ValueError("nothing to intersect")
    n = cones[0].ambient_dim
    if any(c.ambient_dim != n for c in cones):
        raise ValueError("ambient dimensions differ")
    if len(cones) == 1:
        return cones[0]
    # most restrictive pieces first keeps the intermediate description small
    ordered = sorted(cones, key=lambda c: len(c.facets) + len(c.equations))
    facets = [f for c in ordered for f in c.facets]
    eqs = [e for c in ordered for e in c.equations]
    return h_to_v(facets, eqs, n)


def contains_point(c: PolyCone, x: Sequence) -> bool:
    return all(dot(e, x) == 0 for e in c.equations) and all(dot(f, x) >= 0 for f in c.facets)


def contains_line(c: PolyCone, x: Sequence) -> bool:
    return all(dot(e, x) == 0 for e in c.equations) and all(dot(f, x) == 0 for f in c.facets)


def in_relative_interior(c: PolyCone, x: Sequence) -> bool:
    return all(dot(e, x) == 0 for e in c.equations) and all(dot(f, x) > 0 for f in c.facets)


def relint_point(c: PolyCone) -> tuple[Fraction, ...] | None:
    """A point in the relative interior, or None for the zero cone."""
    if c.is_zero:
        return None
    x = [Fraction(0)] * c.ambient_dim
    for g in c.generators:
        for i, v in enumerate(g):
            x[i] += v
    return tuple(x)


def is_subset(a: PolyCone, b: PolyCone) -> IntVector | None:
    """None if a is contained in b, else a generator of a outside b."""
    for g in a.generators:
        if not contains_point(b, g):
            return g
    for l in a.lineality:
        if not contains_line(b, l):
            return l
    return None


def compare(a: PolyCone, b: PolyCone) -> Comparison:
    wa = is_subset(a, b)
    wb = is_subset(b, a)
    if wa is None and wb is None:
        return Comparison("equal")
    if wa is None:
        return Comparison("A_strict_subset", None, wb)
    if wb is None:
        return Comparison("B_strict_subset", wa, None)
    return Comparison("incomparable", wa, wb)


def image(matrix: Sequence[Sequence], c: PolyCone) -> PolyCone:
    """Image of a cone under a linear map given by its rows."""
    m = len(matrix)
    gens = [[dot(row, g) for row in matrix] for g in c.generators]
    lin = [[dot(row, l) for row in matrix] for l in c.lineality]
    return v_to_h(gens, lin, m)


def preimage(c: PolyCone, matrix: Sequence[Sequence]) -> PolyCone:
    """{t : matrix t in c} for a matrix with c.ambient_dim rows."""
    ncols = len(matrix[0])
    cols = list(zip(*matrix))

    def pull(f):
        return [dot(f, col) for col in cols]

    return h_to_v([pull(f) for f in c.facets], [pull(e) for e in c.equations], ncols)
