"""Torus-invariant divisors, their classes, and pullbacks to orbit closures.

A divisor is a coefficient vector ``a`` indexed by the rays of a fan.  Its
class lives in the quotient of ``Q^rays`` by the principal divisors
``(<u, v_i>)_i``; :class:`ClassSpace` fixes coordinates on that quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactlin import IntVector, cokernel_map, dot, rank, solve_rational, transpose
from .fan import Cone, Fan, QuotientStar
from .lp import Membership, cone_membership

Divisor = Sequence  # coefficients, one per ray


class DivisorError(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpace:
    """Coordinates on divisor classes: ``matrix`` maps ray coefficients to classes."""

    rays: tuple[IntVector, ...]
    matrix: tuple[tuple, ...]  # rank x number of rays

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def class_of(self, a: Divisor) -> tuple[Fraction, ...]:
        if len(a) != self.nrays:
            raise DivisorError(f"divisor has {len(a)} coefficients, fan has {self.nrays} rays")
        return tuple(Fraction(dot(row, a)) for row in self.matrix)

    def column(self, i: int) -> tuple:
        return tuple(row[i] for row in self.matrix)

    def columns(self, idx) -> list[tuple]:
        return [self.column(i) for i in idx]

    def descend(self, ray_functional: Sequence) -> tuple[Fraction, ...]:
        """The functional on classes whose composition with ``matrix`` is given."""
        phi = solve_rational(transpose(self.matrix), list(ray_functional))
        if phi is None:
            raise DivisorError("functional does not vanish on principal divisors")
        return phi

    def descend_map(self, ray_matrix: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
        return [self.descend(row) for row in ray_matrix]

    def lift(self, x: Sequence) -> tuple[Fraction, ...]:
        """Some divisor with class x."""
        a = solve_rational([list(r) for r in self.matrix], list(x))
        if a is None:
            raise DivisorError("not a class")
        return a

    def with_basis(self, matrix: Sequence[Sequence]) -> "ClassSpace":
        """Same space, coordinates given by another class matrix (columns = [D_i])."""
        matrix = tuple(tuple(r) for r in matrix)
        if len(matrix) != self.rank or rank(matrix) != self.rank:
            raise DivisorError(f"class basis must have rank {self.rank}")
        for row in matrix:
            if len(row) != self.nrays:
                raise DivisorError("class basis has the wrong number of columns")
            for k in range(len(self.rays[0]) if self.rays else 0):
                if dot(row, [v[k] for v in self.rays]) != 0:
                    raise DivisorError("class basis does not kill principal divisors")
        return ClassSpace(self.rays, matrix)


@lru_cache(maxsize=None)
def _class_space(rays: tuple[IntVector, ...], n: int) -> ClassSpace:
    if not rays:
        return ClassSpace(rays, ())
    p = cokernel_map([list(v) for v in rays])
    return ClassSpace(rays, tuple(tuple(r) for r in p))


def class_space(fan: Fan) -> ClassSpace:
    """Canonical integral coordinates from the Smith form of the ray matrix."""
    return _class_space(fan.rays, fan.lattice_dim)


def principal_divisor(fan: Fan, u: Sequence) -> tuple:
    return tuple(dot(u, v) for v in fan.rays)


def _solve_on(fan: Fan, sigma: Cone, a: Divisor) -> tuple[Fraction, ...]:
    n = fan.lattice_dim
    if not sigma:
        return tuple(Fraction(0) for _ in range(n))
    u = solve_rational([list(fan.rays[i]) for i in sigma], [-a[i] for i in sigma])
    if u is None:
        raise DivisorError(f"divisor is not Cartier on cone {list(sigma)}")
    return u


def cartier_data(fan: Fan, a: Divisor) -> dict[Cone, tuple[Fraction, ...]]:
    """u(sigma) with <u(sigma), v_i> = -a_i on every maximal cone."""
    return {c: _solve_on(fan, c, a) for c in fan.max_cones}


def support_function(fan: Fan, a: Divisor):
    """The piecewise linear function with psi(v_i) = a_i."""
    data = cartier_data(fan, a)
    cones = {c: fan.polycone(c) for c in fan.max_cones}
    from .cone import contains_point

    def psi(x):
        for c, pc in cones.items():
            if contains_point(pc, x):
                return -dot(data[c], x)
        raise DivisorError("point outside the support")

    return psi


def psi_eval(fan: Fan, a: Divisor, x: Sequence) -> Fraction:
    return Fraction(support_function(fan, a)(x))


def map_class(matrix: Sequence[Sequence], c):
    """Image of a class-space cone under a linear map to other coordinates."""
    from .cone import image

    return image(matrix, c)


def pullback_orbit(fan: Fan, sigma: Cone, a: Divisor, star: QuotientStar | None = None) -> tuple[Fraction, ...]:
    """Coefficients of the restriction of D to the orbit closure of sigma.

    Entry t belongs to the t-th cone of star^1(sigma).
    """
    sigma = tuple(sorted(sigma))
    star = star or fan.quotient_star(sigma)
    u = _solve_on(fan, sigma, a)
    out = []
    for t in star.taus:
        i = next(i for i in t if i not in sigma)
        out.append((a[i] + dot(u, fan.rays[i])) / star.multiplicity[i])
    return tuple(out)


def is_effective_class(fan: Fan, a: Divisor) -> Membership:
    """Is D linearly equivalent to a nonnegative combination of the D_i?

    Only the rays of the fan matter.  On success the coefficients are those
    of an effective representative.
    """
    cs = class_space(fan)
    x = cs.class_of(a)
    return cone_membership(x, cs.columns(range(cs.nrays)))


def star1_convex(fan: Fan, sigma: Cone, a: Divisor, cs: ClassSpace | None = None) -> Membership:
    """Normal-form test: is D equivalent to some D' vanishing on sigma and
    nonnegative on the rest of star^1(sigma)?"""
    cs = cs or class_space(fan)
    sigma = tuple(sorted(sigma))
    near = fan.star1_rays(sigma)
    far = sorted(set(range(cs.nrays)) - set(near) - set(sigma))
    return cone_membership(cs.class_of(a), cs.columns(near), cs.columns(far))


def _in_pos_outside(cs: ClassSpace, x, sigma: Cone) -> Membership:
    s = set(sigma)
    return cone_membership(x, cs.columns([i for i in range(cs.nrays) if i not in s]))


@dataclass(frozen=True)
class Verdict:
    holds: bool
    failing_cone: Cone | None = None
    certificate: tuple | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds


def g_contains(fan: Fan, a: Divisor, cs: ClassSpace | None = None) -> Verdict:
    """Is D globally generated?  Witness: u(sigma) on each maximal cone with
    a_i + <u(sigma), v_i> >= 0 everywhere and = 0 on sigma."""
    cs = cs or class_space(fan)
    x = cs.class_of(a)
    witness = {}
    for c in fan.max_cones:
        res = _in_pos_outside(cs, x, c)
        if not res:
            return Verdict(False, c, res.certificate)
        lam = [Fraction(0)] * cs.nrays
        rest = [i for i in range(cs.nrays) if i not in set(c)]
        for i, v in zip(rest, res.coefficients):
            lam[i] = v
        # lam - a is principal: solve <u, v_i> = lam_i - a_i
        u = solve_rational([list(v) for v in fan.rays], [l - ai for l, ai in zip(lam, a)])
        assert u is not None
        witness[c] = u
    return Verdict(True, witness=witness)


def l_contains(fan: Fan, a: Divisor, parent: Fan | None = None) -> Verdict:
    """Is the pullback of D to every orbit closure of a non-maximal cone effective?

    ``parent`` is the fan whose orbit closures are meant when ``fan`` is a
    subfan; by default the fan itself.
    """
    base = parent or fan
    for sigma in fan.cones:
        if fan.is_maximal(sigma):
            continue
        star = base.quotient_star(sigma)
        b = pullback_orbit(base, sigma, a, star)
        res = is_effective_class(star.fan, b)
        if not res:
            return Verdict(False, sigma, res.certificate)
    return Verdict(True)


def f_contains(fan: Fan, a: Divisor, cs: ClassSpace | None = None) -> Verdict:
    """Normal-form test over the codimension-one cones of a pure fan."""
    if not fan.is_pure():
        raise DivisorError("fan is not pure")
    d = fan.cone_dim(fan.max_cones[0])
    cs = cs or class_space(fan)
    for tau in fan.cones_of_dim(d - 1):
        res = star1_convex(fan, tau, a, cs)
        if not res:
            return Verdict(False, tau, res.certificate)
    return Verdict(True)
