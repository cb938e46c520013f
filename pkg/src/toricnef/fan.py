"""Rational polyhedral fans given by rays and maximal cones.

Cones are sorted tuples of ray indices.  Subfans built from a fan
(:meth:`Fan.skeleton`, :meth:`Fan.remove_maximal`) keep the parent's ray
list, so divisor coefficient vectors of the subfan and the parent line up
even when some rays no longer belong to any cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import cone as _cone
from .exactlin import IntVector, cokernel_map, dot, primitive, rank

Cone = tuple[int, ...]


class FanError(ValueError):
    """The input does not describe a fan."""


@dataclass(frozen=True)
class QuotientStar:
    """The star of a cone seen in the quotient lattice N / N_sigma."""

    sigma: Cone
    taus: tuple[Cone, ...]  # cones of star^1(sigma); index = quotient ray
    projection: tuple[IntVector, ...]  # rows of Z^n -> Z^(n - dim sigma)
    ray_of_tau: tuple[IntVector, ...]  # primitive image e_tau
    multiplicity: dict  # ray index i (in some tau, not sigma) -> c_i
    tau_of_ray: dict  # ray index i -> position of its tau
    fan: "Fan"


@dataclass(frozen=True)
class Fan:
    lattice_dim: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[Cone, ...]

    # -- faces -------------------------------------------------------------

    @cached_property
    def _faces(self) -> dict[Cone, int]:
        faces: dict[Cone, int] = {(): 0}
        for c in self.max_cones:
            for f, d in _faces_of(self.rays, c).items():
                faces[f] = d
        return faces

    @property
    def cones(self) -> list[Cone]:
        return sorted(self._faces, key=lambda c: (self._faces[c], c))

    def cone_dim(self, c: Cone) -> int:
        return self._faces[tuple(sorted(c))]

    def has_cone(self, c: Iterable[int]) -> bool:
        return tuple(sorted(c)) in self._faces

    @cached_property
    def _by_dim(self) -> dict[int, list[Cone]]:
        out: dict[int, list[Cone]] = {}
        for c, d in self._faces.items():
            out.setdefault(d, []).append(c)
        for v in out.values():
            v.sort()
        return out

    def cones_of_dim(self, k: int) -> list[Cone]:
        return list(self._by_dim.get(k, []))

    @property
    def dim(self) -> int:
        return max(self._faces.values())

    @property
    def used_rays(self) -> list[int]:
        return sorted({i for c in self.max_cones for i in c})

    def faces(self, c: Cone) -> list[Cone]:
        s = set(c)
        return [f for f in self.cones if s.issuperset(f)]

    def is_pure(self, d: int | None = None) -> bool:
        dims = {self.cone_dim(c) for c in self.max_cones}
        if d is None:
            return len(dims) == 1
        return dims == {d}

    def is_maximal(self, c: Cone) -> bool:
        return tuple(sorted(c)) in set(self.max_cones)

    @cached_property
    def _cofaces(self) -> dict[Cone, list[Cone]]:
        """Cones of dimension one higher containing each cone."""
        out: dict[Cone, list[Cone]] = {c: [] for c in self._faces}
        for c, d in self._faces.items():
            for f in _faces_of_codim1(self, c, d):
                out[f].append(c)
        for v in out.values():
            v.sort()
        return out

    def star1(self, sigma: Cone) -> list[Cone]:
        return list(self._cofaces[tuple(sorted(sigma))])

    def star1_rays(self, sigma: Cone) -> list[int]:
        """Rays of star^1(sigma) not in sigma."""
        s = set(sigma)
        return sorted({i for t in self.star1(sigma) for i in t} - s)

    def maximal_containing(self, sigma: Cone) -> list[Cone]:
        s = set(sigma)
        return [c for c in self.max_cones if s.issubset(c)]

    # -- derived fans ------------------------------------------------------

    def skeleton(self, k: int) -> "Fan":
        """All cones of dimension at most k."""
        cones = [c for c in self.cones if self.cone_dim(c) <= k]
        return Fan(self.lattice_dim, self.rays, _maximal_only(cones))

    def remove_maximal(self) -> "Fan":
        keep = set(self.max_cones)
        cones = [c for c in self.cones if c not in keep]
        return Fan(self.lattice_dim, self.rays, _maximal_only(cones))

    def quotient_star(self, sigma: Cone) -> QuotientStar:
        return _quotient_star(self, tuple(sorted(sigma)))

    # -- geometry ----------------------------------------------------------

    def polycone(self, c: Cone) -> _cone.PolyCone:
        if not c:
            return _cone.zero_cone(self.lattice_dim)
        return _cone.positive_hull([self.rays[i] for i in c], n=self.lattice_dim)

    def ray_matrix(self) -> list[IntVector]:
        """Rays as rows (the transpose of the usual column convention)."""
        return list(self.rays)

    def validate(self) -> None:
        """Raise FanError unless the cones form a fan."""
        n = self.lattice_dim
        for i, v in enumerate(self.rays):
            if len(v) != n or not any(v):
                raise FanError(f"ray {i} is zero or has wrong length")
        for c in self.max_cones:
            pc = self.polycone(c)
            if not pc.is_pointed:
                raise FanError(f"cone {list(c)} is not strongly convex")
            if set(pc.generators) != {self.rays[i] for i in c}:
                raise FanError(f"rays of cone {list(c)} are not its extreme rays")
        simplicial = {c: rank([self.rays[i] for i in c]) == len(c) for c in self.max_cones}
        for a, b in itertools.combinations(self.max_cones, 2):
            common = tuple(sorted(set(a) & set(b)))
            union = sorted(set(a) | set(b))
            if simplicial[a] and simplicial[b] and rank([self.rays[i] for i in union]) == len(union):
                continue
            if common not in _faces_of(self.rays, a) or common not in _faces_of(self.rays, b):
                raise FanError(f"cones {list(a)} and {list(b)} share rays {list(common)} that are not a face")
            meet = _cone.intersect([self.polycone(a), self.polycone(b)])
            if meet != self.polycone(common):
                raise FanError(f"cones {list(a)} and {list(b)} do not meet in a common face")


def _maximal_only(cones: Iterable[Cone]) -> tuple[Cone, ...]:
    cones = sorted(set(tuple(sorted(c)) for c in cones), key=lambda c: (-len(c), c))
    out: list[Cone] = []
    for c in cones:
        s = set(c)
        if not any(s < set(d) for d in out):
            out.append(c)
    return tuple(sorted(out))


def _faces_of(rays: Sequence[IntVector], c: Cone) -> dict[Cone, int]:
    vecs = [rays[i] for i in c]
    if rank(vecs) == len(c):
        return {f: len(f) for k in range(len(c) + 1) for f in itertools.combinations(c, k)}
    pc = _cone.positive_hull(vecs)
    tight = [tuple(i for i in c if dot(f, rays[i]) == 0) for f in pc.facets]
    faces = {tuple(c)}
    frontier = set(tight)
    while frontier:
        faces |= frontier
        frontier = {
            tuple(sorted(set(x) & set(y))) for x in faces for y in tight
        } - faces
    faces.add(())
    return {f: rank([rays[i] for i in f]) if f else 0 for f in faces}


def _faces_of_codim1(fan: Fan, c: Cone, d: int) -> list[Cone]:
    if d == 0:
        return []
    if len(c) == d:
        return list(itertools.combinations(c, d - 1))
    s = set(c)
    return [f for f, e in fan._faces.items() if e == d - 1 and s.issuperset(f)]


def _quotient_star(fan: Fan, sigma: Cone) -> QuotientStar:
    n = fan.lattice_dim
    if sigma:
        cols = [[fan.rays[i][k] for i in sigma] for k in range(n)]
        proj = tuple(cokernel_map(cols))
    else:
        proj = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    taus = tuple(fan.star1(sigma))
    images = []
    mult = {}
    tau_of = {}
    s = set(sigma)
    for t_idx, t in enumerate(taus):
        e = None
        for i in t:
            if i in s:
                continue
            img = tuple(dot(row, fan.rays[i]) for row in proj)
            p = primitive(img)
            if e is None:
                e = p
            elif p != e:
                raise FanError(f"rays of {list(t)} do not span one quotient ray")
            c = next(a // b for a, b in zip(img, p) if b)
            mult[i] = c
            tau_of[i] = t_idx
        images.append(e)
    pos = {t: k for k, t in enumerate(taus)}
    qcones = set()
    for c in fan.maximal_containing(sigma):
        if tuple(c) == sigma:
            continue
        qcones.add(tuple(sorted(pos[t] for t in taus if set(t) <= set(c))))
    qfan = Fan(len(proj), tuple(images), tuple(sorted(qcones)))
    return QuotientStar(sigma, taus, proj, tuple(images), mult, tau_of, qfan)


def build_fan(
    rays: Sequence[Sequence[int]],
    max_cones: Iterable[Iterable[int]],
    validate: bool = False,
    lattice_dim: int | None = None,
) -> Fan:
    """Primitivize the rays and keep only inclusion-maximal cones."""
    if not rays and lattice_dim is None:
        raise FanError("no rays and no lattice dimension")
    n = lattice_dim if lattice_dim is not None else len(rays[0])
    for i, v in enumerate(rays):
        if len(v) != n:
            raise FanError(f"ray {i} has length {len(v)}, expected {n}")
        if not any(v):
            raise FanError(f"ray {i} is zero")
    prim = [primitive(r) for r in rays]
    if len(set(prim)) != len(prim):
        raise FanError("two rays are parallel")
    cones = []
    for c in max_cones:
        c = tuple(sorted(set(int(i) for i in c)))
        for i in c:
            if not 0 <= i < len(prim):
                raise FanError(f"cone {list(c)} uses unknown ray {i}")
        cones.append(c)
    fan = Fan(n, tuple(prim), _maximal_only(cones))
    used = set(fan.used_rays)
    unused = [i for i in range(len(prim)) if i not in used]
    if unused:
        raise FanError(f"rays {unused} belong to no cone")
    if validate:
        fan.validate()
    return fan
