"""Chow groups of toric varieties of pure fans, weights, and curve classes.

For a fan of pure dimension d the group of cycles of codimension d is
generated by the orbit closures V(s), s in Delta(d).  The relations come
from characters u in tau^perp for tau in Delta(d-1):
``sum over s > tau of <u, n_{s,tau}> [V(s)] = 0`` where ``n_{s,tau}`` is a
ray of s outside tau divided by its multiplicity in N / N_tau.

A weight is a functional on the generators killing every relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import cone as _cone
from .cone import PolyCone
from .divclass import ClassSpace, class_space, pullback_orbit
from .exactlin import dot, integerize, kernel_basis, rank
from .fan import Cone, Fan
from .nefbounds import pure_dim


class InvalidWeights(ValueError):
    pass


@dataclass(frozen=True)
class ChowData:
    generators: tuple[Cone, ...]
    relations: tuple[tuple[int, ...], ...]
    relation_source: tuple[tuple[Cone, tuple[int, ...]], ...]  # (tau, u) per row
    rank: int


def chow_presentation(fan: Fan) -> ChowData:
    d = pure_dim(fan)
    gens = tuple(fan.cones_of_dim(d))
    pos = {s: k for k, s in enumerate(gens)}
    rows = []
    source = []
    for tau in fan.cones_of_dim(d - 1):
        if tau:
            perp = kernel_basis([list(fan.rays[i]) for i in tau])
        else:
            n = fan.lattice_dim
            perp = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        star = fan.quotient_star(tau)
        for u in perp:
            row = [Fraction(0)] * len(gens)
            for s in star.taus:
                i = min(j for j in s if j not in tau)
                row[pos[s]] = Fraction(dot(u, fan.rays[i]), star.multiplicity[i])
            if any(row):
                rows.append(integerize(row))
                source.append((tau, tuple(u)))
    r = rank(rows, len(gens)) if rows else 0
    return ChowData(gens, tuple(rows), tuple(source), len(gens) - r)


def weight_cone(chow: ChowData) -> PolyCone:
    """Nonnegative weights: {w : w kills all relations, w >= 0}."""
    m = len(chow.generators)
    units = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    return _cone.h_to_v(units, list(chow.relations), m)


def weight_vector(chow: ChowData, weights: Mapping[Cone, object]) -> tuple[Fraction, ...]:
    pos = {s: k for k, s in enumerate(chow.generators)}
    if set(weights) != set(pos):
        missing = sorted(set(pos) - set(weights))
        extra = sorted(set(weights) - set(pos))
        bad = missing[0] if missing else extra[0]
        raise InvalidWeights(f"weights must cover the top cones exactly; offending cone {list(bad)}")
    w = [Fraction(0)] * len(pos)
    for s, v in weights.items():
        w[pos[s]] = Fraction(v)
    return tuple(w)


def validate_weights(chow: ChowData, weights: Mapping[Cone, object]) -> tuple[Fraction, ...]:
    """Check that w kills every relation; return it as a vector."""
    w = weight_vector(chow, weights)
    for row, (tau, u) in zip(chow.relations, chow.relation_source):
        if dot(row, w) != 0:
            raise InvalidWeights(f"weights violate the relation at cone {list(tau)} for u={list(u)}")
    return w


def curve_class(fan: Fan, tau: Cone, a: Sequence) -> dict[Cone, Fraction]:
    """Coefficients of D restricted to V(tau) on the divisors V(s), s in star^1(tau)."""
    star = fan.quotient_star(tau)
    b = pullback_orbit(fan, tau, a, star)
    return dict(zip(star.taus, b))


def pairing_functionals(fan: Fan, w: Sequence, chow: ChowData) -> dict[Cone, tuple[Fraction, ...]]:
    """For each tau in Delta(d-1), the ray functional a -> w(D . V(tau))."""
    d = pure_dim(fan)
    pos = {s: k for k, s in enumerate(chow.generators)}
    m = len(fan.rays)
    out = {}
    for tau in fan.cones_of_dim(d - 1):
        star = fan.quotient_star(tau)
        ell = []
        for i in range(m):
            e = [0] * m
            e[i] = 1
            b = pullback_orbit(fan, tau, e, star)
            ell.append(sum(bs * w[pos[s]] for bs, s in zip(b, star.taus)))
        out[tau] = tuple(ell)
    return out


def fw_cone(fan: Fan, weights: Mapping[Cone, object], cs: ClassSpace | None = None) -> PolyCone:
    """Classes D with w(D . V(tau)) >= 0 for every tau in Delta(d-1)."""
    cs = cs or class_space(fan)
    chow = chow_presentation(fan)
    w = validate_weights(chow, weights)
    return fw_from_vector(fan, w, chow, cs)


def fw_from_vector(fan, w, chow, cs) -> PolyCone:
    ineqs = [cs.descend(ell) for ell in pairing_functionals(fan, w, chow).values()]
    return _cone.h_to_v(ineqs, [], cs.rank)


def f_via_weights(fan: Fan, cs: ClassSpace | None = None) -> PolyCone:
    """Intersection of fw_cone over the extreme rays of the weight cone."""
    cs = cs or class_space(fan)
    chow = chow_presentation(fan)
    wc = weight_cone(chow)
    if wc.lineality:
        raise AssertionError("weight cone has lineality")
    ineqs = []
    for w in wc.generators:
        ineqs += [cs.descend(ell) for ell in pairing_functionals(fan, w, chow).values()]
    if not ineqs:
        return _cone.h_to_v([], [], cs.rank)
    return _cone.h_to_v(ineqs, [], cs.rank)


def uniform_weights(fan: Fan, value=1) -> dict[Cone, Fraction]:
    d = pure_dim(fan)
    return {s: Fraction(value) for s in fan.cones_of_dim(d)}
