"""Inner and outer polyhedral bounds for nef cones of toric varieties of fans.

All cones live in a :class:`~toricnef.divclass.ClassSpace`.  For a fan with
class columns ``[D_i]``:

* ``g_cone``: intersection over maximal cones s of pos([D_i] : i not in s),
  the globally generated classes.
* ``l_cone``: intersection over non-maximal cones s of
  pos([D_i] : i in star^1(s) - s) + span([D_j] : j outside star^1(s)).
* ``f_cone``: the same intersection, over the codimension-one cones of a
  pure fan only.

One always has ``g_cone <= g_cone(remove_maximal) <= l_cone`` and, for pure
fans, ``l_cone <= f_cone``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import cone as _cone
from .cone import Comparison, PolyCone
from .divclass import ClassSpace, class_space
from .exactlin import dot, integerize
from .fan import Cone, Fan, _maximal_only


class NotPureError(ValueError):
    pass


def _pmap(func: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


def _hull_outside(args) -> PolyCone:
    cols, sigma, n = args
    s = set(sigma)
    return _cone.positive_hull([c for i, c in enumerate(cols) if i not in s], n=n)


def _mixed(args) -> PolyCone:
    cols, near, far, n = args
    return _cone.positive_hull([cols[i] for i in near], [cols[j] for j in far], n=n)


def _exact_columns(cs: ClassSpace) -> list[tuple]:
    return cs.columns(range(cs.nrays))


def g_pieces(fan: Fan, cs: ClassSpace | None = None, cones: Sequence[Cone] | None = None, jobs: int = 1) -> dict[Cone, PolyCone]:
    cs = cs or class_space(fan)
    cols = _exact_columns(cs)
    cones = list(fan.max_cones if cones is None else cones)
    hulls = _pmap(_hull_outside, [(cols, c, cs.rank) for c in cones], jobs)
    return dict(zip(cones, hulls))


def g_cone(fan: Fan, cs: ClassSpace | None = None, jobs: int = 1, over: str = "maximal") -> PolyCone:
    """Globally generated classes.  ``over="all"`` intersects over every cone."""
    cs = cs or class_space(fan)
    cones = fan.max_cones if over == "maximal" else fan.cones
    pieces = g_pieces(fan, cs, cones, jobs)
    return _cone.intersect(list(pieces.values()))


def gcirc_cone(fan: Fan, cs: ClassSpace | None = None, jobs: int = 1) -> PolyCone:
    """g_cone of the fan with its maximal cones removed, in the same class space."""
    cs = cs or class_space(fan)
    return g_cone(fan.remove_maximal(), cs, jobs)


def mixed_hull(fan: Fan, sigma: Cone, cs: ClassSpace | None = None) -> PolyCone:
    cs = cs or class_space(fan)
    return _mixed(_mixed_args(fan, sigma, cs, _exact_columns(cs)))


def _mixed_args(fan, sigma, cs, cols):
    sigma = tuple(sorted(sigma))
    near = fan.star1_rays(sigma)
    far = sorted(set(range(cs.nrays)) - set(near) - set(sigma))
    return (cols, near, far, cs.rank)


def l_pieces(fan: Fan, cs: ClassSpace | None = None, cones: Sequence[Cone] | None = None, jobs: int = 1) -> dict[Cone, PolyCone]:
    cs = cs or class_space(fan)
    cols = _exact_columns(cs)
    if cones is None:
        maximal = set(fan.max_cones)
        cones = [c for c in fan.cones if c not in maximal]
    cones = list(cones)
    hulls = _pmap(_mixed, [_mixed_args(fan, c, cs, cols) for c in cones], jobs)
    return dict(zip(cones, hulls))


def l_cone(fan: Fan, cs: ClassSpace | None = None, jobs: int = 1) -> PolyCone:
    """Classes whose pullback to every orbit closure of a non-maximal cone is effective."""
    cs = cs or class_space(fan)
    return _cone.intersect(list(l_pieces(fan, cs, jobs=jobs).values()))


def pure_dim(fan: Fan) -> int:
    if not fan.is_pure():
        dims = sorted({fan.cone_dim(c) for c in fan.max_cones})
        raise NotPureError(f"fan is not pure: maximal cones of dimensions {dims}")
    return fan.cone_dim(fan.max_cones[0])


def f_cone(fan: Fan, cs: ClassSpace | None = None, jobs: int = 1) -> PolyCone:
    """Intersection of the mixed hulls over codimension-one cones of a pure fan."""
    d = pure_dim(fan)
    cs = cs or class_space(fan)
    return _cone.intersect(list(l_pieces(fan, cs, fan.cones_of_dim(d - 1), jobs).values()))


# -- projective extension ----------------------------------------------------


def quasiproj_extendable(fan: Fan, cs: ClassSpace | None = None, jobs: int = 1):
    """Do the relative interiors of pos([D_i] : i not in s) meet?

    Returns ``(answer, witness_class)``.  The relative interiors meet exactly
    when a relative interior point of their intersection lies in each of
    them.
    """
    cs = cs or class_space(fan)
    pieces = g_pieces(fan, cs, jobs=jobs)
    g = _cone.intersect(list(pieces.values()))
    x = _cone.relint_point(g)
    if x is None:
        x = tuple(Fraction(0) for _ in range(cs.rank))
    ok = all(_cone.in_relative_interior(p, x) for p in pieces.values())
    return ok, (x if ok else None)


class CertificationError(ValueError):
    def __init__(self, message: str, cone: Cone | None = None):
        super().__init__(message)
        self.cone = cone


def lifted_subdivision(fan: Fan, heights: Sequence) -> Fan:
    """Fan of lower faces of pos((v_i, a_i)) + R_{>=0} (0, ..., 0, 1)."""
    return _lift(fan, heights)[0]


def _lift(fan: Fan, heights: Sequence):
    n = fan.lattice_dim
    hs = [Fraction(h) for h in heights]
    lifted = [integerize(list(v) + [h]) for v, h in zip(fan.rays, hs)]
    up = tuple([0] * n + [1])
    k = _cone.positive_hull(lifted + [up], n=n + 1)
    cells = []
    for f in k.facets:
        if dot(f, up) > 0:
            tight = tuple(i for i, w in enumerate(lifted) if dot(f, w) == 0)
            if tight:
                cells.append(tight)
    return Fan(n, fan.rays, _maximal_only(cells)), k, lifted


def certify_subdivision(fan: Fan, a: Sequence, cs: ClassSpace | None = None) -> Fan:
    """Regular subdivision induced by D, checked to contain the fan.

    Raises CertificationError naming a cone of the fan that is not a cone
    of the subdivision.
    """
    cs = cs or class_space(fan)
    x = cs.class_of(a)
    g = g_cone(fan, cs)
    if not _cone.in_relative_interior(g, x):
        raise CertificationError("class is not in the relative interior of g_cone")
    sub, k, lifted = _lift(fan, a)
    n = fan.lattice_dim
    up = tuple([0] * n + [1])
    used = set(sub.used_rays)
    for i in fan.used_rays:
        if i not in used:
            raise CertificationError(f"ray {i} is not a ray of the subdivision", (i,))
    for sigma in fan.cones:
        if not sigma:
            continue
        # smallest face of the lifted cone containing the lifted sigma
        containing = [f for f in k.facets if all(dot(f, lifted[i]) == 0 for i in sigma)]
        face = {i for i, w in enumerate(lifted) if all(dot(f, w) == 0 for f in containing)}
        lower = not all(dot(f, up) == 0 for f in containing) if containing else False
        if face != set(sigma) or not lower or not sub.has_cone(sigma):
            raise CertificationError(f"cone {list(sigma)} is not a cone of the subdivision", sigma)
    return sub


# -- reports -----------------------------------------------------------------


@dataclass
class BoundReport:
    cones: dict[str, PolyCone]
    verdicts: dict[tuple[str, str], Comparison] = field(default_factory=dict)
    nef_certified: bool | None = None


CHAIN = [("G", "Gcirc"), ("Gcirc", "L"), ("L", "F"), ("F", "Fw"), ("L", "Fw")]


def containment_report(
    fan: Fan,
    cs: ClassSpace | None = None,
    weights: dict | None = None,
    pullback: Sequence[Sequence] | None = None,
    jobs: int = 1,
) -> BoundReport:
    """Compute the chain of bounds and compare neighbours.

    ``pullback`` is a ray-level matrix (columns indexed by rays) mapping to
    another space, applied to every cone before comparison.
    """
    from . import chow

    cs = cs or class_space(fan)
    cones: dict[str, PolyCone] = {
        "G": g_cone(fan, cs, jobs),
        "Gcirc": gcirc_cone(fan, cs, jobs),
        "L": l_cone(fan, cs, jobs),
    }
    if fan.is_pure():
        cones["F"] = f_cone(fan, cs, jobs)
        if weights is not None:
            cones["Fw"] = chow.fw_cone(fan, weights, cs)
    if pullback is not None:
        m = cs.descend_map(pullback)
        cones = {k: _cone.image(m, v) for k, v in cones.items()}
    rep = BoundReport(cones)
    for a, b in CHAIN:
        if a in cones and b in cones:
            rep.verdicts[(a, b)] = _cone.compare(cones[a], cones[b])
    if "Fw" in cones:
        rep.nef_certified = rep.verdicts[("L", "Fw")].verdict == "equal"
    return rep
