import random
from fractions import Fraction

import pytest

from conftest import random_divisor
from toricnef import catalog
from toricnef.cone import positive_hull
from toricnef.divclass import (
    DivisorError,
    cartier_data,
    class_space,
    is_effective_class,
    map_class,
    principal_divisor,
    psi_eval,
    pullback_orbit,
    star1_convex,
)
from toricnef.exactlin import dot
from toricnef.fan import build_fan

P2 = build_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_p2_class_space():
    cs = class_space(P2)
    assert cs.rank == 1
    assert cs.column(0) == cs.column(1) == cs.column(2) != (0,)


def test_nonregular_class_basis_matches_stored_matrix():
    e = catalog.nonregular("A")
    assert e.classes.rank == 4
    # columns for the non-primitive generators reproduce NONREGULAR_CLASSES
    for i in range(7):
        scale = 3 if i < 3 else 1
        assert tuple(Fraction(x, scale) for x in e.classes.column(i)) == tuple(
            row[i] for row in catalog.NONREGULAR_CLASSES
        )


def test_m0n6_class_rank():
    e = catalog.m0n(6)
    assert len(e.fan.rays) == 25 and e.fan.lattice_dim == 9
    assert e.classes.rank == 16


def test_cartier_data():
    assert all(u == (0, 0) for u in cartier_data(P2, [0, 0, 0]).values())
    data = cartier_data(P2, [1, 0, 0])
    for c, u in data.items():
        for i in c:
            assert dot(u, P2.rays[i]) == -(1 if i == 0 else 0)


def test_cartier_on_simplicial_fans_always_exists():
    rng = random.Random(1)
    for name in ("bl2p4", "delpezzo5", "m0n5"):
        fan = catalog.entry(name).fan
        for _ in range(10):
            cartier_data(fan, random_divisor(rng, len(fan.rays)))


def test_non_cartier_detected():
    fan = build_fan([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [(0, 1, 2, 3)])
    with pytest.raises(DivisorError):
        cartier_data(fan, [1, 0, 0, 0])


def test_psi_eval():
    a = [1, 1, 1]
    for i, v in enumerate(P2.rays):
        assert psi_eval(P2, a, v) == a[i]
    assert psi_eval(P2, a, (0, 0)) == 0
    assert psi_eval(P2, a, (1, 1)) == 2
    half = build_fan([(1, 0), (0, 1)], [(0,), (1,)])
    with pytest.raises(DivisorError):
        psi_eval(half, [1, 1], (1, 1))


def test_pullback_of_origin_is_identity():
    a = [2, -1, 3]
    assert pullback_orbit(P2, (), a) == tuple(Fraction(x) for x in a)


def test_pullback_of_principal_is_principal():
    u = (2, -3)
    b = pullback_orbit(P2, (0,), principal_divisor(P2, u))
    q = P2.quotient_star((0,))
    assert class_space(q.fan).class_of(b) == (0,)


def test_bl2p4_curve_class_fixed_by_table():
    from toricnef.chow import curve_class

    e = catalog.bl2p4(3)
    cs = e.classes
    f_div = cs.lift((1, 1, 1))
    w = catalog.bl2p4_weights(1, 1, 1)
    for tau in e.fan.cones_of_dim(2):
        cc = curve_class(e.fan, tau, f_div)
        assert sum(b * w[s] for s, b in cc.items()) >= 0


def test_is_effective_class():
    assert is_effective_class(P2, [0, 0, 0])
    e = catalog.hirzebruch(1, punctured=True)
    assert is_effective_class(e.fan, [0, 1, 0, 0])  # D2
    line = build_fan([(1,), (-1,)], [(0,), (1,)])
    assert not is_effective_class(line, [1, -2])


def test_map_class():
    c = positive_hull([(1, 0), (1, 1)])
    assert map_class([[1, 0], [0, 1]], c) == c
    assert map_class([[0, 0]], c).is_zero


def test_delpezzo4_mapped_g_is_mapped_f():
    from toricnef import nefbounds

    e = catalog.del_pezzo(4)
    m = e.classes.descend_map(e.pullback)
    g = map_class(m, nefbounds.g_cone(e.fan, e.classes))
    f = map_class(m, nefbounds.f_cone(e.fan, e.classes))
    assert g == f and g.dim == 5


# -- properties ----------------------------------------------------------------

PROPERTY_FANS = ["p2", "f1", "f1-punctured", "nonregular", "bl2p4", "delpezzo5", "m0n5", "kleinschmidt-s3-a1,2"]


def _pullback_with_choice(fan, sigma, a, pick):
    """Pullback formula with an explicit choice of ray in each tau - sigma."""
    from toricnef.divclass import _solve_on

    q = fan.quotient_star(sigma)
    u = _solve_on(fan, sigma, a)
    out = []
    for t in q.taus:
        rest = [i for i in t if i not in sigma]
        i = pick(rest)
        out.append((a[i] + dot(u, fan.rays[i])) / q.multiplicity[i])
    return tuple(out)


@pytest.mark.parametrize("name", PROPERTY_FANS)
def test_pullback_independent_of_ray_choice(name, rng):
    fan = catalog.entry(name).fan
    nonmax = [s for s in fan.cones if not fan.is_maximal(s)]
    for _ in range(100):
        a = random_divisor(rng, len(fan.rays))
        sigma = rng.choice(nonmax)
        first = _pullback_with_choice(fan, sigma, a, min)
        last = _pullback_with_choice(fan, sigma, a, max)
        assert first == last == pullback_orbit(fan, sigma, a)


@pytest.mark.parametrize("name", PROPERTY_FANS)
def test_pullback_class_level_well_defined(name, rng):
    fan = catalog.entry(name).fan
    nonmax = [s for s in fan.cones if not fan.is_maximal(s)]
    for _ in range(30):
        a = random_divisor(rng, len(fan.rays))
        u = [rng.randint(-3, 3) for _ in range(fan.lattice_dim)]
        shifted = [x + y for x, y in zip(a, principal_divisor(fan, u))]
        sigma = rng.choice(nonmax)
        qcs = class_space(fan.quotient_star(sigma).fan)
        b0 = pullback_orbit(fan, sigma, principal_divisor(fan, u))
        assert all(x == 0 for x in qcs.class_of(b0))
        assert qcs.class_of(pullback_orbit(fan, sigma, a)) == qcs.class_of(pullback_orbit(fan, sigma, shifted))


@pytest.mark.parametrize("name", PROPERTY_FANS)
def test_effective_pullback_matches_normal_form(name, rng):
    fan = catalog.entry(name).fan
    nonmax = [s for s in fan.cones if not fan.is_maximal(s)]
    for _ in range(30):
        a = random_divisor(rng, len(fan.rays))
        sigma = rng.choice(nonmax)
        q = fan.quotient_star(sigma)
        eff = bool(is_effective_class(q.fan, pullback_orbit(fan, sigma, a, q)))
        assert eff == bool(star1_convex(fan, sigma, a))
