import random
from fractions import Fraction

import pytest

from toricnef import catalog, chow, nefbounds
from toricnef.cone import compare, contains_point, positive_hull
from toricnef.divclass import principal_divisor
from toricnef.fan import build_fan

P2 = catalog.projective_space(2)


def hull(*g):
    return positive_hull(list(g))


def test_p2_chow_rank_and_weights():
    ch = chow.chow_presentation(P2.fan)
    assert ch.rank == 1
    chow.validate_weights(ch, chow.uniform_weights(P2.fan))
    w = chow.weight_cone(ch)
    assert len(w.generators) == 1 and w.dim == 1


def test_bl2p4_chow_rank_and_basis():
    e = catalog.bl2p4(3)
    ch = chow.chow_presentation(e.fan)
    assert ch.rank == 3
    # V(012), V(01p1), V(01p2) are independent modulo the relations
    from toricnef.exactlin import rank

    pos = {s: k for k, s in enumerate(ch.generators)}
    units = []
    for s in [(0, 1, 2), (0, 1, 5), (0, 1, 6)]:
        u = [0] * len(ch.generators)
        u[pos[s]] = 1
        units.append(u)
    base = rank(ch.relations, len(ch.generators))
    assert rank(list(ch.relations) + units, len(ch.generators)) == base + 3


def test_kleinschmidt_r1_skeleton_chow_rank():
    e = catalog.kleinschmidt(4, (2,))
    for k in (2, 3):
        assert chow.chow_presentation(e.fan.skeleton(k)).rank == 2


def test_relations_supported_on_star():
    e = catalog.bl2p4(3)
    ch = chow.chow_presentation(e.fan)
    for row, (tau, _) in zip(ch.relations, ch.relation_source):
        for s, v in zip(ch.generators, row):
            if v:
                assert set(tau) <= set(s)


def test_validate_weights_examples():
    dp = catalog.del_pezzo(5)
    chow.validate_weights(chow.chow_presentation(dp.fan), dp.weights)
    e = catalog.bl2p4(3)
    ch = chow.chow_presentation(e.fan)
    w = catalog.bl2p4_weights(1, 2, 3)
    chow.validate_weights(ch, w)
    bad = dict(w)
    bad[(0, 3, 4)] += 1
    with pytest.raises(chow.InvalidWeights, match="relation"):
        chow.validate_weights(ch, bad)
    missing = dict(w)
    del missing[(0, 3, 4)]
    with pytest.raises(chow.InvalidWeights, match=r"\[0, 3, 4\]"):
        chow.validate_weights(ch, missing)


def test_weight_cone_examples():
    e = catalog.bl2p4(3)
    ch = chow.chow_presentation(e.fan)
    w = chow.weight_cone(ch)
    assert w.dim == 3 and len(w.generators) == 3 and w.is_pointed
    # the three coordinates w(V(012)), w(V(01p1)), w(V(01p2)) are (gamma, alpha, beta)
    pos = {s: k for k, s in enumerate(ch.generators)}
    coords = sorted(tuple(g[pos[s]] for s in [(0, 1, 2), (0, 1, 5), (0, 1, 6)]) for g in w.generators)
    assert coords == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    k = catalog.kleinschmidt(3, (2,))
    d = k.fan.skeleton(2)
    kw = chow.weight_cone(chow.chow_presentation(d))
    # w1 on cones without u's, w2 on cones with u0
    for w1, w2, inside in [(1, 2, True), (1, 3, True), (1, 1, False), (0, 1, True)]:
        vec = chow.weight_vector(chow.chow_presentation(d), catalog.kleinschmidt_weights(d, 3, 2, w1, w2))
        assert contains_point(kw, vec) == inside


def test_curve_class_principal_pairs_to_zero():
    e = catalog.bl2p4(3)
    w = catalog.bl2p4_weights(2, 1, 3)
    a = principal_divisor(e.fan, (1, -2, 3, 1))
    for tau in e.fan.cones_of_dim(2):
        cc = chow.curve_class(e.fan, tau, a)
        assert sum(b * w[s] for s, b in cc.items()) == 0


def test_kleinschmidt_curve_pairings():
    s, a1 = 3, 2
    k = catalog.kleinschmidt(s, (a1,))
    d = k.fan.skeleton(2)
    w1, w2 = Fraction(1), Fraction(5)
    weights = catalog.kleinschmidt_weights(d, s, a1, w1, w2)
    for a, b in [(1, 0), (0, 1), (2, -1), (-1, 3)]:
        div = k.classes.lift((a, b))
        values = set()
        for tau in d.cones_of_dim(1):
            cc = chow.curve_class(d, tau, div)
            values.add(sum(x * weights[t] for t, x in cc.items()))
        assert values == {a * w1 + b * w2, (a + a1 * b) * w2, a * (w2 - a1 * w1)}


def test_fw_cone_examples():
    e = catalog.bl2p4(3)
    fw = chow.fw_cone(e.fan, catalog.bl2p4_weights(1, 1, 1), e.classes)
    assert fw == hull((1, 1, 1), (1, 1, -2), (1, -2, 1))
    k = catalog.kleinschmidt(3, (2,))
    d = k.fan.skeleton(2)
    got = chow.fw_cone(d, catalog.kleinschmidt_weights(d, 3, 2, 1, 3), k.classes)
    assert got == hull((0, 1), (3, -1))
    m = catalog.m0n(5)
    assert chow.fw_cone(m.fan, m.weights) == nefbounds.f_cone(m.fan)


def test_f_via_weights_examples():
    e = catalog.bl2p4(3)
    assert chow.f_via_weights(e.fan, e.classes) == hull((1, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0))
    assert chow.f_via_weights(P2.fan) == nefbounds.g_cone(P2.fan)
    for name in ("delpezzo4", "m0n5"):
        x = catalog.entry(name)
        assert chow.f_via_weights(x.fan) == chow.fw_cone(x.fan, x.weights)


def test_fw_not_inside_effective_cone():
    e = catalog.bl2p4(3)
    fw = chow.fw_cone(e.fan, catalog.bl2p4_weights(1, 1, 1), e.classes)
    # effective cone of the blow-up: pos(D0, E1, E2) = positive orthant in (D0, E1, E2) coordinates
    to_eff = [[1, 0, 0], [-1, 1, 0], [-1, 0, 1]]  # (x0, x1, x2) -> coefficients on D0, E1, E2
    assert any(min(sum(r[i] * g[i] for i in range(3)) for r in to_eff) < 0 for g in fw.generators)


def test_invalid_weights_in_fw_cone():
    with pytest.raises(chow.InvalidWeights):
        chow.fw_cone(P2.fan, {(0, 1): 1})


def test_non_pure_rejected():
    mixed = build_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (2,)])
    with pytest.raises(nefbounds.NotPureError):
        chow.chow_presentation(mixed)


# -- properties ----------------------------------------------------------------

PURE_FANS = ["p2", "f1", "f1-punctured", "bl2p4", "delpezzo4", "delpezzo5", "m0n5", "kleinschmidt-s3-a1", "nonregular"]


@pytest.mark.parametrize("name", PURE_FANS)
def test_chain_through_weights(name):
    e = catalog.entry(name)
    ch = chow.chow_presentation(e.fan)
    l = nefbounds.l_cone(e.fan, e.classes)
    f = nefbounds.f_cone(e.fan, e.classes)
    assert compare(l, f).verdict in ("equal", "A_strict_subset")
    assert chow.f_via_weights(e.fan, e.classes) == f
    for w in chow.weight_cone(ch).generators:
        fw = chow.fw_from_vector(e.fan, w, ch, e.classes)
        assert compare(f, fw).verdict in ("equal", "A_strict_subset")


@pytest.mark.parametrize("name", PURE_FANS)
def test_principal_pairings_vanish(name, rng):
    e = catalog.entry(name)
    ch = chow.chow_presentation(e.fan)
    extremes = chow.weight_cone(ch).generators
    for _ in range(5):
        u = [rng.randint(-3, 3) for _ in range(e.fan.lattice_dim)]
        a = principal_divisor(e.fan, u)
        for w in extremes:
            for ell in chow.pairing_functionals(e.fan, w, ch).values():
                assert sum(x * y for x, y in zip(ell, a)) == 0
