import itertools

import pytest

from toricnef import catalog, chow, nefbounds
from toricnef.cone import compare, positive_hull
from toricnef.exactlin import rank


def hull(*g):
    return positive_hull(list(g))


def test_projective_space():
    e = catalog.projective_space(2)
    assert len(e.fan.rays) == 3 and len(e.fan.max_cones) == 3 and e.classes.rank == 1
    p4 = catalog.projective_space(4)
    assert len(p4.fan.max_cones) == 5


def test_punctured_f1_entry():
    e = catalog.hirzebruch(1, punctured=True)
    cols = e.classes.columns(range(4))
    assert cols[0] == cols[2] == (1, 0)
    assert cols[3] == (0, 1)
    assert cols[1] == tuple(a - b for a, b in zip(cols[3], cols[0]))
    b = catalog.bounds("f1-punctured")
    assert b["Gcirc"] == b["L"] == hull((1, 0), (-1, 1))
    assert e.fan.remove_maximal().max_cones == ((),)


def test_nonregular_entry():
    for ch in "AB":
        e = catalog.nonregular(ch)
        e.fan.validate()
        assert len(e.fan.rays) == 7 and len(e.fan.max_cones) == 10
        assert e.fan.is_pure(3)
        # complete: every 2-cone lies in exactly two maximal cones
        for tau in e.fan.cones_of_dim(2):
            assert len(e.fan.star1(tau)) == 2
    with pytest.raises(ValueError):
        catalog.nonregular("C")


def test_nonregular_regular_triangulations_are_projective():
    """The six non-twisted diagonal choices of the front patch give projective fans."""
    outer = [(0, 1, 3, 4), (1, 2, 4, 5), (2, 0, 5, 3)]  # quads (i, j, i', j')
    back = [(3, 4, 5), (0, 1, 6), (1, 2, 6), (0, 2, 6)]
    count = 0
    for choice in itertools.product([0, 1], repeat=3):
        cones = list(back)
        for (i, j, ip, jp), c in zip(outer, choice):
            cones += [(i, j, jp), (i, ip, jp)] if c else [(i, j, ip), (j, ip, jp)]
        if choice in ((0, 0, 0), (1, 1, 1)):
            continue  # the twisted ones
        from toricnef.fan import build_fan

        fan = build_fan(catalog.NONREGULAR_RAYS, cones, validate=True)
        assert nefbounds.quasiproj_extendable(fan)[0]
        count += 1
    assert count == 6


def test_bl2p4_entry():
    e = catalog.bl2p4(3)
    full = catalog.bl2p4(None)
    full.fan.validate()
    assert len(full.fan.max_cones) == 11
    assert nefbounds.g_cone(full.fan, full.classes) == hull((1, 0, 1), (1, 1, 0), (1, 1, 1))
    assert e.fan.rays[5] == (0, 0, 0, -1) and e.fan.rays[6] == (0, 0, -1, 0)
    w = catalog.bl2p4_weights(1, 2, 3)
    assert w[(0, 3, 4)] == 6 and w[(0, 1, 2)] == 3 and w[(0, 1, 5)] == 1


def test_kleinschmidt_entry():
    e = catalog.kleinschmidt(3, (1, 2))
    assert len(e.fan.max_cones) == 3 * 3
    assert e.classes.rank == 2
    assert nefbounds.g_cone(e.fan, e.classes) == hull((1, 0), (0, 1))


def test_kleinschmidt_fw_formula_applies_for_middle_skeleta():
    s, a1 = 4, 1
    e = catalog.kleinschmidt(s, (a1,))
    n = e.fan.lattice_dim
    for k in range(2, n):
        d = e.fan.skeleton(k)
        w = catalog.kleinschmidt_weights(d, s, a1, 2, 5)
        assert chow.fw_cone(d, w, e.classes) == hull((0, 1), (5, -2))


@pytest.mark.parametrize("r", [4, 5, 6])
def test_delpezzo_entry(r):
    e = catalog.del_pezzo(r)
    e.fan.validate()
    assert e.classes.rank == r + 1
    assert len(set(e.fan.rays)) == len(e.fan.rays)
    assert e.fan.is_pure(2)
    assert rank(e.pullback) == r + 1


def test_delpezzo_pairing():
    l, e1 = (1, 0, 0, 0, 0), (0, 1, 0, 0, 0)
    assert catalog.del_pezzo_pairing(l, l) == 1
    assert catalog.del_pezzo_pairing(e1, e1) == -1
    assert catalog.del_pezzo_pairing(l, e1) == 0
    conic = (2, -1, -1, -1, -1)
    assert catalog.del_pezzo_pairing(conic, conic) == 0


def test_delpezzo_out_of_range_names():
    with pytest.raises(KeyError):
        catalog.entry("delpezzo9")


def test_m0n_entry():
    e = catalog.m0n(5)
    assert all(len(c) == 2 for c in e.fan.max_cones)
    six = catalog.m0n(6)
    assert len(six.fan.rays) == 25 and len(six.fan.max_cones) == 105
    assert all(len(c) == 3 for c in six.fan.max_cones)


def test_basis_changes_invertible():
    for name in catalog.names():
        if name == "kleinschmidt":
            continue
        e = catalog.entry(name)
        if e.class_matrix is not None:
            assert rank(e.class_matrix) == e.classes.rank


def test_entry_lookup():
    assert catalog.entry("kleinschmidt-s3-a1,2").params == (3, (1, 2))
    with pytest.raises(KeyError):
        catalog.entry("nope")


@pytest.mark.parametrize("name", ["p2", "f1", "f1-punctured", "bl2p4", "m0n5", "delpezzo4", "kleinschmidt-s2-a1"])
def test_verify_checks_pass(name):
    results = catalog.run_checks(name)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]
