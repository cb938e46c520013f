from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricnef import catalog
from toricnef.exactlin import (
    cokernel_map,
    dot,
    format_rational,
    kernel_basis,
    matmul,
    parse_rational,
    primitive,
    rank,
    smith_diagonal,
    smith_normal_form,
    solve_rational,
    transpose,
)

small_ints = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def det(m):
    m = [list(map(Fraction, r)) for r in m]
    n = len(m)
    d = Fraction(1)
    for i in range(n):
        p = next((k for k in range(i, n) if m[k][i]), None)
        if p is None:
            return Fraction(0)
        if p != i:
            m[i], m[p] = m[p], m[i]
            d = -d
        d *= m[i][i]
        for k in range(i + 1, n):
            f = m[k][i] / m[i][i]
            m[k] = [a - f * b for a, b in zip(m[k], m[i])]
    return d


def test_snf_identity():
    s, u, w = smith_normal_form([[1, 0], [0, 1]])
    assert s == [[1, 0], [0, 1]]
    assert u == [[1, 0], [0, 1]] and w == [[1, 0], [0, 1]]


def test_snf_hand_example():
    assert smith_diagonal([[2, 4], [6, 8]]) == [2, 4]


def test_delpezzo4_picard_rank():
    e = catalog.del_pezzo(4)
    assert len(cokernel_map([list(v) for v in e.fan.rays])) == 5


@given(matrices())
def test_snf_properties(m):
    s, u, w = smith_normal_form(m)
    assert matmul(matmul(u, m), w) == s
    assert abs(det(u)) == 1 and abs(det(w)) == 1
    for i, row in enumerate(s):
        for j, v in enumerate(row):
            if i != j:
                assert v == 0
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_kernel_basis_examples():
    assert kernel_basis([[1, 1]]) in ([(1, -1)], [(-1, 1)])
    assert kernel_basis([[1, 0], [0, 1]]) == []


def test_nonregular_kernel_and_class_matrix():
    v = [list(r) for r in zip(*catalog.NONREGULAR_RAYS)]  # 3 x 7
    assert len(kernel_basis(v)) == 4
    g = catalog.NONREGULAR_CLASSES
    assert matmul(g, transpose(v)) == [[0, 0, 0]] * 4


@given(matrices(3, 5))
def test_kernel_basis_is_lattice_basis(m):
    ncols = len(m[0])
    basis = kernel_basis(m, ncols)
    assert len(basis) == ncols - rank(m, ncols)
    for b in basis:
        assert all(dot(row, b) == 0 for row in m)
    if basis:
        # a lattice basis extends the determinant test: its d x d minors have gcd 1
        import itertools
        import math

        minors = [
            abs(det([[b[j] for j in cols] for b in basis]))
            for cols in itertools.combinations(range(ncols), len(basis))
        ]
        assert math.gcd(*[int(x) for x in minors]) == 1


def test_solve_rational():
    assert solve_rational([[1, 0], [0, 1]], [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    assert solve_rational([[1, 0], [1, 0]], [1, 2]) is None


def test_solve_cartier_on_p2_cone():
    rays = [(1, 0), (0, 1)]
    a = [2, 5]
    u = solve_rational([list(r) for r in rays], [-x for x in a])
    assert [dot(u, r) for r in rays] == [-2, -5]


def test_primitive():
    assert primitive((2, 4, 6)) == (1, 2, 3)
    assert primitive((0, -3)) == (0, -1)
    with pytest.raises(ValueError):
        primitive((0, 0))


def test_m0n_rays_primitive():
    import math

    e = catalog.m0n(5)
    for r in e.fan.rays:
        assert math.gcd(*r) == 1


@given(st.lists(small_ints, min_size=1, max_size=5).filter(any))
def test_primitive_idempotent(v):
    p = primitive(v)
    assert primitive(p) == p
    k = next(a // b for a, b in zip(v, p) if b)
    assert k > 0 and [k * x for x in p] == list(v)


def test_rational_format_roundtrip():
    for x in [Fraction(3, 4), Fraction(-2), Fraction(0), Fraction(-7, 3)]:
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(-7, 3)) == "-7/3"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises((TypeError, ValueError)):
        parse_rational(True)
