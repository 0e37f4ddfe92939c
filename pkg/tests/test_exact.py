from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictau.exact import (
    Lattice,
    ZMatrix,
    as_fraction,
    hnf,
    invariant_factors,
    kernel_lattice,
    lattice_intersect_subspace,
    saturation,
    snf,
    solve_affine,
    solve_integer,
)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_as_fraction_accepts_exact_inputs_only():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == 4
    assert as_fraction(2.0) == 2
    with pytest.raises(ValueError):
        as_fraction(0.1)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_hnf_examples():
    h, u = hnf(ZMatrix.identity(3))
    assert h == ZMatrix.identity(3) and u == ZMatrix.identity(3)
    m = ZMatrix.from_rows([[2, 4], [1, 1]])
    h, u = hnf(m)
    assert u @ m == h
    assert abs(u.det()) == 1
    assert h.rows[1][0] == 0
    z = ZMatrix.zeros(2, 3)
    h, u = hnf(z)
    assert h == z and u == ZMatrix.identity(2)


def test_snf_examples():
    for rows, diag in ([[[2, 0], [0, 3]], (1, 6)], [[[1, 0], [0, 1]], (1, 1)], [[[2, 0], [0, 2]], (2, 2)]):
        m = ZMatrix.from_rows(rows)
        d, u, v = snf(m)
        assert u @ m @ v == d
        assert tuple(abs(d[i, i]) for i in range(2)) == diag


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_hnf_is_idempotent_and_unimodular(rows):
    m = ZMatrix.from_rows(rows)
    h, u = hnf(m)
    assert u @ m == h
    assert abs(u.det()) == 1
    h2, _ = hnf(h)
    assert h2 == h


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_divisibility_chain(rows):
    m = ZMatrix.from_rows(rows)
    d, u, v = snf(m)
    assert u @ m @ v == d
    assert d.is_diagonal()
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = [d[i, i] for i in range(min(d.shape))]
    for a, b in zip(diag, diag[1:]):
        assert a >= 0
        assert (b == 0) or (a != 0 and b % a == 0)


def test_kernel_lattice_examples():
    k = kernel_lattice([[1, 1, 1, 1, 1]], 5)
    assert k.rank == 4
    assert all(sum(b) == 0 for b in k.basis)
    assert k.index_in_saturation() == 1
    assert kernel_lattice([[0, 0, 0]], 3) == Lattice.standard(3)
    assert kernel_lattice([[1, 0], [0, 1]], 2).rank == 0


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_kernel_lattice_is_saturated(rows):
    k = kernel_lattice(rows, len(rows[0]))
    assert k.index_in_saturation() == 1
    for b in k.basis:
        assert all(sum(x * y for x, y in zip(r, b)) == 0 for r in rows)


def test_lattice_intersect_subspace_examples():
    assert lattice_intersect_subspace(Lattice.standard(2), [[1, -1]]) == Lattice.from_generators([[1, 1]], 2)
    two = Lattice.from_generators([[2, 0], [0, 2]], 2)
    assert lattice_intersect_subspace(two, [[1, 1]]) == Lattice.from_generators([[2, -2]], 2)
    assert lattice_intersect_subspace(two, []) == two


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=0, max_size=2),
)
def test_lattice_intersection_matches_box_scan(gens, eqs):
    lat = Lattice.from_generators(gens, 3)
    sub = lattice_intersect_subspace(lat, eqs)
    for v in product(range(-4, 5), repeat=3):
        in_w = all(sum(e * x for e, x in zip(eq, v)) == 0 for eq in eqs)
        assert sub.contains(v) == (lat.contains(v) and in_w)


def test_solve_affine_examples():
    assert solve_affine([[1, 0], [0, 1]], [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    x = solve_affine([[1, 1]], [1])
    assert x[0] + x[1] == 1
    assert solve_affine([[0]], [1]) is None


def test_solve_integer():
    assert solve_integer([[2, 4]], [6]) is not None
    assert solve_integer([[2, 4]], [3]) is None
    x = solve_integer([[3, 5], [1, 1]], [1, 1])
    assert 3 * x[0] + 5 * x[1] == 1 and x[0] + x[1] == 1


def test_saturation_and_invariant_factors():
    lat = Lattice.from_generators([[2, 2]], 2)
    assert saturation(lat) == Lattice.from_generators([[1, 1]], 2)
    assert lat.index_in_saturation() == 2
    assert invariant_factors(ZMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == (2, 6, 12)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_arithmetic_is_exact(a, b):
    assert (Fraction(a, b) * b) == a
