from fractions import Fraction

import pytest

from pictau.geometry import CurveModel, LineArrangement, resolve
from pictau.parabolic import decompose_boundaries
from pictau.strata import (
    compute_strata,
    count_stratum_torsion,
    floor_constancy_check,
    refined_decomposition,
    strata_class,
    stratum_torsion_qp,
)

F = Fraction
FIVE = LineArrangement(tuple((1, k, 0) for k in range(5)))
TRIANGLE = LineArrangement(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
TRIPLE_PLUS = LineArrangement(((1, 0, 0), (0, 1, 0), (1, -1, 0), (0, 0, 1)))
FOUR_GENERAL = LineArrangement(((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
FOUR_POINTS = CurveModel((F(0), F(1), F(2), None))
INPUTS = [FIVE, TRIANGLE, TRIPLE_PLUS, FOUR_GENERAL, FOUR_POINTS]
INPUT_IDS = ["five", "triangle", "triple_plus", "four_general", "four_points"]


def test_four_points_on_the_line():
    t = compute_strata(resolve(FOUR_POINTS))
    assert t.nontrivial() == {(0, 1): ["P_2", "P_3"], (0, 2): ["P_3"], (1, 1): ["P_0"]}


def test_single_line_and_triangle():
    t = compute_strata(resolve(LineArrangement(((1, 0, 0),))))
    assert t.nontrivial() == {(2, 1): ["P_0"]}
    t = compute_strata(resolve(TRIANGLE))
    assert t.nontrivial() == {(2, 1): ["P_0"]}
    assert t.hq_by_polytope == {"P_0": (0, 0, 1), "P_1": (0, 0, 0), "P_2": (0, 0, 0)}


def test_strata_class_on_five_lines():
    geom = resolve(FIVE)
    dec = refined_decomposition(geom)
    # K_Z + mu^*O(k) - k E
    for k, cell in enumerate(dec.cells):
        assert strata_class(geom, cell.representative) == (k - 3, 1 - k)


@pytest.mark.parametrize("src", INPUTS, ids=INPUT_IDS)
def test_strata_are_nested(src):
    t = compute_strata(resolve(src))
    for (q, i), recs in t.entries.items():
        if i > 1:
            assert set(t.ids(q, i)) <= set(t.ids(q, i - 1))
        for rec in recs:
            assert t.hq_by_polytope[rec.polytope_id][q] >= i
    for cid, h in t.hq_by_polytope.items():
        for q, v in enumerate(h):
            for i in range(1, v + 1):
                assert cid in t.ids(q, i)


@pytest.mark.parametrize("src", INPUTS, ids=INPUT_IDS)
@pytest.mark.parametrize("toward", [0, 1, -1])
def test_strata_independent_of_representative(src, toward):
    geom = resolve(src)
    base = compute_strata(geom)
    other = compute_strata(geom, pick=lambda cell: cell.polytope.interior_point(toward=toward))
    assert other.hq_by_polytope == base.hq_by_polytope
    assert other.nontrivial() == base.nontrivial()


@pytest.mark.parametrize("src", [FIVE, TRIPLE_PLUS, FOUR_POINTS], ids=["five", "triple_plus", "four_points"])
def test_torsion_quasi_polynomials_match_counts(src):
    t = compute_strata(resolve(src))
    for (q, i) in t.entries:
        qp = stratum_torsion_qp(t, q, i)
        assert [qp(n) for n in range(1, 13)] == [count_stratum_torsion(t, q, i, n) for n in range(1, 13)]


def test_stratum_torsion_counts_by_hand():
    t = compute_strata(resolve(FOUR_POINTS))
    # V^1_1 = {0}: only the identity
    assert [count_stratum_torsion(t, 1, 1, n) for n in (1, 2, 5)] == [1, 1, 1]
    # V^0_2 = P_3: alpha in (0,1)^4 with sum 3, denominators dividing n
    assert count_stratum_torsion(t, 0, 2, 2) == 0
    assert count_stratum_torsion(t, 0, 2, 4) == 1


def test_floor_constancy_detects_unrefined_cells():
    geom = resolve(TRIPLE_PLUS)
    base = decompose_boundaries(geom.divisors)
    assert [floor_constancy_check(c.polytope, geom.resolution) for c in base.cells] == [True, False, False, True]
    assert all(floor_constancy_check(c.polytope, geom.resolution) for c in refined_decomposition(geom).cells)


def test_picked_point_outside_cell_rejected():
    geom = resolve(FOUR_POINTS)
    with pytest.raises(ValueError):
        compute_strata(geom, pick=lambda cell: (F(1, 2), F(1, 2), F(1, 2), F(1, 2)))


def test_hq_table_shape():
    t = compute_strata(resolve(FIVE), q_max=1)
    assert t.q_max == 1
    assert all(len(v) == 2 for v in t.hq_by_polytope.values())
    assert t.i_max(1) == max(v[1] for v in t.hq_by_polytope.values())
    with pytest.raises(KeyError):
        t.decomposition.by_id("P_99")


def test_three_points_on_the_line():
    t = compute_strata(resolve(CurveModel((F(0), F(1), None))), q_max=0)
    assert t.nontrivial() == {(0, 1): ["P_2"]}
