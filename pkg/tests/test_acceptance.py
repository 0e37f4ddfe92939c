"""Acceptance suite. Each ``test_cK_*`` function decides criterion K; the terminal
summary prints one PASS/FAIL line per criterion."""

import json
import random
import time
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd

from oracles import box_count, coset_brute, rh_genus_cyclic

from pictau import (
    BlowupSurface,
    BoundaryRealization,
    CharacterSubgroup,
    CurveModel,
    HalfOpenPolytope,
    LineArrangement,
    building_data,
    congruence_hodge,
    cover_hodge,
    decompose_boundaries,
    ehrhart_qp,
    euler_char,
    group_law,
    hq_blowup,
    identity,
    inverse,
    lattice_points,
    monodromy_pullback,
    pullback_parabolic,
    resolve,
    riemann_hurwitz_genus,
    torsion_points,
    vertices,
)
from pictau.cli import run
from pictau.exact import Lattice, saturation
from pictau.polytopes import QuasiPolynomial, coset_count_qp

FIVE_LINES = {"variety": "P2", "divisor": {"lines": [[1, k, 0] for k in range(5)]}}


def _cli(tmp_path, command, problem, *flags):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    code, text = run([command, str(path), *flags])
    assert code == 0, text
    return json.loads(text)


# -- criterion 1 ------------------------------------------------------------


def test_c1_five_lines_decomposition_and_strata(tmp_path):
    start = time.perf_counter()
    dec = _cli(tmp_path, "decompose", FIVE_LINES)
    strata = _cli(tmp_path, "strata", FIVE_LINES)
    elapsed = time.perf_counter() - start

    cells = dec["polytopes"]
    assert [c["id"] for c in cells] == [f"P_{k}" for k in range(5)]
    assert [c["id"] for c in dec["refined"]] == [f"P_{k}" for k in range(5)]
    lines = LineArrangement(tuple(tuple(ln) for ln in FIVE_LINES["divisor"]["lines"]))
    lib = decompose_boundaries(lines.divisors)
    for k, cell in enumerate(lib.cells):
        assert cell.base_class == (k,)
        expected = sorted(
            tuple(Fraction(int(i in s)) for i in range(5)) for s in _subsets(5, k)
        )
        assert vertices(cell.polytope) == expected
    rng = random.Random(1)
    for _ in range(300):
        alpha = [Fraction(rng.randrange(12), 12) for _ in range(4)]
        alpha.append((-sum(alpha)) % 1)
        hits = [c.id for c in lib.cells if c.polytope.contains(alpha)]
        assert hits == [f"P_{int(sum(alpha))}"]
        for k, c in enumerate(lib.cells):
            assert c.polytope.contains(alpha) == (sum(alpha) == k and all(0 <= a < 1 for a in alpha))

    got = {(s["q"], s["i"]): s["polytopes"] for s in strata["strata"]}
    assert got == {
        (1, 1): ["P_2", "P_3", "P_4"],
        (1, 2): ["P_3", "P_4"],
        (1, 3): ["P_4"],
        (2, 1): ["P_0"],
    }
    # every other V^q_i with q <= 2, i <= 5 is empty
    assert all(s["polytopes"] for s in strata["strata"])
    assert elapsed < 5, f"took {elapsed:.1f}s"


def _subsets(n, k):
    from itertools import combinations

    return [set(c) for c in combinations(range(n), k)]


# -- criterion 2 ------------------------------------------------------------


def test_c2_congruence_cover_quasi_polynomial(tmp_path):
    start = time.perf_counter()
    report = _cli(tmp_path, "hodge", FIVE_LINES, "--q", "1", "--qp")
    qp = QuasiPolynomial.from_json(report["quasi_polynomial"])
    geom = resolve(LineArrangement(tuple(tuple(ln) for ln in FIVE_LINES["divisor"]["lines"])))
    direct = [congruence_hodge(geom, 1, n) for n in range(1, 11)]
    elapsed = time.perf_counter() - start
    assert [qp(n) for n in range(1, 11)] == direct
    assert qp(2) == 5 == direct[1]

    # the level-2 cover restricted to a general line through the center is the
    # Z_2^4 cover of P^1 branched at the five intersection points
    curve = CurveModel(tuple(Fraction(k) for k in range(5)))
    d = curve.divisors
    gens = []
    for i in range(4):
        alpha = [Fraction(0)] * 5
        alpha[i] = alpha[4] = Fraction(1, 2)
        gens.append(BoundaryRealization(d, (1,), alpha))
    g = CharacterSubgroup(d, tuple(gens))
    assert g.order == 16
    assert riemann_hurwitz_genus(curve, g) == 5
    assert cover_hodge(resolve(curve), g, 1) == 5
    assert elapsed < 30, f"took {elapsed:.1f}s"


# -- criterion 3 ------------------------------------------------------------


def _weight_vectors(n, k):
    for ws in combinations_with_replacement(range(1, n), k):
        if sum(ws) % n == 0 and gcd(n, *ws) == 1:
            yield ws


def test_c3_cyclic_curve_covers_match_riemann_hurwitz():
    start = time.perf_counter()
    cases = 0
    for n in range(2, 9):
        for k in range(3, 7):
            curve = CurveModel(tuple(Fraction(i) for i in range(k)))
            geom = resolve(curve)
            for ws in _weight_vectors(n, k):
                gen = BoundaryRealization(curve.divisors, (sum(ws) // n,), [Fraction(a, n) for a in ws])
                g = CharacterSubgroup(curve.divisors, (gen,))
                assert g.order == n
                h10 = cover_hodge(geom, g, 1)
                rh = riemann_hurwitz_genus(curve, g)
                assert h10 == rh == rh_genus_cyclic(n, ws), (n, ws)
                cases += 1
    elapsed = time.perf_counter() - start
    assert cases >= 300
    assert elapsed < 60, f"took {elapsed:.1f}s"


# -- criterion 4 ------------------------------------------------------------


def random_tu_polytope(rng, dim, den, integral=False):
    """Rows are signed sums of consecutive coordinates, so vertex denominators divide ``den``."""
    lo = [Fraction(rng.randint(-2 * den, den), den) for _ in range(dim)]
    hi = [l + Fraction(rng.randint(0, 3 * den), den) for l in lo]
    if integral:
        lo = [Fraction(rng.randint(-1, 0)) for _ in range(dim)]
        hi = [l + rng.randint(0, 2) for l in lo]
    rows = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        rows.append(([-x for x in e], rng.choice(["le", "lt"]), -lo[i]))
        rows.append((e, rng.choice(["le", "lt"]), hi[i]))
    for _ in range(rng.randint(0, 2)):
        i = rng.randrange(dim)
        j = rng.randrange(i, dim)
        sign = rng.choice([1, -1])
        a = [sign if i <= t <= j else 0 for t in range(dim)]
        mid = sum(sign * (l + h) / 2 for t, (l, h) in enumerate(zip(lo, hi)) if i <= t <= j)
        b = Fraction(round(mid * den) + rng.randint(-1, 2), den)
        if integral:
            b = Fraction(round(mid) + rng.randint(0, 1))
        rel = rng.choice(["le", "lt", "le", "eq"] if dim > 1 else ["le", "lt"])
        rows.append((a, rel, b))
    return rows, lo, hi


def test_c4_ehrhart_matches_enumeration():
    rng = random.Random(20240604)
    done = 0
    while done < 50:
        dim = rng.randint(1, 3)
        den = rng.randint(1, 4)
        rows, lo, hi = random_tu_polytope(rng, dim, den)
        p = HalfOpenPolytope.from_constraints(dim, rows)
        if p.is_empty:
            continue
        assert all(den % x.denominator == 0 for v in vertices(p) for x in v)
        qp = ehrhart_qp(p)
        assert den % qp.period == 0
        for n in range(1, 3 * qp.period + 4):
            listed = len(lattice_points(p, None, n))
            assert qp(n) == listed == box_count(rows, lo, hi, n), (rows, n)
        done += 1


# -- criterion 5 ------------------------------------------------------------


def test_c5_coset_count_matches_definition():
    rng = random.Random(7)
    for _ in range(20):
        dim = rng.randint(1, 3)
        rows, lo, hi = random_tu_polytope(rng, dim, 1, integral=True)
        q = HalfOpenPolytope.from_constraints(dim, rows)
        w_eqs = [[rng.randint(-1, 2) for _ in range(dim)] for _ in range(rng.randint(0, min(2, dim)))]
        gens = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(rng.randint(1, dim))]
        lam = Lattice.from_generators(gens, dim)
        sat = saturation(lam)
        coeffs = [rng.randint(-1, 1) for _ in sat.basis]
        wvec = [sum(c * b[t] for c, b in zip(coeffs, sat.basis)) for t in range(dim)]
        f = coset_count_qp(q, w_eqs, lam, wvec)
        for n in range(1, 13):
            assert f(n) == coset_brute(rows, lo, hi, w_eqs, lam.basis, wvec, n), (rows, w_eqs, gens, wvec, n)


# -- criterion 6 ------------------------------------------------------------


def _random_element(rng, d):
    alpha = [Fraction(rng.randrange(q), q) for q in (rng.randint(1, 12) for _ in range(d.size - 1))]
    alpha.append((-sum(alpha)) % 1)
    return BoundaryRealization(d, (int(sum(alpha)),), alpha)


def test_c6_parabolic_group_algebra():
    rng = random.Random(6)
    five = resolve(LineArrangement(tuple((1, k, 0) for k in range(5))))
    triple = resolve(LineArrangement(((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1))))
    for geom in (five, triple):
        d, r = geom.divisors, geom.resolution
        e = identity(d)
        elems = [_random_element(rng, d) for _ in range(500)]
        for x, y, z in zip(elems, elems[1:], elems[2:]):
            assert group_law(group_law(x, y), z) == group_law(x, group_law(y, z))
            assert group_law(x, y) == group_law(y, x)
            assert group_law(x, e) == x
            inv = inverse(x)
            assert group_law(x, inv) == e
            support = [1 if a else 0 for a in x.alpha]
            assert inv.bundle == (-x.bundle[0] + sum(support),)
            assert inv.alpha == tuple(1 - a if a else 0 for a in x.alpha)
            px, py = pullback_parabolic(x, r), pullback_parabolic(y, r)
            assert pullback_parabolic(group_law(x, y), r) == group_law(px, py)
            assert px.alpha == monodromy_pullback(x.alpha, r)
        assert pullback_parabolic(e, r) == identity(r.target)
    for geom, levels in ((triple, range(2, 13)), (five, range(2, 7))):
        dec = decompose_boundaries(geom.divisors)
        for n in levels:
            pts = torsion_points(dec, n)
            images = {pullback_parabolic(x, geom.resolution) for x in pts}
            assert len(images) == len(pts)


# -- criterion 7 ------------------------------------------------------------


def _random_torsion(rng, d, max_den=6):
    while True:
        qd = rng.randint(2, max_den)
        alpha = [Fraction(rng.randrange(qd), qd) for _ in range(d.size - 1)]
        alpha.append((-sum(alpha)) % 1)
        if any(alpha):
            return BoundaryRealization(d, (int(sum(alpha)),), alpha)


def test_c7_building_data_consistency():
    rng = random.Random(77)
    inputs = [
        LineArrangement(tuple((1, k, 0) for k in range(5))),
        LineArrangement(((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1))),
        CurveModel((Fraction(0), Fraction(1), Fraction(3), None)),
        CurveModel(tuple(Fraction(k) for k in range(6))),
    ]
    for t in range(20):
        d = inputs[t % len(inputs)].divisors
        gens = tuple(_random_torsion(rng, d) for _ in range(rng.randint(1, 2)))
        g = CharacterSubgroup(d, gens)
        bd = building_data(g)
        chars = bd.characters
        assert len(chars) == g.order
        for a, x in enumerate(chars):
            for b, y in enumerate(chars):
                eps = bd.epsilon[(a, b)]
                assert set(eps) <= {0, 1}
                assert eps == bd.epsilon[(b, a)]
                xy = group_law(x, y)
                lhs = x.bundle[0] + y.bundle[0]
                assert lhs == xy.bundle[0] + sum(eps)
                assert xy in chars
        for c, row in zip(chars, bd.iota):
            assert all(Fraction(i, m) == a for i, m, a in zip(row, bd.inertia, c.alpha))


# -- criterion 8 ------------------------------------------------------------


def test_c8_cohomology_oracle():
    rng = random.Random(8)
    plane = BlowupSurface()
    for d in range(7):
        assert hq_blowup(plane, (d,), 0) == (d + 1) * (d + 2) // 2
    one = BlowupSurface(((0, 0, 1),))
    for d in range(1, 7):
        assert hq_blowup(one, (d, -1), 0) == (d + 1) * (d + 2) // 2 - 1
    surfaces = [
        plane,
        one,
        BlowupSurface(((0, 0, 1), (1, 0, 1), (0, 1, 1))),
        BlowupSurface(((0, 0, 1), (1, 0, 1), (2, 0, 1))),
        BlowupSurface(((0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1))),
    ]
    for _ in range(100):
        s = rng.choice(surfaces)
        cls = (rng.randint(-6, 6),) + tuple(rng.randint(-3, 3) for _ in s.points)
        h = [hq_blowup(s, cls, q) for q in range(3)]
        assert h[0] - h[1] + h[2] == euler_char(s, cls)
        dual = tuple(k - c for k, c in zip(s.canonical_class, cls))
        assert hq_blowup(s, cls, 0) == hq_blowup(s, dual, 2)
        assert hq_blowup(s, cls, 1) == hq_blowup(s, dual, 1)
