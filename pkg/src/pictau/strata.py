"""Cohomology jump loci ``V^q_i`` as unions of polytopes, and their torsion counts.

For a cell with representative ``(L, alpha)`` the relevant number is
``h^q(X, K_X + L + J(alpha.D))``, which on the log resolution equals
``h^q(Z, K_Z + mu^*L - floor(e(alpha)).E)``. It is constant on every cell of
the refined decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import InvariantError
from .exact import floor, solve_integer
from .geometry import ResolvedGeometry
from .parabolic import (
    BoundaryDecomposition,
    BoundaryRealization,
    Cell,
    ResolutionData,
    decompose_boundaries,
    refine_by_resolution,
)
from .polytopes import (
    LE,
    LT,
    HalfOpenPolytope,
    QuasiPolynomial,
    coset_count_qp,
    count_lattice_points,
    scale_by_torus_rank,
)
from .exact import Lattice, kernel_lattice


@dataclass(frozen=True)
class StratumRecord:
    polytope_id: str
    representative: Optional[BoundaryRealization]
    torus_rank: int = 0
    torsion_label: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "polytope": self.polytope_id,
            "representative": None if self.representative is None else self.representative.to_json(),
            "torus_rank": self.torus_rank,
        }


@dataclass(frozen=True)
class StrataTable:
    decomposition: BoundaryDecomposition
    q_max: int
    hq_by_polytope: dict[str, tuple[int, ...]]
    entries: dict[tuple[int, int], tuple[StratumRecord, ...]]

    def ids(self, q: int, i: int) -> list[str]:
        return [r.polytope_id for r in self.entries.get((q, i), ())]

    def i_max(self, q: int) -> int:
        return max((v[q] for v in self.hq_by_polytope.values()), default=0)

    def nontrivial(self) -> dict[tuple[int, int], list[str]]:
        return {k: [r.polytope_id for r in v] for k, v in sorted(self.entries.items()) if v}

    def to_json(self) -> dict:
        return {
            "q_max": self.q_max,
            "hq": {k: list(v) for k, v in self.hq_by_polytope.items()},
            "strata": [
                {"q": q, "i": i, "polytopes": [r.polytope_id for r in recs]}
                for (q, i), recs in sorted(self.entries.items())
            ],
        }


def strata_class(geom: ResolvedGeometry, x: BoundaryRealization) -> tuple[int, ...]:
    """NS class of ``K_Z + mu^*L - floor(e(alpha)).E`` on the resolution."""
    r = geom.resolution
    fl, _ = r.floor_and_frac(x.alpha)
    pulled = r.pull_class(x.bundle)
    corr = r.target.combination(fl)
    return tuple(k + a - b for k, a, b in zip(geom.canonical_z, pulled, corr))


def refined_decomposition(geom: ResolvedGeometry) -> BoundaryDecomposition:
    return refine_by_resolution(decompose_boundaries(geom.divisors), geom.resolution)


def compute_strata(
    geom: ResolvedGeometry,
    q_max: Optional[int] = None,
    pick: Optional[Callable[[Cell], Sequence[Fraction]]] = None,
) -> StrataTable:
    """Evaluate ``h^q`` on one representative per cell and assemble the ``V^q_i``.

    ``pick`` may supply another point of each cell to use instead of the stored
    representative; the table must not depend on that choice.
    """
    q_max = geom.dim if q_max is None else q_max
    dec = refined_decomposition(geom)
    r = geom.resolution
    hq: dict[str, tuple[int, ...]] = {}
    reps: dict[str, BoundaryRealization] = {}
    for cell in dec.cells:
        if not floor_constancy_check(cell.polytope, r):
            raise InvariantError(f"floor(e) is not constant on {cell.id}")
        x = cell.representative
        if pick is not None:
            x = BoundaryRealization(dec.divisors, cell.base_class, pick(cell))
            if not cell.polytope.contains(x.alpha):
                raise ValueError(f"picked point is not in {cell.id}")
        if x is None:
            raise InvariantError("cells need representatives to evaluate cohomology")
        cls = strata_class(geom, x)
        hq[cell.id] = tuple(geom.cohomology(cls, q) for q in range(q_max + 1))
        reps[cell.id] = x
    torus = dec.divisors.variety.pic0_rank
    entries: dict[tuple[int, int], tuple[StratumRecord, ...]] = {}
    for q in range(q_max + 1):
        i = 1
        while True:
            members = tuple(
                StratumRecord(c.id, reps[c.id], torus) for c in dec.cells if hq[c.id][q] >= i
            )
            if not members:
                break
            entries[(q, i)] = members
            i += 1
    return StrataTable(dec, q_max, hq, entries)


def floor_constancy_check(p: HalfOpenPolytope, r: ResolutionData) -> bool:
    """True iff ``floor(e(alpha))`` takes a single value on ``p``.

    Decided exactly: with ``f_j`` the floor at one point of ``p``, both
    ``p ∩ {e_j < f_j}`` and ``p ∩ {e_j >= f_j + 1}`` must be empty.
    """
    if p.is_empty:
        return True
    e = r.e_matrix
    ev = r.e_values(p.barycenter)
    for j in range(e.ncols):
        row = [e[i, j] for i in range(e.nrows)]
        f = floor(ev[j])
        below = p.with_constraints([(row, LT, f)])
        above = p.with_constraints([([-x for x in row], LE, -(f + 1))])
        if not below.is_empty or not above.is_empty:
            return False
    return True


def _members(t: StrataTable, q: int, i: int) -> list[tuple[Cell, StratumRecord]]:
    return [(t.decomposition.by_id(rec.polytope_id), rec) for rec in t.entries.get((q, i), ())]


def count_stratum_torsion(t: StrataTable, q: int, i: int, n: int) -> int:
    """``#V^q_i[n]``: the ``n``-torsion points lying in the stratum."""
    total = 0
    for cell, rec in _members(t, q, i):
        total += count_lattice_points(cell.polytope, None, n) * n**rec.torus_rank
    return total


def cell_torsion_qp(cell: Cell, d) -> QuasiPolynomial:
    """``N -> #(cell ∩ (1/N) Z^S)`` through the coset-counting reduction.

    With an integral ``beta`` satisfying ``l(beta) = p_k`` the cell shifted by
    ``-beta`` lies in ``W = ker l`` and the count is taken on ``Z^S ∩ W``.
    """
    rows = d.degree_rows()
    beta = solve_integer(rows, list(cell.base_class))
    if beta is None:
        return coset_count_qp(cell.polytope, None, Lattice.standard(d.size), (0,) * d.size)
    q = cell.polytope.translate([-b for b in beta])
    return coset_count_qp(q, rows, kernel_lattice(rows, d.size), (0,) * d.size)


def stratum_torsion_qp(t: StrataTable, q: int, i: int) -> QuasiPolynomial:
    total = QuasiPolynomial.zero()
    for cell, rec in _members(t, q, i):
        total = total + scale_by_torus_rank(cell_torsion_qp(cell, t.decomposition.divisors), rec.torus_rank)
    return total
