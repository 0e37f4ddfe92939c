"""The group of realizations of boundaries and its polytope decomposition.

An element of Pic^τ(X, D) is modelled by a :class:`BoundaryRealization`: the
Néron–Severi class of a line bundle ``L`` together with a rational vector
``alpha`` in ``[0, 1)^S`` such that ``c1(L) = sum_i alpha_i [D_i]``. Varieties
are described only through their Néron–Severi lattice, intersection form and
canonical class (:class:`VarietyModel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Optional, Sequence

from .errors import InputError, InvariantError, SymbolicRegimeError
from .exact import (
    ZMatrix,
    as_vector,
    denominator_lcm,
    dot,
    floor,
    frac,
    invariant_factors,
)
from .polytopes import EQ, LE, LT, HalfOpenPolytope, lattice_points

NSClass = tuple[int, ...]


@dataclass(frozen=True)
class VarietyModel:
    """Néron–Severi data of a smooth projective variety.

    ``pic_tau_torsion`` lists the invariant factors of the torsion of Pic^τ(X)
    and ``pic0_rank`` the dimension of Pic^0(X). Both vanish for P^1 and P^2.
    """

    name: str
    dim: int
    intersection_form: tuple[tuple[int, ...], ...]
    canonical_class: NSClass
    pic_tau_torsion: tuple[int, ...] = ()
    pic0_rank: int = 0

    def __post_init__(self):
        r = len(self.intersection_form)
        if any(len(row) != r for row in self.intersection_form):
            raise InputError("intersection form must be square")
        if any(self.intersection_form[i][j] != self.intersection_form[j][i] for i in range(r) for j in range(r)):
            raise InputError("intersection form must be symmetric")
        if len(self.canonical_class) != r:
            raise InputError("canonical class has the wrong rank")
        if any(t < 2 for t in self.pic_tau_torsion) or self.pic0_rank < 0:
            raise InputError("bad Pic^tau descriptor")

    @property
    def ns_rank(self) -> int:
        return len(self.intersection_form)

    def pairing(self, u: Sequence, v: Sequence):
        f = self.intersection_form
        return sum(u[i] * f[i][j] * v[j] for i in range(self.ns_rank) for j in range(self.ns_rank))


P1 = VarietyModel("P1", 1, ((1,),), (-2,))
P2 = VarietyModel("P2", 2, ((1,),), (-3,))


@dataclass(frozen=True)
class DivisorSet:
    """Components ``D_i`` of a divisor together with their Néron–Severi classes."""

    variety: VarietyModel
    classes: tuple[NSClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(int(x) for x in c) for c in self.classes))
        if not self.classes:
            raise InputError("a divisor needs at least one component")
        for c in self.classes:
            if len(c) != self.variety.ns_rank:
                raise InputError("divisor class has the wrong rank")
            if not any(c):
                raise InputError("divisor classes must be nonzero")

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def ns_rank(self) -> int:
        return self.variety.ns_rank

    def degree_rows(self) -> list[list[int]]:
        """Matrix of ``l: R^S -> NS``, one row per NS coordinate."""
        return [[c[t] for c in self.classes] for t in range(self.ns_rank)]

    def image(self, alpha: Sequence) -> tuple:
        return tuple(sum(a * c[t] for a, c in zip(alpha, self.classes)) for t in range(self.ns_rank))

    def combination(self, coeffs: Sequence[int]) -> NSClass:
        return tuple(sum(k * c[t] for k, c in zip(coeffs, self.classes)) for t in range(self.ns_rank))


def _common(alpha: Sequence[Fraction]) -> tuple[int, list[int]]:
    """Common denominator and numerators of a rational vector."""
    den = denominator_lcm(alpha)
    return den, [a.numerator * (den // a.denominator) for a in alpha]


def _add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def _scale(k, u: Sequence) -> tuple:
    return tuple(k * a for a in u)


@dataclass(frozen=True)
class BoundaryRealization:
    """A pair ``(L, alpha)`` with ``c1(L) = alpha . [D]``.

    ``torsion_label`` is an element of the torsion group of Pic^τ(X), given as a
    residue vector for ``variety.pic_tau_torsion``. It is empty for P^1 and P^2.
    """

    divisors: DivisorSet
    bundle: NSClass
    alpha: tuple[Fraction, ...]
    torsion_label: tuple[int, ...] = ()

    def __post_init__(self):
        d = self.divisors
        object.__setattr__(self, "bundle", tuple(int(x) for x in self.bundle))
        object.__setattr__(self, "alpha", as_vector(self.alpha))
        tors = d.variety.pic_tau_torsion
        label = tuple(self.torsion_label) or (0,) * len(tors)
        if len(label) != len(tors):
            raise InputError("torsion label does not match the torsion of Pic^tau(X)")
        object.__setattr__(self, "torsion_label", tuple(int(x) % m for x, m in zip(label, tors)))
        if len(self.alpha) != d.size or len(self.bundle) != d.ns_rank:
            raise InputError("realization has the wrong shape")
        den, nums = _common(self.alpha)
        if any(not 0 <= x < den for x in nums):
            raise InputError(f"boundary coefficients must lie in [0, 1): {[str(a) for a in self.alpha]}")
        if any(sum(x * c[t] for x, c in zip(nums, d.classes)) != b * den for t, b in enumerate(self.bundle)):
            raise InputError(
                f"c1 condition fails: bundle {list(self.bundle)} but alpha.[D] = "
                f"{[str(x) for x in d.image(self.alpha)]}"
            )

    def is_identity(self) -> bool:
        return not any(self.bundle) and not any(self.alpha) and not any(self.torsion_label)

    def to_json(self) -> dict:
        out = {"bundle": list(self.bundle), "alpha": [str(a) for a in self.alpha]}
        if self.torsion_label:
            out["torsion_label"] = list(self.torsion_label)
        return out


def identity(d: DivisorSet) -> BoundaryRealization:
    return BoundaryRealization(d, (0,) * d.ns_rank, (Fraction(0),) * d.size)


def group_law(x: BoundaryRealization, y: BoundaryRealization) -> BoundaryRealization:
    """``(L + L' - floor(a + a').D, {a + a'})``."""
    if x.divisors != y.divisors:
        raise ValueError("realizations live on different divisors")
    d = x.divisors
    s = _add(x.alpha, y.alpha)
    carry = [floor(a) for a in s]
    bundle = _sub(_add(x.bundle, y.bundle), d.combination(carry))
    label = _add(x.torsion_label, y.torsion_label)
    return BoundaryRealization(d, bundle, tuple(frac(a) for a in s), label)


def inverse(x: BoundaryRealization) -> BoundaryRealization:
    """``(-L + sum_{a_i != 0} D_i, beta)`` with ``beta_i = 1 - a_i`` off the zero coordinates."""
    d = x.divisors
    support = [1 if a else 0 for a in x.alpha]
    bundle = _add(_scale(-1, x.bundle), d.combination(support))
    beta = tuple(1 - a if a else Fraction(0) for a in x.alpha)
    return BoundaryRealization(d, bundle, beta, _scale(-1, x.torsion_label))


def power(x: BoundaryRealization, k: int) -> BoundaryRealization:
    """``x**k`` in closed form: ``(kL - floor(k a).D, {k a})``."""
    if k < 0:
        return power(inverse(x), -k)
    d = x.divisors
    ka = _scale(k, x.alpha)
    bundle = _sub(_scale(k, x.bundle), d.combination([floor(a) for a in ka]))
    return BoundaryRealization(d, bundle, tuple(frac(a) for a in ka), _scale(k, x.torsion_label))


def _label_order(label: Sequence[int], factors: Sequence[int]) -> int:
    out = 1
    for t, m in zip(label, factors):
        out = lcm(out, m // gcd(t, m))
    return out


def torsion_order(x: BoundaryRealization) -> int:
    """Least ``N >= 1`` with ``x**N`` the identity.

    ``x**m`` for ``m`` the lcm of the denominators of ``alpha`` has trivial
    boundary part and hence trivial NS class, so only the torsion label remains.
    """
    m = denominator_lcm(x.alpha)
    y = power(x, m)
    if any(y.bundle):
        raise InvariantError("c1 condition violated by a power of a realization")
    return m * _label_order(y.torsion_label, x.divisors.variety.pic_tau_torsion)


# ---------------------------------------------------------------------------
# decomposition of B(X, D)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """One rational polytope of the decomposition with its torsion representative.

    ``floor_e`` records the constant value of ``floor(e(alpha))`` on the cell once
    the decomposition has been refined by a resolution.
    """

    id: str
    polytope: HalfOpenPolytope
    base_class: NSClass
    representative: Optional[BoundaryRealization]
    parent: str
    floor_e: Optional[tuple[int, ...]] = None

    @property
    def torsion_order(self) -> Optional[int]:
        return None if self.representative is None else torsion_order(self.representative)

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "parent": self.parent,
            "base_class": list(self.base_class),
            "polytope": self.polytope.to_json(),
            "representative": None if self.representative is None else self.representative.to_json(),
            "torsion_order": self.torsion_order,
        }
        if self.floor_e is not None:
            out["floor_e"] = list(self.floor_e)
        return out


@dataclass(frozen=True)
class BoundaryDecomposition:
    divisors: DivisorSet
    cells: tuple[Cell, ...]

    def ids(self) -> list[str]:
        return [c.id for c in self.cells]

    def by_id(self, cid: str) -> Cell:
        for c in self.cells:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def locate(self, alpha: Sequence) -> list[Cell]:
        """Cells containing ``alpha`` (exactly one for points of B(X, D))."""
        a = as_vector(alpha)
        return [c for c in self.cells if c.polytope.contains(a)]

    def to_json(self) -> dict:
        return {"cells": [c.to_json() for c in self.cells]}


def _representative(d: DivisorSet, p: HalfOpenPolytope, base: NSClass) -> Optional[BoundaryRealization]:
    if d.variety.pic0_rank > 0:
        return None
    return BoundaryRealization(d, base, p.barycenter)


def decompose_boundaries(d: DivisorSet) -> BoundaryDecomposition:
    """Split B(X, D) into the polytopes ``P_k = l^{-1}(p_k) ∩ [0, 1)^S``.

    The lattice points ``p_k`` are searched in the bounding box of
    ``l([0, 1]^S)`` and kept when their fibre meets ``[0, 1)^S``. All integral
    classes are realized by line bundles in this model. Representatives are the
    barycenters of the closures, which lie in the half-open polytope.
    """
    cube = HalfOpenPolytope.unit_cube(d.size)
    rows = d.degree_rows()
    ranges = [range(sum(min(x, 0) for x in row), sum(max(x, 0) for x in row) + 1) for row in rows]
    cells = []
    for p in product(*ranges):
        poly = cube.with_constraints((row, EQ, p_t) for row, p_t in zip(rows, p))
        if poly.is_empty:
            continue
        cid = f"P_{len(cells)}"
        cells.append(Cell(cid, poly, tuple(p), _representative(d, poly, tuple(p)), cid))
    return BoundaryDecomposition(d, tuple(cells))


# ---------------------------------------------------------------------------
# log resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolutionData:
    """A log resolution ``mu: Z -> X`` described numerically.

    ``target`` lists the components ``E_j`` of the reduced preimage on ``Z``:
    first the strict transforms of the ``D_i`` in order, then the exceptional
    divisors. ``e_matrix[i][j]`` is the multiplicity of ``E_j`` in ``mu^* D_i``
    and ``pullback`` maps NS(X) coordinates to NS(Z) coordinates (one row per
    NS(X) basis vector).
    """

    source: DivisorSet
    target: DivisorSet
    e_matrix: ZMatrix
    pullback: tuple[NSClass, ...]

    def __post_init__(self):
        s, t = self.source.size, self.target.size
        e = self.e_matrix
        if e.shape != (s, t) or t < s:
            raise InputError("e matrix has the wrong shape")
        if any(e[i, j] < 0 for i in range(s) for j in range(t)):
            raise InputError("e matrix must be nonnegative")
        for i in range(s):
            col = [e[k, i] for k in range(s)]
            if col != [1 if k == i else 0 for k in range(s)]:
                raise InputError("strict transforms must have unit columns")
        if len(self.pullback) != self.source.ns_rank or any(len(r) != self.target.ns_rank for r in self.pullback):
            raise InputError("pullback map has the wrong shape")
        for i, c in enumerate(self.source.classes):
            if self.pull_class(c) != self.target.combination(e.rows[i]):
                raise InputError(f"mu^*D_{i} is not sum_j e_ij E_j")

    def pull_class(self, c: Sequence) -> tuple:
        return tuple(sum(c[s] * self.pullback[s][t] for s in range(len(c))) for t in range(self.target.ns_rank))

    def e_values(self, alpha: Sequence) -> tuple:
        """``e_j(alpha) = sum_i e_ij alpha_i`` for every target component."""
        e = self.e_matrix
        return tuple(sum(alpha[i] * e[i, j] for i in range(e.nrows)) for j in range(e.ncols))

    def floor_and_frac(self, alpha: Sequence[Fraction]) -> tuple[list[int], tuple[Fraction, ...]]:
        """``floor(e(alpha))`` and ``{e(alpha)}`` computed over a common denominator."""
        den, nums = _common(alpha)
        e = self.e_matrix
        ev = [sum(nums[i] * e[i, j] for i in range(e.nrows)) for j in range(e.ncols)]
        return [v // den for v in ev], tuple(Fraction(v % den, den) for v in ev)

    def split_columns(self) -> list[int]:
        """Columns that are not unit vectors; only these can change floor inside [0, 1)^S."""
        e = self.e_matrix
        return [j for j in range(e.ncols) if sorted(e[i, j] for i in range(e.nrows)) != [0] * (e.nrows - 1) + [1]]

    @property
    def z(self) -> VarietyModel:
        return self.target.variety


def identity_resolution(d: DivisorSet) -> ResolutionData:
    r = d.ns_rank
    pull = tuple(tuple(1 if s == t else 0 for t in range(r)) for s in range(r))
    return ResolutionData(d, d, ZMatrix.identity(d.size), pull)


def _e_row(r: ResolutionData, j: int) -> list[int]:
    return [r.e_matrix[i, j] for i in range(r.e_matrix.nrows)]


def refine_by_resolution(b: BoundaryDecomposition, r: ResolutionData) -> BoundaryDecomposition:
    """Subdivide each cell by the level sets ``f <= e_j(alpha) < f + 1``.

    Only non-unit columns of the e matrix are used; on every resulting cell the
    whole vector ``floor(e(alpha))`` is constant.
    """
    if b.divisors != r.source:
        raise ValueError("decomposition and resolution use different divisors")
    cols = r.split_columns()
    cells = []
    for cell in b.cells:
        p = cell.polytope
        vs = p._vertices
        ranges = []
        for j in cols:
            row = _e_row(r, j)
            vals = [dot(row, v) for v in vs]
            ranges.append(range(floor(min(vals)), floor(max(vals)) + 1))
        pieces = []
        for fs in product(*ranges):
            rows = []
            for j, f in zip(cols, fs):
                row = _e_row(r, j)
                rows.append(([-x for x in row], LE, -f))
                rows.append((row, LT, f + 1))
            q = p.with_constraints(rows)
            if not q.is_empty:
                pieces.append((fs, q))
        for fs, q in pieces:
            cid = cell.id if len(pieces) == 1 else f"{cell.id}[{','.join(map(str, fs))}]"
            rep = _representative(b.divisors, q, cell.base_class)
            fe = tuple(floor(x) for x in r.e_values(q.barycenter))
            cells.append(Cell(cid, q, cell.base_class, rep, cell.parent, fe))
    return BoundaryDecomposition(b.divisors, tuple(cells))


def monodromy_pullback(alpha: Sequence, r: ResolutionData) -> tuple[Fraction, ...]:
    """``beta_j = {sum_i e_ij alpha_i}``."""
    return tuple(frac(x) for x in r.e_values(as_vector(alpha)))


def pullback_parabolic(x: BoundaryRealization, r: ResolutionData) -> BoundaryRealization:
    """``(mu^*L - floor(e).E, {e})`` on ``(Z, E)``."""
    if x.divisors != r.source:
        raise ValueError("realization and resolution use different divisors")
    fl, fr = r.floor_and_frac(x.alpha)
    bundle = _sub(r.pull_class(x.bundle), r.target.combination(fl))
    return BoundaryRealization(r.target, bundle, fr, x.torsion_label)


def deligne_extension_class(x: BoundaryRealization, r: ResolutionData) -> NSClass:
    """``mu^*L + floor(e).E``."""
    fl, _ = r.floor_and_frac(x.alpha)
    return _add(r.pull_class(x.bundle), r.target.combination(fl))


# ---------------------------------------------------------------------------
# torsion
# ---------------------------------------------------------------------------


def _labels_killed_by(factors: Sequence[int], n: int) -> list[tuple[int, ...]]:
    choices = [[k * (m // gcd(m, n)) for k in range(gcd(m, n))] for m in factors]
    return [tuple(c) for c in product(*choices)]


def torsion_points(b: BoundaryDecomposition, n: int) -> list[BoundaryRealization]:
    """All ``x`` with ``x**n`` the identity, sorted by ``alpha``.

    Raises:
        SymbolicRegimeError: when Pic^0(X) is positive dimensional.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = b.divisors
    if d.variety.pic0_rank > 0:
        raise SymbolicRegimeError("torsion points are not finite data when Pic^0(X) is nontrivial")
    labels = _labels_killed_by(d.variety.pic_tau_torsion, n)
    out = []
    for cell in b.cells:
        for pt in lattice_points(cell.polytope, None, n):
            alpha = tuple(Fraction(x, n) for x in pt)
            for lab in labels:
                out.append(BoundaryRealization(d, cell.base_class, alpha, lab))
    out.sort(key=lambda x: (x.alpha, x.bundle, x.torsion_label))
    return out


def h1_complement_order(d: DivisorSet, n: int) -> int:
    """``|H_1(U, Z/n)|`` for ``U = X - D`` when ``X`` is simply connected with H_2 = NS.

    ``H_1(U)`` is the cokernel of ``NS(X) -> Z^S``, ``c -> (c . D_i)_i``; the
    answer is computed from its invariant factors.
    """
    v = d.variety
    rows = [[v.pairing(basis, c) for c in d.classes] for basis in _unit_vectors(v.ns_rank)]
    m = ZMatrix.from_rows(rows, d.size)
    facs = invariant_factors(m)
    out = n ** (d.size - len(facs))
    for f in facs:
        out *= gcd(f, n)
    return out


def _unit_vectors(r: int) -> list[tuple[int, ...]]:
    return [tuple(1 if s == t else 0 for s in range(r)) for t in range(r)]
