"""Finite abelian covers: character groups, building data and Hodge numbers.

A finite subgroup ``G*`` of Pic^τ(X, D) determines a normal abelian cover of
``X`` branched along ``D``. Its characters carry the building data, and the
holomorphic forms on the cover split into eigenspaces computed on ``X``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Optional

from .errors import InputError, InvariantError
from .exact import ZMatrix, floor, invariant_factors
from .geometry import CurveModel, ResolvedGeometry
from .parabolic import (
    BoundaryRealization,
    DivisorSet,
    ResolutionData,
    group_law,
    identity,
    torsion_order,
    torsion_points,
)
from .polytopes import QuasiPolynomial
from .strata import compute_strata, refined_decomposition, stratum_torsion_qp, strata_class

MAX_GROUP_ORDER = 100_000


@dataclass(frozen=True)
class CharacterSubgroup:
    """The subgroup of Pic^τ(X, D) generated by ``generators``."""

    divisors: DivisorSet
    generators: tuple[BoundaryRealization, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.divisors != self.divisors:
                raise InputError("generator lives on a different divisor")

    @cached_property
    def _closure(self):
        # breadth-first search over the Cayley graph; every non-tree edge is a relation
        k = len(self.generators)
        e = identity(self.divisors)
        seen = {e: (0,) * k}
        order = [e]
        relations = []
        queue = deque([e])
        while queue:
            x = queue.popleft()
            v = seen[x]
            for j, g in enumerate(self.generators):
                y = group_law(x, g)
                w = tuple(a + (1 if t == j else 0) for t, a in enumerate(v))
                if y in seen:
                    rel = tuple(a - b for a, b in zip(w, seen[y]))
                    if any(rel):
                        relations.append(rel)
                    continue
                seen[y] = w
                order.append(y)
                queue.append(y)
                if len(order) > MAX_GROUP_ORDER:
                    raise InputError("subgroup is too large to enumerate")
        return tuple(order), tuple(relations)

    @property
    def elements(self) -> tuple[BoundaryRealization, ...]:
        """Elements in breadth-first order from the identity."""
        return self._closure[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = len(self.generators)
        rels = self._closure[1]
        if k == 0:
            return ()
        facs = invariant_factors(ZMatrix.from_rows(rels, k)) if rels else ()
        if len(facs) < k:
            raise InvariantError("a generator of infinite order in a finite group")
        return tuple(f for f in facs if f > 1)


@dataclass(frozen=True)
class BuildingData:
    characters: tuple[BoundaryRealization, ...]
    inertia: tuple[int, ...]
    iota: tuple[tuple[int, ...], ...]
    epsilon: dict[tuple[int, int], tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "characters": [c.to_json() for c in self.characters],
            "inertia_orders": list(self.inertia),
            "iota": [list(r) for r in self.iota],
            "epsilon": [
                {"chi": a, "chi2": b, "eps": list(v)} for (a, b), v in sorted(self.epsilon.items())
            ],
        }


def building_data(g: CharacterSubgroup) -> BuildingData:
    """Inertia orders, indices ``iota = m alpha`` and the table ``eps = floor(a + a')``.

    Raises:
        InvariantError: if ``L + L' = L'' + eps.D`` fails for some pair of characters.
    """
    chars = g.elements
    d = g.divisors
    inertia = tuple(lcm(*(c.alpha[i].denominator for c in chars)) for i in range(d.size))
    iota = tuple(tuple(int(m * a) for m, a in zip(inertia, c.alpha)) for c in chars)
    index = {c: k for k, c in enumerate(chars)}
    eps = {}
    for a, x in enumerate(chars):
        for b, y in enumerate(chars):
            xy = group_law(x, y)
            if xy not in index:
                raise InvariantError("character set is not closed under the group law")
            e = tuple(floor(s + t) for s, t in zip(x.alpha, y.alpha))
            lhs = tuple(u + v for u, v in zip(x.bundle, y.bundle))
            rhs = tuple(u + v for u, v in zip(xy.bundle, d.combination(e)))
            if lhs != rhs:
                raise InvariantError(f"linear relation fails for characters {a}, {b}")
            eps[(a, b)] = e
    return BuildingData(chars, inertia, iota, eps)


def pushforward_decomposition(
    g: CharacterSubgroup, r: Optional[ResolutionData] = None
) -> list[tuple[int, ...]]:
    """NS classes of the rank-one summands of the pushforward of the structure sheaf.

    On ``X`` these are ``-L_chi``; on the resolution ``Z`` they are
    ``-mu^*L_chi + floor(e(alpha_chi)).E``.
    """
    out = []
    for c in g.elements:
        if r is None:
            out.append(tuple(-x for x in c.bundle))
        else:
            pulled = r.pull_class(c.bundle)
            corr = r.target.combination([floor(v) for v in r.e_values(c.alpha)])
            out.append(tuple(-a + b for a, b in zip(pulled, corr)))
    return out


def cover_hodge(geom: ResolvedGeometry, g: CharacterSubgroup, q: int) -> int:
    """``h^{q,0}`` of the cover: ``sum_chi h^{n-q}(X, K_X + L_chi + J(alpha_chi.D))``."""
    if g.divisors != geom.divisors:
        raise ValueError("subgroup and geometry use different divisors")
    n = geom.dim
    if not 0 <= q <= n:
        return 0
    return sum(geom.cohomology(strata_class(geom, c), n - q) for c in g.elements)


def congruence_hodge(geom: ResolvedGeometry, q: int, n: int) -> int:
    """``h^{q,0}`` of the congruence cover of level ``n``, by summing over all ``n``-torsion."""
    dim = geom.dim
    if not 0 <= q <= dim:
        return 0
    dec = refined_decomposition(geom)
    cache: dict[tuple[int, ...], int] = {}
    total = 0
    for x in torsion_points(dec, n):
        cls = strata_class(geom, x)
        if cls not in cache:
            cache[cls] = geom.cohomology(cls, dim - q)
        total += cache[cls]
    return total


def congruence_hodge_qp(geom: ResolvedGeometry, q: int) -> QuasiPolynomial:
    """``h^{q,0}(N)`` as ``sum_i #V^{n-q}_i[N]``."""
    dim = geom.dim
    if not 0 <= q <= dim:
        return QuasiPolynomial.zero()
    table = compute_strata(geom, dim)
    total = QuasiPolynomial.zero()
    for i in range(1, table.i_max(dim - q) + 1):
        total = total + stratum_torsion_qp(table, dim - q, i)
    return total


def riemann_hurwitz_genus(c: CurveModel, g: CharacterSubgroup) -> int:
    """Genus of the cover of P^1: ``2g - 2 = -2|G| + sum_p (|G|/m_p)(m_p - 1)``."""
    if g.divisors != c.divisors:
        raise ValueError("subgroup and curve use different divisors")
    order = g.order
    chars = g.elements
    twice = -2 * order
    for i in range(c.divisors.size):
        m = lcm(*(x.alpha[i].denominator for x in chars))
        twice += order // m * (m - 1)
    if twice % 2:
        raise InvariantError("Riemann-Hurwitz gave an odd Euler characteristic")
    return twice // 2 + 1


def character_orders(g: CharacterSubgroup) -> list[int]:
    return [torsion_order(c) for c in g.elements]
