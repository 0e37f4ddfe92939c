"""Input geometries, their log resolutions and exact line-bundle cohomology.

Two kinds of input are supported: line arrangements in P^2, resolved by
blowing up every point where at least three lines meet, and finite point sets
on P^1, which are already simple normal crossings.

On a blow-up ``Z`` of P^2 at distinct points ``p_1..p_r`` a class is written
``dH + sum_k c_k E_k`` and stored as ``(d, c_1, ..., c_r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Optional, Sequence, Union

from .errors import InputError, InvariantError
from .exact import ZMatrix, as_fraction, rank
from .parabolic import (
    P1,
    P2,
    DivisorSet,
    ResolutionData,
    VarietyModel,
    identity_resolution,
)

ProjPoint = tuple[Fraction, Fraction, Fraction]


def _normalize_projective(v: Sequence[Fraction]) -> tuple:
    pivot = next(x for x in v if x != 0)
    return tuple(Fraction(x) / pivot for x in v)


def _cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True)
class LineArrangement:
    """Lines ``a x + b y + c z = 0`` in P^2, pairwise distinct."""

    lines: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        lines = []
        for ln in self.lines:
            if len(ln) != 3:
                raise InputError("a line needs three coefficients")
            v = tuple(as_fraction(x) for x in ln)
            if not any(v):
                raise InputError("the zero form is not a line")
            lines.append(v)
        if not lines:
            raise InputError("an arrangement needs at least one line")
        for (i, u), (j, v) in combinations(enumerate(lines), 2):
            if not any(_cross(u, v)):
                raise InputError(f"lines {i} and {j} coincide")
        object.__setattr__(self, "lines", tuple(lines))

    @property
    def divisors(self) -> DivisorSet:
        return DivisorSet(P2, tuple((1,) for _ in self.lines))


def singular_points(a: LineArrangement) -> list[tuple[ProjPoint, int]]:
    """Intersection points with the number of lines through each, sorted by point."""
    pts = {_normalize_projective(_cross(u, v)) for u, v in combinations(a.lines, 2)}
    out = []
    for p in sorted(pts):
        mult = sum(1 for ln in a.lines if sum(x * y for x, y in zip(ln, p)) == 0)
        out.append((p, mult))
    return out


@dataclass(frozen=True)
class BlowupSurface:
    """P^2 blown up at distinct points, with NS basis ``H, E_1, ..., E_r``."""

    points: tuple[ProjPoint, ...] = ()

    def __post_init__(self):
        pts = []
        for p in self.points:
            v = tuple(as_fraction(x) for x in p)
            if len(v) != 3 or not any(v):
                raise InputError("points need three homogeneous coordinates, not all zero")
            pts.append(_normalize_projective(v))
        if len(set(pts)) != len(pts):
            raise InputError("blown-up points must be distinct")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def ns_rank(self) -> int:
        return 1 + len(self.points)

    @property
    def intersection_form(self) -> tuple[tuple[int, ...], ...]:
        r = self.ns_rank
        return tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(r)) for i in range(r))

    @property
    def canonical_class(self) -> tuple[int, ...]:
        return (-3,) + (1,) * len(self.points)

    @property
    def variety_model(self) -> VarietyModel:
        name = "P2" if not self.points else f"Bl_{len(self.points)}P2"
        return VarietyModel(name, 2, self.intersection_form, self.canonical_class)

    def pairing(self, u: Sequence, v: Sequence) -> int:
        return u[0] * v[0] - sum(x * y for x, y in zip(u[1:], v[1:]))


@dataclass(frozen=True)
class CurveModel:
    """Distinct points on P^1; ``None`` stands for the point at infinity."""

    points: tuple[Optional[Fraction], ...]

    def __post_init__(self):
        pts = tuple(None if p is None else as_fraction(p) for p in self.points)
        if not pts:
            raise InputError("need at least one point")
        if len(set(pts)) != len(pts):
            raise InputError("points on P^1 must be distinct")
        object.__setattr__(self, "points", pts)

    @property
    def divisors(self) -> DivisorSet:
        return DivisorSet(P1, tuple((1,) for _ in self.points))


def build_log_resolution(a: LineArrangement) -> tuple[BlowupSurface, ResolutionData]:
    """Blow up every point of multiplicity at least three.

    All singular points of a line arrangement are ordinary, so one round of
    blow-ups gives simple normal crossings.
    """
    centers = [p for p, m in singular_points(a) if m >= 3]
    surf = BlowupSurface(tuple(centers))
    r = len(centers)
    s = len(a.lines)
    incidence = [[1 if sum(x * y for x, y in zip(ln, p)) == 0 else 0 for p in centers] for ln in a.lines]
    strict = [(1,) + tuple(-x for x in row) for row in incidence]
    exc = [tuple(1 if t == k + 1 else 0 for t in range(r + 1)) for k in range(r)]
    target = DivisorSet(surf.variety_model, tuple(strict + exc))
    e_rows = [[1 if j == i else 0 for j in range(s)] + incidence[i] for i in range(s)]
    pull = ((1,) + (0,) * r,)
    return surf, ResolutionData(a.divisors, target, ZMatrix.from_rows(e_rows, s + r), pull)


# ---------------------------------------------------------------------------
# cohomology oracles
# ---------------------------------------------------------------------------


def _monomials(d: int) -> list[tuple[int, int, int]]:
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


def _falling(n: int, k: int) -> int:
    return factorial(n) // factorial(n - k) if k <= n else 0


def _derivative_row(mono: tuple[int, int, int], order: tuple[int, int, int], p: ProjPoint) -> Fraction:
    val = Fraction(1)
    for e, o, x in zip(mono, order, p):
        c = _falling(e, o)
        if c == 0:
            return Fraction(0)
        val *= c * x ** (e - o)
    return val


def h0_blowup(s: BlowupSurface, cls: Sequence[int]) -> int:
    """``h^0(Z, dH + sum c_k E_k)`` as the dimension of a fat-point linear system.

    Degree ``d`` forms must vanish to order ``m_k = max(-c_k, 0)`` at ``p_k``.
    We impose vanishing of all partial derivatives of order ``min(m_k - 1, d)``;
    when ``m_k > d`` this kills every nonzero form, as it should.
    """
    d, cs = int(cls[0]), list(cls[1:])
    if len(cs) != len(s.points):
        raise InputError("class has the wrong rank for this surface")
    if d < 0:
        return 0
    return _h0_fat(d, tuple((p, max(-c, 0)) for p, c in zip(s.points, cs)))


@lru_cache(maxsize=None)
def _h0_fat(d: int, conditions: tuple) -> int:
    monos = _monomials(d)
    rows = []
    for p, m in conditions:
        if m == 0:
            continue
        k = min(m - 1, d)
        for order in _monomials(k):
            rows.append([_derivative_row(mono, order, p) for mono in monos])
    return len(monos) - (rank(rows, len(monos)) if rows else 0)


def euler_char(s: BlowupSurface, cls: Sequence[int]) -> int:
    """Riemann–Roch: ``1 + L.(L - K)/2``."""
    k = s.canonical_class
    v = s.pairing(cls, [a - b for a, b in zip(cls, k)])
    if v % 2:
        raise InvariantError("L.(L-K) must be even")
    return 1 + v // 2


def hq_blowup(s: BlowupSurface, cls: Sequence[int], q: int) -> int:
    """``h^q`` of a line bundle on the blow-up, ``q`` in 0..2 (zero above).

    Raises:
        InvariantError: if the derived ``h^1`` comes out negative.
    """
    cls = tuple(int(x) for x in cls)
    if q < 0:
        raise ValueError("q must be >= 0")
    if q > 2:
        return 0
    if q == 0:
        return h0_blowup(s, cls)
    dual = tuple(a - b for a, b in zip(s.canonical_class, cls))
    h2 = h0_blowup(s, dual)
    if q == 2:
        return h2
    h1 = h0_blowup(s, cls) + h2 - euler_char(s, cls)
    if h1 < 0:
        raise InvariantError(f"negative h^1 for class {list(cls)}")
    return h1


def hq_curve(c: Optional[CurveModel], degree: int, q: int) -> int:
    """``h^q(P^1, O(degree))``."""
    if q < 0:
        raise ValueError("q must be >= 0")
    if q == 0:
        return max(degree + 1, 0)
    if q == 1:
        return max(-1 - degree, 0)
    return 0


# ---------------------------------------------------------------------------
# resolved inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedGeometry:
    """A divisor, a log resolution of it, and a cohomology oracle on the resolution."""

    source: Union[LineArrangement, CurveModel]
    resolution: ResolutionData
    surface: Optional[BlowupSurface] = None

    @property
    def divisors(self) -> DivisorSet:
        return self.resolution.source

    @property
    def dim(self) -> int:
        return self.divisors.variety.dim

    @property
    def canonical_z(self) -> tuple[int, ...]:
        return self.resolution.z.canonical_class

    def cohomology(self, cls: Sequence[int], q: int) -> int:
        """``h^q(Z, O(cls))``."""
        if self.surface is not None:
            return hq_blowup(self.surface, cls, q)
        return hq_curve(self.source, cls[0], q)


def resolve(a: Union[LineArrangement, CurveModel]) -> ResolvedGeometry:
    if isinstance(a, LineArrangement):
        surf, res = build_log_resolution(a)
        return ResolvedGeometry(a, res, surf)
    if isinstance(a, CurveModel):
        return ResolvedGeometry(a, identity_resolution(a.divisors))
    raise TypeError(f"unsupported input {type(a).__name__}")


Oracle = Callable[[Sequence[int], int], int]
