"""Half-open rational polytopes, lattice-point enumeration and Ehrhart quasi-polynomials.

A :class:`HalfOpenPolytope` is an intersection of rational half-spaces, some of
them strict, plus affine equations. Its closure must be bounded. Counting is
done by exact enumeration over a bounding box with per-coordinate pruning, and
quasi-polynomials are obtained by interpolating those counts on every residue
class of the dilation factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import InputError, InvariantError
from .exact import (
    Lattice,
    as_fraction,
    ceil,
    clear_denominators,
    denominator_lcm,
    dot,
    floor,
    lattice_intersect_subspace,
    nullspace,
    rank,
    solve_affine,
    solve_integer,
)

LE, LT, EQ = "le", "lt", "eq"
RELATIONS = (LE, LT, EQ)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Constraint:
    """``a . x  rel  b`` with ``rel`` one of ``le``, ``lt``, ``eq``."""

    a: tuple[Fraction, ...]
    b: Fraction
    rel: str

    @classmethod
    def make(cls, a: Iterable, rel: str, b) -> "Constraint":
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        return cls(tuple(as_fraction(x) for x in a), as_fraction(b), rel)

    def holds(self, x: Sequence) -> bool:
        v = dot(self.a, x)
        if self.rel == LE:
            return v <= self.b
        if self.rel == LT:
            return v < self.b
        return v == self.b

    def holds_closed(self, x: Sequence) -> bool:
        v = dot(self.a, x)
        return v == self.b if self.rel == EQ else v <= self.b

    def to_json(self) -> dict:
        return {"a": [str(x) for x in self.a], "rel": self.rel, "b": str(self.b)}


def _normalize(a: Sequence[Fraction], b: Fraction, rel: str):
    """Scale a constraint by a positive factor so that ``a`` is a primitive integer vector.

    Equations additionally get a positive leading coefficient. Returns ``None``
    for constraints with ``a = 0`` that hold trivially, and raises ``_Infeasible``
    for ones that cannot hold.
    """
    if not any(a):
        ok = b == 0 if rel == EQ else (b >= 0 if rel == LE else b > 0)
        if ok:
            return None
        raise _Infeasible
    ints = clear_denominators(a)
    j = next(i for i, x in enumerate(a) if x)
    scale = Fraction(ints[j]) / a[j]
    if rel == EQ and ints[j] < 0:
        ints = tuple(-x for x in ints)
        scale = -scale
    return ints, b * scale, rel


class _Infeasible(Exception):
    pass


def _dedupe(constraints: Iterable[tuple[Sequence[Fraction], Fraction, str]]):
    """Normalize, merge parallel constraints keeping the tightest, detect trivial infeasibility.

    Returns a list of ``(a, b, rel)`` with integer ``a``, or ``None`` if the
    system is visibly infeasible.
    """
    ineq: dict[tuple[int, ...], tuple[Fraction, str]] = {}
    eqs: dict[tuple[int, ...], Fraction] = {}
    try:
        for a, b, rel in constraints:
            norm = _normalize(a, b, rel)
            if norm is None:
                continue
            key, nb, nrel = norm
            if nrel == EQ:
                if key in eqs and eqs[key] != nb:
                    return None
                eqs[key] = nb
                continue
            old = ineq.get(key)
            if old is None or nb < old[0] or (nb == old[0] and nrel == LT):
                ineq[key] = (nb, nrel)
    except _Infeasible:
        return None
    out = [(tuple(Fraction(x) for x in k), b, EQ) for k, b in sorted(eqs.items())]
    out += [(tuple(Fraction(x) for x in k), b, rel) for k, (b, rel) in sorted(ineq.items())]
    return out


@dataclass(frozen=True)
class _AffineChart:
    """Parametrization ``x = origin + y @ directions`` of the equality locus."""

    origin: Point
    directions: tuple[Point, ...]
    # inequalities rewritten in y-coordinates: (a', b', rel)
    inequalities: tuple[tuple[Point, Fraction, str], ...]

    @property
    def dim(self) -> int:
        return len(self.directions)

    def lift(self, y: Sequence[Fraction]) -> Point:
        return tuple(
            o + sum((yk * d[i] for yk, d in zip(y, self.directions)), Fraction(0))
            for i, o in enumerate(self.origin)
        )


@dataclass(frozen=True)
class HalfOpenPolytope:
    """Rational convex polytope which may miss some of its faces.

    Attributes:
        dim: ambient dimension n.
        constraints: tuple of :class:`Constraint`; strict ones (``lt``) cut
            away the corresponding face.

    Raises:
        InputError: if the closure (every ``lt`` read as ``le``) is unbounded.
    """

    dim: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        for c in self.constraints:
            if len(c.a) != self.dim:
                raise ValueError(f"constraint of length {len(c.a)} in dimension {self.dim}")
            if c.rel not in RELATIONS:
                raise ValueError(f"unknown relation {c.rel!r}")
        if not self._closure_bounded():
            raise InputError("closure of the polytope is unbounded")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_constraints(cls, dim: int, rows: Iterable[tuple]) -> "HalfOpenPolytope":
        """Build from ``(a, rel, b)`` triples."""
        return cls(dim, tuple(Constraint.make(a, rel, b) for a, rel, b in rows))

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence, *, strict_upper: bool = False) -> "HalfOpenPolytope":
        n = len(lower)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append(([-x for x in e], LE, -as_fraction(lower[i])))
            rows.append((e, LT if strict_upper else LE, upper[i]))
        return cls.from_constraints(n, rows)

    @classmethod
    def unit_cube(cls, n: int, *, half_open: bool = True) -> "HalfOpenPolytope":
        """``[0,1)^n`` (or ``[0,1]^n`` when ``half_open`` is false)."""
        return cls.box([0] * n, [1] * n, strict_upper=half_open)

    @classmethod
    def from_json(cls, data: dict) -> "HalfOpenPolytope":
        dim = int(data["dim"])
        rows = [(c["a"], c["rel"], c["b"]) for c in data["constraints"]]
        return cls.from_constraints(dim, rows)

    def to_json(self) -> dict:
        return {"dim": self.dim, "constraints": [c.to_json() for c in self.constraints]}

    def with_constraints(self, rows: Iterable[tuple]) -> "HalfOpenPolytope":
        extra = tuple(Constraint.make(a, rel, b) for a, rel, b in rows)
        return HalfOpenPolytope(self.dim, self.constraints + extra)

    def translate(self, v: Sequence) -> "HalfOpenPolytope":
        """The polytope ``self + v``."""
        v = [as_fraction(x) for x in v]
        return HalfOpenPolytope(
            self.dim, tuple(Constraint(c.a, c.b + dot(c.a, v), c.rel) for c in self.constraints)
        )

    def dilate(self, n) -> "HalfOpenPolytope":
        n = as_fraction(n)
        if n <= 0:
            raise ValueError("dilation factor must be positive")
        return HalfOpenPolytope(self.dim, tuple(Constraint(c.a, c.b * n, c.rel) for c in self.constraints))

    def closure(self) -> "HalfOpenPolytope":
        return HalfOpenPolytope(
            self.dim,
            tuple(Constraint(c.a, c.b, LE if c.rel == LT else c.rel) for c in self.constraints),
        )

    # -- geometry -----------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            raise ValueError("point dimension does not match the polytope")
        x = [as_fraction(v) for v in x]
        return all(c.holds(x) for c in self.constraints)

    @cached_property
    def _chart(self) -> Optional[_AffineChart]:
        eqs = [c for c in self.constraints if c.rel == EQ]
        if eqs:
            origin = solve_affine([c.a for c in eqs], [c.b for c in eqs])
            if origin is None:
                return None
            directions = tuple(tuple(d) for d in nullspace([c.a for c in eqs], self.dim))
        else:
            origin = (Fraction(0),) * self.dim
            directions = tuple(
                tuple(Fraction(int(i == j)) for j in range(self.dim)) for i in range(self.dim)
            )
        rows = []
        for c in self.constraints:
            if c.rel == EQ:
                continue
            rows.append((tuple(dot(c.a, d) for d in directions), c.b - dot(c.a, origin), c.rel))
        reduced = _dedupe(rows)
        if reduced is None:
            return None
        return _AffineChart(origin, directions, tuple(reduced))

    def _chart_vertices(self, chart: _AffineChart) -> list[Point]:
        d = chart.dim
        if d == 0:
            return [()]
        ineqs = [_integer_row(a, b) for a, b, _ in chart.inequalities]
        found = set()
        for subset in combinations(range(len(ineqs)), d):
            sol = _solve_square([ineqs[i] for i in subset], d)
            if sol is None:
                continue
            num, den = sol
            if all(sum(x * y for x, y in zip(a, num)) <= b * den for a, b in ineqs):
                found.add(tuple(Fraction(x, den) for x in num))
        return sorted(found)

    @cached_property
    def _vertices(self) -> tuple[Point, ...]:
        chart = self._chart
        if chart is None:
            return ()
        return tuple(sorted(chart.lift(y) for y in self._chart_vertices(chart)))

    def _closure_bounded(self) -> bool:
        if self._has_box_bounds():
            return True
        chart = self._chart
        if chart is None:
            return True
        d = chart.dim
        if d == 0:
            return True
        normals = [a for a, _, _ in chart.inequalities]
        if rank(normals, d) < d:
            # non-pointed: unbounded unless empty; test emptiness on a pointed slice
            lineality = nullspace(normals, d) if normals else [
                [Fraction(int(i == j)) for j in range(d)] for i in range(d)
            ]
            sliced = _AffineChart(
                chart.origin,
                chart.directions,
                chart.inequalities
                + tuple((tuple(z), Fraction(0), LE) for z in lineality)
                + tuple((tuple(-x for x in z), Fraction(0), LE) for z in lineality),
            )
            return not self._chart_vertices(sliced)
        if not self._chart_vertices(chart):
            return True
        for subset in combinations(range(len(normals)), d - 1):
            ray = nullspace([normals[i] for i in subset], d)
            if len(ray) != 1:
                continue
            z = ray[0]
            for sign in (1, -1):
                if all(sign * dot(a, z) <= 0 for a in normals):
                    return False
        return True

    def _has_box_bounds(self) -> bool:
        lower = [False] * self.dim
        upper = [False] * self.dim
        for c in self.constraints:
            nz = [i for i, x in enumerate(c.a) if x]
            if len(nz) != 1:
                continue
            i = nz[0]
            if c.rel == EQ:
                lower[i] = upper[i] = True
            elif c.a[i] > 0:
                upper[i] = True
            else:
                lower[i] = True
        return all(lower) and all(upper)

    @cached_property
    def barycenter(self) -> Optional[Point]:
        """Average of the closure's vertices, or ``None`` when the closure is empty."""
        vs = self._vertices
        if not vs:
            return None
        k = len(vs)
        return tuple(sum((v[i] for v in vs), Fraction(0)) / k for i in range(self.dim))

    @cached_property
    def is_empty(self) -> bool:
        # the barycenter of the closure lies in its relative interior, which is
        # inside the half-open set whenever that set is nonempty
        bc = self.barycenter
        return bc is None or not self.contains(bc)

    @cached_property
    def affine_dim(self) -> int:
        """Dimension of the affine span of the closure (-1 if empty)."""
        vs = self._vertices
        if not vs:
            return -1
        v0 = vs[0]
        return rank([[x - y for x, y in zip(v, v0)] for v in vs[1:]], self.dim) if len(vs) > 1 else 0

    def interior_point(self, toward: int = -1) -> Optional[Point]:
        """A point of the relative interior.

        With the default ``toward=-1`` this is the barycenter; otherwise the
        midpoint between the barycenter and vertex number ``toward``, which is
        still relatively interior.
        """
        if self.is_empty:
            return None
        bc = self.barycenter
        if toward < 0:
            return bc
        v = self._vertices[toward % len(self._vertices)]
        return tuple((x + y) / 2 for x, y in zip(bc, v))


def _integer_row(a: Sequence[Fraction], b: Fraction) -> tuple[tuple[int, ...], int]:
    """Scale ``a . y <= b`` by a positive integer so that everything is integral."""
    m = denominator_lcm(list(a) + [b])
    return tuple(int(x * m) for x in a), int(b * m)


def _solve_square(rows: Sequence[tuple[tuple[int, ...], int]], d: int) -> Optional[tuple[tuple[int, ...], int]]:
    """Solve the ``d x d`` integer system ``a . y = b`` by fraction-free Gauss-Jordan.

    Returns ``(num, den)`` with ``y = num / den`` and ``den > 0``, or ``None`` if singular.
    """
    m = [list(a) + [b] for a, b in rows]
    for k in range(d):
        piv = next((i for i in range(k, d) if m[i][k]), None)
        if piv is None:
            return None
        m[k], m[piv] = m[piv], m[k]
        pk = m[k][k]
        for i in range(d):
            if i == k or not m[i][k]:
                continue
            f = m[i][k]
            row = [x * pk - y * f for x, y in zip(m[i], m[k])]
            g = 0
            for x in row:
                g = gcd(g, x)
            m[i] = [x // g for x in row] if g > 1 else row
    den = 1
    for k in range(d):
        den = den * abs(m[k][k]) // gcd(den, abs(m[k][k]))
    num = tuple(m[k][d] * (den // m[k][k]) for k in range(d))
    return num, den


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def vertices(p: HalfOpenPolytope) -> list[Point]:
    """Vertices of the closure of ``p`` in lexicographic order."""
    return list(p._vertices)


def contains(p: HalfOpenPolytope, x: Sequence) -> bool:
    return p.contains(x)


@lru_cache(maxsize=512)
def _pullback_to_lattice(p: HalfOpenPolytope, lat: Lattice) -> HalfOpenPolytope:
    """``{t in R^k : t @ basis in p}`` for the lattice basis (k = rank)."""
    if lat.is_standard():
        return p
    cons = tuple(
        Constraint(tuple(dot(c.a, b) for b in lat.basis), c.b, c.rel) for c in p.constraints
    )
    return HalfOpenPolytope(lat.rank, cons)


def _integer_system(p: HalfOpenPolytope, n: int):
    rows = []
    for c in p.constraints:
        m = denominator_lcm(list(c.a) + [c.b])
        a = [int(x * m) for x in c.a]
        bound = c.b * m * n
        if c.rel == LT:
            rows.append((a, ceil(bound) - 1, LE))
        elif c.rel == LE:
            rows.append((a, floor(bound), LE))
        else:
            if bound.denominator != 1:
                return None
            rows.append((a, int(bound), EQ))
    return rows


def _enumerate(p: HalfOpenPolytope, n: int, count_only: bool = False):
    """Integer points of ``n * p`` (all of them, or only their number)."""
    vs = p._vertices
    if not vs:
        return 0 if count_only else []
    k = p.dim
    system = _integer_system(p, n)
    if system is None:
        return 0 if count_only else []
    if k == 0:
        ok = all((0 <= b) if rel == LE else (b == 0) for _, b, rel in system)
        return int(ok) if count_only else ([()] if ok else [])
    lo = [ceil(min(v[j] for v in vs) * n) for j in range(k)]
    hi = [floor(max(v[j] for v in vs) * n) for j in range(k)]
    if any(l > h for l, h in zip(lo, hi)):
        return 0 if count_only else []

    # minimum / maximum of sum_{l >= j} a_l x_l over the box, per constraint
    tails = []
    for a, b, rel in system:
        mins = [0] * (k + 1)
        maxs = [0] * (k + 1)
        for j in range(k - 1, -1, -1):
            u, v = a[j] * lo[j], a[j] * hi[j]
            mins[j] = mins[j + 1] + min(u, v)
            maxs[j] = maxs[j + 1] + max(u, v)
        tails.append((a, b, rel == EQ, mins, maxs))

    out: list[tuple[int, ...]] = []
    total = 0
    x = [0] * k
    partial = [0] * len(tails)

    def bounds(j):
        low, high = lo[j], hi[j]
        for idx, (a, b, is_eq, mins, maxs) in enumerate(tails):
            s = partial[idx]
            aj = a[j]
            room = b - s - mins[j + 1]  # need aj*x <= room
            if aj > 0:
                high = min(high, room // aj)
            elif aj < 0:
                low = max(low, -(-room // aj))
            elif room < 0:
                return 1, 0
            if is_eq:
                need = b - s - maxs[j + 1]  # need aj*x >= need
                if aj > 0:
                    low = max(low, -(-need // aj))
                elif aj < 0:
                    high = min(high, need // aj)
                elif need > 0:
                    return 1, 0
            if low > high:
                return 1, 0
        return low, high

    def rec(j):
        nonlocal total
        low, high = bounds(j)
        if low > high:
            return
        last = j + 1 == k
        for val in range(low, high + 1):
            x[j] = val
            if last:
                total += 1
                if not count_only:
                    out.append(tuple(x))
                continue
            for idx, t in enumerate(tails):
                partial[idx] += t[0][j] * val
            rec(j + 1)
            for idx, t in enumerate(tails):
                partial[idx] -= t[0][j] * val

    rec(0)
    return total if count_only else out


def lattice_points(
    p: HalfOpenPolytope, lat: Optional[Lattice] = None, dilation: int = 1
) -> list[tuple[int, ...]]:
    """Points of ``lat`` inside ``dilation * p``, strict faces respected, sorted."""
    if dilation < 1:
        raise ValueError("dilation must be >= 1")
    lat = lat if lat is not None else Lattice.standard(p.dim)
    if lat.ambient_dim != p.dim:
        raise ValueError("lattice and polytope live in different dimensions")
    q = _pullback_to_lattice(p, lat)
    ts = _enumerate(q, dilation)
    if lat.is_standard():
        return ts
    pts = [
        tuple(sum(t[k] * lat.basis[k][j] for k in range(lat.rank)) for j in range(lat.ambient_dim))
        for t in ts
    ]
    return sorted(pts)


def count_lattice_points(p: HalfOpenPolytope, lat: Optional[Lattice] = None, dilation: int = 1) -> int:
    lat = lat if lat is not None else Lattice.standard(p.dim)
    return _enumerate(_pullback_to_lattice(p, lat), dilation, count_only=True)


# ---------------------------------------------------------------------------
# quasi-polynomials
# ---------------------------------------------------------------------------


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_eval(coeffs: Sequence[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def interpolate(xs: Sequence[int], ys: Sequence) -> tuple[Fraction, ...]:
    """Coefficients (constant term first) of the interpolating polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # multiply basis by (x - xs[j])
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    return _trim(coeffs)


@dataclass(frozen=True)
class QuasiPolynomial:
    """``f(N) = N**symbolic_factor_exponent * polys[(N - 1) % period](N)``.

    ``polys[i - 1]`` is the constituent used for ``N = i (mod period)``,
    ``i = 1..period``. Coefficients are listed constant term first.
    """

    period: int
    polys: tuple[tuple[Fraction, ...], ...]
    symbolic_factor_exponent: int = 0

    def __post_init__(self):
        if self.period < 1 or len(self.polys) != self.period:
            raise ValueError("need exactly one polynomial per residue class")
        if self.symbolic_factor_exponent < 0:
            raise ValueError("symbolic exponent must be >= 0")
        object.__setattr__(self, "polys", tuple(_trim(p) for p in self.polys))

    @classmethod
    def zero(cls) -> "QuasiPolynomial":
        return cls(1, ((),))

    @classmethod
    def constant(cls, c) -> "QuasiPolynomial":
        return cls(1, ((as_fraction(c),),))

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "QuasiPolynomial":
        return cls(1, (tuple(as_fraction(c) for c in coeffs),))

    def __call__(self, n: int):
        v = _poly_eval(self.polys[(n - 1) % self.period], n) * Fraction(n) ** self.symbolic_factor_exponent
        return int(v) if v.denominator == 1 else v

    eval = __call__

    @property
    def degree(self) -> int:
        return max((len(p) - 1 for p in self.polys), default=-1) + (
            self.symbolic_factor_exponent if any(self.polys) else 0
        )

    def is_zero(self) -> bool:
        return not any(self.polys)

    def expanded(self) -> "QuasiPolynomial":
        """Same function with the symbolic ``N**r`` factor multiplied into the constituents."""
        r = self.symbolic_factor_exponent
        if r == 0:
            return self
        return QuasiPolynomial(
            self.period, tuple((Fraction(0),) * r + p if p else () for p in self.polys)
        )

    def with_period(self, period: int) -> "QuasiPolynomial":
        if period % self.period:
            raise ValueError("new period must be a multiple of the old one")
        polys = tuple(self.polys[(i - 1) % self.period] for i in range(1, period + 1))
        return QuasiPolynomial(period, polys, self.symbolic_factor_exponent)

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        a, b = self, other
        if a.symbolic_factor_exponent != b.symbolic_factor_exponent:
            a, b = a.expanded(), b.expanded()
        m = lcm(a.period, b.period)
        a, b = a.with_period(m), b.with_period(m)
        polys = []
        for p, q in zip(a.polys, b.polys):
            size = max(len(p), len(q))
            polys.append(
                tuple(
                    (p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(size)
                )
            )
        return QuasiPolynomial(m, tuple(polys), a.symbolic_factor_exponent)

    def __mul__(self, c) -> "QuasiPolynomial":
        c = as_fraction(c)
        return QuasiPolynomial(
            self.period, tuple(tuple(c * x for x in p) for p in self.polys), self.symbolic_factor_exponent
        )

    __rmul__ = __mul__

    def __neg__(self) -> "QuasiPolynomial":
        return self * -1

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return self + (-other)

    def same_function(self, other: "QuasiPolynomial") -> bool:
        d = (self - other).expanded()
        return d.is_zero()

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "polynomials": [[str(c) for c in p] for p in self.polys],
            "symbolic_exponent": self.symbolic_factor_exponent,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuasiPolynomial":
        return cls(
            int(data["period"]),
            tuple(tuple(as_fraction(c) for c in p) for p in data["polynomials"]),
            int(data.get("symbolic_exponent", 0)),
        )


def _fit(count, period: int, deg: int, what: str) -> QuasiPolynomial:
    """Interpolate ``count`` on each residue class from ``deg + 1`` samples and check two more."""
    polys = []
    for r in range(1, period + 1):
        ns = [r + j * period for j in range(deg + 3)]
        counts = [count(n) for n in ns]
        coeffs = interpolate(ns[: deg + 1], counts[: deg + 1])
        for n, c in zip(ns[deg + 1 :], counts[deg + 1 :]):
            if _poly_eval(coeffs, n) != c:
                raise InvariantError(
                    f"{what} fit failed on residue {r} mod {period}: predicted "
                    f"{_poly_eval(coeffs, n)} at N={n}, counted {c}"
                )
        polys.append(coeffs)
    return QuasiPolynomial(period, tuple(polys))


def ehrhart_qp(p: HalfOpenPolytope, lat: Optional[Lattice] = None) -> QuasiPolynomial:
    """Quasi-polynomial ``f`` with ``f(N) = #(lat ∩ N p)`` for every ``N >= 1``.

    The period is the lcm of the vertex denominators of the closure, measured in
    coordinates of ``lat``; each residue class is interpolated from
    ``degree + 1`` exact counts and checked against two more.

    Raises:
        InvariantError: if a held-out count disagrees with the fitted polynomial.
    """
    lat = lat if lat is not None else Lattice.standard(p.dim)
    q = _pullback_to_lattice(p, lat)
    vs = q._vertices
    if not vs:
        return QuasiPolynomial.zero()
    period = denominator_lcm(x for v in vs for x in v)
    return _fit(lambda n: _enumerate(q, n, count_only=True), period, max(q.affine_dim, 0), "Ehrhart")


def scale_by_torus_rank(f: QuasiPolynomial, r: int) -> QuasiPolynomial:
    """Multiply ``f`` by ``N**r`` symbolically (the count of N-torsion on an r-dimensional torus)."""
    if r < 0:
        raise ValueError("torus rank must be >= 0")
    return QuasiPolynomial(f.period, f.polys, f.symbolic_factor_exponent + r)


def _coset_point(lam: Lattice, eqs: list, v: Sequence[Fraction]) -> Optional[Point]:
    """A point of ``(v + lam) ∩ W`` or ``None``."""
    if not eqs or all(dot(e, v) == 0 for e in eqs):
        return tuple(v)
    if lam.rank == 0:
        return None
    m = [[dot(e, b) for b in lam.basis] for e in eqs]
    t = solve_integer(m, [-dot(e, v) for e in eqs])
    if t is None:
        return None
    return tuple(v[j] + sum(t[k] * lam.basis[k][j] for k in range(lam.rank)) for j in range(len(v)))


def coset_count_qp(
    q: HalfOpenPolytope,
    w: Optional[Sequence[Sequence]],
    lam: Lattice,
    wvec: Sequence,
) -> QuasiPolynomial:
    """Count ``F(N) = #{x in q ∩ W : N (x - wvec) in lam}`` as a quasi-polynomial.

    ``w`` lists the linear equations cutting out the subspace ``W`` (``None``
    or empty for the whole space). When some ``w'`` lies in ``(wvec + lam) ∩ W``
    the set is ``w' + (1/N) lam'`` with ``lam' = lam ∩ W`` and the count is the
    Ehrhart function ``#(lam' ∩ N (q - w'))``.

    Otherwise ``(N wvec + lam) ∩ W`` depends on ``N`` modulo the order ``M`` of
    ``wvec`` in ``span(lam) / lam``: it is empty on some classes and a translate
    ``u_r + lam'`` on others, and the counts are fitted class by class.
    """
    n = q.dim
    wvec = tuple(as_fraction(x) for x in wvec)
    if len(wvec) != n or lam.ambient_dim != n:
        raise ValueError("dimension mismatch")
    coords = lam.coordinates(wvec)
    if coords is None:
        raise InputError("no multiple of the offset lies in the lattice (torsion hypothesis)")
    eqs = [tuple(as_fraction(x) for x in row) for row in (w or [])]
    sub = lattice_intersect_subspace(lam, eqs)
    shift = _coset_point(lam, eqs, wvec)
    if shift is not None:
        return ehrhart_qp(q.translate([-x for x in shift]), sub)

    order = denominator_lcm(coords) if coords else 1
    base = _pullback_to_lattice(q, sub)
    # u_r in lam'-coordinates for every residue class r of N mod order
    offsets: dict[int, tuple[Fraction, ...]] = {}
    for r in range(1, order + 1):
        u = _coset_point(lam, eqs, tuple(r * x for x in wvec))
        if u is not None:
            offsets[r % order] = sub.coordinates(u) if sub.rank else ()
    if not offsets or not base._vertices:
        return QuasiPolynomial.zero()
    period = order
    period = lcm(period, denominator_lcm(x for v in base._vertices for x in v))
    for c in offsets.values():
        period = lcm(period, denominator_lcm(c) if c else 1)

    def count(big_n: int) -> int:
        c = offsets.get(big_n % order)
        if c is None:
            return 0
        shifted = HalfOpenPolytope(
            base.dim,
            tuple(Constraint(k.a, k.b * big_n - dot(k.a, c), k.rel) for k in base.constraints),
        )
        return _enumerate(shifted, 1, count_only=True)

    return _fit(count, period, max(base.affine_dim, 0), "coset count")


def project(p: HalfOpenPolytope, coords: Sequence[int]) -> HalfOpenPolytope:
    """Image of ``p`` under ``x -> (x[c] for c in coords)`` by Fourier–Motzkin elimination.

    Combining a strict inequality with anything gives a strict inequality, so
    missing faces are carried over to the image exactly.
    """
    coords = list(coords)
    if len(set(coords)) != len(coords) or any(not 0 <= c < p.dim for c in coords):
        raise ValueError("bad coordinate subset")
    system = _dedupe((list(c.a), c.b, c.rel) for c in p.constraints)
    infeasible = [((Fraction(0),) * len(coords), LE, Fraction(-1))]
    if system is None:
        return HalfOpenPolytope.from_constraints(len(coords), infeasible)
    for v in [i for i in range(p.dim) if i not in coords]:
        eq = next((c for c in system if c[2] == EQ and c[0][v] != 0), None)
        new = []
        if eq is not None:
            ea, eb, _ = eq
            for c in system:
                if c is eq:
                    continue
                a, b, rel = c
                if a[v]:
                    f = a[v] / ea[v]
                    a = [x - f * y for x, y in zip(a, ea)]
                    b = b - f * eb
                new.append((a, b, rel))
        else:
            pos = [c for c in system if c[0][v] > 0]
            neg = [c for c in system if c[0][v] < 0]
            new = [c for c in system if c[0][v] == 0]
            for pa, pb, prel in pos:
                for na, nb, nrel in neg:
                    lam_, mu = -na[v], pa[v]
                    a = [lam_ * x + mu * y for x, y in zip(pa, na)]
                    b = lam_ * pb + mu * nb
                    new.append((a, b, LT if LT in (prel, nrel) else LE))
        system = _dedupe(new)
        if system is None:
            return HalfOpenPolytope.from_constraints(len(coords), infeasible)
    rows = [([a[c] for c in coords], rel, b) for a, b, rel in system]
    return HalfOpenPolytope.from_constraints(len(coords), rows)
