"""Exact rational and integer linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so no
operation ever rounds. Rational matrices are plain sequences of rows; integer
matrices used for normal forms are wrapped in :class:`ZMatrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Rational = Fraction


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are only accepted when they are integral; anything else would
    silently import a binary rounding error.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise ValueError(f"refusing non-integral float {value!r}; use a 'p/q' string")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


def frac(x: Fraction) -> Fraction:
    """Fractional part ``{x} = x - floor(x)``."""
    return x - (x.numerator // x.denominator)


def floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def denominator_lcm(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def clear_denominators(row: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale ``row`` by a positive factor to a primitive integer vector."""
    m = denominator_lcm(row)
    ints = [int(Fraction(x) * m) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Integer matrices and normal forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZMatrix:
    """Immutable integer matrix. ``rows`` is a tuple of equal-length int tuples."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: Optional[int] = None) -> "ZMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        return cls(data, ncols)

    @classmethod
    def identity(cls, n: int) -> "ZMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ZMatrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "ZMatrix":
        return ZMatrix(tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows)

    def __matmul__(self, other: "ZMatrix") -> "ZMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.transpose().rows
        return ZMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hnf(m: ZMatrix) -> tuple[ZMatrix, ZMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h = u @ m``. Pivots of ``h``
    are positive, entries above a pivot lie in ``[0, pivot)``, zero rows come last.
    """
    a = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    u = _identity_rows(nrows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r + 1, nrows):
            if a[i][c] == 0:
                continue
            g, x, y = xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            for mat in (a, u):
                top, bot = mat[r], mat[i]
                mat[r] = [x * s + y * t for s, t in zip(top, bot)]
                mat[i] = [-q * s + p * t for s, t in zip(top, bot)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return ZMatrix.from_rows(a, ncols), ZMatrix.from_rows(u, nrows)


def snf(m: ZMatrix) -> tuple[ZMatrix, ZMatrix, ZMatrix]:
    """Smith normal form ``d = u @ m @ v`` with ``d_1 | d_2 | ...`` and nonnegative diagonal."""
    a = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    u = _identity_rows(nrows)
    v = _identity_rows(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        a[dst] = [s + f * t for s, t in zip(a[dst], a[src])]
        u[dst] = [s + f * t for s, t in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            clean = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (
        ZMatrix.from_rows(a, ncols),
        ZMatrix.from_rows(u, nrows),
        ZMatrix.from_rows(v, ncols),
    )


def invariant_factors(m: ZMatrix) -> tuple[int, ...]:
    d, _, _ = snf(m)
    return tuple(d[i, i] for i in range(min(d.shape)) if d[i, i] != 0)


# ---------------------------------------------------------------------------
# Rational linear algebra
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns the nonzero rows and pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x in Q^ncols : rows @ x = 0}``."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve_affine(a: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One rational solution of ``a @ x = b``, or ``None`` if the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if not a:
        raise ValueError("solve_affine needs at least one equation to know the dimension")
    n = len(a[0])
    aug = [list(r) + [b_i] for r, b_i in zip(a, b)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


def solve_integer(a: Sequence[Sequence], b: Sequence) -> Optional[tuple[int, ...]]:
    """One integer solution of ``a @ x = b`` (rational data), or ``None``."""
    if not a:
        raise ValueError("solve_integer needs at least one equation to know the dimension")
    n = len(a[0])
    rows, rhs = [], []
    for r, b_i in zip(a, b):
        m = denominator_lcm(list(r) + [b_i])
        rows.append([int(Fraction(x) * m) for x in r])
        rhs.append(int(Fraction(b_i) * m))
    d, u, v = snf(ZMatrix.from_rows(rows, n))
    c = [sum(x * y for x, y in zip(ur, rhs)) for ur in u.rows]
    y = [0] * n
    for i, ci in enumerate(c):
        di = d[i, i] if i < n else 0
        if di == 0:
            if ci != 0:
                return None
        elif ci % di:
            return None
        else:
            y[i] = ci // di
    return tuple(sum(vr[j] * y[j] for j in range(n)) for vr in v.rows)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^n stored by its row-HNF basis, so equal lattices compare equal."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Iterable[int]], ambient_dim: int) -> "Lattice":
        rows = [tuple(int(x) for x in g) for g in gens]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("generator dimension mismatch")
        if not rows:
            return cls(ambient_dim, ())
        h, _ = hnf(ZMatrix.from_rows(rows, ambient_dim))
        return cls(ambient_dim, tuple(r for r in h.rows if any(r)))

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(n, ZMatrix.identity(n).rows)

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_standard(self) -> bool:
        return self.rank == self.ambient_dim and all(
            self.basis[i][i] == 1 for i in range(self.rank)
        )

    def coordinates(self, v: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Coefficients ``t`` with ``t @ basis = v`` if ``v`` lies in the rational span."""
        resid = [Fraction(x) for x in v]
        coeffs = []
        for row in self.basis:
            c = next(j for j, x in enumerate(row) if x)
            if any(resid[j] for j in range(c)):
                return None
            t = resid[c] / row[c]
            coeffs.append(t)
            if t:
                resid = [x - t * y for x, y in zip(resid, row)]
        if any(resid):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence) -> bool:
        t = self.coordinates(v)
        return t is not None and all(x.denominator == 1 for x in t)

    def in_span(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def index_in_saturation(self) -> int:
        """Product of the invariant factors of the basis matrix (1 iff saturated)."""
        if not self.basis:
            return 1
        out = 1
        for f in invariant_factors(ZMatrix.from_rows(self.basis, self.ambient_dim)):
            out *= f
        return out


def kernel_lattice(m: Sequence[Sequence], ncols: Optional[int] = None) -> Lattice:
    """The saturated lattice ``{v in Z^n : m @ v = 0}`` for a rational matrix ``m``."""
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(m[0])
    rows = [clear_denominators(r) for r in m if any(Fraction(x) for x in r)]
    if not rows:
        return Lattice.standard(ncols)
    at = ZMatrix.from_rows(rows, ncols).transpose()
    h, u = hnf(at)
    r = sum(1 for row in h.rows if any(row))
    return Lattice.from_generators(u.rows[r:], ncols)


def lattice_intersect_subspace(lat: Lattice, equations: Sequence[Sequence]) -> Lattice:
    """``lat`` intersected with the subspace ``{x : equations @ x = 0}``."""
    if not equations or lat.rank == 0:
        return lat
    m = [[dot(eq, b) for b in lat.basis] for eq in equations]
    coeffs = kernel_lattice(m, lat.rank)
    gens = [
        [sum(t[k] * lat.basis[k][j] for k in range(lat.rank)) for j in range(lat.ambient_dim)]
        for t in coeffs.basis
    ]
    return Lattice.from_generators(gens, lat.ambient_dim)


def saturation(lat: Lattice) -> Lattice:
    """Integer points of the rational span of ``lat``."""
    if lat.rank == 0:
        return lat
    normals = nullspace(lat.basis, lat.ambient_dim)
    return kernel_lattice(normals, lat.ambient_dim) if normals else Lattice.standard(lat.ambient_dim)
