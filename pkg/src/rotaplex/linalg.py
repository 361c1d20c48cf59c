"""Exact rational scalars, vectors, and matrices.

Everything downstream (double description, face lattices, polars, the
projective maps) runs on these types.  Scalars are ``fractions.Fraction``,
vectors are immutable tuples with componentwise arithmetic, and the solver
family (rank / solve / kernel / orthogonal projection) uses Gaussian
elimination with deterministic first-nonzero pivoting so that repeated runs
produce identical output bit for bit.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Q = Fraction

QLike = int | str | Fraction


def rat(x: QLike) -> Q:
    """Coerce to Fraction; accepts 'p/q' strings for serialized data."""
    return x if isinstance(x, Fraction) else Q(x)


def rat_str(x: Q) -> str:
    return str(rat(x))


class Vec(tuple):
    """Immutable exact rational vector.

    A thin tuple subclass: hashable, comparable, usable as a dict key, with
    +, -, scalar * and /, and an exact dot product.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[QLike]) -> "Vec":
        return super().__new__(cls, tuple(rat(e) for e in entries))

    @property
    def dim(self) -> int:
        return len(self)

    def __add__(self, other: Sequence[Q]) -> "Vec":
        if len(self) != len(other):
            raise DimensionMismatch(f"{len(self)} vs {len(other)}")
        return Vec(a + b for a, b in zip(self, other))

    def __sub__(self, other: Sequence[Q]) -> "Vec":
        if len(self) != len(other):
            raise DimensionMismatch(f"{len(self)} vs {len(other)}")
        return Vec(a - b for a, b in zip(self, other))

    def __mul__(self, scalar: QLike) -> "Vec":
        s = rat(scalar)
        return Vec(a * s for a in self)

    __rmul__ = __mul__

    def __truediv__(self, scalar: QLike) -> "Vec":
        s = rat(scalar)
        return Vec(a / s for a in self)

    def __neg__(self) -> "Vec":
        return Vec(-a for a in self)

    def dot(self, other: Sequence[Q]) -> Q:
        if len(self) != len(other):
            raise DimensionMismatch(f"{len(self)} vs {len(other)}")
        return sum((a * b for a, b in zip(self, other)), Q(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    @staticmethod
    def zero(dim: int) -> "Vec":
        return Vec([0] * dim)

    @staticmethod
    def unit(dim: int, i: int) -> "Vec":
        return Vec(Q(1) if j == i else Q(0) for j in range(dim))


def primitive_int(v: Sequence[Q]) -> tuple[int, ...]:
    """Scale a rational vector by the positive rational that makes it an
    integer vector with content gcd 1.  The zero vector maps to itself."""
    den = 1
    for x in v:
        den = lcm(den, rat(x).denominator)
    ints = [int(rat(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


class Mat:
    """Dense exact rational matrix, immutable after construction."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Sequence[QLike]]):
        self.rows: tuple[Vec, ...] = tuple(Vec(r) for r in rows)
        if self.rows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise DimensionMismatch("ragged rows")
        else:
            self.ncols = 0

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> "Mat":
        return Mat(zip(*self.rows)) if self.rows else Mat([])

    def matvec(self, x: Sequence[Q]) -> Vec:
        return Vec(r.dot(x) for r in self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Mat({[list(map(str, r)) for r in self.rows]})"


def _echelon(rows: list[list[Q]], ncols: int) -> tuple[list[list[Q]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot column list).

    Pivot choice is the first row with a nonzero entry in the leftmost open
    column, which keeps the computation deterministic.
    """
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = Q(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(rows: Sequence[Sequence[QLike]], ncols: int | None = None) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns).

    The output rows are a canonical basis of the input row space, so two
    spanning sets of the same subspace produce identical output.
    """
    work = [list(Vec(r)) for r in rows]
    if not work:
        return [], []
    nc = ncols if ncols is not None else len(work[0])
    red, pivots = _echelon(work, nc)
    return [Vec(r) for r in red[: len(pivots)]], pivots


def rank(m: Mat | Sequence[Sequence[QLike]]) -> int:
    mat = m if isinstance(m, Mat) else Mat(m)
    if not mat.rows:
        return 0
    rows = [list(r) for r in mat.rows]
    _, pivots = _echelon(rows, mat.ncols)
    return len(pivots)


def solve(m: Mat, b: Sequence[QLike]) -> Vec | None:
    """One exact solution of m x = b, or None when inconsistent.

    Free variables are set to zero, which makes the answer deterministic.
    """
    bb = Vec(b)
    if len(bb) != m.nrows:
        raise DimensionMismatch(f"matrix has {m.nrows} rows, rhs has {len(bb)}")
    rows = [list(r) + [bv] for r, bv in zip(m.rows, bb)]
    if not rows:
        return Vec.zero(m.ncols)
    red, pivots = _echelon(rows, m.ncols)
    # inconsistent iff a pivot landed in the augmented column
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Q(0)] * m.ncols
    for i, c in enumerate(pivots):
        x[c] = red[i][-1]
    return Vec(x)


def kernel_basis(m: Mat | Sequence[Sequence[QLike]]) -> list[Vec]:
    """Deterministic basis of the exact null space {x : m x = 0}.

    One basis vector per free column of the echelon form, ordered by free
    column index; each has a 1 in its free coordinate.
    """
    mat = m if isinstance(m, Mat) else Mat(m)
    if not mat.rows:
        raise DimensionMismatch("kernel of a matrix with no columns is ambiguous; pass ncols via identity rows")
    rows = [list(r) for r in mat.rows]
    red, pivots = _echelon(rows, mat.ncols)
    pivot_set = set(pivots)
    free = [c for c in range(mat.ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Q(0)] * mat.ncols
        v[fc] = Q(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(Vec(v))
    return basis


def kernel_basis_of_rows(rows: Sequence[Sequence[QLike]], ncols: int) -> list[Vec]:
    """kernel_basis that tolerates an empty row list (kernel = everything)."""
    if not rows:
        return [Vec.unit(ncols, i) for i in range(ncols)]
    return kernel_basis(Mat(rows))


def orth_project(basis: Sequence[Sequence[QLike]], x: Sequence[QLike]) -> Vec:
    """Orthogonal projection of x onto span(basis) via the normal equations.

    The basis must be linearly independent; dependence is rejected rather
    than silently tolerated because callers rely on unique coordinates.
    """
    bvecs = [Vec(b) for b in basis]
    xx = Vec(x)
    if not bvecs:
        return Vec.zero(len(xx))
    if rank(Mat(bvecs)) != len(bvecs):
        raise DimensionMismatch("projection basis is linearly dependent")
    gram = Mat([[bi.dot(bj) for bj in bvecs] for bi in bvecs])
    rhs = [bi.dot(xx) for bi in bvecs]
    coeffs = solve(gram, rhs)
    assert coeffs is not None  # Gram of independent vectors is invertible
    out = Vec.zero(len(xx))
    for c, b in zip(coeffs, bvecs):
        out = out + b * c
    return out


def det(m: Mat) -> Q:
    """Exact determinant (Bareiss fraction-free elimination on a common
    denominator clearing, so intermediate integers stay modest)."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Q(1)
    den = 1
    for r in m.rows:
        for x in r:
            den = lcm(den, x.denominator)
    a = [[int(x * den) for x in r] for r in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sel = None
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    sel = i
                    break
            if sel is None:
                return Q(0)
            a[k], a[sel] = a[sel], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Q(sign * a[n - 1][n - 1], den**n)


def affine_rank(points: Sequence[Sequence[QLike]], directions: Sequence[Sequence[QLike]] = ()) -> int:
    """Dimension of the affine hull of `points` + linear span of `directions`.

    Returns -1 for the empty input (the empty face convention).
    """
    pts = [Vec(p) for p in points]
    dirs = [Vec(d) for d in directions]
    if not pts:
        if not dirs:
            return -1
        return rank(Mat(dirs))
    base = pts[0]
    rows = [p - base for p in pts[1:]] + dirs
    if not rows:
        return 0
    return rank(Mat(rows))
