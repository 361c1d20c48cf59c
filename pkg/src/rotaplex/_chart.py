"""Exact parametrizations of affine subspaces.

A chart represents {origin + B y : y in R^k} with independent columns B and
moves points and linear constraints between ambient and chart coordinates.
Polar bodies, arrangement cells, and fiber polytopes all live in proper
subspaces of their ambient space, so nearly every construction downstream
starts by dropping into a chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Sequence

from .errors import DimensionMismatch, GeometryError
from .linalg import Mat, Vec, rank, rref, solve


@dataclass(frozen=True)
class AffineChart:
    origin: Vec
    basis: tuple[Vec, ...]

    def __post_init__(self):
        if any(len(b) != len(self.origin) for b in self.basis):
            raise DimensionMismatch("chart basis vectors must match the origin")
        if self.basis and rank(Mat(self.basis)) != len(self.basis):
            raise GeometryError("chart basis is linearly dependent")

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_ambient(self, y: Sequence[Q]) -> Vec:
        if len(y) != self.dim:
            raise DimensionMismatch(f"chart point has {len(y)} coords, chart has {self.dim}")
        x = self.origin
        for c, b in zip(y, self.basis):
            x = x + b * c
        return x

    def from_ambient(self, x: Sequence[Q]) -> Vec:
        """Chart coordinates of an ambient point; the point must lie on the chart."""
        diff = Vec(x) - self.origin
        if self.dim == 0:
            if not diff.is_zero():
                raise GeometryError("point is not on the chart")
            return Vec([])
        cols = Mat(self.basis).transpose()
        y = solve(cols, diff)
        if y is None or self.to_ambient(y) != Vec(x):
            raise GeometryError("point is not on the chart")
        return y

    def direction_from_ambient(self, d: Sequence[Q]) -> Vec:
        """Chart coordinates of an ambient direction parallel to the chart."""
        if self.dim == 0:
            if not Vec(d).is_zero():
                raise GeometryError("direction is not parallel to the chart")
            return Vec([])
        cols = Mat(self.basis).transpose()
        y = solve(cols, Vec(d))
        if y is None or cols.matvec(y) != Vec(d):
            raise GeometryError("direction is not parallel to the chart")
        return y

    def constraint_to_chart(self, normal: Sequence[Q], rhs: Q) -> tuple[Vec, Q]:
        """Rewrite normal . x <= rhs on ambient points x = origin + B y."""
        n = Vec(normal)
        return Vec(n.dot(b) for b in self.basis), Q(rhs) - n.dot(self.origin)

    def contains(self, x: Sequence[Q]) -> bool:
        try:
            self.from_ambient(x)
            return True
        except GeometryError:
            return False


def span_chart(points: Sequence[Sequence[Q]], directions: Sequence[Sequence[Q]] = ()) -> AffineChart:
    """Chart of the affine hull of the points plus the given directions.

    Basis selection is deterministic: echelon basis of the span of the
    difference vectors and directions.
    """
    pts = [Vec(p) for p in points]
    if not pts:
        raise GeometryError("affine hull of nothing")
    base = pts[0]
    rows = [p - base for p in pts[1:]] + [Vec(d) for d in directions]
    rows = [r for r in rows if not r.is_zero()]
    if not rows:
        return AffineChart(base, ())
    basis, _ = rref(rows, len(base))
    return AffineChart(base, tuple(basis))


def subspace_chart(directions: Sequence[Sequence[Q]], dim: int) -> AffineChart:
    """Linear chart (origin 0) for the span of the given directions."""
    rows = [Vec(d) for d in directions if not Vec(d).is_zero()]
    if not rows:
        return AffineChart(Vec.zero(dim), ())
    basis, _ = rref(rows, dim)
    return AffineChart(Vec.zero(dim), tuple(basis))
