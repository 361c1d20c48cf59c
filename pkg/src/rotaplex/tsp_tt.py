"""Tight-triangle machinery for tour polyhedra.

Everything here works on symmetric edge weightings a in R^{E_n}: triangle
slacks, per-city slack minima, the tight representative of a coset of the
degree-row space, the complete fan of minimum-slack signatures on the
degree kernel, shortcut vectors, and the projective lift that inverts the
polar projection on the tour side.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Sequence

from ._chart import AffineChart, subspace_chart
from .complexes import Fan
from .errors import GeometryError
from .families import EdgeIndex
from .linalg import Mat, Vec, kernel_basis_of_rows
from .polyhedra import LinearConstraint, Polyhedron


@dataclass(frozen=True)
class RootedTriangle:
    """A city u together with an edge vw not touching it."""

    u: int
    v: int
    w: int

    def __post_init__(self):
        if not self.v < self.w:
            raise GeometryError("edge endpoints must satisfy v < w")
        if self.u in (self.v, self.w):
            raise GeometryError("the root must avoid the edge")

    @property
    def edge(self) -> tuple[int, int]:
        return (self.v, self.w)


def rooted_triangles(ei: EdgeIndex) -> list[RootedTriangle]:
    return [
        RootedTriangle(u, v, w)
        for u in range(1, ei.n + 1)
        for v, w in ei.pairs
        if u not in (v, w)
    ]


def triangle_slack(ei: EdgeIndex, a: Sequence[Q], t: RootedTriangle) -> Q:
    """Slack a_vu + a_uw - a_vw of the triangle inequality rooted at t.u."""
    return (
        a[ei.index(t.v, t.u)] + a[ei.index(t.u, t.w)] - a[ei.index(t.v, t.w)]
    )


def slack_normal(ei: EdgeIndex, t: RootedTriangle) -> Vec:
    """Coefficient vector of the slack functional of the rooted triangle."""
    x = [Q(0)] * ei.m
    x[ei.index(t.v, t.u)] += 1
    x[ei.index(t.u, t.w)] += 1
    x[ei.index(t.v, t.w)] -= 1
    return Vec(x)


def shortcut(ei: EdgeIndex, t: RootedTriangle) -> Vec:
    """Replace the two-edge path v-u-w by the direct edge vw."""
    x = [Q(0)] * ei.m
    x[ei.index(t.v, t.w)] += 1
    x[ei.index(t.v, t.u)] -= 1
    x[ei.index(t.u, t.w)] -= 1
    return Vec(x)


class DegreeStructure:
    """Half-degree rows, their kernel, and the tour barycenter."""

    def __init__(self, ei: EdgeIndex):
        self.ei = ei
        rows = []
        for u in range(1, ei.n + 1):
            rows.append(
                Vec(Q(1, 2) if u in pair else Q(0) for pair in ei.pairs)
            )
        self.rows: tuple[Vec, ...] = tuple(rows)
        self.matrix = Mat(rows)
        self.center = Vec([Q(2, ei.n - 1)] * ei.m)

    def half_degree(self, u: int) -> Vec:
        if not 1 <= u <= self.ei.n:
            raise GeometryError(f"no city {u}")
        return self.rows[u - 1]

    def in_kernel(self, a: Sequence[Q]) -> bool:
        av = Vec(a)
        return all(r.dot(av) == 0 for r in self.rows)

    def kernel_chart(self) -> AffineChart:
        return subspace_chart(kernel_basis_of_rows(self.rows, self.ei.m), self.ei.m)

    def row_combination(self, coeffs: Sequence[Q]) -> Vec:
        """The edge-space vector with entry (c_u + c_v)/2 on edge uv."""
        c = list(coeffs)
        if len(c) != self.ei.n:
            raise GeometryError("one coefficient per city expected")
        return Vec(Q(c[u - 1] + c[v - 1], 2) for u, v in self.ei.pairs)


def is_metric(ei: EdgeIndex, a: Sequence[Q]) -> bool:
    return all(triangle_slack(ei, a, t) >= 0 for t in rooted_triangles(ei))


def root_slack_minima(ei: EdgeIndex, a: Sequence[Q]) -> Vec:
    """Per city, the smallest triangle slack over all edges avoiding it."""
    if ei.n == 3:
        warnings.warn("each city has a single opposite edge below four cities", stacklevel=2)
    out = []
    for u in range(1, ei.n + 1):
        out.append(
            min(
                triangle_slack(ei, a, RootedTriangle(u, v, w))
                for v, w in ei.pairs
                if u not in (v, w)
            )
        )
    return Vec(out)


def is_tight_triangular(ei: EdgeIndex, a: Sequence[Q]) -> bool:
    """Metric with a tight triangle at every root."""
    minima = root_slack_minima(ei, a)
    return is_metric(ei, a) and all(x == 0 for x in minima)


def tight_representative(ei: EdgeIndex, a: Sequence[Q]) -> Vec:
    """The unique tight-triangular point in a + span(degree rows)."""
    ds = DegreeStructure(ei)
    return Vec(a) - ds.row_combination(root_slack_minima(ei, a))


def tight_representative_hom(
    ei: EdgeIndex, alpha: Q, a: Sequence[Q]
) -> tuple[Q, Vec]:
    """Homogenized variant: shift the offset along with the left hand side."""
    minima = root_slack_minima(ei, a)
    ds = DegreeStructure(ei)
    return Q(alpha) - sum(minima), Vec(a) - ds.row_combination(minima)


def lift_pair(ei: EdgeIndex, a: Sequence[Q]) -> tuple[Q, Vec]:
    """Denominator and numerator of the inverse projection at a.

    The input must lie in the degree kernel; the output pair (g, c) has c
    tight triangular, and c . x >= g cuts the same face out of the tour
    polytope as the inequality of a itself.
    """
    ds = DegreeStructure(ei)
    av = Vec(a)
    if not ds.in_kernel(av):
        raise GeometryError("lift is defined on the degree kernel only")
    return tight_representative_hom(ei, Q(-1) + av.dot(ds.center), av)


def polar_lift(ei: EdgeIndex, a: Sequence[Q]) -> Vec:
    """Map a point of the restricted polar body into the blocking polar."""
    g, c = lift_pair(ei, a)
    if g <= 0:
        raise GeometryError(
            "lift denominator must be positive: the point leans on a nonnegativity vertex"
        )
    return c / g


def min_slack_edges(ei: EdgeIndex, a: Sequence[Q]) -> tuple[frozenset, ...]:
    """Per root, the set of edges whose triangle slack attains the minimum."""
    out = []
    for u in range(1, ei.n + 1):
        slacks = {
            (v, w): triangle_slack(ei, a, RootedTriangle(u, v, w))
            for v, w in ei.pairs
            if u not in (v, w)
        }
        low = min(slacks.values())
        out.append(frozenset(e for e, s in slacks.items() if s == low))
    return tuple(out)


def tt_fan_membership(ei: EdgeIndex, d: Sequence[Q]) -> frozenset | None:
    """Tight rooted triangles of d, or None when d is not tight triangular."""
    tight = set()
    roots_hit = set()
    for t in rooted_triangles(ei):
        s = triangle_slack(ei, d, t)
        if s < 0:
            return None
        if s == 0:
            tight.add(t)
            roots_hit.add(t.u)
    if len(roots_hit) < ei.n:
        return None
    return frozenset(tight)


def feasible_shortcuts(ei: EdgeIndex, a: Sequence[Q]) -> frozenset:
    """Shortcuts staying inside the face cut out by a metric inequality a.

    A shortcut moves within the face exactly when its triangle slack
    vanishes on a, for any a whose inequality defines the face.
    """
    if not is_metric(ei, a):
        raise GeometryError("only metric inequalities define shortcut-stable faces")
    return frozenset(
        t for t in rooted_triangles(ei) if triangle_slack(ei, a, t) == 0
    )


def flat_tt_fan(n: int) -> Fan:
    """Complete fan of minimum-slack signatures on the degree kernel.

    Cones live in the ambient edge space but span only the kernel of the
    degree rows; each maximal cone is the closure of one signature class.
    Completeness is certified on a chart of the kernel before lifting, and
    a failure there is a hard error rather than a degraded result.
    """
    if not 4 <= n <= 6:
        raise GeometryError("signature fan enumeration is sized for 4 <= n <= 6")
    ei = EdgeIndex(n)
    ds = DegreeStructure(ei)
    chart = ds.kernel_chart()
    dim = chart.dim
    per_root: list[list[Vec]] = []
    for u in range(1, n + 1):
        funcs = []
        for v, w in ei.pairs:
            if u in (v, w):
                continue
            nrm = slack_normal(ei, RootedTriangle(u, v, w))
            f = Vec(nrm.dot(b) for b in chart.basis)
            if f not in funcs:
                funcs.append(f)
        per_root.append(funcs)
    cells = [Polyhedron.from_hrep(dim, [])]
    for funcs in per_root:
        nxt = []
        for cell in cells:
            for i, f in enumerate(funcs):
                rows = [
                    LinearConstraint.le(f - g, 0) for j, g in enumerate(funcs) if j != i
                ]
                piece = cell.intersect(Polyhedron.from_hrep(dim, rows))
                if piece.dim == dim:
                    nxt.append(piece)
        cells = nxt
    chart_fan = Fan(dim, cells)
    if not chart_fan.is_complete():
        raise GeometryError("signature cones do not tile the kernel")
    cones, labels = [], []
    for cell in chart_fan.maximal_cells:
        _, rays, lines = cell.generators()
        cones.append(
            Polyhedron.from_vrep(
                ei.m,
                [Vec.zero(ei.m)],
                rays=[chart.to_ambient(r) for r in rays],
                lines=[chart.to_ambient(l) for l in lines],
            )
        )
        labels.append(min_slack_edges(ei, chart.to_ambient(cell.relint_point())))
    return Fan(ei.m, cones, labels)
