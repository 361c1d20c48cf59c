"""Double description over the integers.

The kernel computes extreme rays of a rational polyhedral cone given by
homogeneous inequalities.  All ray vectors are kept as primitive integer
tuples and tight-constraint sets as bitmasks, so the inner loops are integer
dot products and bit operations.  Lineality is split off first through a
coordinate chart on a complement of the kernel, which leaves a pointed cone
for the incremental step.  V/H conversions for general polyhedra reduce to
this kernel by the usual homogenization (one extra coordinate) and by
dualizing (valid inequalities of P form a cone whose extreme rays are the
facets of P).
"""

from __future__ import annotations

from fractions import Fraction as Q
from math import gcd
from typing import Sequence

from .errors import DimensionMismatch, EmptyPolyhedronError
from .linalg import Mat, Vec, kernel_basis_of_rows, primitive_int, rref, solve

IntVec = tuple[int, ...]


def _idot(a: IntVec, b: IntVec) -> int:
    return sum(x * y for x, y in zip(a, b))


def _iprim(v: Sequence[int]) -> IntVec:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(v) if g <= 1 else tuple(x // g for x in v)


def _initial_basis(rows: list[IntVec], dim: int) -> list[int]:
    """Indices of the first `dim` linearly independent rows."""
    chosen: list[int] = []
    basis: list[list[Q]] = []  # running echelon of the chosen rows
    pivots: list[int] = []
    for i, row in enumerate(rows):
        v = [Q(x) for x in row]
        for brow, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, brow)]
        p = next((j for j in range(dim) if v[j] != 0), None)
        if p is None:
            continue
        inv = Q(1) / v[p]
        v = [a * inv for a in v]
        basis.append(v)
        pivots.append(p)
        chosen.append(i)
        if len(chosen) == dim:
            return chosen
    raise DimensionMismatch("cone is not pointed: constraint rows do not have full rank")


def extreme_rays_pointed(rows: list[IntVec], dim: int) -> tuple[list[IntVec], list[int]]:
    """Extreme rays of the pointed cone {x : row . x >= 0 for every row}.

    Requires rank(rows) == dim.  Returns primitive integer rays together
    with one bitmask per ray recording which input rows it is tight on.
    """
    if dim == 0:
        return [], []
    init = _initial_basis(rows, dim)
    a0 = Mat([rows[i] for i in init])
    rays: list[IntVec] = []
    for j in range(dim):
        col = solve(a0, [1 if k == j else 0 for k in range(dim)])
        assert col is not None
        rays.append(_iprim(primitive_int(col)))

    init_set = set(init)
    rest = sorted((i for i in range(len(rows)) if i not in init_set), key=lambda i: rows[i])
    order = list(init) + rest

    # masks are indexed by position in `order` during the run
    masks = []
    for r in rays:
        m = 0
        for pos in range(dim):
            if _idot(rows[order[pos]], r) == 0:
                m |= 1 << pos
        masks.append(m)

    processed = dim
    for pos in range(dim, len(order)):
        row = rows[order[pos]]
        vals = [_idot(row, r) for r in rays]
        if all(v >= 0 for v in vals):
            for k, v in enumerate(vals):
                if v == 0:
                    masks[k] |= 1 << pos
            processed += 1
            continue
        pos_idx = [k for k, v in enumerate(vals) if v > 0]
        zero_idx = [k for k, v in enumerate(vals) if v == 0]
        neg_idx = [k for k, v in enumerate(vals) if v < 0]
        new_rays: list[IntVec] = []
        new_masks: list[int] = []
        for p in pos_idx:
            mp = masks[p]
            for n in neg_idx:
                common = mp & masks[n]
                if common.bit_count() < dim - 2:
                    continue  # adjacent rays share at least dim-2 tight rows
                if any(
                    k != p and k != n and common & masks[k] == common
                    for k in range(len(rays))
                ):
                    continue
                vp, vn = vals[p], vals[n]
                combo = [vp * b - vn * a for a, b in zip(rays[p], rays[n])]
                w = _iprim(combo)
                m = 0
                for q in range(processed):
                    if _idot(rows[order[q]], w) == 0:
                        m |= 1 << q
                new_rays.append(w)
                new_masks.append(m | (1 << pos))
        zero_set = set(zero_idx)
        keep = pos_idx + zero_idx
        rays = [rays[k] for k in keep] + new_rays
        masks = [
            masks[k] | (1 << pos) if k in zero_set else masks[k] for k in keep
        ] + new_masks
        processed += 1

    # re-express masks in the original row order
    out_masks = []
    for r in rays:
        m = 0
        for i, row in enumerate(rows):
            if _idot(row, r) == 0:
                m |= 1 << i
        out_masks.append(m)
    return rays, out_masks


def cone_generators(
    raw_rows: Sequence[Sequence[Q]], dim: int
) -> tuple[list[IntVec], list[IntVec], list[int]]:
    """Generators of {x : row . x >= 0}: (lineality basis, extreme rays, masks).

    Rays are extreme modulo the lineality space and the mask of ray i has
    bit j set when raw_rows[j] is tight on it.  The lineality basis is the
    canonical echelon basis of the kernel of the rows.
    """
    rows = [_iprim(primitive_int(Vec(r))) for r in raw_rows]
    rows = [r for r in rows if any(r)]
    if dim == 0:
        return [], [], []
    kb = kernel_basis_of_rows(rows, dim)
    lin, _ = rref(kb, dim) if kb else ([], [])
    lines = [_iprim(primitive_int(v)) for v in lin]
    if not rows:
        return lines, [], []
    if not lines:
        rays, masks = extreme_rays_pointed(rows, dim)
    else:
        _, pivots = rref(lines, dim)
        pivot_set = set(pivots)
        chart_cols = [j for j in range(dim) if j not in pivot_set]
        reduced = [tuple(r[j] for j in chart_cols) for r in rows]
        sub_rays, masks = extreme_rays_pointed(reduced, len(chart_cols))
        rays = []
        for sr in sub_rays:
            full = [0] * dim
            for c, val in zip(chart_cols, sr):
                full[c] = val
            rays.append(tuple(full))
    # masks were computed against the filtered row list; re-index to raw rows
    if len(rows) != len(raw_rows):
        remap = []
        k = 0
        for r in raw_rows:
            p = _iprim(primitive_int(Vec(r)))
            if any(p):
                remap.append(k)
                k += 1
            else:
                remap.append(None)
        fixed = []
        for m in masks:
            fm = 0
            for i, src in enumerate(remap):
                if src is None or (m >> src) & 1:
                    fm |= 1 << i
            fixed.append(fm)
        masks = fixed
    return lines, rays, masks


def vrep_from_hrep(
    ineqs: Sequence[tuple[Sequence[Q], Q]],
    eqs: Sequence[tuple[Sequence[Q], Q]],
    dim: int,
) -> tuple[list[Vec], list[Vec], list[Vec], list[int]]:
    """Generators of {x : a.x <= b for (a,b) in ineqs, a.x == b for eqs}.

    Returns (vertices, rays, lines, incidence) where vertices are one
    representative per minimal face (honest vertices when the polyhedron is
    pointed) and incidence[i] is a bitmask over vertices+rays (vertices
    first) tight on ineqs[i].  Raises EmptyPolyhedronError on an empty set.
    """
    rows: list[list[Q]] = []
    for a, b in ineqs:
        rows.append([-Q(x) for x in a] + [Q(b)])
    rows.append([Q(0)] * dim + [Q(1)])  # homogenizing coordinate is nonnegative
    for a, b in eqs:
        rows.append([Q(x) for x in a] + [-Q(b)])
        rows.append([-Q(x) for x in a] + [Q(b)])
    lines_h, rays_h, masks = cone_generators(rows, dim + 1)

    lines = []
    for l in lines_h:
        assert l[dim] == 0  # the t >= 0 row forces every line into t = 0
        lines.append(Vec(l[:dim]))
    verts: list[Vec] = []
    recs: list[Vec] = []
    vert_src: list[int] = []
    ray_src: list[int] = []
    for k, r in enumerate(rays_h):
        t = r[dim]
        assert t >= 0
        if t > 0:
            verts.append(Vec(r[:dim]) / t)
            vert_src.append(k)
        else:
            recs.append(Vec(r[:dim]))
            ray_src.append(k)
    if not verts:
        raise EmptyPolyhedronError("inequality system has no solutions")
    incidence = []
    for i in range(len(ineqs)):
        m = 0
        for out_pos, k in enumerate(vert_src + ray_src):
            if (masks[k] >> i) & 1:
                m |= 1 << out_pos
        incidence.append(m)
    return verts, recs, lines, incidence


def hrep_from_vrep(
    vertices: Sequence[Sequence[Q]],
    rays: Sequence[Sequence[Q]],
    lines: Sequence[Sequence[Q]],
    dim: int,
) -> tuple[list[tuple[Vec, Q]], list[tuple[Vec, Q]], list[int]]:
    """Minimal H-description of conv(vertices) + cone(rays) + span(lines).

    Returns (facet inequalities as (normal, rhs) meaning normal.x <= rhs,
    equalities as (normal, rhs), incidence) with incidence[i] a bitmask over
    the input generators (vertices then rays) tight on facet i.
    """
    if not vertices:
        raise EmptyPolyhedronError("V-representation needs at least one point")
    rows: list[list[Q]] = []
    for v in vertices:
        rows.append([-Q(x) for x in v] + [Q(1)])
    for r in rays:
        rows.append([-Q(x) for x in r] + [Q(0)])
    for l in lines:
        rows.append([Q(x) for x in l] + [Q(0)])
        rows.append([-Q(x) for x in l] + [Q(0)])
    dual_lines, dual_rays, masks = cone_generators(rows, dim + 1)

    eqs = [(Vec(l[:dim]), Q(l[dim])) for l in dual_lines]
    # drop rays that are trivial modulo the affine-hull equalities
    span_rows = [list(l) for l in dual_lines] + [[0] * dim + [1]]
    base_rows, base_piv = rref(span_rows, dim + 1)
    facets: list[tuple[Vec, Q]] = []
    incidence: list[int] = []
    ngen = len(vertices) + len(rays)
    for k, r in enumerate(dual_rays):
        probe = [list(b) for b in base_rows] + [list(Vec(r))]
        _, piv2 = rref(probe, dim + 1)
        if len(piv2) == len(base_piv):
            continue  # inequality implied by equalities alone
        facets.append((Vec(r[:dim]), Q(r[dim])))
        m = 0
        for g in range(ngen):
            if (masks[k] >> g) & 1:
                m |= 1 << g
        incidence.append(m)
    return facets, eqs, incidence
