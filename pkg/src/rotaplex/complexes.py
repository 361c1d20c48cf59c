"""Polyhedral complexes, fans, refinements, and exact volume bookkeeping.

Cells are Polyhedron objects and a complex is identified by its maximal
cells; lower faces are generated on demand from face lattices.  Identity of
a cell is its canonical generator triple, so two complexes agree exactly
when their maximal-cell key sets agree.

The module also carries the two workhorses used when a subdivision is built
from scratch: splitting a polytope along a hyperplane without re-running
double description (the pieces inherit vertices and inequality rows), and
exact volumes via placing triangulations, which turn "this union of cells
is convex" into a rational equality instead of a leap of faith.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Callable, Iterable, Sequence

from .errors import (
    DimensionMismatch,
    FaceLimitExceeded,
    GeometryError,
    MergeConvexityError,
)
from .linalg import Mat, Vec, det
from .polyhedra import EQ, LE, FaceLattice, LinearConstraint, Polyhedron, max_faces_cap

CellKey = tuple


def cell_key(p: Polyhedron) -> CellKey:
    verts, rays, lines = p.canonical_generators()
    return (verts, rays, lines)


def _gen_bbox(p: Polyhedron) -> tuple[tuple[Q, ...], tuple[Q, ...]] | None:
    """Coordinate bounding box over vertices; None when rays make it unbounded."""
    verts, rays, lines = p.generators()
    if rays or lines or not verts:
        return None
    lo = [min(v[k] for v in verts) for k in range(p.n)]
    hi = [max(v[k] for v in verts) for k in range(p.n)]
    return tuple(lo), tuple(hi)


def _bbox_inside(a, b) -> bool:
    if a is None or b is None:
        return True
    return all(x >= y for x, y in zip(a[0], b[0])) and all(
        x <= y for x, y in zip(a[1], b[1])
    )


def is_subset(p: Polyhedron, q: Polyhedron) -> bool:
    """Exact containment p <= q via q's inequality description."""
    if p.n != q.n:
        raise DimensionMismatch("ambient dimensions differ")
    if p.is_empty:
        return True
    if q.is_empty:
        return False
    verts, rays, lines = p.generators()
    rows = q.hrep_constraints()
    for v in verts:
        if not all(c.holds(v) for c in rows):
            return False
    for r in rays:
        for c in rows:
            s = c.normal.dot(r)
            if s != 0 and (c.kind == EQ or s > 0):
                return False
    for l in lines:
        if any(c.normal.dot(l) != 0 for c in rows):
            return False
    return True


# --- volumes -----------------------------------------------------------------


def triangulate(p: Polyhedron) -> list[tuple[Vec, ...]]:
    """Placing triangulation of a bounded polytope into simplices.

    Each simplex is a (dim+1)-tuple of vertices of p; together they tile p
    with disjoint interiors.  Recursion pulls every face towards its lowest
    vertex index.
    """
    if not p.is_bounded:
        raise GeometryError("triangulation needs a bounded polytope")
    if p.is_empty:
        return []
    lat = p.face_lattice()
    verts = p.vertices
    by_mask_dim = {m: lat.dim_of(m) for m in lat.masks}
    memo: dict[int, list[tuple[int, ...]]] = {}

    def rec(mask: int) -> list[tuple[int, ...]]:
        if mask in memo:
            return memo[mask]
        ids = [i for i in range(len(verts)) if (mask >> i) & 1]
        d = by_mask_dim[mask]
        if len(ids) == d + 1:
            memo[mask] = [tuple(ids)]
            return memo[mask]
        v0 = ids[0]
        d1 = d - 1
        out: list[tuple[int, ...]] = []
        for m in lat.masks:
            if m and m != mask and m & mask == m and by_mask_dim[m] == d1 and not (m >> v0) & 1:
                for s in rec(m):
                    out.append((v0,) + s)
        memo[mask] = out
        return out

    return [tuple(verts[i] for i in s) for s in rec(lat.top)]


def volume(p: Polyhedron) -> Q:
    """Exact volume of a bounded polytope, full-dimensional in its ambient."""
    if p.is_empty or p.dim < p.n:
        return Q(0)
    n = p.n
    if n == 0:
        return Q(1)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    total = Q(0)
    for simplex in triangulate(p):
        m = Mat([simplex[i + 1] - simplex[0] for i in range(n)])
        total += abs(det(m))
    return total / fact


def convex_union(cells: Sequence[Polyhedron]) -> Polyhedron:
    """Hull of interior-disjoint full-dimensional polytopes, verified convex.

    The union is convex exactly when the hull's volume equals the summed
    cell volumes; anything else raises MergeConvexityError.
    """
    if not cells:
        raise GeometryError("nothing to merge")
    n = cells[0].n
    pts: list[Vec] = []
    for c in cells:
        if not c.is_bounded or not c.is_full_dim:
            raise GeometryError("convex_union expects bounded full-dimensional cells")
        pts.extend(c.vertices)
    hull = Polyhedron.from_vrep(n, pts)
    if len(cells) > 1 and volume(hull) != sum(volume(c) for c in cells):
        raise MergeConvexityError(
            f"union of {len(cells)} cells is not convex (volume gap)"
        )
    return hull


# --- hyperplane splitting -------------------------------------------------------


def _vertex_tight_masks(verts: Sequence[Vec], rows: Sequence[LinearConstraint]) -> list[int]:
    out = []
    for v in verts:
        m = 0
        for i, c in enumerate(rows):
            if c.is_tight(v):
                m |= 1 << i
        out.append(m)
    return out


def split_by_hyperplane(
    cell: Polyhedron, normal: Vec, rhs: Q
) -> tuple[Polyhedron | None, Polyhedron | None]:
    """Cut a bounded polytope along normal . x = rhs.

    Returns (below, above): the pieces with normal.x <= rhs and >= rhs,
    None for a side the cell does not reach with full dimension.  Pieces
    carry both representations (vertices on the side plus edge crossings;
    parent rows plus the cut row), so no double description run is needed.
    """
    verts, rays, lines = cell.generators()
    if rays or lines:
        raise GeometryError("hyperplane splitting expects bounded cells")
    vals = [normal.dot(v) - rhs for v in verts]
    if all(v <= 0 for v in vals):
        return (cell, None) if any(v < 0 for v in vals) else (None, None)
    if all(v >= 0 for v in vals):
        return (None, cell)

    rows = list(cell.hrep_constraints())
    masks = _vertex_tight_masks(verts, rows)
    nv = len(verts)
    cuts: list[Vec] = []
    for i in range(nv):
        if vals[i] == 0:
            continue
        for j in range(i + 1, nv):
            if vals[j] == 0 or (vals[i] > 0) == (vals[j] > 0):
                continue
            common = masks[i] & masks[j]
            if any(
                k != i and k != j and common & masks[k] == common for k in range(nv)
            ):
                continue  # not an edge of the cell
            t = -vals[i] / (vals[j] - vals[i])
            cuts.append(verts[i] + (verts[j] - verts[i]) * t)

    below_verts = [v for v, val in zip(verts, vals) if val <= 0] + cuts
    above_verts = [v for v, val in zip(verts, vals) if val >= 0] + cuts
    below = Polyhedron.from_vrep(cell.n, below_verts, assume_minimal=True)
    below._raw_ineqs = tuple(
        [c for c in rows if c.kind == LE] + [LinearConstraint(normal, rhs, LE)]
    )
    below._raw_eqs = tuple(c for c in rows if c.kind == EQ)
    above = Polyhedron.from_vrep(cell.n, above_verts, assume_minimal=True)
    above._raw_ineqs = tuple(
        [c for c in rows if c.kind == LE] + [LinearConstraint(-normal, -rhs, LE)]
    )
    above._raw_eqs = tuple(c for c in rows if c.kind == EQ)
    return below, above


def arrangement_cells(
    region: Polyhedron, hyperplanes: Sequence[tuple[Vec, Q]]
) -> list[tuple[tuple[int, ...], Polyhedron]]:
    """Full-dimensional cells of a hyperplane arrangement inside a region.

    The region must be a bounded polytope of full dimension in its ambient
    space.  Each cell comes with its sign vector: entry k is -1 or +1
    according to the side of hyperplane k the cell lies on.
    """
    if not region.is_bounded or not region.is_full_dim:
        raise GeometryError("arrangement region must be bounded and full-dimensional")
    cap = max_faces_cap()
    cells: list[tuple[tuple[int, ...], Polyhedron]] = [((), region)]
    for a, b in hyperplanes:
        nxt: list[tuple[tuple[int, ...], Polyhedron]] = []
        for sig, cell in cells:
            below, above = split_by_hyperplane(cell, a, b)
            if below is None and above is None:
                # cell is contained in the hyperplane: impossible at full dim
                raise GeometryError("degenerate arrangement cell")
            if below is not None:
                nxt.append((sig + (-1,), below))
            if above is not None:
                nxt.append((sig + (1,), above))
            if len(nxt) > cap:
                raise FaceLimitExceeded(
                    f"arrangement exceeds {cap} cells; raise ROTAPLEX_MAX_FACES to override"
                )
        cells = nxt
    return cells


# --- complexes ---------------------------------------------------------------------


class PolyhedralComplex:
    """A complex given by its maximal cells (nonempty, pruned, deduplicated)."""

    def __init__(self, n: int, cells: Iterable[Polyhedron], labels: Iterable | None = None):
        self.n = n
        pool: list[Polyhedron] = []
        labs: list = []
        lab_in = list(labels) if labels is not None else None
        seen: dict[CellKey, int] = {}
        for idx, c in enumerate(cells):
            if c.n != n:
                raise DimensionMismatch("cell in wrong ambient space")
            if c.is_empty:
                continue
            k = cell_key(c)
            if k in seen:
                continue
            seen[k] = len(pool)
            pool.append(c)
            labs.append(lab_in[idx] if lab_in is not None else None)
        boxes = [_gen_bbox(c) for c in pool]
        keep = []
        for i, c in enumerate(pool):
            if any(
                j != i and _bbox_inside(boxes[i], boxes[j]) and is_subset(c, d)
                for j, d in enumerate(pool)
            ):
                continue
            keep.append(i)
        self.maximal_cells: tuple[Polyhedron, ...] = tuple(pool[i] for i in keep)
        self.labels: tuple = tuple(labs[i] for i in keep)
        self._all: dict[CellKey, Polyhedron] | None = None

    def __len__(self) -> int:
        return len(self.maximal_cells)

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.maximal_cells), default=-1)

    def is_pure(self) -> bool:
        d = self.dim
        return all(c.dim == d for c in self.maximal_cells)

    def all_cells(self) -> dict[CellKey, Polyhedron]:
        """Every face of every maximal cell, the empty face excluded."""
        if self._all is None:
            cap = max_faces_cap()
            out: dict[CellKey, Polyhedron] = {}
            for c in self.maximal_cells:
                lat = c.face_lattice()
                for m in lat.masks:
                    if m == 0:
                        continue
                    f = lat.face_poly(m)
                    out.setdefault(cell_key(f), f)
                    if len(out) > cap:
                        raise FaceLimitExceeded(
                            f"complex exceeds {cap} cells; raise ROTAPLEX_MAX_FACES to override"
                        )
            self._all = out
        return self._all

    def cells_of_dim(self, d: int) -> list[Polyhedron]:
        return [c for c in self.all_cells().values() if c.dim == d]

    def f_vector(self) -> tuple[int, ...]:
        """Cell counts by dimension 0..dim over all faces of the complex."""
        counts = [0] * (self.dim + 1)
        for c in self.all_cells().values():
            counts[c.dim] += 1
        return tuple(counts)

    def support_contains(self, x: Sequence[Q]) -> bool:
        return any(c.contains(x) for c in self.maximal_cells)

    def cells_containing(self, x: Sequence[Q]) -> list[Polyhedron]:
        return [c for c in self.maximal_cells if c.contains(x)]

    def smallest_cell_containing(self, x: Sequence[Q]) -> Polyhedron | None:
        best = None
        for c in self.all_cells().values():
            if c.contains(x) and (best is None or c.dim < best.dim):
                best = c
        return best

    def is_valid_complex(self) -> bool:
        """Pairwise intersections of maximal cells are faces of both."""
        cells = self.maximal_cells
        face_keys: list[set[CellKey]] = []
        for c in cells:
            lat = c.face_lattice()
            face_keys.append({cell_key(lat.face_poly(m)) for m in lat.masks if m})
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                meet = cells[i].intersect(cells[j])
                if meet.is_empty:
                    continue
                k = cell_key(meet)
                if k not in face_keys[i] or k not in face_keys[j]:
                    return False
        return True

    def same_complex(self, other: "PolyhedralComplex") -> bool:
        if self.n != other.n:
            return False
        return {cell_key(c) for c in self.maximal_cells} == {
            cell_key(c) for c in other.maximal_cells
        }

    def common_refinement(self, other: "PolyhedralComplex") -> "PolyhedralComplex":
        """Complex of intersections of maximal cells, labels paired up."""
        if self.n != other.n:
            raise DimensionMismatch("ambient dimensions differ")
        cells, labs = [], []
        for p, lp in zip(self.maximal_cells, self.labels):
            for q, lq in zip(other.maximal_cells, other.labels):
                meet = p.intersect(q)
                if not meet.is_empty:
                    cells.append(meet)
                    labs.append((lp, lq))
        return PolyhedralComplex(self.n, cells, labs)

    def restrict_to(self, region: Polyhedron) -> "PolyhedralComplex":
        cells = [c.intersect(region) for c in self.maximal_cells]
        return PolyhedralComplex(self.n, [c for c in cells if not c.is_empty], None)

    # --- poset comparison ------------------------------------------------------

    def _poset(self) -> tuple[list[Polyhedron], list[set[int]], list[set[int]]]:
        cells = list(self.all_cells().values())
        order = sorted(range(len(cells)), key=lambda i: cells[i].dim)
        cells = [cells[i] for i in order]
        below: list[set[int]] = [set() for _ in cells]
        above: list[set[int]] = [set() for _ in cells]
        for i, a in enumerate(cells):
            for j, b in enumerate(cells):
                if i != j and a.dim < b.dim and is_subset(a, b):
                    below[j].add(i)
                    above[i].add(j)
        return cells, below, above

    def poset_isomorphic(
        self, other: "PolyhedralComplex", mapping: Callable[[Polyhedron], Polyhedron] | None = None
    ) -> bool:
        """Face posets isomorphic as partial orders (inclusion both ways).

        With a mapping the claimed isomorphism is verified directly; without
        one, iterated invariant refinement narrows candidates and a
        backtracking search settles the answer exactly.
        """
        cells_a, below_a, above_a = self._poset()
        cells_b, below_b, above_b = other._poset()
        if len(cells_a) != len(cells_b):
            return False
        if mapping is not None:
            keys_b = {cell_key(c): i for i, c in enumerate(cells_b)}
            img = []
            for c in cells_a:
                k = cell_key(mapping(c))
                if k not in keys_b:
                    return False
                img.append(keys_b[k])
            if len(set(img)) != len(img):
                return False
            for i in range(len(cells_a)):
                if {img[j] for j in below_a[i]} != below_b[img[i]]:
                    return False
            return True

        def refine(cells, below, above):
            labs = [hash(("d", c.dim)) for c in cells]
            for _ in range(len(cells)):
                nxt = [
                    hash((labs[i], tuple(sorted(labs[j] for j in below[i])),
                          tuple(sorted(labs[j] for j in above[i]))))
                    for i in range(len(cells))
                ]
                if nxt == labs:
                    break
                labs = nxt
            return labs

        la = refine(cells_a, below_a, above_a)
        lb = refine(cells_b, below_b, above_b)
        if sorted(la) != sorted(lb):
            return False

        cand = [[j for j in range(len(cells_b)) if lb[j] == la[i]] for i in range(len(cells_a))]
        order = sorted(range(len(cells_a)), key=lambda i: len(cand[i]))
        assign: dict[int, int] = {}
        used: set[int] = set()

        def ok(i: int, j: int) -> bool:
            for i2, j2 in assign.items():
                if (i2 in below_a[i]) != (j2 in below_b[j]):
                    return False
                if (i in below_a[i2]) != (j in below_b[j2]):
                    return False
            return True

        def search(k: int) -> bool:
            if k == len(order):
                return True
            i = order[k]
            for j in cand[i]:
                if j in used or not ok(i, j):
                    continue
                assign[i] = j
                used.add(j)
                if search(k + 1):
                    return True
                del assign[i]
                used.remove(j)
            return False

        return search(0)


# --- fans -------------------------------------------------------------------------


class Fan(PolyhedralComplex):
    """A complex whose cells are cones with apex at the origin."""

    def __init__(self, n: int, cones: Iterable[Polyhedron], labels: Iterable | None = None):
        cones = list(cones)
        for c in cones:
            verts, _, _ = c.generators()
            if any(not v.is_zero() for v in verts):
                raise GeometryError("fan cones must have apex at the origin")
        super().__init__(n, cones, labels)

    def cone_containing(self, x: Sequence[Q]) -> Polyhedron | None:
        for c in self.maximal_cells:
            if c.contains(x):
                return c
        return None

    def is_complete(self) -> bool:
        """Support equals the whole space.

        Checks the standard boundarylessness criterion: all maximal cones
        full-dimensional, every ridge shared by exactly two of them, and
        the ridge graph connected.
        """
        cones = self.maximal_cells
        if not cones:
            return False
        n = self.n
        if n == 0:
            return True
        if any(not c.is_full_dim for c in cones):
            return False
        ridge_count: dict[CellKey, list[int]] = {}
        for i, c in enumerate(cones):
            for f in c.facets():
                ridge_count.setdefault(cell_key(f), []).append(i)
        if any(len(v) != 2 for v in ridge_count.values()):
            return False
        adj: dict[int, set[int]] = {i: set() for i in range(len(cones))}
        for pair in ridge_count.values():
            adj[pair[0]].add(pair[1])
            adj[pair[1]].add(pair[0])
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(cones)


def normal_fan(p: Polyhedron) -> Fan:
    """Fan of outer normal cones at the vertices of a full-dimensional polytope."""
    if not p.is_bounded or not p.is_full_dim:
        raise GeometryError("normal fan needs a bounded full-dimensional polytope")
    facets = p.facet_constraints
    inc = p.incidence
    cones, labels = [], []
    for j, v in enumerate(p.vertices):
        gens = [facets[i].normal for i in range(len(facets)) if (inc[i] >> j) & 1]
        cones.append(
            Polyhedron.from_vrep(p.n, [Vec.zero(p.n)], rays=gens, assume_minimal=False)
        )
        labels.append(v)
    return Fan(p.n, cones, labels)


def face_fan(p: Polyhedron, center: Sequence[Q] | None = None) -> Fan:
    """Fan of cones over the proper faces of p, seen from an interior point."""
    if not p.is_bounded or not p.is_full_dim:
        raise GeometryError("face fan needs a bounded full-dimensional polytope")
    z = Vec(center) if center is not None else p.relint_point()
    if not p.relint_contains(z):
        raise GeometryError("face fan center must be interior")
    cones, labels = [], []
    for i, c in enumerate(p.facet_constraints):
        m = p.incidence[i]
        gens = [v - z for j, v in enumerate(p.vertices) if (m >> j) & 1]
        cones.append(Polyhedron.from_vrep(p.n, [Vec.zero(p.n)], rays=gens))
        labels.append(c)
    return Fan(p.n, cones, labels)


# --- lattice helpers ----------------------------------------------------------------


def faces_complex(p: Polyhedron, bounded_only: bool = False) -> PolyhedralComplex:
    """The complex of all (or all bounded) faces of a polyhedron."""
    lat = p.face_lattice()
    masks = lat.bounded_masks() if bounded_only else list(lat.masks)
    masks = [m for m in masks if m]
    keep = [m for m in masks if not any(m != m2 and m & m2 == m for m2 in masks)]
    return PolyhedralComplex(p.n, [lat.face_poly(m) for m in keep])


def mask_of_face(lat: FaceLattice, f: Polyhedron) -> int:
    """The lattice mask whose face equals f; raises if f is not a face."""
    verts, rays, _ = lat.poly.generators()
    m = 0
    for i, v in enumerate(verts):
        if f.contains(v):
            m |= 1 << i
    rows = f.hrep_constraints()
    for i, r in enumerate(rays):
        ok = all(
            (c.normal.dot(r) == 0) if c.kind == EQ else (c.normal.dot(r) <= 0)
            for c in rows
        )
        if ok:
            m |= 1 << (len(verts) + i)
    if m not in set(lat.masks) or not lat.face_poly(m).same_set(f):
        raise GeometryError("polyhedron is not a face of the lattice's parent")
    return m


def deletion_complex(
    p: Polyhedron, pivot: Polyhedron | Iterable[int], bounded_only: bool = False
) -> PolyhedralComplex:
    """Faces of p disjoint from `pivot`, as a complex.

    The pivot is a face of p or an iterable of vertex indices into
    p.vertices.  Two faces of a pointed polyhedron intersect exactly when
    they share a vertex, so disjointness is a bitmask test on the lattice.
    """
    if p.lines:
        raise GeometryError("no two nonempty faces are disjoint under lineality")
    lat = p.face_lattice()
    if isinstance(pivot, Polyhedron):
        gm = mask_of_face(lat, pivot)
    else:
        gm = 0
        for i in pivot:
            if not 0 <= i < lat.nverts:
                raise GeometryError(f"vertex index {i} out of range")
            gm |= 1 << i
    if gm == 0:
        raise GeometryError("deleting the empty face removes nothing")
    masks = lat.bounded_masks() if bounded_only else list(lat.masks)
    vb = (1 << lat.nverts) - 1
    masks = [m for m in masks if m and (m & gm & vb) == 0]
    keep = [m for m in masks if not any(m != m2 and m & m2 == m for m2 in masks)]
    return PolyhedralComplex(p.n, [lat.face_poly(m) for m in keep])


def cells_by_signature(
    region: Polyhedron,
    hyperplanes: Sequence[tuple[Vec, Q]],
    sig: Callable[[Vec], object],
) -> PolyhedralComplex:
    """Coarsest subdivision of the region on which `sig` is constant per cell.

    The hyperplanes must carry every wall across which the signature can
    change; sig is then evaluated at one exact relative-interior point of
    each arrangement cell and cells with equal values are merged.  A merge
    whose union is not convex raises MergeConvexityError, so a hyperplane
    family that is too coarse fails loudly instead of silently producing
    a non-complex.
    """
    groups: dict[object, list[Polyhedron]] = {}
    order: list = []
    for _, cell in arrangement_cells(region, hyperplanes):
        key = sig(cell.relint_point())
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(cell)
    cells, labels = [], []
    for key in sorted(order, key=repr):
        block = groups[key]
        cells.append(block[0] if len(block) == 1 else convex_union(block))
        labels.append(key)
    return PolyhedralComplex(region.n, cells, labels)


def common_refinement(
    region: Polyhedron, pieces: Sequence[PolyhedralComplex]
) -> PolyhedralComplex:
    """All nonempty intersections of the region with one cell per piece."""
    acc = PolyhedralComplex(region.n, [region])
    for piece in pieces:
        acc = acc.common_refinement(piece)
    return acc
