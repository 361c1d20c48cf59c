"""Subdividing the polar of a face by how its inequalities rotate.

A bounded proper face S of a polyhedron P selects two pieces of linear
algebra: the direction space L of S and its orthogonal complement.  Each
point a of the polar of S (taken inside L, relative to a reference point z
in the relative interior of S) is the L-part of many valid inequalities for
P; sliding the orthogonal part q sweeps out every face of P that an
inequality with L-part a can define.  Grouping points of the polar by that
set of faces subdivides it into the rotation complex built here.

Two equivalent bookkeeping devices are implemented side by side.  The first
records the face set directly, by enumerating the polyhedron of admissible
orthogonal parts q.  The second works in the polar of P, where the faces
conjugate to rotations of a form the fiber of a projective map; recording
which faces of a fixed deletion region the fiber passes through gives the
same partition.  verify_two_definitions checks the match on samples, which
is what makes the complex trustworthy when only one device is used.

Two sign conventions cover the polytopes treated here.  STANDARD_LE handles
bounded-style polars {a : a.(x - z) <= 1} with P polarized about an interior
point.  BLOCKING_GE handles up-monotone polyhedra in the nonnegative
orthant, where the natural polar is the blocking polyhedron {b : b.x >= 1}
and the face polar uses a.(x - z) >= -1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Callable, Iterable, Sequence

from ._chart import AffineChart, span_chart, subspace_chart
from ._simplex import INFEASIBLE, OPTIMAL, solve_lp
from .complexes import PolyhedralComplex, cells_by_signature, is_subset, mask_of_face
from .errors import (
    ConventionError,
    DegenerateMapError,
    GeometryError,
    NotAFaceError,
)
from .linalg import Vec, kernel_basis_of_rows, orth_project
from .polyhedra import EQ, LE, FaceLattice, LinearConstraint, Polyhedron
from .sampling import DEFAULT_SEED, SeededSampler


class Convention(enum.Enum):
    STANDARD_LE = "standard-le"
    BLOCKING_GE = "blocking-ge"


STANDARD_LE = Convention.STANDARD_LE
BLOCKING_GE = Convention.BLOCKING_GE

# A face is identified by its tight generators of the parent polyhedron:
# (sorted vertex indices, sorted ray indices).  The empty face is ((), ()).
FaceId = tuple[tuple[int, ...], tuple[int, ...]]
EMPTY_FACE: FaceId = ((), ())


@dataclass(frozen=True, order=True)
class FaceSetSignature:
    """Canonically ordered, hashable set of face identifiers.

    Used both for sets of faces of P (rotation targets) and for sets of
    faces of the polar of P (fiber crossings); the two are compared against
    each other only through the conjugation maps below.
    """

    faces: tuple[FaceId, ...]

    @classmethod
    def of(cls, ids: Iterable[FaceId]) -> "FaceSetSignature":
        return cls(tuple(sorted(set(ids))))

    def __contains__(self, item: FaceId) -> bool:
        return item in self.faces

    def __iter__(self):
        return iter(self.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __repr__(self) -> str:
        body = ",".join(
            "(%s|%s)" % (" ".join(map(str, v)), " ".join(map(str, r)))
            for v, r in self.faces
        )
        return "Sig{%s}" % body


@dataclass(eq=False)
class RotationContext:
    """Everything fixed by the choice of (P, S, z, convention).

    L_basis spans the direction space of S, Lperp_basis its orthogonal
    complement; both are reduced echelon bases.  S_polar lives in ambient
    coordinates (pinned to L by equality rows), chart is the coordinate
    chart of L used for all full-dimensional cell work.  P_polar is the
    polar of P about c0 (its own relative interior point; the origin for
    the blocking convention), pinned to the direction space of P, and
    D_complex collects the faces of P_polar disjoint from S_diamond, the
    face of P_polar conjugate to S.  Signatures of points are expressed
    in the face identifiers of these two polars.
    """

    P: Polyhedron
    S: Polyhedron
    z: Vec
    convention: Convention
    face_selector: LinearConstraint
    L_basis: tuple[Vec, ...]
    Lperp_basis: tuple[Vec, ...]
    chart: AffineChart
    perp_chart: AffineChart
    c0: Vec
    zbar: Vec
    S_polar: Polyhedron
    P_polar: Polyhedron
    S_diamond: Polyhedron
    polar_lattice: FaceLattice
    pivot_mask: int
    d_masks: frozenset[int]
    D_complex: PolyhedralComplex
    conj_rows: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.P.n

    @property
    def sign(self) -> Q:
        return Q(1) if self.convention is STANDARD_LE else Q(-1)

    def polar_face_id(self, mask: int) -> FaceId:
        nv = self.polar_lattice.nverts
        vid = tuple(i for i in range(nv) if (mask >> i) & 1)
        rid = tuple(
            j for j in range(self.polar_lattice.nrays) if (mask >> (nv + j)) & 1
        )
        return (vid, rid)

    def conjugate_mask(self, face_id: FaceId) -> int:
        """Face of P_polar conjugate to the P-face with this identifier."""
        raw = self.P_polar.raw_row_incidence()
        nv = len(self.P.vertices)
        m = self.polar_lattice.top
        for i in face_id[0]:
            m &= raw[self.conj_rows[i]]
        for j in face_id[1]:
            m &= raw[self.conj_rows[nv + j]]
        if m & ((1 << self.polar_lattice.nverts) - 1) == 0:
            m = 0
        return m


def _assert_in_polar(ctx: RotationContext, a: Vec) -> None:
    if len(a) != ctx.ambient_dim:
        raise GeometryError(f"point in R^{len(a)}, context in R^{ctx.ambient_dim}")
    if any(w.dot(a) != 0 for w in ctx.Lperp_basis):
        raise GeometryError("point is not in the direction space of the face")
    if not ctx.S_polar.contains(a):
        raise GeometryError("point lies outside the face polar")


def make_context(
    P: Polyhedron,
    face_selector: LinearConstraint,
    convention: Convention = STANDARD_LE,
    z: Sequence[Q] | None = None,
) -> RotationContext:
    """Fix a face S of P and build the polar-side scaffolding around it.

    face_selector must be a valid inequality for P; S is the face where it
    is tight.  S must be a nonempty bounded proper face of dimension at
    least one.  z defaults to the vertex barycenter of S and must be a
    relative interior point when given.
    """
    if not isinstance(convention, Convention):
        raise ConventionError(f"unknown convention {convention!r}")
    m = P.n
    S = P.face(face_selector)
    if S.is_empty:
        raise NotAFaceError("selector inequality is tight nowhere on the polyhedron")
    if S.rays or S.lines:
        raise GeometryError("rotation needs a bounded face")
    if S.dim == P.dim:
        raise GeometryError("rotation needs a proper face")
    if S.dim < 1:
        raise GeometryError("a vertex has a trivial polar; nothing to subdivide")

    verts = S.vertices
    if z is None:
        zv = Vec.zero(m)
        for v in verts:
            zv = zv + v
        zv = zv / len(verts)
    else:
        zv = Vec(z)
        if not S.relint_contains(zv):
            raise GeometryError("z must be a relative interior point of the face")

    chart = subspace_chart([v - verts[0] for v in verts[1:]], m)
    L_basis = tuple(chart.basis)
    perp_chart = subspace_chart(kernel_basis_of_rows(L_basis, m), m)
    Lperp_basis = tuple(perp_chart.basis)

    s = Q(1) if convention is STANDARD_LE else Q(-1)

    if convention is STANDARD_LE:
        c0 = P.relint_point()
        if P.is_full_dim:
            P_polar = P.polar(center=c0)
        else:
            rows = [LinearConstraint(v - c0, Q(1), LE) for v in P.vertices]
            rows += [LinearConstraint(r, Q(0), LE) for r in P.rays]
            rows += [LinearConstraint(l, Q(0), EQ) for l in P.lines]
            # pin the polar to the direction space of P; the pinned rows
            # are exactly the equality normals of P's affine hull
            rows += [LinearConstraint(e.normal, Q(0), EQ) for e in P.equalities]
            P_polar = Polyhedron.from_hrep(m, rows)
        zbar = zv - c0
        diamond_sel = LinearConstraint(zbar, Q(1), LE)
    else:
        c0 = Vec.zero(m)
        P_polar = P.blocking_polar()
        zbar = zv
        diamond_sel = LinearConstraint.ge(zbar, 1)

    srows = [LinearConstraint((v - zv) * s, Q(1), LE) for v in verts]
    srows += [LinearConstraint(w, Q(0), EQ) for w in Lperp_basis]
    S_polar = Polyhedron.from_hrep(m, srows)
    if convention is STANDARD_LE and not S_polar.is_bounded:
        raise GeometryError("polar of a bounded face about a relint point is bounded")

    S_diamond = P_polar.face(diamond_sel)
    if S_diamond.is_empty:
        raise GeometryError("conjugate face of a nonempty face cannot be empty")

    polar_lattice = P_polar.face_lattice()
    pivot_mask = mask_of_face(polar_lattice, S_diamond)
    vert_bits = (1 << polar_lattice.nverts) - 1
    if convention is BLOCKING_GE:
        pool = polar_lattice.bounded_masks()
    else:
        pool = polar_lattice.masks
    d_masks = frozenset(mk for mk in pool if mk and mk & pivot_mask & vert_bits == 0)
    keep = [
        mk
        for mk in d_masks
        if not any(mk != other and mk & other == mk for other in d_masks)
    ]
    D_complex = PolyhedralComplex(m, [polar_lattice.face_poly(mk) for mk in keep])

    nv = len(P.vertices)
    conj: list[int] = list(range(nv))
    if convention is STANDARD_LE:
        conj += [nv + j for j in range(len(P.rays))]
    else:
        for r in P.rays:
            # blocking_polar emits the nonnegativity rows in coordinate
            # order, not in the order the rays happen to be stored
            pos = [i for i, x in enumerate(r) if x != 0]
            conj.append(nv + pos[0])

    return RotationContext(
        P=P,
        S=S,
        z=zv,
        convention=convention,
        face_selector=face_selector,
        L_basis=L_basis,
        Lperp_basis=Lperp_basis,
        chart=chart,
        perp_chart=perp_chart,
        c0=c0,
        zbar=zbar,
        S_polar=S_polar,
        P_polar=P_polar,
        S_diamond=S_diamond,
        polar_lattice=polar_lattice,
        pivot_mask=pivot_mask,
        d_masks=d_masks,
        D_complex=D_complex,
        conj_rows=tuple(conj),
    )


# --- definition one: admissible orthogonal parts ------------------------------------


def rotated_inequality_set(ctx: RotationContext, a: Sequence[Q]) -> Polyhedron:
    """All q with a + q a valid inequality normal for P, in L-perp coordinates.

    The returned polyhedron lives in the chart of ctx.perp_chart; its raw
    inequality rows are ordered by the vertices of P followed by the rays
    of P, which face-set bookkeeping relies on.  Nonempty for every a in
    the face polar; an empty result means the context is corrupt and is
    reported as an error rather than an empty face set.
    """
    av = Vec(a)
    _assert_in_polar(ctx, av)
    s = ctx.sign
    rows = []
    for v in ctx.P.vertices:
        n_c, rhs_c = ctx.perp_chart.constraint_to_chart(
            (v - ctx.z) * s, 1 - s * av.dot(v - ctx.z)
        )
        rows.append(LinearConstraint(n_c, rhs_c, LE))
    for r in ctx.P.rays:
        n_c, rhs_c = ctx.perp_chart.constraint_to_chart(r * s, -s * av.dot(r))
        rows.append(LinearConstraint(n_c, rhs_c, LE))
    for l in ctx.P.lines:
        n_c, rhs_c = ctx.perp_chart.constraint_to_chart(l, -av.dot(l))
        rows.append(LinearConstraint(n_c, rhs_c, EQ))
    Qa = Polyhedron.from_hrep(len(ctx.Lperp_basis), rows)
    if Qa.is_empty:
        raise GeometryError("no valid rotation exists; the rotation set must be nonempty")
    return Qa


def face_of_S_id(ctx: RotationContext, a: Sequence[Q]) -> FaceId:
    """Identifier of the face of S that a defines, in P's generator indexing."""
    av = Vec(a)
    s = ctx.sign
    pv_index = ctx._cache.get("pv_index")
    if pv_index is None:
        pv_index = {v: i for i, v in enumerate(ctx.P.vertices)}
        ctx._cache["pv_index"] = pv_index
    tight = [pv_index[v] for v in ctx.S.vertices if s * av.dot(v - ctx.z) == 1]
    return (tuple(sorted(tight)), ())


def frak_F(ctx: RotationContext, a: Sequence[Q]) -> FaceSetSignature:
    """The set of faces of P definable by rotating a, as face identifiers.

    Every face of the rotation set selects one face of P: the generators
    of P whose rows are tight across that face.  The empty identifier
    appears exactly when some rotation is strict at every generator.  The
    face of S defined by a always shows up; its absence would falsify the
    construction, so it is checked here.
    """
    av = Vec(a)
    Qa = rotated_inequality_set(ctx, av)
    raw = Qa.raw_row_incidence()
    lat = Qa.face_lattice()
    nv = len(ctx.P.vertices)
    ids = set()
    for mask in lat.masks:
        if mask == 0:
            continue
        tight = [i for i, rm in enumerate(raw) if rm & mask == mask]
        vid = tuple(i for i in tight if i < nv)
        rid = tuple(i - nv for i in tight if i >= nv)
        # no tight vertex means no point achieves equality: the face is
        # empty no matter which ray rows happen to be tight
        ids.add((vid, rid) if vid else EMPTY_FACE)
    sig = FaceSetSignature.of(ids)
    if face_of_S_id(ctx, av) not in sig:
        raise GeometryError("rotation set failed to produce the face defined by a")
    return sig


# --- definition two: fibers in the polar of P ----------------------------------------


def _fiber_eq_rows(ctx: RotationContext, a: Vec) -> list[tuple[Vec, Q]]:
    """Equality rows in b carving the fiber of a out of P_polar."""
    rows = []
    for u in ctx.L_basis:
        au = a.dot(u)
        if ctx.convention is STANDARD_LE:
            rows.append((u + ctx.zbar * au, au))
        else:
            rows.append((u - ctx.zbar * au, -au))
    return rows


def pi(ctx: RotationContext, b: Sequence[Q]) -> Vec:
    """Projective map sending a polar point to the rotation it conjugates.

    Defined away from S_diamond, where the denominator vanishes; the
    orthogonal projection of b onto L, rescaled so the result lands in
    the face polar.
    """
    bv = Vec(b)
    if not ctx.P_polar.contains(bv):
        raise GeometryError("point lies outside the polar of P")
    if ctx.convention is STANDARD_LE:
        den = 1 - bv.dot(ctx.zbar)
    else:
        den = bv.dot(ctx.zbar) - 1
    if den == 0:
        raise DegenerateMapError("projection undefined on the conjugate face of S")
    return orth_project(ctx.L_basis, bv) / den


def pi_image(ctx: RotationContext, f: Polyhedron) -> Polyhedron:
    """Image of a bounded polar face under pi, as a polytope in ambient space."""
    if f.rays or f.lines:
        raise GeometryError("pi images are computed for bounded faces only")
    return Polyhedron.from_vrep(ctx.ambient_dim, [pi(ctx, v) for v in f.vertices])


def fiber_signature(
    ctx: RotationContext, a: Sequence[Q], method: str = "lp"
) -> FaceSetSignature:
    """Faces of the deletion region whose relative interior the fiber of a meets.

    method="lp" decides each candidate face by one exact LP over barycentric
    weights of its vertices; a positive optimum is a relative-interior
    witness.  method="incidence" runs one double-description pass over the
    fiber polyhedron and reads the crossings off its face lattice.  Both are
    exact; they are kept separate so they can check each other.
    """
    av = Vec(a)
    _assert_in_polar(ctx, av)
    return FaceSetSignature.of(
        ctx.polar_face_id(mk) for mk in _fiber_met(ctx, av, method)
    )


def _fiber_met(ctx: RotationContext, a: Vec, method: str) -> set[int]:
    if method == "lp":
        return _fiber_met_lp(ctx, a)
    if method == "incidence":
        return _fiber_met_incidence(ctx, a)
    raise ValueError(f"unknown method {method!r}")


def _fiber_met_incidence(ctx: RotationContext, a: Vec) -> set[int]:
    # For each candidate face F, the part of the fiber tight on every facet
    # row through F is an exposed face of the fiber; it is nonempty with
    # carrier exactly F precisely when the fiber meets relint(F).  Deciding
    # that needs only the tight-row masks of the fiber's generators.
    gen_masks = _fiber_generator_masks(ctx, a)
    if gen_masks is None:
        return set()
    vmasks, rmasks = gen_masks
    if not vmasks:
        return set()
    facets = ctx.P_polar.facet_constraints
    inc = ctx.P_polar.incidence
    top = ctx.polar_lattice.top
    nrows = len(facets)
    rowbits = ctx._cache.get("rowbits")
    if rowbits is None:
        rowbits = {
            mk: sum(1 << i for i in range(nrows) if inc[i] & mk == mk)
            for mk in ctx.d_masks
        }
        ctx._cache["rowbits"] = rowbits
    met: set[int] = set()
    for mk, need in rowbits.items():
        sel = [m for m in vmasks if m & need == need]
        if not sel:
            continue
        common = sel[0]
        for m in sel[1:]:
            common &= m
        for m in rmasks:
            if m & need == need:
                common &= m
        carrier = top
        i = 0
        while common:
            if common & 1:
                carrier &= inc[i]
            common >>= 1
            i += 1
        if carrier == mk:
            met.add(mk)
    return met


def _fiber_generator_masks(
    ctx: RotationContext, a: Vec
) -> tuple[list[int], list[int]] | None:
    """Tight masks over the polar's facet rows for the fiber's generators.

    Returns (vertex_masks, ray_masks), or None for an empty fiber.  A bounded
    polar is sliced by the fiber hyperplanes one at a time, tracking vertices
    and edge crossings; the unbounded case falls back to a double-description
    run.
    """
    facets = ctx.P_polar.facet_constraints
    eq_rows = _fiber_eq_rows(ctx, a)
    if ctx.P_polar.is_bounded:
        verts = list(ctx.P_polar.vertices)
        masks = list(_polar_vertex_rowmasks(ctx))
        for n, c in eq_rows:
            verts, masks = _slice_step(verts, masks, n, c)
            if not verts:
                return None
        return masks, []
    rows = list(facets) + list(ctx.P_polar.equalities)
    rows += [LinearConstraint(n, c, EQ) for n, c in eq_rows]
    fiber = Polyhedron.from_hrep(ctx.ambient_dim, rows)
    if fiber.is_empty:
        return None
    raw = fiber.raw_row_incidence()
    fverts, frays, flines = fiber.generators()
    if flines:
        raise GeometryError("fiber with lineality is outside the supported cases")
    nv = len(fverts)
    vmasks = [0] * nv
    rmasks = [0] * len(frays)
    for i in range(len(facets)):
        rm = raw[i]
        for j in range(nv):
            if (rm >> j) & 1:
                vmasks[j] |= 1 << i
        for k in range(len(frays)):
            if (rm >> (nv + k)) & 1:
                rmasks[k] |= 1 << i
    return vmasks, rmasks


def _polar_vertex_rowmasks(ctx: RotationContext) -> list[int]:
    """Per polar vertex, the bitmask of facet rows tight on it."""
    cached = ctx._cache.get("vrowmasks")
    if cached is not None:
        return cached
    inc = ctx.P_polar.incidence
    nv = len(ctx.P_polar.vertices)
    masks = [0] * nv
    for i, im in enumerate(inc):
        for j in range(nv):
            if (im >> j) & 1:
                masks[j] |= 1 << i
    ctx._cache["vrowmasks"] = masks
    return masks


def _slice_step(
    verts: list[Vec],
    masks: list[int],
    normal: Vec,
    rhs: Q,
) -> tuple[list[Vec], list[int]]:
    """One hyperplane slice of a polytope given with vertex tight-row masks."""
    vals = [normal.dot(v) - rhs for v in verts]
    if all(v > 0 for v in vals) or all(v < 0 for v in vals):
        return [], []
    nv = len(verts)
    out_v = [v for v, val in zip(verts, vals) if val == 0]
    out_m = [m for m, val in zip(masks, vals) if val == 0]
    for i in range(nv):
        if vals[i] >= 0:
            continue
        for j in range(nv):
            if vals[j] <= 0:
                continue
            common = masks[i] & masks[j]
            if any(
                k != i and k != j and common & masks[k] == common for k in range(nv)
            ):
                continue  # not an edge
            t = -vals[i] / (vals[j] - vals[i])
            out_v.append(verts[i] + (verts[j] - verts[i]) * t)
            # A valid row tight at an interior point of the edge is tight on
            # the whole edge, so the crossing inherits exactly the common rows.
            out_m.append(common)
    return out_v, out_m


def _fiber_met_lp(ctx: RotationContext, a: Vec) -> set[int]:
    # Every candidate face is a polytope with a known vertex list, so the
    # relint test runs in barycentric variables: a point of relint(F) on the
    # fiber is a strictly positive convex combination of the vertices of F
    # solving the fiber equations.  Maximizing the minimum weight keeps the
    # LPs small; the big inequality description of the polar never enters.
    pverts = ctx.P_polar.vertices
    eq_rows = _fiber_eq_rows(ctx, a)
    met: set[int] = set()
    for mk in sorted(ctx.d_masks):
        vs = [pverts[i] for i in ctx.polar_face_id(mk)[0]]
        k = len(vs)
        objective = [Q(0)] * k + [Q(1)]
        eq = [([u.dot(v) for v in vs] + [Q(0)], r) for u, r in eq_rows]
        eq.append(([Q(1)] * k + [Q(0)], Q(1)))
        le = [
            [Q(0)] * i + [Q(-1)] + [Q(0)] * (k - 1 - i) + [Q(1)] for i in range(k)
        ]
        res = solve_lp(
            objective, le=[(row, Q(0)) for row in le], eq=eq, maximize=True, nonneg=True
        )
        if res.status == INFEASIBLE:
            continue
        if res.status != OPTIMAL:
            raise GeometryError("weight maximization cannot be unbounded here")
        if res.value > 0:
            met.add(mk)
    return met


# --- the complex ---------------------------------------------------------------------


def _wall_key(normal: Vec, rhs: Q) -> tuple:
    ext = LinearConstraint(normal, rhs, EQ).canonical()
    return (tuple(ext.normal), ext.rhs)


def _image_table(ctx: RotationContext) -> dict[int, Polyhedron]:
    """pi-images of all deletion faces, as polytopes in L-chart coordinates."""
    cached = ctx._cache.get("images")
    if cached is not None:
        return cached
    d = len(ctx.L_basis)
    pverts = ctx.P_polar.vertices
    nv = ctx.polar_lattice.nverts
    pt_chart: dict[int, Vec] = {}

    def chart_pt(i: int) -> Vec:
        if i not in pt_chart:
            pt_chart[i] = ctx.chart.from_ambient(pi(ctx, pverts[i]))
        return pt_chart[i]

    table: dict[int, Polyhedron] = {}
    for mk in ctx.d_masks:
        pts = [chart_pt(i) for i in range(nv) if (mk >> i) & 1]
        table[mk] = Polyhedron.from_vrep(d, pts)
    ctx._cache["images"] = table
    return table


def _signature_walls(
    ctx: RotationContext, *, full_dim_only: bool = False
) -> list[tuple[Vec, Q]]:
    """Hyperplanes carrying every wall of the signature partition, in L-chart
    coordinates: facets of full-dimensional pi-images of deletion faces,
    affine hulls of lower-dimensional ones, and the facets of the face polar.

    full_dim_only drops the affine hulls.  On a full-dimensional region every
    maximal cell of the subdivision is full-dimensional and its facets lie in
    facets of full-dimensional images or of the polar itself; refinements cut
    by a lower-dimensional image are invisible from cell interiors and would
    only bloat the arrangement.
    """
    key = "walls_full" if full_dim_only else "walls"
    cached = ctx._cache.get(key)
    if cached is not None:
        return cached
    d = len(ctx.L_basis)
    walls: dict[tuple, tuple[Vec, Q]] = {}

    def add(normal: Vec, rhs: Q) -> None:
        if normal.is_zero():
            return
        walls.setdefault(_wall_key(normal, rhs), (normal, rhs))

    for img in _image_table(ctx).values():
        if img.dim == d:
            for c in img.facet_constraints:
                add(c.normal, c.rhs)
        elif not full_dim_only:
            for c in img.equalities:
                add(c.normal, c.rhs)
    for c in ctx.S_polar.in_chart(ctx.chart).facet_constraints:
        add(c.normal, c.rhs)
    out = list(walls.values())
    ctx._cache[key] = out
    return out


def rotation_complex(
    ctx: RotationContext,
    restrict_to: PolyhedralComplex | Polyhedron | None = None,
    *,
    method: str = "incidence",
) -> PolyhedralComplex:
    """The subdivision of the face polar (or a restriction of it) by signature.

    Cells are labeled with their fiber signatures.  With no restriction the
    face polar itself must be bounded; an unbounded polar (the blocking
    convention) needs restrict_to, typically a deletion complex of bounded
    faces.  Each restriction cell is subdivided in its own coordinate chart
    and the pieces are lifted back to ambient coordinates.
    """
    if restrict_to is None:
        if not ctx.S_polar.is_bounded:
            raise GeometryError("unbounded face polar: pass restrict_to")
        regions = [ctx.S_polar]
    elif isinstance(restrict_to, PolyhedralComplex):
        regions = list(restrict_to.maximal_cells)
    elif isinstance(restrict_to, Polyhedron):
        regions = [restrict_to]
    else:
        raise TypeError("restrict_to must be a complex, a polyhedron, or None")

    d = len(ctx.L_basis)
    table = _image_table(ctx)
    cells: list[Polyhedron] = []
    labels: list[FaceSetSignature] = []

    for region in regions:
        if region.rays or region.lines:
            raise GeometryError("restriction regions must be bounded")
        if not is_subset(region, ctx.S_polar):
            raise GeometryError("restriction region leaves the face polar")
        rc = region.in_chart(ctx.chart)
        # A face only counts toward a cell's label when its image is thick
        # along the region: images meeting the region transversally are met
        # on a measure-zero slice, so keeping them would record an accident
        # of the sample point rather than a property of the cell.
        rcv = rc.vertices
        allowed = frozenset(
            mk
            for mk, img in table.items()
            if all(c.normal.dot(v) == c.rhs for c in img.equalities for v in rcv)
        )

        def region_sig(pt: Vec) -> FaceSetSignature:
            met = _fiber_met(ctx, pt, method) & allowed
            return FaceSetSignature.of(ctx.polar_face_id(mk) for mk in met)

        if rc.dim == 0:
            point = ctx.chart.to_ambient(rcv[0])
            cells.append(Polyhedron.single_point(point))
            labels.append(region_sig(point))
            continue
        if rc.dim == d:
            sub = None
            work = rc
            local = _signature_walls(ctx, full_dim_only=True)
        else:
            sub = span_chart(rc.vertices)
            work = rc.in_chart(sub)
            local = []
            for n, c in _signature_walls(ctx):
                n2, c2 = sub.constraint_to_chart(n, c)
                local.append((n2, c2))
        cut = []
        wverts = work.vertices
        for n, c in local:
            if n.is_zero():
                continue
            vals = [n.dot(v) for v in wverts]
            if min(vals) < c < max(vals):
                cut.append((n, c))

        def lift(y: Vec) -> Vec:
            if sub is not None:
                y = sub.to_ambient(y)
            return ctx.chart.to_ambient(y)

        piece = cells_by_signature(work, cut, lambda y: region_sig(lift(y)))
        for cell, sig in zip(piece.maximal_cells, piece.labels):
            if sub is not None:
                cell = cell.lift_from_chart(sub)
            cells.append(cell.lift_from_chart(ctx.chart))
            labels.append(sig)

    return PolyhedralComplex(ctx.ambient_dim, cells, labels)


# --- cross-checks --------------------------------------------------------------------


def _sample_points(
    ctx: RotationContext,
    rng: SeededSampler,
    count: int,
    region: PolyhedralComplex | Polyhedron | Sequence[Polyhedron] | None,
) -> list[Vec]:
    if region is None:
        if not ctx.S_polar.is_bounded:
            raise GeometryError("unbounded face polar: pass a sampling region")
        pool = [ctx.S_polar]
    elif isinstance(region, PolyhedralComplex):
        pool = list(region.maximal_cells)
    elif isinstance(region, Polyhedron):
        pool = [region]
    else:
        pool = list(region)
    pts: list[Vec] = []
    for _ in range(count):
        rolled = rng.integer(0, 5)
        cell = rng.choice(pool)
        if rolled == 0 and pts:
            pts.append(pts[rng.integer(0, len(pts) - 1)])
        elif rolled == 1:
            pts.append(rng.choice(cell.vertices))
        else:
            pts.append(rng.point_in(cell))
    return pts


def verify_two_definitions(
    ctx: RotationContext,
    samples: int = 40,
    seed: int = DEFAULT_SEED,
    region: PolyhedralComplex | Polyhedron | Sequence[Polyhedron] | None = None,
    cross_check_lp: int = 10,
) -> bool:
    """Sample the polar and check that both face-set devices agree.

    Per sample: the conjugates of the rotation face set that survive in
    the deletion region must be exactly the fiber signature; the full
    rotation face set must be reconstructible from the surviving part by
    joins with faces of S_diamond; and the empty face must appear exactly
    at relative interior points.  Per pair: equal rotation face sets if
    and only if equal fiber signatures.  The LP fiber route is replayed
    against the incidence route on the first cross_check_lp samples.
    """
    rng = SeededSampler(seed)
    pts = _sample_points(ctx, rng, samples, region)
    pivot_faces = [
        mm
        for mm in ctx.polar_lattice.masks
        if mm and mm & ctx.pivot_mask == mm
    ] + [0]

    fr_sigs: list[FaceSetSignature] = []
    fib_sigs: list[FaceSetSignature] = []
    for k, a in enumerate(pts):
        fr = frak_F(ctx, a)
        fib = fiber_signature(ctx, a, method="incidence")
        if k < cross_check_lp:
            if fiber_signature(ctx, a, method="lp") != fib:
                return False
        conj = {fid: ctx.conjugate_mask(fid) for fid in fr}
        surviving = {mk for mk in conj.values() if mk in ctx.d_masks}
        if FaceSetSignature.of(ctx.polar_face_id(mk) for mk in surviving) != fib:
            return False
        all_masks = set(conj.values())
        joined = {
            ctx.polar_lattice.join(g, h) for g in surviving for h in pivot_faces
        }
        if joined != all_masks:
            return False
        if (EMPTY_FACE in fr) != ctx.S_polar.relint_contains(a):
            return False
        fr_sigs.append(fr)
        fib_sigs.append(fib)

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if (fr_sigs[i] == fr_sigs[j]) != (fib_sigs[i] == fib_sigs[j]):
                return False
    return True


def z_transport(ctx: RotationContext, z2: Sequence[Q]) -> Callable[[Vec], Vec]:
    """The projective change of reference point inside the face polar.

    Returns the map carrying the polar taken at ctx.z onto the polar taken
    at z2, preserving which generators of P are tight.
    """
    shift = ctx.z - Vec(z2)
    s = ctx.sign

    def T(a: Vec) -> Vec:
        den = 1 + s * a.dot(shift)
        if den <= 0:
            raise DegenerateMapError("reference change degenerates on this point")
        return a / den

    return T


def verify_z_independence(
    ctx: RotationContext,
    z2: Sequence[Q],
    samples: int = 30,
    seed: int = DEFAULT_SEED,
    region: PolyhedralComplex | Polyhedron | Sequence[Polyhedron] | None = None,
    compare_complexes: bool = False,
) -> bool:
    """Check that moving the reference point only reparametrizes the polar.

    Builds a second context at z2, transports samples through the
    projective change of reference, and compares both kinds of signature.
    The polar-of-P side must agree face-for-face since it does not depend
    on z at all.  With compare_complexes=True the full rotation complexes
    are built and matched cell-for-cell through the transport map.
    """
    z2v = Vec(z2)
    ctx2 = make_context(ctx.P, ctx.face_selector, ctx.convention, z=z2v)
    if ctx2.pivot_mask != ctx.pivot_mask or ctx2.d_masks != ctx.d_masks:
        return False
    T = z_transport(ctx, z2v)
    Tback = z_transport(ctx2, ctx.z)

    rng = SeededSampler(seed)
    for a in _sample_points(ctx, rng, samples, region):
        b = T(a)
        if not ctx2.S_polar.contains(b) or Tback(b) != a:
            return False
        if frak_F(ctx, a) != frak_F(ctx2, b):
            return False
        if fiber_signature(ctx, a, "incidence") != fiber_signature(ctx2, b, "incidence"):
            return False

    if compare_complexes:
        cx1 = rotation_complex(ctx)
        cx2 = rotation_complex(ctx2)
        mapped_cells = [
            Polyhedron.from_vrep(ctx.ambient_dim, [T(v) for v in c.vertices])
            for c in cx1.maximal_cells
        ]
        mapped = PolyhedralComplex(ctx.ambient_dim, mapped_cells, cx1.labels)
        if not mapped.same_complex(cx2):
            return False
        from .complexes import cell_key

        lab1 = {cell_key(c): l for c, l in zip(mapped.maximal_cells, mapped.labels)}
        lab2 = {cell_key(c): l for c, l in zip(cx2.maximal_cells, cx2.labels)}
        if lab1 != lab2:
            return False
    return True
