"""Polyhedra with exact dual representations.

A Polyhedron carries whichever of the two descriptions it was built from
and completes the other lazily through the double description kernel.  Both
directions also produce facet/generator incidence as bitmasks, and nearly
everything else here (faces, lattices, polars, relative interiors) is pure
bookkeeping on those masks.

Vertices of a non-pointed polyhedron are representatives of its minimal
faces, one per face, normalized so the coordinates in the pivot columns of
the lineality space vanish.  That convention makes set equality a plain
comparison of generator sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Iterable, Sequence

from ._chart import AffineChart
from ._dd import hrep_from_vrep, vrep_from_hrep
from .errors import (
    ConventionError,
    DimensionMismatch,
    EmptyPolyhedronError,
    FaceLimitExceeded,
    GeometryError,
    NotAFaceError,
)
from .linalg import Mat, Vec, affine_rank, kernel_basis, primitive_int, rat, rref, solve

LE = "le"
EQ = "eq"


def max_faces_cap() -> int:
    return int(os.environ.get("ROTAPLEX_MAX_FACES", "200000"))


@dataclass(frozen=True)
class LinearConstraint:
    """normal . x <= rhs (kind 'le') or normal . x == rhs (kind 'eq')."""

    normal: Vec
    rhs: Q
    kind: str = LE

    def __post_init__(self):
        object.__setattr__(self, "normal", Vec(self.normal))
        object.__setattr__(self, "rhs", rat(self.rhs))
        if self.kind not in (LE, EQ):
            raise GeometryError(f"unknown constraint kind {self.kind!r}")

    @staticmethod
    def le(normal: Sequence[Q], rhs) -> "LinearConstraint":
        return LinearConstraint(Vec(normal), rat(rhs), LE)

    @staticmethod
    def ge(normal: Sequence[Q], rhs) -> "LinearConstraint":
        return LinearConstraint(-Vec(normal), -rat(rhs), LE)

    @staticmethod
    def eq(normal: Sequence[Q], rhs) -> "LinearConstraint":
        return LinearConstraint(Vec(normal), rat(rhs), EQ)

    def value(self, x: Sequence[Q]) -> Q:
        return self.normal.dot(x if isinstance(x, Vec) else Vec(x))

    def holds(self, x: Sequence[Q]) -> bool:
        v = self.value(x)
        return v == self.rhs if self.kind == EQ else v <= self.rhs

    def is_tight(self, x: Sequence[Q]) -> bool:
        return self.value(x) == self.rhs

    def canonical(self) -> "LinearConstraint":
        """Scale to a primitive integer normal; equalities also fix a sign."""
        ext = primitive_int(tuple(self.normal) + (self.rhs,))
        if self.kind == EQ:
            lead = next((x for x in ext if x != 0), 0)
            if lead < 0:
                ext = tuple(-x for x in ext)
        else:
            # only positive scalings preserve a 'le' constraint
            scale = None
            for orig, new in zip(tuple(self.normal) + (self.rhs,), ext):
                if orig != 0:
                    scale = rat(new) / orig
                    break
            if scale is not None and scale < 0:
                ext = tuple(-x for x in ext)
        return LinearConstraint(Vec(ext[:-1]), rat(ext[-1]), self.kind)


def _dedupe(items: Iterable) -> list:
    return list(dict.fromkeys(items))


class Polyhedron:
    """Intersection of halfspaces == convex hull of generators, exactly."""

    __slots__ = (
        "n",
        "_raw_ineqs",
        "_raw_eqs",
        "_verts",
        "_rays",
        "_lines",
        "_canonical_v",
        "_facets",
        "_aff_eqs",
        "_incidence",
        "_raw_incidence",
        "_dim",
        "_empty",
        "_line_pivots",
    )

    def __init__(self, n: int):
        self.n = n
        self._raw_ineqs = None
        self._raw_eqs = None
        self._verts = None
        self._rays = None
        self._lines = None
        self._canonical_v = False
        self._facets = None
        self._aff_eqs = None
        self._incidence = None
        self._raw_incidence = None
        self._dim = None
        self._empty = None
        self._line_pivots = None

    # --- construction -----------------------------------------------------

    @classmethod
    def from_hrep(cls, n: int, constraints: Iterable[LinearConstraint]) -> "Polyhedron":
        p = cls(n)
        ineqs, eqs = [], []
        for c in constraints:
            if len(c.normal) != n:
                raise DimensionMismatch(f"constraint in R^{len(c.normal)}, polyhedron in R^{n}")
            (eqs if c.kind == EQ else ineqs).append(c)
        p._raw_ineqs = tuple(ineqs)
        p._raw_eqs = tuple(eqs)
        return p

    @classmethod
    def from_vrep(
        cls,
        n: int,
        vertices: Iterable[Sequence[Q]],
        rays: Iterable[Sequence[Q]] = (),
        lines: Iterable[Sequence[Q]] = (),
        *,
        assume_minimal: bool = False,
    ) -> "Polyhedron":
        p = cls(n)
        vs = _dedupe(Vec(v) for v in vertices)
        rs = _dedupe(Vec(primitive_int(r)) for r in rays)
        ls = [Vec(l) for l in lines]
        if not vs:
            raise EmptyPolyhedronError("a V-representation needs at least one point")
        if any(len(g) != n for g in vs + rs + ls):
            raise DimensionMismatch("generator dimension mismatch")
        if any(r.is_zero() for r in rs):
            raise GeometryError("zero vector is not a ray")
        lrows, _ = rref(ls, n)
        p._verts = tuple(vs)
        p._rays = tuple(rs)
        p._lines = tuple(lrows)
        p._canonical_v = assume_minimal
        p._empty = False
        return p

    @classmethod
    def empty(cls, n: int) -> "Polyhedron":
        p = cls(n)
        p._empty = True
        p._verts, p._rays, p._lines = (), (), ()
        p._canonical_v = True
        p._facets, p._aff_eqs, p._incidence, p._raw_incidence = (), (), (), ()
        p._dim = -1
        return p

    @classmethod
    def single_point(cls, v: Sequence[Q]) -> "Polyhedron":
        return cls.from_vrep(len(v), [v], assume_minimal=True)

    def __repr__(self) -> str:
        bits = [f"R^{self.n}"]
        if self._dim is not None:
            bits.append(f"dim={self._dim}")
        if self._verts is not None:
            bits.append(f"verts={len(self._verts)} rays={len(self._rays)} lines={len(self._lines)}")
        if self._raw_ineqs is not None:
            bits.append(f"rows={len(self._raw_ineqs)}+{len(self._raw_eqs)}eq")
        return f"Polyhedron({', '.join(bits)})"

    # --- completion machinery ----------------------------------------------

    def _complete_vrep(self) -> None:
        if self._verts is not None:
            return
        try:
            verts, rays, lines, inc = vrep_from_hrep(
                [(c.normal, c.rhs) for c in self._raw_ineqs],
                [(c.normal, c.rhs) for c in self._raw_eqs],
                self.n,
            )
        except EmptyPolyhedronError:
            self._empty = True
            self._verts, self._rays, self._lines = (), (), ()
            self._canonical_v = True
            self._facets, self._aff_eqs, self._incidence, self._raw_incidence = (), (), (), ()
            self._dim = -1
            return
        self._verts = tuple(verts)
        self._rays = tuple(rays)
        self._lines = tuple(Vec(l) for l in lines)
        self._canonical_v = True
        self._empty = False
        self._raw_incidence = tuple(inc)
        self._derive_facets_from_raw()

    def _derive_facets_from_raw(self) -> None:
        nv, nr = len(self._verts), len(self._rays)
        full = (1 << (nv + nr)) - 1
        vert_bits = (1 << nv) - 1
        d = self.dim
        eq_rows = [tuple(c.normal) + (c.rhs,) for c in self._raw_eqs]
        facets, inc = [], []
        seen = set()
        for c, m in zip(self._raw_ineqs, self._raw_incidence):
            if m == full:
                eq_rows.append(tuple(c.normal) + (c.rhs,))
                continue
            if m & vert_bits == 0 or m in seen:
                continue
            if self._mask_dim(m) == d - 1:
                facets.append(c.canonical())
                inc.append(m)
                seen.add(m)
        self._facets = tuple(facets)
        self._incidence = tuple(inc)
        rows, _ = rref(eq_rows, self.n + 1)
        self._aff_eqs = tuple(
            LinearConstraint(Vec(r[:-1]), r[-1], EQ).canonical() for r in rows
        )

    def _complete_hrep(self) -> None:
        if self._facets is not None:
            return
        if self._verts is None:
            self._complete_vrep()
            return
        facets, eqs, inc = hrep_from_vrep(self._verts, self._rays, self._lines, self.n)
        self._facets = tuple(LinearConstraint(a, b, LE).canonical() for a, b in facets)
        self._incidence = tuple(inc)
        rows, _ = rref([tuple(a) + (b,) for a, b in eqs], self.n + 1)
        self._aff_eqs = tuple(
            LinearConstraint(Vec(r[:-1]), r[-1], EQ).canonical() for r in rows
        )

    def _canonicalize(self) -> None:
        if self._canonical_v:
            return
        if self._verts is None:
            self._complete_vrep()
            return
        self._complete_hrep()
        verts, rays, lines, inc = vrep_from_hrep(
            [(c.normal, c.rhs) for c in self._facets],
            [(c.normal, c.rhs) for c in self._aff_eqs],
            self.n,
        )
        self._verts = tuple(verts)
        self._rays = tuple(rays)
        self._lines = tuple(Vec(l) for l in lines)
        self._incidence = tuple(inc)
        self._raw_incidence = tuple(inc)
        self._canonical_v = True

    def _mask_dim(self, mask: int) -> int:
        nv = len(self._verts)
        vs = [v for i, v in enumerate(self._verts) if (mask >> i) & 1]
        rs = [r for i, r in enumerate(self._rays) if (mask >> (nv + i)) & 1]
        return affine_rank(vs, rs + list(self._lines))

    # --- basic queries ------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        if self._empty is None:
            self._complete_vrep()
        return self._empty

    @property
    def dim(self) -> int:
        if self._dim is None:
            if self.is_empty:
                self._dim = -1
            else:
                if self._verts is None:
                    self._complete_vrep()
                self._dim = affine_rank(self._verts, list(self._rays) + list(self._lines))
        return self._dim

    @property
    def is_full_dim(self) -> bool:
        return self.dim == self.n

    @property
    def is_bounded(self) -> bool:
        if self._verts is None:
            self._complete_vrep()
        return not self._rays and not self._lines

    @property
    def is_pointed(self) -> bool:
        if self._verts is None:
            self._complete_vrep()
        return not self._lines

    @property
    def vertices(self) -> tuple[Vec, ...]:
        self._canonicalize()
        return self._verts

    @property
    def rays(self) -> tuple[Vec, ...]:
        self._canonicalize()
        return self._rays

    @property
    def lines(self) -> tuple[Vec, ...]:
        self._canonicalize()
        return self._lines

    def generators(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...], tuple[Vec, ...]]:
        """Current (vertices, rays, lines) without forcing canonicalization."""
        if self._verts is None:
            self._complete_vrep()
        return self._verts, self._rays, self._lines

    @property
    def facet_constraints(self) -> tuple[LinearConstraint, ...]:
        if self._facets is None:
            self._complete_hrep()
            if self._facets is None:  # hrep was raw; derive via the vrep
                self._complete_vrep()
        return self._facets

    @property
    def equalities(self) -> tuple[LinearConstraint, ...]:
        self.facet_constraints
        return self._aff_eqs

    @property
    def incidence(self) -> tuple[int, ...]:
        """Facet-to-generator bitmasks aligned with facet_constraints."""
        self.facet_constraints
        return self._incidence

    def raw_row_incidence(self) -> tuple[int, ...]:
        """Tight-generator bitmask per raw inequality row, in input order."""
        if self._raw_ineqs is None:
            raise GeometryError("polyhedron was not built from an inequality list")
        if self._raw_incidence is None:
            self._complete_vrep()
        return self._raw_incidence

    def hrep_constraints(self) -> tuple[LinearConstraint, ...]:
        """Some valid H-description: the raw one if given, else the minimal one."""
        if self._raw_ineqs is not None:
            return self._raw_ineqs + self._raw_eqs
        return self.facet_constraints + self.equalities

    def contains(self, x: Sequence[Q]) -> bool:
        if len(x) != self.n:
            raise DimensionMismatch(f"point in R^{len(x)}, polyhedron in R^{self.n}")
        return all(c.holds(x) for c in self.hrep_constraints())

    def relint_contains(self, x: Sequence[Q]) -> bool:
        if self.is_empty:
            return False
        return all(c.holds(x) for c in self.equalities) and all(
            c.value(x) < c.rhs for c in self.facet_constraints
        )

    def relint_point(self) -> Vec:
        """Average of the vertex representatives plus the sum of the rays."""
        if self.is_empty:
            raise EmptyPolyhedronError("no relative interior point")
        verts, rays, _ = self.generators()
        p = Vec.zero(self.n)
        for v in verts:
            p = p + v
        p = p / len(verts)
        for r in rays:
            p = p + r
        return p

    # --- set comparisons -----------------------------------------------------

    def _lines_pivots(self) -> list[int]:
        if self._line_pivots is None:
            _, piv = rref(self._lines, self.n)
            self._line_pivots = piv
        return self._line_pivots

    def _mod_lines(self, v: Vec) -> Vec:
        out = v
        for line, p in zip(self._lines, self._lines_pivots()):
            if out[p] != 0:
                out = out - line * out[p]
        return out

    def canonical_generators(self):
        """Vertex/ray/line sets normalized for set-equality comparison."""
        self._canonicalize()
        verts = frozenset(self._mod_lines(v) for v in self._verts)
        rays = frozenset(Vec(primitive_int(self._mod_lines(r))) for r in self._rays)
        return verts, rays, self._lines

    def same_set(self, other: "Polyhedron") -> bool:
        if self.n != other.n:
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.canonical_generators() == other.canonical_generators()

    # --- transformations -------------------------------------------------------

    def translate(self, t: Sequence[Q]) -> "Polyhedron":
        tt = Vec(t)
        p = Polyhedron(self.n)
        if self._raw_ineqs is not None:
            p._raw_ineqs = tuple(
                LinearConstraint(c.normal, c.rhs + c.normal.dot(tt), c.kind)
                for c in self._raw_ineqs
            )
            p._raw_eqs = tuple(
                LinearConstraint(c.normal, c.rhs + c.normal.dot(tt), c.kind)
                for c in self._raw_eqs
            )
        if self._verts is not None:
            p._verts = tuple(v + tt for v in self._verts)
            p._rays, p._lines = self._rays, self._lines
            p._canonical_v = self._canonical_v
            p._empty = self._empty
        if self._facets is not None:
            p._facets = tuple(
                LinearConstraint(c.normal, c.rhs + c.normal.dot(tt), c.kind)
                for c in self._facets
            )
            p._aff_eqs = tuple(
                LinearConstraint(c.normal, c.rhs + c.normal.dot(tt), c.kind)
                for c in self._aff_eqs
            )
            p._incidence = self._incidence
        p._raw_incidence = self._raw_incidence
        p._dim = self._dim
        return p

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if self.n != other.n:
            raise DimensionMismatch("ambient dimensions differ")
        return Polyhedron.from_hrep(
            self.n, self.hrep_constraints() + other.hrep_constraints()
        )

    def in_chart(self, chart: AffineChart) -> "Polyhedron":
        """Rewrite in chart coordinates; the chart must contain this set."""
        p = Polyhedron(chart.dim)
        if self._raw_ineqs is not None:
            p._raw_ineqs = tuple(
                LinearConstraint(*chart.constraint_to_chart(c.normal, c.rhs), LE)
                for c in self._raw_ineqs
            )
            eqs = []
            for c in self._raw_eqs:
                a, b = chart.constraint_to_chart(c.normal, c.rhs)
                if a.is_zero():
                    if b != 0:
                        raise GeometryError("chart misses the polyhedron's affine hull")
                    continue
                eqs.append(LinearConstraint(a, b, EQ))
            p._raw_eqs = tuple(eqs)
        if self._verts is not None and not self._empty:
            p._verts = tuple(chart.from_ambient(v) for v in self._verts)
            p._rays = tuple(
                Vec(primitive_int(chart.direction_from_ambient(r))) for r in self._rays
            )
            lrows, _ = rref([chart.direction_from_ambient(l) for l in self._lines], chart.dim)
            p._lines = tuple(lrows)
            p._canonical_v = self._canonical_v
            p._empty = False
        elif self._empty:
            return Polyhedron.empty(chart.dim)
        if self._facets is not None:
            p._facets = tuple(
                LinearConstraint(*chart.constraint_to_chart(c.normal, c.rhs), LE).canonical()
                for c in self._facets
            )
            eqs = []
            for c in self._aff_eqs:
                a, b = chart.constraint_to_chart(c.normal, c.rhs)
                if not a.is_zero():
                    eqs.append(tuple(a) + (b,))
                elif b != 0:
                    raise GeometryError("chart misses the polyhedron's affine hull")
            rows, _ = rref(eqs, chart.dim + 1)
            p._aff_eqs = tuple(
                LinearConstraint(Vec(r[:-1]), r[-1], EQ).canonical() for r in rows
            )
            p._incidence = self._incidence
        p._raw_incidence = self._raw_incidence
        p._dim = self._dim
        return p

    def lift_from_chart(self, chart: AffineChart) -> "Polyhedron":
        """Embed a polyhedron living in chart coordinates back into the ambient."""
        if self.n != chart.dim:
            raise DimensionMismatch("polyhedron does not live in this chart")
        p = Polyhedron(chart.ambient_dim)
        gram = Mat([[bi.dot(bj) for bj in chart.basis] for bi in chart.basis])

        def lift_row(c: LinearConstraint) -> LinearConstraint:
            y = solve(gram, c.normal)
            assert y is not None
            a = Vec.zero(chart.ambient_dim)
            for coef, b in zip(y, chart.basis):
                a = a + b * coef
            return LinearConstraint(a, c.rhs + a.dot(chart.origin), c.kind)

        pin = [
            LinearConstraint(u, u.dot(chart.origin), EQ)
            for u in kernel_basis(Mat(chart.basis))
        ] if chart.basis else [
            LinearConstraint(Vec.unit(chart.ambient_dim, i), chart.origin[i], EQ)
            for i in range(chart.ambient_dim)
        ]
        if self._raw_ineqs is not None:
            p._raw_ineqs = tuple(lift_row(c) for c in self._raw_ineqs)
            p._raw_eqs = tuple(lift_row(c) for c in self._raw_eqs) + tuple(pin)
        if self._verts is not None and not self._empty:
            p._verts = tuple(chart.to_ambient(v) for v in self._verts)
            dirs = Mat(chart.basis).transpose()
            p._rays = tuple(Vec(primitive_int(dirs.matvec(r))) for r in self._rays)
            lrows, _ = rref([dirs.matvec(l) for l in self._lines], chart.ambient_dim)
            p._lines = tuple(lrows)
            p._canonical_v = self._canonical_v
            p._empty = False
        elif self._empty:
            return Polyhedron.empty(chart.ambient_dim)
        if self._facets is not None:
            p._facets = tuple(lift_row(c).canonical() for c in self._facets)
            rows, _ = rref(
                [tuple(lift_row(c).normal) + (lift_row(c).rhs,) for c in self._aff_eqs]
                + [tuple(c.normal) + (c.rhs,) for c in pin],
                chart.ambient_dim + 1,
            )
            p._aff_eqs = tuple(
                LinearConstraint(Vec(r[:-1]), r[-1], EQ).canonical() for r in rows
            )
            p._incidence = self._incidence
        p._raw_incidence = self._raw_incidence
        p._dim = self._dim
        return p

    # --- faces ---------------------------------------------------------------

    def face(self, c: LinearConstraint) -> "Polyhedron":
        """The face where the valid inequality c is tight.

        Raises NotAFaceError when c is violated somewhere on the polyhedron.
        An equality-kind selector requires c to be tight on the whole set.
        """
        if self.is_empty:
            raise NotAFaceError("empty polyhedron has no faces to select")
        verts, rays, lines = self.generators()
        for l in lines:
            if c.normal.dot(l) != 0:
                raise NotAFaceError("selector is unbounded along a line")
        for r in rays:
            if c.normal.dot(r) > 0:
                raise NotAFaceError("selector is unbounded along a ray")
        vals = [c.value(v) for v in verts]
        if any(v > c.rhs for v in vals):
            raise NotAFaceError("selector inequality does not hold on the polyhedron")
        if c.kind == EQ and (any(v != c.rhs for v in vals) or any(c.normal.dot(r) != 0 for r in rays)):
            raise NotAFaceError("equality selector is not tight everywhere")
        fverts = [v for v, val in zip(verts, vals) if val == c.rhs]
        if not fverts:
            return Polyhedron.empty(self.n)
        frays = [r for r in rays if c.normal.dot(r) == 0]
        f = Polyhedron.from_vrep(
            self.n, fverts, frays, lines, assume_minimal=self._canonical_v
        )
        return f

    def _mask_face(self, mask: int) -> "Polyhedron":
        if mask == 0:
            return Polyhedron.empty(self.n)
        nv = len(self._verts)
        vs = [v for i, v in enumerate(self._verts) if (mask >> i) & 1]
        rs = [r for i, r in enumerate(self._rays) if (mask >> (nv + i)) & 1]
        return Polyhedron.from_vrep(
            self.n, vs, rs, self._lines, assume_minimal=self._canonical_v
        )

    def facets(self) -> list["Polyhedron"]:
        self._canonicalize()
        self.facet_constraints
        return [self._mask_face(m) for m in self._incidence]

    def face_lattice(self) -> "FaceLattice":
        return FaceLattice(self)

    # --- polars -----------------------------------------------------------------

    def polar(self, center: Sequence[Q] | None = None, sign: int = 1) -> "Polyhedron":
        """{a : sign * a.(x - z) <= 1 for all x here}, z = center.

        With sign=-1 this is the mirror body {a : a.(x - z) >= -1}.  Rows of
        the result are ordered vertices-then-rays of this polyhedron, which
        is what conjugate-face bookkeeping relies on.
        """
        if self.is_empty:
            raise EmptyPolyhedronError("polar of the empty set")
        z = Vec(center) if center is not None else self.relint_point()
        s = rat(sign)
        if s not in (Q(1), Q(-1)):
            raise ConventionError("sign must be +1 or -1")
        verts = self.vertices
        rays = self.rays
        rows = [LinearConstraint((v - z) * s, Q(1), LE) for v in verts]
        rows += [LinearConstraint(r * s, Q(0), LE) for r in rays]
        rows += [LinearConstraint(l, Q(0), EQ) for l in self.lines]
        out = Polyhedron.from_hrep(self.n, rows)
        if self.is_full_dim and self.is_bounded:
            # interior center: both representations of the polar are free
            facets = self.facet_constraints
            dens = [c.rhs - c.value(z) for c in facets]
            if all(d > 0 for d in dens):
                out._verts = tuple((c.normal * s) / d for c, d in zip(facets, dens))
                out._rays, out._lines = (), ()
                out._canonical_v = True
                out._empty = False
                inc = []
                for j in range(len(verts)):
                    m = 0
                    for i, im in enumerate(self._incidence):
                        if (im >> j) & 1:
                            m |= 1 << i
                    inc.append(m)
                out._raw_incidence = tuple(inc)
                out._facets = tuple(r.canonical() for r in rows)
                out._aff_eqs = ()
                out._incidence = tuple(inc)
        return out

    def blocking_polar(self) -> "Polyhedron":
        """{a : a.x >= 1 on the polyhedron}, for up-monotone sets in R^n_+.

        Requires every vertex nonnegative and the recession cone equal to
        the full nonnegative orthant; anything else is a convention error.
        """
        verts, rays, lines = self.generators()
        if self.is_empty or lines:
            raise ConventionError("blocking polar needs a nonempty pointed set")
        if any(x < 0 for v in verts for x in v):
            raise ConventionError("blocking polar needs a subset of the nonnegative orthant")
        units = {Vec.unit(self.n, i) for i in range(self.n)}
        if set(self.rays) != units:
            raise ConventionError("blocking polar needs recession cone equal to the orthant")
        rows = [LinearConstraint(-v, Q(-1), LE) for v in self.vertices]
        rows += [LinearConstraint(-Vec.unit(self.n, i), Q(0), LE) for i in range(self.n)]
        return Polyhedron.from_hrep(self.n, rows)


class FaceLattice:
    """All faces of a polyhedron as generator bitmasks, empty face included.

    Faces are exactly the intersections of facet generator sets, so the
    lattice is the meet-closure of the facet masks under bitwise and.  A
    mask with no vertex bit describes the empty face and is normalized to 0.
    """

    def __init__(self, poly: Polyhedron):
        poly._canonicalize()
        poly.facet_constraints
        self.poly = poly
        self.nverts = len(poly._verts)
        self.nrays = len(poly._rays)
        self.top = (1 << (self.nverts + self.nrays)) - 1
        self._vert_bits = (1 << self.nverts) - 1
        self._dims: dict[int, int] = {0: -1}
        if poly.is_empty:
            self.masks = [0]
            return
        cap = max_faces_cap()
        facet_masks = list(poly._incidence)
        seen = {self.top, 0}
        frontier = [self.top]
        while frontier:
            nxt = []
            for m in frontier:
                for fm in facet_masks:
                    c = m & fm
                    if c & self._vert_bits == 0:
                        c = 0
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                        if len(seen) > cap:
                            raise FaceLimitExceeded(
                                f"face lattice exceeds {cap} faces; raise ROTAPLEX_MAX_FACES to override"
                            )
            frontier = nxt
        self.masks = sorted(seen)

    def __len__(self) -> int:
        return len(self.masks)

    def dim_of(self, mask: int) -> int:
        if mask not in self._dims:
            self._dims[mask] = self.poly._mask_dim(mask)
        return self._dims[mask]

    def faces_of_dim(self, d: int) -> list[int]:
        return [m for m in self.masks if self.dim_of(m) == d]

    def f_vector(self, include_empty: bool = False, include_top: bool = True) -> tuple[int, ...]:
        """Face counts by dimension, from dim 0 (or -1) up to dim P."""
        lo = -1 if include_empty else 0
        hi = self.poly.dim
        counts = {d: 0 for d in range(lo, hi + 1)}
        for m in self.masks:
            if m == 0 and not include_empty:
                continue
            if m == self.top and not include_top:
                continue
            d = self.dim_of(m)
            if d in counts:
                counts[d] += 1
        return tuple(counts[d] for d in range(lo, hi + 1))

    def face_poly(self, mask: int) -> Polyhedron:
        return self.poly._mask_face(mask)

    def bounded_masks(self) -> list[int]:
        """Faces whose recession cone is trivial (no ray bits, no lines)."""
        if self.poly._lines:
            return [0]  # every nonempty face contains the lineality space
        return [m for m in self.masks if m >> self.nverts == 0]

    def leq(self, a: int, b: int) -> bool:
        return a & b == a

    def join(self, a: int, b: int) -> int:
        """Smallest face containing both masks (the whole set if none smaller)."""
        u = a | b
        if u == 0:
            return 0
        m = self.top
        for fm in self.poly._incidence:
            if u & fm == u:
                m &= fm
        return m


def polar_cone_slice(p: Polyhedron, normal: Sequence[Q], rhs: Q = Q(1)) -> Polyhedron:
    """Slice of the cone of valid inequalities of p by a chosen hyperplane.

    The cone lives in R^{1+n} and consists of the pairs (t, a) with
    t + a.x <= 0 on all of p; the slice pins normal.(t, a) = rhs.  Every
    bounded realization of the polar body arises this way, one per slice.
    """
    if p.is_empty:
        raise EmptyPolyhedronError("no valid-inequality cone for the empty set")
    verts, rays, lines = p.generators()
    rows = [LinearConstraint(Vec((Q(1),) + tuple(v)), Q(0), LE) for v in verts]
    rows += [LinearConstraint(Vec((Q(0),) + tuple(r)), Q(0), LE) for r in rays]
    rows += [LinearConstraint(Vec((Q(0),) + tuple(l)), Q(0), EQ) for l in lines]
    rows += [LinearConstraint(Vec(normal), rat(rhs), EQ)]
    return Polyhedron.from_hrep(p.n + 1, rows)
