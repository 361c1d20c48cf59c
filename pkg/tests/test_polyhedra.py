"""Double description and the Polyhedron class on hand-checkable bodies."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotaplex._chart import AffineChart, span_chart
from rotaplex._dd import cone_generators
from rotaplex.errors import (
    ConventionError,
    EmptyPolyhedronError,
    GeometryError,
    NotAFaceError,
)
from rotaplex.linalg import Vec
from rotaplex.polyhedra import EQ, LE, FaceLattice, LinearConstraint, Polyhedron


def cube(n: int, lo=0, hi=1) -> Polyhedron:
    rows = []
    for i in range(n):
        rows.append(LinearConstraint.le(Vec.unit(n, i), hi))
        rows.append(LinearConstraint.ge(Vec.unit(n, i), lo))
    return Polyhedron.from_hrep(n, rows)


# --- cone kernel ----------------------------------------------------------


def test_cone_orthant():
    rows = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    lines, rays, masks = cone_generators(rows, 3)
    assert lines == []
    assert sorted(rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    # each ray is tight on exactly the two rows it does not span
    assert sorted(m.bit_count() for m in masks) == [2, 2, 2]


def test_cone_halfspace_has_lineality():
    lines, rays, masks = cone_generators([(1, 0)], 2)
    assert lines == [(0, 1)]
    assert rays == [(1, 0)]


def test_cone_trivial():
    lines, rays, _ = cone_generators([(1,), (-1,)], 1)
    assert lines == [] and rays == []


# --- conversions ----------------------------------------------------------


def test_cube_vertices():
    c = cube(3)
    assert len(c.vertices) == 8
    assert c.is_bounded and c.is_full_dim
    assert set(c.vertices) == {
        Vec([i, j, k]) for i in (0, 1) for j in (0, 1) for k in (0, 1)
    }


def test_simplex_facets_from_vrep():
    s = Polyhedron.from_vrep(
        3,
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
        assume_minimal=True,
    )
    assert len(s.facet_constraints) == 4
    assert s.equalities == ()
    assert s.dim == 3
    # each facet contains exactly three of the four vertices
    assert all(m.bit_count() == 3 for m in s.incidence)


def test_vrep_canonicalization_drops_interior_points():
    p = Polyhedron.from_vrep(2, [(0, 0), (2, 0), (0, 2), ("1/2", "1/2")])
    assert set(p.vertices) == {Vec([0, 0]), Vec([2, 0]), Vec([0, 2])}


def test_orthant_generators():
    p = Polyhedron.from_hrep(
        2, [LinearConstraint.ge(Vec.unit(2, i), 0) for i in range(2)]
    )
    assert p.vertices == (Vec([0, 0]),)
    assert set(p.rays) == {Vec([1, 0]), Vec([0, 1])}
    assert not p.is_bounded


def test_strip_has_line_and_normalized_pseudO_vertices():
    p = Polyhedron.from_hrep(
        2,
        [
            LinearConstraint.le(Vec([1, 0]), 1),
            LinearConstraint.ge(Vec([1, 0]), 0),
        ],
    )
    assert p.lines == (Vec([0, 1]),)
    assert set(p.vertices) == {Vec([0, 0]), Vec([1, 0])}
    assert not p.is_pointed
    assert p.dim == 2


def test_empty_detection():
    p = Polyhedron.from_hrep(
        1,
        [LinearConstraint.le(Vec([1]), 0), LinearConstraint.ge(Vec([1]), 1)],
    )
    assert p.is_empty
    assert p.dim == -1
    assert not p.contains([0])


def test_lower_dimensional_equalities():
    tri = Polyhedron.from_vrep(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert tri.dim == 2
    assert len(tri.equalities) == 1
    e = tri.equalities[0]
    assert e.normal == Vec([1, 1, 1]) and e.rhs == 1
    assert len(tri.facet_constraints) == 3


def test_contains_and_relint():
    c = cube(2)
    assert c.contains(["1/2", "1/2"]) and c.contains([0, 1])
    assert c.relint_contains(["1/2", "1/2"])
    assert not c.relint_contains([0, "1/2"])
    assert c.relint_contains(c.relint_point())


def test_relint_point_of_unbounded():
    p = Polyhedron.from_hrep(
        2, [LinearConstraint.ge(Vec.unit(2, i), 0) for i in range(2)]
    )
    z = p.relint_point()
    assert z[0] > 0 and z[1] > 0


# --- faces ----------------------------------------------------------------


def test_face_selection():
    c = cube(3)
    top = c.face(LinearConstraint.le(Vec([0, 0, 1]), 1))
    assert top.dim == 2 and len(top.vertices) == 4
    vert = c.face(LinearConstraint.le(Vec([1, 1, 1]), 3))
    assert vert.vertices == (Vec([1, 1, 1]),)
    missed = c.face(LinearConstraint.le(Vec([1, 1, 1]), 4))
    assert missed.is_empty


def test_face_rejects_invalid_selector():
    c = cube(3)
    with pytest.raises(NotAFaceError):
        c.face(LinearConstraint.le(Vec([0, 0, 1]), "1/2"))
    with pytest.raises(NotAFaceError):
        Polyhedron.from_hrep(
            1, [LinearConstraint.ge(Vec([1]), 0)]
        ).face(LinearConstraint.le(Vec([1]), 1))


def test_square_face_lattice():
    lat = FaceLattice(cube(2))
    assert len(lat) == 10  # 4 + 4 + top + empty
    assert lat.f_vector() == (4, 4, 1)
    assert lat.f_vector(include_empty=True) == (1, 4, 4, 1)


def test_cube_face_lattice():
    lat = cube(3).face_lattice()
    assert lat.f_vector() == (8, 12, 6, 1)


def test_unbounded_face_lattice_and_bounded_part():
    p = Polyhedron.from_hrep(
        2,
        [
            LinearConstraint.ge(Vec([1, 0]), 0),
            LinearConstraint.ge(Vec([0, 1]), 0),
            LinearConstraint.ge(Vec([1, 1]), 1),
        ],
    )
    lat = p.face_lattice()
    # two vertices, one bounded edge, two unbounded edges, top, empty
    assert lat.f_vector(include_empty=True) == (1, 2, 3, 1)
    bounded = [m for m in lat.bounded_masks() if m]
    assert sorted(lat.dim_of(m) for m in bounded) == [0, 0, 1]


def test_facets_method():
    fs = cube(3).facets()
    assert len(fs) == 6
    assert all(f.dim == 2 and len(f.vertices) == 4 for f in fs)


# --- polars -----------------------------------------------------------------


def test_cube_polar_is_cross_polytope():
    c = cube(3, lo=-1, hi=1)
    d = c.polar(center=[0, 0, 0])
    assert set(d.vertices) == {Vec.unit(3, i) * s for i in range(3) for s in (1, -1)}
    assert len(d.facet_constraints) == 8


def test_polar_round_trip():
    c = cube(3, lo=-1, hi=1)
    assert c.polar([0, 0, 0]).polar([0, 0, 0]).same_set(c)


def test_polar_negative_sign_mirrors():
    c = cube(2, lo=0, hi=1)
    z = ["1/2", "1/2"]
    plus = c.polar(z, sign=1)
    minus = c.polar(z, sign=-1)
    assert set(minus.vertices) == {-v for v in plus.vertices}


def test_polar_of_lower_dim_body_has_lineality():
    seg = Polyhedron.from_vrep(2, [(-1, 0), (1, 0)], assume_minimal=True)
    d = seg.polar(center=[0, 0])
    assert d.lines == (Vec([0, 1]),)
    assert set(d.vertices) == {Vec([1, 0]), Vec([-1, 0])}


def test_blocking_polar():
    p = Polyhedron.from_vrep(
        2,
        [(1, 0), (0, 1)],
        rays=[(1, 0), (0, 1)],
        assume_minimal=True,
    )
    b = p.blocking_polar()
    assert b.vertices == (Vec([1, 1]),)
    assert set(b.rays) == {Vec([1, 0]), Vec([0, 1])}
    assert b.blocking_polar().same_set(p)


def test_blocking_polar_rejects_bounded():
    with pytest.raises(ConventionError):
        cube(2).blocking_polar()


# --- transforms ----------------------------------------------------------------


def test_translate_and_intersect():
    c = cube(2)
    t = c.translate([2, 0])
    assert set(t.vertices) == {Vec([2, 0]), Vec([3, 0]), Vec([2, 1]), Vec([3, 1])}
    meet = c.intersect(c.translate(["1/2", 0]))
    assert meet.same_set(
        Polyhedron.from_vrep(
            2, [("1/2", 0), (1, 0), ("1/2", 1), (1, 1)], assume_minimal=True
        )
    )


def test_chart_round_trip():
    tri = Polyhedron.from_vrep(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], assume_minimal=True)
    chart = span_chart(tri.vertices)
    flat = tri.in_chart(chart)
    assert flat.n == 2 and flat.is_full_dim
    back = flat.lift_from_chart(chart)
    assert back.same_set(tri)
    assert len(flat.facet_constraints) == 3


def test_same_set_across_representations():
    h = cube(2)
    v = Polyhedron.from_vrep(2, [(0, 0), (1, 0), (0, 1), (1, 1)], assume_minimal=True)
    assert h.same_set(v)
    assert not h.same_set(v.translate([1, 0]))


def test_canonical_constraint_scaling():
    c = LinearConstraint.le(Vec(["2/3", "-4/3"]), "2/3").canonical()
    assert c.normal == Vec([1, -2]) and c.rhs == 1
    e = LinearConstraint.eq(Vec([0, "-1/2"]), "3/2").canonical()
    assert e.normal == Vec([0, 1]) and e.rhs == -3


def test_from_vrep_requires_a_point():
    with pytest.raises(EmptyPolyhedronError):
        Polyhedron.from_vrep(2, [])


# --- randomized cross-checks ---------------------------------------------------


coords = st.integers(min_value=-3, max_value=3)


@settings(deadline=None, max_examples=40)
@given(st.lists(st.tuples(coords, coords, coords), min_size=1, max_size=8))
def test_hull_hrep_holds_on_generators(pts):
    p = Polyhedron.from_vrep(3, pts)
    assert all(p.contains(x) for x in pts)
    assert set(p.vertices) <= {Vec(x) for x in pts}
    z = p.relint_point()
    assert p.relint_contains(z)


@settings(deadline=None, max_examples=25)
@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=7))
def test_polar_swaps_counts_in_the_plane(pts):
    p = Polyhedron.from_vrep(2, pts)
    if p.dim != 2:
        return
    z = p.relint_point()
    d = p.polar(z)
    assert len(d.vertices) == len(p.facet_constraints)
    assert len(d.facet_constraints) == len(p.vertices)
    assert d.polar([0, 0]).same_set(p.translate(-z))
