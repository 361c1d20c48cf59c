"""Rotation contexts, face-set devices, and the complex, on worked examples.

The square and triangle fixtures are small enough that every face set,
fiber crossing, and cell below was computed by hand; the tests freeze
those values.  The TSP fixture at n=4 exercises the blocking convention
end to end against the independently built tour-fan machinery.
"""

from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotaplex.errors import (
    DegenerateMapError,
    GeometryError,
    NotAFaceError,
)
from rotaplex.families import permutahedron_face_context, tsp_deletion_complex
from rotaplex.linalg import Vec
from rotaplex.polyhedra import LinearConstraint, Polyhedron
from rotaplex.rotation import (
    BLOCKING_GE,
    EMPTY_FACE,
    STANDARD_LE,
    FaceSetSignature,
    face_of_S_id,
    fiber_signature,
    frak_F,
    make_context,
    pi,
    rotated_inequality_set,
    rotation_complex,
    verify_two_definitions,
    verify_z_independence,
)
from rotaplex.sampling import SeededSampler

le = LinearConstraint.le
ge = LinearConstraint.ge


@pytest.fixture(scope="module")
def square_ctx():
    P = Polyhedron.from_vrep(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    return make_context(P, ge((0, 1), 0), STANDARD_LE)


@pytest.fixture(scope="module")
def triangle_ctx():
    P = Polyhedron.from_vrep(2, [(0, 0), (2, 0), (0, 2)])
    return make_context(P, le((1, 1), 2), STANDARD_LE)


def pvi(ctx, *coords):
    return ctx.P.vertices.index(Vec(coords))


def qvi(ctx, *coords):
    return ctx.P_polar.vertices.index(Vec(coords))


def vertex_sig(ctx, *coords):
    return FaceSetSignature.of([((qvi(ctx, *coords),), ())])


# --- context construction -------------------------------------------------------------


def test_square_context_pieces(square_ctx):
    ctx = square_ctx
    assert ctx.z == Vec([Q(1, 2), 0])
    assert ctx.c0 == Vec([Q(1, 2), Q(1, 2)])
    assert ctx.L_basis == (Vec([1, 0]),)
    assert ctx.Lperp_basis == (Vec([0, 1]),)
    assert set(ctx.S_polar.vertices) == {Vec([-2, 0]), Vec([2, 0])}
    assert set(ctx.P_polar.vertices) == {
        Vec([2, 0]),
        Vec([0, 2]),
        Vec([-2, 0]),
        Vec([0, -2]),
    }
    assert ctx.S_diamond.vertices == (Vec([0, -2]),)


def test_square_deletion_region(square_ctx):
    ctx = square_ctx
    assert len(ctx.d_masks) == 5
    assert ctx.D_complex.f_vector() == (3, 2)
    assert ctx.D_complex.is_valid_complex()
    # the deleted vertex is gone, the opposite arc survives
    support = {v for c in ctx.D_complex.maximal_cells for v in c.vertices}
    assert Vec([0, -2]) not in support and Vec([0, 2]) in support


def test_context_guards():
    P = Polyhedron.from_vrep(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(NotAFaceError):
        make_context(P, le((1, 1), 0))  # violated at (1,1)
    with pytest.raises(NotAFaceError):
        make_context(P, le((1, 0), 2))  # valid but tight nowhere
    with pytest.raises(GeometryError):
        make_context(P, le((-1, -1), 0))  # a single vertex
    with pytest.raises(GeometryError):
        make_context(P, ge((0, 1), 0), z=(0, 0))  # z on the boundary of S
    with pytest.raises(GeometryError):
        make_context(P, ge((0, 1), 0), z=(Q(1, 2), Q(1, 2)))  # z off S


# --- rotation sets and face sets -------------------------------------------------------


def test_square_rotation_sets(square_ctx):
    ctx = square_ctx
    Qa = rotated_inequality_set(ctx, (2, 0))
    assert Qa.vertices == (Vec([0]),) and Qa.rays == (Vec([-1]),)
    Qb = rotated_inequality_set(ctx, (0, 0))
    assert Qb.vertices == (Vec([1]),) and Qb.rays == (Vec([-1]),)
    with pytest.raises(GeometryError):
        rotated_inequality_set(ctx, (3, 0))  # outside the polar
    with pytest.raises(GeometryError):
        rotated_inequality_set(ctx, (1, 1))  # not in the direction space


def test_square_face_sets(square_ctx):
    ctx = square_ctx
    i10, i11, i01 = pvi(ctx, 1, 0), pvi(ctx, 1, 1), pvi(ctx, 0, 1)
    right_edge = (tuple(sorted((i10, i11))), ())
    top_edge = (tuple(sorted((i11, i01))), ())
    assert frak_F(ctx, (2, 0)) == FaceSetSignature.of([right_edge, ((i10,), ())])
    assert frak_F(ctx, (0, 0)) == FaceSetSignature.of([EMPTY_FACE, top_edge])
    assert frak_F(ctx, (1, 0)) == FaceSetSignature.of([EMPTY_FACE, ((i11,), ())])
    assert face_of_S_id(ctx, (2, 0)) == ((i10,), ())
    assert face_of_S_id(ctx, (1, 0)) == EMPTY_FACE


def test_square_fiber_signatures(square_ctx):
    ctx = square_ctx
    for method in ("lp", "incidence"):
        assert fiber_signature(ctx, (2, 0), method) == vertex_sig(ctx, 2, 0)
        assert fiber_signature(ctx, (-2, 0), method) == vertex_sig(ctx, -2, 0)
        assert fiber_signature(ctx, (0, 0), method) == vertex_sig(ctx, 0, 2)
        near = (tuple(sorted((qvi(ctx, 2, 0), qvi(ctx, 0, 2)))), ())
        assert fiber_signature(ctx, (1, 0), method) == FaceSetSignature.of([near])


def test_square_pi(square_ctx):
    ctx = square_ctx
    assert pi(ctx, (2, 0)) == Vec([2, 0])
    assert pi(ctx, (0, 2)) == Vec([0, 0])
    assert pi(ctx, (1, 1)) == Vec([Q(2, 3), 0])
    with pytest.raises(DegenerateMapError):
        pi(ctx, (0, -2))
    with pytest.raises(GeometryError):
        pi(ctx, (3, 0))


def test_square_rotation_complex(square_ctx):
    ctx = square_ctx
    cx = rotation_complex(ctx)
    assert len(cx.maximal_cells) == 2
    keys = {tuple(sorted(c.vertices)) for c in cx.maximal_cells}
    assert keys == {
        (Vec([-2, 0]), Vec([0, 0])),
        (Vec([0, 0]), Vec([2, 0])),
    }
    assert len(set(cx.labels)) == 2
    by_key = {tuple(sorted(c.vertices)): l for c, l in zip(cx.maximal_cells, cx.labels)}
    assert by_key[(Vec([0, 0]), Vec([2, 0]))] == fiber_signature(ctx, (1, 0))
    # the lp route must carve out the same cells
    cx_lp = rotation_complex(ctx, method="lp")
    assert cx.same_complex(cx_lp)


def test_square_verifiers(square_ctx):
    assert verify_two_definitions(square_ctx, samples=30, seed=7)
    assert verify_z_independence(
        square_ctx, (Q(1, 4), 0), samples=12, seed=11, compare_complexes=True
    )


# --- a non-axis direction space --------------------------------------------------------


def test_triangle_complex_is_one_cell(triangle_ctx):
    ctx = triangle_ctx
    assert set(ctx.S_polar.vertices) == {
        Vec([Q(1, 2), Q(-1, 2)]),
        Vec([Q(-1, 2), Q(1, 2)]),
    }
    assert ctx.S_diamond.vertices == (Vec([Q(3, 2), Q(3, 2)]),)
    assert len(ctx.d_masks) == 3
    cx = rotation_complex(ctx)
    assert len(cx.maximal_cells) == 1
    edge = (tuple(sorted((qvi(ctx, Q(-3, 2), 0), qvi(ctx, 0, Q(-3, 2))))), ())
    assert cx.labels[0] == FaceSetSignature.of([edge])


def test_triangle_face_sets_and_verify(triangle_ctx):
    ctx = triangle_ctx
    i00 = pvi(ctx, 0, 0)
    assert frak_F(ctx, (0, 0)) == FaceSetSignature.of([EMPTY_FACE, ((i00,), ())])
    assert verify_two_definitions(ctx, samples=25, seed=3)
    assert verify_z_independence(ctx, (Q(3, 2), Q(1, 2)), samples=10, seed=5)


# --- a pinned polar (parent not full-dimensional) ---------------------------------------


@pytest.fixture(scope="module")
def hex_edge_ctx():
    return permutahedron_face_context(2)


def test_permutahedron_edge_context(hex_edge_ctx):
    ctx = hex_edge_ctx
    assert ctx.P.dim == 2 and not ctx.P.is_full_dim
    assert set(ctx.S.vertices) == {Vec([1, 2, 3]), Vec([2, 1, 3])}
    # the polar is pinned into the direction space of P
    assert all(sum(v) == 0 for v in ctx.P_polar.vertices)
    assert ctx.P_polar.is_bounded
    # rotation sets here carry a lineality direction and still enumerate
    a = ctx.chart.to_ambient(Vec([Q(1, 3)]))
    Qa = rotated_inequality_set(ctx, a)
    assert Qa.lines
    assert frak_F(ctx, a)


def test_permutahedron_edge_verify(hex_edge_ctx):
    assert verify_two_definitions(hex_edge_ctx, samples=18, seed=2)


# --- blocking convention end to end at n=4 ----------------------------------------------


@pytest.fixture(scope="module")
def tsp4_ctx():
    from rotaplex.families import tsp_context

    return tsp_context(4)


def test_tsp4_context_shape(tsp4_ctx):
    ctx = tsp4_ctx
    assert ctx.convention is BLOCKING_GE
    assert ctx.S.dim == 2
    # three tours, so the polar is a triangle; the tour barycenter as base
    # point makes it bounded even though the parent polyhedron is not
    assert ctx.S_polar.is_bounded
    assert len(ctx.S_polar.vertices) == 3
    assert not ctx.P_polar.is_bounded
    assert ctx.d_masks
    assert all(
        mk >> ctx.polar_lattice.nverts == 0 for mk in ctx.d_masks
    )


def test_tsp4_no_deletion_region(tsp4_ctx):
    # at n=4 the edge inequalities are not facet-defining: the scaled edge
    # directions land on edge midpoints of the polar triangle, not vertices
    with pytest.raises(GeometryError):
        tsp_deletion_complex(tsp4_ctx)


def test_tsp4_fiber_device_degenerates(tsp4_ctx):
    # without facet-defining edge inequalities the bounded region away from
    # the pivot face is three isolated vertices, so generic fibers miss it
    ctx = tsp4_ctx
    assert len(ctx.d_masks) == 3
    assert all(ctx.polar_lattice.dim_of(mk) == 0 for mk in ctx.d_masks)
    origin = Vec.zero(ctx.ambient_dim)
    assert fiber_signature(ctx, origin) == FaceSetSignature.of([])
    assert EMPTY_FACE in frak_F(ctx, origin)


def test_tsp4_conjugate_agreement(tsp4_ctx):
    # the surviving-conjugates identity holds even where the join
    # reconstruction breaks down
    ctx = tsp4_ctx
    rng = SeededSampler(13)
    for k in range(6):
        a = rng.point_in(ctx.S_polar)
        fr = frak_F(ctx, a)
        assert face_of_S_id(ctx, a) in fr
        surviving = {
            mk for mk in (ctx.conjugate_mask(fid) for fid in fr) if mk in ctx.d_masks
        }
        want = FaceSetSignature.of(ctx.polar_face_id(mk) for mk in surviving)
        assert fiber_signature(ctx, a, "incidence") == want
        if k < 2:
            assert fiber_signature(ctx, a, "lp") == want
        assert (EMPTY_FACE in fr) == ctx.S_polar.relint_contains(a)


# --- signature container ----------------------------------------------------------------


@given(
    st.lists(
        st.tuples(
            st.lists(st.integers(0, 12), max_size=4).map(lambda v: tuple(sorted(set(v)))),
            st.lists(st.integers(0, 5), max_size=2).map(lambda v: tuple(sorted(set(v)))),
        ),
        max_size=6,
    ),
    st.randoms(),
)
def test_signature_canonical_under_reordering(ids, rnd):
    shuffled = list(ids)
    rnd.shuffle(shuffled)
    a = FaceSetSignature.of(ids)
    b = FaceSetSignature.of(shuffled + shuffled)
    assert a == b and hash(a) == hash(b) and repr(a) == repr(b)


def test_method_agreement_on_samples(square_ctx, triangle_ctx):
    rng = SeededSampler(23)
    for ctx in (square_ctx, triangle_ctx):
        for _ in range(6):
            a = rng.point_in(ctx.S_polar)
            assert fiber_signature(ctx, a, "lp") == fiber_signature(ctx, a, "incidence")
