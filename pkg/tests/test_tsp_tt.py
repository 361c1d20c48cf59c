"""Triangle slacks, tight representatives, signature fans, and the polar lift."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotaplex.errors import GeometryError
from rotaplex.families import EdgeIndex, tours
from rotaplex.linalg import Mat, Vec, orth_project, rank
from rotaplex.tsp_tt import (
    DegreeStructure,
    RootedTriangle,
    feasible_shortcuts,
    flat_tt_fan,
    is_metric,
    is_tight_triangular,
    lift_pair,
    min_slack_edges,
    polar_lift,
    root_slack_minima,
    rooted_triangles,
    shortcut,
    tight_representative,
    triangle_slack,
    tt_fan_membership,
)

EI = EdgeIndex(5)
ONES = Vec([1] * 10)
CYCLE = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
CHI_C = EI.chi(CYCLE)
# far-edge signature of the reference cycle: each root sees the cycle edge
# between its two non-neighbours
FAR = ((3, 4), (4, 5), (1, 5), (1, 2), (2, 3))


def kernel_point(coeffs):
    """A point of ker D from coordinates in the kernel chart of n=5."""
    chart = DegreeStructure(EI).kernel_chart()
    return chart.to_ambient(Vec(coeffs))


rational = st.fractions(
    min_value=Q(-3), max_value=Q(3), max_denominator=6
)


def test_rooted_triangle_validation():
    with pytest.raises(GeometryError):
        RootedTriangle(1, 3, 2)
    with pytest.raises(GeometryError):
        RootedTriangle(2, 2, 4)
    assert RootedTriangle(1, 3, 4).edge == (3, 4)
    assert len(rooted_triangles(EI)) == 30


def test_triangle_slack_values():
    t = RootedTriangle(1, 3, 4)
    assert triangle_slack(EI, Vec.zero(10), t) == 0
    assert triangle_slack(EI, EI.chi([(3, 4)]), t) == -1
    assert triangle_slack(EI, CHI_C, t) == -1


def test_metric_and_tight_predicates():
    assert is_metric(EI, ONES)
    assert not is_tight_triangular(EI, ONES)
    assert not is_metric(EI, CHI_C)
    assert is_tight_triangular(EI, CHI_C + ONES)


def test_degree_structure():
    ds = DegreeStructure(EI)
    assert all(r.dot(ds.center) == 1 for r in ds.rows)
    assert rank(ds.matrix) == 5
    assert ds.row_combination([1] * 5) == ONES
    assert ds.kernel_chart().dim == 5
    assert ds.in_kernel(kernel_point([1, 2, 0, -1, 3]))
    assert not ds.in_kernel(ONES)


def test_root_minima_frozen():
    assert root_slack_minima(EI, CHI_C) == Vec([-1] * 5)
    ap = CHI_C * Q(2, 5) - ONES * Q(1, 5)
    assert root_slack_minima(EI, ap) == Vec([Q(-3, 5)] * 5)


def test_root_minima_warns_for_three_cities():
    ei3 = EdgeIndex(3)
    with pytest.warns(UserWarning):
        root_slack_minima(ei3, Vec([1, 1, 1]))


def test_tight_representative_frozen():
    assert tight_representative(EI, CHI_C) == CHI_C + ONES
    assert tight_representative(EI, CHI_C + ONES) == CHI_C + ONES


@given(st.lists(rational, min_size=10, max_size=10))
def test_tight_representative_is_tight_and_idempotent(entries):
    a = Vec(entries)
    r = tight_representative(EI, a)
    assert is_tight_triangular(EI, r)
    assert tight_representative(EI, r) == r


@given(st.lists(rational, min_size=10, max_size=10), st.lists(rational, min_size=5, max_size=5))
def test_tight_representative_coset_invariant(entries, coeffs):
    ds = DegreeStructure(EI)
    a = Vec(entries)
    assert tight_representative(EI, a + ds.row_combination(coeffs)) == tight_representative(EI, a)


@given(st.lists(rational, min_size=10, max_size=10), st.fractions(min_value=Q(0), max_value=Q(4), max_denominator=4))
def test_minima_and_representative_positively_homogeneous(entries, eta):
    a = Vec(entries)
    assert root_slack_minima(EI, a * eta) == root_slack_minima(EI, a) * eta
    assert tight_representative(EI, a * eta) == tight_representative(EI, a) * eta


def test_lift_pair_frozen():
    assert lift_pair(EI, Vec.zero(10)) == (Q(-1), Vec.zero(10))
    ap = CHI_C * Q(2, 5) - ONES * Q(1, 5)
    g, c = lift_pair(EI, ap)
    assert g == 2
    assert c == (CHI_C + ONES) * Q(2, 5)
    assert polar_lift(EI, ap) == (CHI_C + ONES) * Q(1, 5)


def test_lift_pair_requires_kernel():
    with pytest.raises(GeometryError):
        lift_pair(EI, ONES)


def test_polar_lift_rejects_nonpositive_denominator():
    with pytest.raises(GeometryError):
        polar_lift(EI, Vec.zero(10))


@given(st.lists(rational, min_size=5, max_size=5), st.lists(rational, min_size=5, max_size=5))
@settings(max_examples=40)
def test_polar_lift_injective(c1, c2):
    a, b = kernel_point(c1), kernel_point(c2)
    try:
        fa, fb = polar_lift(EI, a), polar_lift(EI, b)
    except GeometryError:
        return
    if fa == fb:
        assert a == b


def test_min_slack_edges_frozen():
    allsig = min_slack_edges(EI, Vec.zero(10))
    for u, s in enumerate(allsig, start=1):
        assert s == frozenset(e for e in EI.pairs if u not in e)
    ap = CHI_C * Q(2, 5) - ONES * Q(1, 5)
    assert min_slack_edges(EI, ap) == tuple(frozenset([e]) for e in FAR)


def test_tt_fan_membership():
    assert tt_fan_membership(EI, ONES) is None
    assert tt_fan_membership(EI, CHI_C) is None
    assert tt_fan_membership(EI, Vec.zero(10)) == frozenset(rooted_triangles(EI))
    got = tt_fan_membership(EI, CHI_C + ONES)
    assert got == frozenset(RootedTriangle(u, v, w) for u, (v, w) in enumerate(FAR, start=1))


def test_shortcut_vectors():
    t = RootedTriangle(1, 3, 4)
    s = shortcut(EI, t)
    assert sum(s) == -1
    assert s[EI.index(3, 4)] == 1 and s[EI.index(1, 3)] == -1 and s[EI.index(1, 4)] == -1


@given(st.lists(rational, min_size=10, max_size=10))
@settings(max_examples=30)
def test_shortcut_pairs_with_slack(entries):
    a = Vec(entries)
    for t in rooted_triangles(EI)[:6]:
        assert a.dot(shortcut(EI, t)) == -triangle_slack(EI, a, t)


def test_feasible_shortcuts():
    with pytest.raises(GeometryError):
        feasible_shortcuts(EI, CHI_C)
    assert feasible_shortcuts(EI, ONES * Q(1, 5)) == frozenset()
    ap = CHI_C * Q(2, 5) - ONES * Q(1, 5)
    got = feasible_shortcuts(EI, polar_lift(EI, ap))
    assert got == frozenset(RootedTriangle(u, v, w) for u, (v, w) in enumerate(FAR, start=1))


def test_flat_tt_fan_four():
    fan = flat_tt_fan(4)
    assert len(fan.maximal_cells) == 3
    assert len(set(fan.labels)) == 3
    assert all(c.contains(Vec.zero(6)) for c in fan.maximal_cells)


def test_flat_tt_fan_guard():
    with pytest.raises(GeometryError):
        flat_tt_fan(3)
    with pytest.raises(GeometryError):
        flat_tt_fan(7)


def test_flat_tt_fan_five(tt_fan_5):
    assert len(tt_fan_5.maximal_cells) == 102
    ap = CHI_C * Q(2, 5) - ONES * Q(1, 5)
    homes = [
        lab
        for lab, c in zip(tt_fan_5.labels, tt_fan_5.maximal_cells)
        if c.contains(ap)
    ]
    assert homes == [min_slack_edges(EI, ap)]


@given(st.lists(rational, min_size=5, max_size=5))
@settings(max_examples=25, deadline=None)
def test_flat_tt_fan_five_covers_and_labels(tt_fan_5, coeffs):
    a = kernel_point(coeffs)
    homes = [
        (lab, c) for lab, c in zip(tt_fan_5.labels, tt_fan_5.maximal_cells) if c.contains(a)
    ]
    assert homes
    if len(homes) == 1:
        assert homes[0][0] == min_slack_edges(EI, a)


@given(st.lists(rational, min_size=10, max_size=10))
@settings(max_examples=30)
def test_projection_inverts_tightening(entries):
    # tightening moves along the degree rows, so projecting back onto the
    # kernel recovers the kernel part of the input
    ds = DegreeStructure(EI)
    kb = ds.kernel_chart().basis
    a = orth_project(kb, Vec(entries))
    assert orth_project(kb, tight_representative(EI, a)) == a


def test_tightening_inverts_projection_on_tight_points():
    ds = DegreeStructure(EI)
    kb = ds.kernel_chart().basis
    for t in tours(5)[:4]:
        d = EI.chi(t) + ONES
        assert is_tight_triangular(EI, d)
        assert tight_representative(EI, orth_project(kb, d)) == d
