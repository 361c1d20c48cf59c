"""Round trips through the JSON file format."""

from fractions import Fraction as Q

import pytest

from rotaplex.complexes import PolyhedralComplex
from rotaplex.errors import GeometryError
from rotaplex.jsonio import (
    complex_from_json,
    complex_to_json,
    constraint_from_json,
    constraint_to_json,
    polyhedron_from_json,
    polyhedron_to_json,
    read_json,
    write_json,
)
from rotaplex.linalg import Vec
from rotaplex.polyhedra import LinearConstraint, Polyhedron


def vpoly(pts):
    return Polyhedron.from_vrep(len(pts[0]), pts)


def test_constraint_round_trip_all_relations():
    le = LinearConstraint.le(Vec([1, -2]), Q(5, 3))
    eq = LinearConstraint.eq(Vec([0, 1]), -2)
    for c in (le, eq):
        back = constraint_from_json(constraint_to_json(c), 2)
        assert back.normal == c.normal
        assert back.rhs == c.rhs
        assert back.kind == c.kind


def test_ge_rows_are_read_but_never_written():
    row = {"a": ["1", "0"], "b": "3", "rel": "GE"}
    c = constraint_from_json(row, 2)
    assert c.holds(Vec([Q(5), Q(0)]))
    assert not c.holds(Vec([Q(0), Q(0)]))
    # writing normalizes to LE/EQ
    assert constraint_to_json(c)["rel"] == "LE"


def test_unknown_relation_rejected():
    with pytest.raises(GeometryError):
        constraint_from_json({"a": ["1"], "b": "0", "rel": "LT"}, 1)


def test_wrong_width_rejected():
    with pytest.raises(GeometryError):
        constraint_from_json({"a": ["1", "2"], "b": "0", "rel": "LE"}, 3)


def test_polyhedron_round_trip_exact():
    p = vpoly([(0, 0), (1, 0), (0, 1), (Q(1, 3), Q(5, 7))])
    q = polyhedron_from_json(polyhedron_to_json(p))
    assert p.same_set(q)


def test_polyhedron_round_trip_unbounded():
    p = Polyhedron.from_vrep(2, [(0, 0)], rays=[(1, 0), (1, 1)])
    q = polyhedron_from_json(polyhedron_to_json(p))
    assert p.same_set(q)


def test_lineality_travels_as_ray_pair():
    p = Polyhedron.from_hrep(2, [LinearConstraint.le(Vec([1, 0]), 1)])
    data = polyhedron_to_json(p)
    rays = {tuple(r) for r in data["vrep"]["rays"]}
    assert ("0", "1") in rays and ("0", "-1") in rays
    assert polyhedron_from_json(data).same_set(p)


def test_vrep_only_payload():
    data = {
        "name": "tri",
        "ambient_dim": 2,
        "vrep": {"vertices": [["0", "0"], ["1", "0"], ["0", "1"]], "rays": []},
    }
    p = polyhedron_from_json(data)
    assert p.dim == 2
    assert len(p.vertices) == 3


def test_empty_polyhedron_round_trip():
    p = Polyhedron.empty(3)
    q = polyhedron_from_json(polyhedron_to_json(p))
    assert q.is_empty


def test_output_is_byte_stable():
    p = vpoly([(0, 0), (2, 0), (0, 2)])
    q = Polyhedron.from_vrep(2, [(0, 2), (2, 0), (0, 0), (1, 0)])
    assert polyhedron_to_json(p) == polyhedron_to_json(q)


def test_complex_round_trip_with_labels():
    cells = [vpoly([(0, 0), (1, 0), (0, 1)]), vpoly([(1, 0), (0, 1), (1, 1)])]
    cx = PolyhedralComplex(2, cells, ["lower", "upper"])
    back = complex_from_json(complex_to_json(cx))
    assert back.same_complex(cx)
    assert set(back.labels) == {"lower", "upper"}


def test_complex_labels_stringified_stably():
    cells = [vpoly([(0, 0), (1, 0), (0, 1)])]
    cx = PolyhedralComplex(2, cells, [frozenset({1, 2})])
    data = complex_to_json(cx)
    assert data["cells"][0]["label"] == repr(frozenset({1, 2}))


def test_file_round_trip(tmp_path):
    p = vpoly([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    path = tmp_path / "simplex.json"
    write_json(path, polyhedron_to_json(p, name="simplex"))
    data = read_json(path)
    assert data["name"] == "simplex"
    assert polyhedron_from_json(data).same_set(p)
