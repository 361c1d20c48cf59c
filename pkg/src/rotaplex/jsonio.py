"""JSON serialization for polyhedra and complexes.

All rationals travel as reduced strings ("5/3", "-2"), so files are
portable across tools that cannot parse Python reprs.  Output ordering is
canonical: rows, vertices, rays, and cells are sorted, making files
diffable and byte-stable for equal inputs.  Lineality directions are
written as a pair of opposite rays.
"""

from __future__ import annotations

import json
from fractions import Fraction as Q
from pathlib import Path
from typing import Any, Sequence

from .complexes import PolyhedralComplex
from .errors import GeometryError
from .linalg import Vec, rat, rat_str
from .polyhedra import EQ, LinearConstraint, Polyhedron


def _vec_to_json(v: Sequence[Q]) -> list[str]:
    return [rat_str(x) for x in v]


def _vec_from_json(row: Sequence[str], n: int) -> Vec:
    if len(row) != n:
        raise GeometryError(f"expected {n} coordinates, got {len(row)}")
    return Vec(rat(x) for x in row)


def constraint_to_json(c: LinearConstraint) -> dict[str, Any]:
    rel = "EQ" if c.kind == EQ else "LE"
    return {"a": _vec_to_json(c.normal), "b": rat_str(c.rhs), "rel": rel}


def constraint_from_json(row: dict[str, Any], n: int) -> LinearConstraint:
    a = _vec_from_json(row["a"], n)
    b = rat(row["b"])
    rel = row.get("rel", "LE")
    if rel == "LE":
        return LinearConstraint.le(a, b)
    if rel == "GE":
        return LinearConstraint.ge(a, b)
    if rel == "EQ":
        return LinearConstraint.eq(a, b)
    raise GeometryError(f"unknown relation {rel!r}")


def polyhedron_to_json(p: Polyhedron, name: str = "") -> dict[str, Any]:
    """Both representations, rows and generators in sorted order."""
    rows = sorted(
        [constraint_to_json(c) for c in (*p.facet_constraints, *p.equalities)],
        key=lambda r: (r["rel"], r["a"], r["b"]),
    )
    rays = list(p.rays) + [d for l in p.lines for d in (l, -l)]
    return {
        "name": name,
        "ambient_dim": p.n,
        "hrep": {"rows": rows},
        "vrep": {
            "vertices": [_vec_to_json(v) for v in sorted(p.vertices)],
            "rays": [_vec_to_json(r) for r in sorted(rays)],
        },
    }


def polyhedron_from_json(data: dict[str, Any]) -> Polyhedron:
    """Rebuild from the inequality rows when present, else from generators."""
    n = data["ambient_dim"]
    hrep = data.get("hrep") or {}
    if hrep.get("rows"):
        return Polyhedron.from_hrep(
            n, [constraint_from_json(r, n) for r in hrep["rows"]]
        )
    vrep = data.get("vrep") or {}
    verts = [_vec_from_json(v, n) for v in vrep.get("vertices", [])]
    rays = [_vec_from_json(r, n) for r in vrep.get("rays", [])]
    if not verts and not rays:
        return Polyhedron.empty(n)
    return Polyhedron.from_vrep(n, verts, rays)


def label_to_str(label: Any) -> str:
    return label if isinstance(label, str) else repr(label)


def complex_to_json(cx: PolyhedralComplex) -> dict[str, Any]:
    cells = []
    for cell, label in zip(cx.maximal_cells, cx.labels):
        rays = list(cell.rays) + [d for l in cell.lines for d in (l, -l)]
        cells.append(
            {
                "vertices": [_vec_to_json(v) for v in sorted(cell.vertices)],
                "rays": [_vec_to_json(r) for r in sorted(rays)],
                "label": label_to_str(label),
                "maximal": True,
            }
        )
    cells.sort(key=lambda c: (c["vertices"], c["rays"]))
    return {"ambient_dim": cx.n, "cells": cells}


def complex_from_json(data: dict[str, Any]) -> PolyhedralComplex:
    """Labels come back as opaque strings; geometry is rebuilt exactly."""
    n = data["ambient_dim"]
    cells, labels = [], []
    for entry in data["cells"]:
        if not entry.get("maximal", True):
            continue
        verts = [_vec_from_json(v, n) for v in entry.get("vertices", [])]
        rays = [_vec_from_json(r, n) for r in entry.get("rays", [])]
        cells.append(Polyhedron.from_vrep(n, verts, rays))
        labels.append(entry.get("label", ""))
    return PolyhedralComplex(n, cells, labels)


def write_json(path: str | Path, data: dict[str, Any]) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n")


def read_json(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())
