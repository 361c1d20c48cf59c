"""Generators for the worked example families.

Three sources: doubly stochastic matrices inside the bipartite matching
polytope, orbit polytopes of a weight vector under coordinate permutations
(permutahedra and their onion-skin relatives), and symmetric tour polytopes
with their unbounded graphical counterparts.  Everything is rebuilt from
scratch on each call; nothing here caches geometry.
"""

from __future__ import annotations

import itertools
import warnings
from fractions import Fraction as Q
from typing import Iterable, Sequence

from ._simplex import lp_feasible
from .complexes import PolyhedralComplex
from .errors import GeometryError
from .linalg import Vec
from .polyhedra import LinearConstraint, Polyhedron

# --- doubly stochastic / matching ---------------------------------------------------


def _entry(n: int, k: int, l: int) -> int:
    return k * n + l


def _row_normal(n: int, k: int) -> Vec:
    return Vec([1 if i // n == k else 0 for i in range(n * n)])


def _col_normal(n: int, l: int) -> Vec:
    return Vec([1 if i % n == l else 0 for i in range(n * n)])


def birkhoff(n: int) -> Polyhedron:
    """Doubly stochastic matrices of order n, flattened row-major into R^{n*n}."""
    if n < 1:
        raise GeometryError("order must be at least 1")
    m = n * n
    rows = [LinearConstraint.ge(Vec.unit(m, i), 0) for i in range(m)]
    for k in range(n):
        rows.append(LinearConstraint.eq(_row_normal(n, k), 1))
        rows.append(LinearConstraint.eq(_col_normal(n, k), 1))
    return Polyhedron.from_hrep(m, rows)


def matching_polytope(n: int) -> Polyhedron:
    """Matchings of the complete bipartite graph on n+n nodes, same flattening.

    Row and column sums are at most one instead of exactly one; the
    doubly stochastic matrices are the face where the total sum reaches n.
    """
    if n < 1:
        raise GeometryError("order must be at least 1")
    m = n * n
    rows = [LinearConstraint.ge(Vec.unit(m, i), 0) for i in range(m)]
    for k in range(n):
        rows.append(LinearConstraint.le(_row_normal(n, k), 1))
        rows.append(LinearConstraint.le(_col_normal(n, k), 1))
    return Polyhedron.from_hrep(m, rows)


def permutation_matrices(n: int) -> list[Vec]:
    out = []
    for perm in itertools.permutations(range(n)):
        x = [Q(0)] * (n * n)
        for k, l in enumerate(perm):
            x[_entry(n, k, l)] = Q(1)
        out.append(Vec(x))
    return out


# --- orbit polytopes ------------------------------------------------------------------


def orbit_polytope(w: Sequence[Q]) -> Polyhedron:
    """Convex hull of all coordinate permutations of the weight vector w.

    Weights must sum to n(n+1)/2 and must not be constant; every onion-skin
    statement is normalized against those two facts.  Each arrangement of w
    uniquely maximizes its own inner product over the orbit, so the orbit
    is exactly the vertex set and no extremality check is needed.
    """
    wv = Vec(w)
    n = wv.dim
    if n < 2 or len(set(wv)) == 1:
        raise GeometryError("weight vector must have at least two distinct entries")
    if sum(wv) != Q(n * (n + 1), 2):
        raise GeometryError("weight entries must sum to n(n+1)/2")
    pts = sorted(set(itertools.permutations(wv)))
    return Polyhedron.from_vrep(n, pts, assume_minimal=True)


def permutahedron(n: int) -> Polyhedron:
    """Orbit polytope of (1, ..., n): dimension n-1 inside R^n."""
    if n < 2:
        raise GeometryError("need at least two coordinates")
    return orbit_polytope(list(range(1, n + 1)))


def onion_weights(n: int, r: int) -> Vec:
    """Weight vector of the r-th onion shell for the permutahedron in R^n.

    The orbit polytopes of these vectors are nested, innermost at r = 1,
    and the outermost (r = n) is the permutahedron itself.
    """
    if not 1 <= r <= n:
        raise GeometryError("shell index out of range")
    return Vec([*range(1, r), 2 * r - n, *range(r + 2, n + 2)])


def split_face_fan(p: Polyhedron) -> PolyhedralComplex:
    """Face-fan cones of p, each split along the facet it is the cone over.

    p must be a bounded full-dimensional polytope with the origin in its
    interior.  Each facet F contributes the pyramid conv({0} + F) and the
    unbounded tail F + cone(F); together the pieces tile the whole space.
    """
    if not p.is_bounded or not p.is_full_dim:
        raise GeometryError("split face fan needs a bounded full-dimensional polytope")
    if not p.relint_contains(Vec.zero(p.n)):
        raise GeometryError("split face fan needs the origin in the interior")
    verts = p.vertices
    cells, labels = [], []
    for i in range(len(p.facet_constraints)):
        m = p.incidence[i]
        fv = [v for j, v in enumerate(verts) if (m >> j) & 1]
        cells.append(Polyhedron.from_vrep(p.n, [Vec.zero(p.n)] + fv))
        labels.append((i, "near"))
        cells.append(Polyhedron.from_vrep(p.n, fv, rays=fv))
        labels.append((i, "far"))
    return PolyhedralComplex(p.n, cells, labels)


# --- tours ---------------------------------------------------------------------------


class EdgeIndex:
    """Coordinates of R^{E_n}: two-element subsets of {1..n} in lex order."""

    def __init__(self, n: int):
        if n < 3:
            raise GeometryError("need at least three cities")
        self.n = n
        self.pairs: tuple[tuple[int, int], ...] = tuple(
            (u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
        )
        self._pos = {p: i for i, p in enumerate(self.pairs)}

    @property
    def m(self) -> int:
        return len(self.pairs)

    def index(self, u: int, v: int) -> int:
        if u == v:
            raise GeometryError("loops have no coordinate")
        return self._pos[(u, v) if u < v else (v, u)]

    def chi(self, edges: Iterable[tuple[int, int]]) -> Vec:
        x = [Q(0)] * self.m
        for u, v in edges:
            x[self.index(u, v)] += 1
        return Vec(x)


def tours(n: int) -> list[list[tuple[int, int]]]:
    """Edge lists of the undirected tours on cities 1..n, one per tour."""
    out = []
    for perm in itertools.permutations(range(2, n + 1)):
        if perm[0] > perm[-1]:
            continue
        cyc = (1,) + perm
        out.append([(u, v) for u, v in zip(cyc, cyc[1:] + cyc[:1])])
    return out


def stsp(n: int) -> Polyhedron:
    """Convex hull of the edge indicator vectors of the tours on n cities."""
    if n < 3:
        raise GeometryError("tours need at least three cities")
    if n < 5:
        warnings.warn(
            "below five cities some nonnegativity rows stop being facet-defining",
            stacklevel=2,
        )
    ei = EdgeIndex(n)
    return Polyhedron.from_vrep(ei.m, [ei.chi(t) for t in tours(n)], assume_minimal=True)


def _even_connected(ei: EdgeIndex, x: Sequence[int]) -> bool:
    n = ei.n
    deg = [0] * (n + 1)
    adj: dict[int, list[int]] = {u: [] for u in range(1, n + 1)}
    for (u, v), xe in zip(ei.pairs, x):
        if xe:
            deg[u] += xe
            deg[v] += xe
            adj[u].append(v)
            adj[v].append(u)
    if any(d == 0 or d % 2 for d in deg[1:]):
        return False
    seen = {1}
    stack = [1]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def gtsp(n: int) -> Polyhedron:
    """Connected even-degree multigraph vectors plus the nonnegative orthant.

    Entries above two never matter: removing a doubled edge keeps degrees
    even and the support intact, so {0,1,2}-vectors together with the unit
    rays already generate everything.  A feasibility program then discards
    the generators that are convex-plus-conic combinations of the rest.
    """
    if not 3 <= n <= 7:
        raise GeometryError("generator enumeration is sized for 3 <= n <= 7")
    ei = EdgeIndex(n)
    cands = [
        x for x in itertools.product((0, 1, 2), repeat=ei.m) if _even_connected(ei, x)
    ]
    cset = set(cands)
    minimal = []
    for x in cands:
        if any(
            x[i] >= 2 and x[:i] + (x[i] - 2,) + x[i + 1 :] in cset for i in range(ei.m)
        ):
            continue
        minimal.append(x)
    verts = []
    for x in minimal:
        # a generator with an edge outside supp(x) can never take positive
        # weight in x = sum lam*y + mu, mu >= 0, so restrict to the support
        others = [
            Vec(y)
            for y in minimal
            if y != x and all(xe or not ye for xe, ye in zip(x, y))
        ]
        if not others:
            verts.append(Vec(x))
            continue
        le = [(Vec([v[j] for v in others]), Q(x[j])) for j in range(ei.m)]
        eq = [(Vec([1] * len(others)), Q(1))]
        if lp_feasible(le, eq, dim=len(others), nonneg=True) is None:
            verts.append(Vec(x))
    rays = [Vec.unit(ei.m, i) for i in range(ei.m)]
    p = Polyhedron.from_vrep(ei.m, verts, rays=rays, assume_minimal=True)
    if p.dim != ei.m:
        raise GeometryError("tour relaxation should be full-dimensional")
    return p


# --- rotation contexts ----------------------------------------------------------------


def birkhoff_context(n: int):
    """Context for the doubly stochastic face of the matching polytope."""
    from .rotation import STANDARD_LE, make_context

    ones = Vec([1] * (n * n))
    return make_context(
        matching_polytope(n), LinearConstraint.le(ones, n), convention=STANDARD_LE
    )


def permutahedron_face_context(n: int):
    """Context for the permutahedron facet of the one-larger permutahedron."""
    from .rotation import STANDARD_LE, make_context

    p = permutahedron(n + 1)
    pin = LinearConstraint.le(Vec.unit(n + 1, n), n + 1)
    return make_context(p, pin, convention=STANDARD_LE)


def tsp_context(n: int):
    """Context for the tour polytope as a face of its graphical relaxation."""
    from .rotation import BLOCKING_GE, make_context

    ei = EdgeIndex(n)
    ones = Vec([1] * ei.m)
    return make_context(gtsp(n), LinearConstraint.ge(ones, n), convention=BLOCKING_GE)


def tsp_deletion_complex(ctx) -> PolyhedralComplex:
    """Faces of the tour polar avoiding the non-negativity vertices.

    Each inequality x_e >= 0 scales to a point of the polar, a vertex
    exactly when the inequality supports a facet of the tour polytope;
    that holds for n >= 5 and the deletion region is undefined below that.
    """
    from .complexes import deletion_complex
    from .linalg import orth_project

    m = ctx.ambient_dim
    n = next(k for k in range(3, m + 3) if k * (k - 1) // 2 == m)
    verts = ctx.S_polar.vertices
    drop: set[int] = set()
    for e in range(m):
        a_e = orth_project(ctx.L_basis, Vec.unit(m, e)) * Q(n - 1, 2)
        if not ctx.S_polar.contains(a_e):
            raise GeometryError(f"scaled edge direction {e} left the polar")
        if a_e not in verts:
            raise GeometryError(
                f"edge {e} inequality does not define a facet here, "
                "so there is no deletion region"
            )
        drop.add(verts.index(a_e))
    cx = deletion_complex(ctx.S_polar, sorted(drop))
    for cell in cx.maximal_cells:
        if not cell.is_bounded:
            raise GeometryError("deletion left an unbounded face")
    return cx
