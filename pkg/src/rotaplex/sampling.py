"""Deterministic rational sampling for randomized verification runs.

Every verifier that draws samples takes an explicit seed and reports it, so
a failing run can be replayed exactly.  The generator is a plain 64-bit LCG;
we only need reproducibility across platforms, not statistical quality.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Sequence

from .errors import GeometryError
from .linalg import Vec

MULT = 6364136223846793005
INC = 1442695040888963407
MASK = (1 << 64) - 1

DEFAULT_SEED = 1729


class SeededSampler:
    """LCG-backed source of exact rational points in polyhedra."""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed
        self._state = (seed ^ MULT) & MASK
        for _ in range(4):  # discard the correlated warm-up states
            self._next()

    def _next(self) -> int:
        self._state = (self._state * MULT + INC) & MASK
        return self._state >> 32

    def integer(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self._next() % (hi - lo + 1)

    def fraction(self, denom: int = 64) -> Q:
        """Rational in (0, 1) with the given denominator."""
        return Q(self.integer(1, denom - 1), denom)

    def weights(self, k: int) -> list[Q]:
        """k positive rationals summing to one."""
        raw = [self.integer(1, 997) for _ in range(k)]
        total = sum(raw)
        return [Q(r, total) for r in raw]

    def choice(self, seq: Sequence):
        if not seq:
            raise ValueError("choice from an empty sequence")
        return seq[self.integer(0, len(seq) - 1)]

    def point_in(self, poly) -> Vec:
        """A relative-interior point of the polyhedron.

        All vertices enter with positive weight and all rays with a small
        positive coefficient, which lands the combination in the relative
        interior.  Distinct calls give distinct generic points.
        """
        verts = poly.vertices
        if not verts:
            raise GeometryError("cannot sample from an empty polyhedron")
        w = self.weights(len(verts))
        x = Vec.zero(poly.n)
        for wi, v in zip(w, verts):
            x = x + v * wi
        for r in poly.rays:
            x = x + r * self.fraction()
        for l in poly.lines:
            x = x + l * (self.fraction() - Q(1, 2))
        return x
