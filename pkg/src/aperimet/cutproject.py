"""Finite patches of model sets ``{x in L : x* in W}`` for polyomino windows.

Internal coordinates of a lattice point are ``x* = n1 + (n4 - n2)/sqrt2`` and
``y* = n3 - (n2 + n4)/sqrt2``.  For fixed ``(n2, n4)`` the cell index of
``x*`` is ``n1 + floor((n4 - n2)/sqrt2 - anchor_x)``, which is computed once
exactly; ``n1`` and ``n3`` then only range over the few values that land in
or next to the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import BoundaryHit
from .quadring import OCTAGONAL, SQRT2, LatticeVector, Vec2, direct_fast, floor_surd, star_fast
from .window import Polyomino

S = SQRT2 / 2


def _axis_floor(q: int, anchor: Fraction) -> tuple[int, bool]:
    """``floor(q/sqrt2 - anchor)`` and whether the coordinate sits on a grid line."""
    num, den = anchor.numerator, anchor.denominator
    # q/sqrt2 - num/den = (q*den*sqrt2 - 2*num) / (2*den)
    f = floor_surd(-2 * num, q * den, 2 * den)
    return f, (q == 0 and den == 1)


def window_circumradius(window: Polyomino) -> float:
    """Largest distance from the internal origin to a window corner."""
    ax, ay = float(window.anchor[0]), float(window.anchor[1])
    r = 0.0
    for x, y in window.cells:
        for ex in (0, 1):
            for ey in (0, 1):
                r = max(r, math.hypot(x + ex + ax, y + ey + ay))
    return r


def classify(window: Polyomino, cx: int, cy: int, on_x: bool, on_y: bool) -> int:
    """1 interior, 0 exterior, -1 on the boundary of the window.

    ``(cx, cy)`` is the half-open cell index of the point; ``on_x`` means the
    point lies on the vertical grid line at the left edge of column ``cx``.
    """
    cols = (cx - 1, cx) if on_x else (cx,)
    rows = (cy - 1, cy) if on_y else (cy,)
    hits = sum((i, j) in window.cells for i in cols for j in rows)
    if hits == 0:
        return 0
    if hits == len(cols) * len(rows):
        return 1
    return -1


def _scan(window: Polyomino, bound: int, radius: float | None) -> Iterator[tuple[LatticeVector, int]]:
    """Yield ``(n, status)`` for candidates in the box ``|n_i| <= bound`` whose
    star image is in or on the window (and, if given, ``|x| < radius``)."""
    ax, ay = window.anchor
    xmin, ymin, xmax, ymax = window.bounding_box()
    xcache: dict[int, tuple[int, bool]] = {}
    ycache: dict[int, tuple[int, bool]] = {}
    r2 = None if radius is None else radius * radius
    for n2 in range(-bound, bound + 1):
        for n4 in range(-bound, bound + 1):
            qa, qb = n4 - n2, -(n2 + n4)
            if qa not in xcache:
                xcache[qa] = _axis_floor(qa, ax)
            if qb not in ycache:
                ycache[qb] = _axis_floor(qb, ay)
            fx, on_x = xcache[qa]
            fy, on_y = ycache[qb]
            # cell index cx = n1 + fx; the line case reaches one column further
            lo1, hi1 = max(-bound, xmin - fx), min(bound, xmax + 1 - fx)
            lo3, hi3 = max(-bound, ymin - fy), min(bound, ymax + 1 - fy)
            if lo1 > hi1 or lo3 > hi3:
                continue
            dx0 = (n2 - n4) * S
            dy0 = (n2 + n4) * S
            for n1 in range(lo1, hi1 + 1):
                x = n1 + dx0
                for n3 in range(lo3, hi3 + 1):
                    if r2 is not None:
                        y = n3 + dy0
                        if x * x + y * y >= r2:
                            continue
                    status = classify(window, n1 + fx, n3 + fy, on_x, on_y)
                    if status:
                        yield LatticeVector(n1, n2, n3, n4), status


def coefficient_bound(radius: float, internal_radius: float) -> int:
    """Box half-width from ``|n_i| <= (|x| + |x*|) / 2``."""
    return math.floor((radius + internal_radius) / 2) + 1


@dataclass(frozen=True)
class ModelSetPatch:
    vectors: tuple[LatticeVector, ...]
    radius: float
    window: Polyomino

    def __len__(self) -> int:
        return len(self.vectors)

    @cached_property
    def vector_set(self) -> frozenset[LatticeVector]:
        return frozenset(self.vectors)

    @cached_property
    def coefficients(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64).reshape(-1, 4)

    @cached_property
    def positions(self) -> np.ndarray:
        n = self.coefficients
        x = n[:, 0] + (n[:, 1] - n[:, 3]) * S
        y = n[:, 2] + (n[:, 1] + n[:, 3]) * S
        return np.column_stack([x, y])

    @cached_property
    def star_positions(self) -> np.ndarray:
        n = self.coefficients
        x = n[:, 0] + (n[:, 3] - n[:, 1]) * S
        y = n[:, 2] - (n[:, 1] + n[:, 3]) * S
        return np.column_stack([x, y])

    @property
    def points(self) -> list[tuple[LatticeVector, Vec2]]:
        return [(n, direct_fast(n)) for n in self.vectors]


def generate_patch(window: Polyomino, radius: float) -> ModelSetPatch:
    """All points of the model set with ``|x| < radius``.

    Raises :class:`BoundaryHit` if a candidate's star image lies on the
    window boundary.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    bound = coefficient_bound(radius, window_circumradius(window))
    found = []
    for n, status in _scan(window, bound, radius):
        if status < 0:
            raise BoundaryHit(f"star image of {tuple(n)} = {tuple(map(float, star_fast(n)))} lies on the window boundary")
        found.append(n)
    found.sort()
    return ModelSetPatch(tuple(found), float(radius), window)


def genericity_check(window: Polyomino, bound: int) -> bool:
    """True iff no ``n`` with ``|n_i| <= bound`` has its star image on the boundary."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    return all(status > 0 for _, status in _scan(window, bound, None))


def patch_difference(a: ModelSetPatch, b: ModelSetPatch) -> list[LatticeVector]:
    if a.radius != b.radius:
        raise ValueError("patches must share the same radius")
    other = b.vector_set
    return [n for n in a.vectors if n not in other]


def density_estimate(patch: ModelSetPatch) -> float:
    if not len(patch):
        raise ValueError("empty patch")
    return len(patch) / (math.pi * patch.radius ** 2)


def limit_density(window: Polyomino) -> Fraction:
    return OCTAGONAL.lattice_density * window.area
