"""Polyomino windows and their covariograms.

A polyomino is a finite set of unit cells ``c + [0,1)^2``.  Its covariogram
``g(v) = vol(P & (P + v))`` is piecewise bilinear: with the pair counts
``N(d) = #{(c, c'): c' - c = d}`` one has

    g(v) = sum_d N(d) * tent(v_x - d_x) * tent(v_y - d_y),
    tent(t) = max(0, 1 - |t|),

so ``N`` carries all of ``g`` and comparing covariograms reduces to
comparing finite integer maps.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .quadring import QSqrt2, QuadHalf

Cell = tuple[int, int]

DEFAULT_ANCHOR = (Fraction(-1, 2), Fraction(-1, 2))

# the 8 isometries of Z^2 fixing the origin, as (a, b, c, d) for [[a, b], [c, d]]
SQUARE_ISOMETRIES: tuple[tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1), (0, -1, 1, 0), (-1, 0, 0, -1), (0, 1, -1, 0),
    (-1, 0, 0, 1), (1, 0, 0, -1), (0, 1, 1, 0), (0, -1, -1, 0),
)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("anchors must be exact rationals, got a float")
    return Fraction(x)


def is_edge_connected(cells: Iterable[Cell]) -> bool:
    cells = set(cells)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Polyomino:
    cells: frozenset[Cell]
    anchor: tuple[Fraction, Fraction] = DEFAULT_ANCHOR
    require_connected: bool = field(default=True, compare=False)

    def __post_init__(self):
        cells = frozenset((int(x), int(y)) for x, y in self.cells)
        if not cells:
            raise ValueError("a polyomino needs at least one cell")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "anchor", (_as_fraction(self.anchor[0]), _as_fraction(self.anchor[1])))
        if self.require_connected and not is_edge_connected(cells):
            raise ValueError("cells are not edge-connected")

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], anchor=DEFAULT_ANCHOR, require_connected: bool = True) -> Polyomino:
        cells = list(cells)
        if len(set(cells)) != len(cells):
            raise ValueError("duplicate cells")
        return cls(frozenset(cells), anchor, require_connected)

    @property
    def area(self) -> int:
        return len(self.cells)

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def is_connected(self) -> bool:
        return is_edge_connected(self.cells)

    def bounding_box(self) -> tuple[int, int, int, int]:
        """``(xmin, ymin, xmax, ymax)`` over cell indices."""
        xs = [c[0] for c in self.cells]
        ys = [c[1] for c in self.cells]
        return min(xs), min(ys), max(xs), max(ys)

    def _replace_cells(self, cells) -> Polyomino:
        return Polyomino(frozenset(cells), self.anchor, self.require_connected)

    def translated(self, dx: int, dy: int) -> Polyomino:
        return self._replace_cells((x + dx, y + dy) for x, y in self.cells)

    def negated(self) -> Polyomino:
        """Cell-wise point reflection: the set ``-P`` as cells ``-c - (1,1)``."""
        return self._replace_cells((-x - 1, -y - 1) for x, y in self.cells)

    def transformed(self, iso: tuple[int, int, int, int]) -> Polyomino:
        """Apply a lattice isometry to the closed cells, then re-index."""
        a, b, c, d = iso
        out = []
        for x, y in self.cells:
            # image of the cell centre (x + 1/2, y + 1/2), scaled by 2
            cx, cy = 2 * x + 1, 2 * y + 1
            tx, ty = a * cx + b * cy, c * cx + d * cy
            out.append(((tx - 1) // 2, (ty - 1) // 2))
        return self._replace_cells(out)

    def normalized(self) -> Polyomino:
        """Translate so the bounding box starts at cell ``(0, 0)``."""
        x0, y0, _, _ = self.bounding_box()
        return self.translated(-x0, -y0)

    def with_anchor(self, anchor) -> Polyomino:
        return Polyomino(self.cells, anchor, self.require_connected)

    def canonical_key(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.normalized().cells))

    def congruence_key(self) -> tuple[Cell, ...]:
        """Smallest canonical key over all 8 isometries."""
        return min(self.transformed(iso).canonical_key() for iso in SQUARE_ISOMETRIES)

    def contains_point(self, x, y) -> bool:
        """Half-open cell membership for an exact or float point."""
        cx = math.floor(x - self.anchor[0])
        cy = math.floor(y - self.anchor[1])
        return (cx, cy) in self.cells


def congruent(p: Polyomino, q: Polyomino) -> bool:
    return p.area == q.area and p.congruence_key() == q.congruence_key()


@dataclass(frozen=True, eq=False)
class DiscreteAutocorrelation:
    counts: Mapping[Cell, int]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteAutocorrelation):
            return NotImplemented
        return dict(self.counts) == dict(other.counts)

    def __hash__(self) -> int:
        return hash(self.fingerprint())

    def fingerprint(self) -> tuple[tuple[Cell, int], ...]:
        return tuple(sorted(self.counts.items()))

    def __getitem__(self, d: Cell) -> int:
        return self.counts.get(d, 0)

    @property
    def support(self) -> frozenset[Cell]:
        return frozenset(self.counts)


def autocorrelation_counts(cells: Iterable[Cell]) -> dict[Cell, int]:
    cells = list(cells)
    counts = Counter((x2 - x1, y2 - y1) for x1, y1 in cells for x2, y2 in cells)
    return dict(counts)


def discrete_autocorrelation(p: Polyomino) -> DiscreteAutocorrelation:
    return DiscreteAutocorrelation(autocorrelation_counts(p.cells))


def _exact(t):
    if isinstance(t, QuadHalf):
        return t.to_field()
    if isinstance(t, (float, np.floating)):
        return float(t)
    if isinstance(t, (int, np.integer)):
        return Fraction(int(t))
    return t


def _tent(t):
    t = abs(t)
    return 1 - t if t < 1 else 0


def covariogram_from_counts(counts: Mapping[Cell, int], v):
    vx, vy = _exact(v[0]), _exact(v[1])
    fx, fy = math.floor(vx), math.floor(vy)
    total = 0
    # only offsets within sup-distance 1 of v contribute
    for dx in (fx, fx + 1):
        for dy in (fy, fy + 1):
            n = counts.get((dx, dy))
            if n:
                wx = _tent(vx - dx)
                if wx == 0:
                    continue
                wy = _tent(vy - dy)
                if wy == 0:
                    continue
                total = wx * wy * n + total
    return total


def covariogram_eval(p: Polyomino, v):
    """Covariogram ``g_P(v)``.

    Exact (``Fraction`` or ``QSqrt2``) for exact input coordinates, float
    otherwise.  Independent of the anchor.
    """
    return covariogram_from_counts(discrete_autocorrelation(p).counts, v)


def covariogram_equal(p: Polyomino, q: Polyomino) -> bool:
    return p.area == q.area and discrete_autocorrelation(p) == discrete_autocorrelation(q)


@dataclass(frozen=True)
class DifferenceBody:
    """``P - P`` as a union of open squares ``d + (-1, 1)^2``."""

    offsets: frozenset[Cell]

    def contains(self, v) -> bool:
        vx, vy = _exact(v[0]), _exact(v[1])
        fx, fy = math.floor(vx), math.floor(vy)
        for dx in (fx, fx + 1):
            for dy in (fy, fy + 1):
                if (dx, dy) in self.offsets and abs(vx - dx) < 1 and abs(vy - dy) < 1:
                    return True
        return False

    def bounding_box(self) -> tuple[int, int, int, int]:
        """Open bounding box ``(xmin, ymin, xmax, ymax)`` of the support."""
        xs = [d[0] for d in self.offsets]
        ys = [d[1] for d in self.offsets]
        return min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1

    def unit_cells(self) -> frozenset[Cell]:
        """Unit cells whose union has the same interior as the support."""
        return frozenset((dx + ex, dy + ey) for dx, dy in self.offsets for ex in (-1, 0) for ey in (-1, 0))

    def boundary_edges(self) -> list[tuple[Cell, Cell]]:
        """Unit segments of the outline, each as a pair of lattice points."""
        cells = self.unit_cells()
        edges = []
        for x, y in sorted(cells):
            if (x, y - 1) not in cells:
                edges.append(((x, y), (x + 1, y)))
            if (x, y + 1) not in cells:
                edges.append(((x, y + 1), (x + 1, y + 1)))
            if (x - 1, y) not in cells:
                edges.append(((x, y), (x, y + 1)))
            if (x + 1, y) not in cells:
                edges.append(((x + 1, y), (x + 1, y + 1)))
        return edges


def difference_body(p: Polyomino) -> DifferenceBody:
    return DifferenceBody(discrete_autocorrelation(p).support)


def sinc(t):
    """``sin(pi t) / (pi t)`` extended by continuity; works on arrays."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 1e-8
    safe = np.where(small, 1.0, t)
    out = np.sin(np.pi * safe) / (np.pi * safe)
    series = 1.0 - (np.pi * t) ** 2 / 6.0
    out = np.where(small, series, out)
    return out if out.ndim else float(out)


def window_fourier_transform(p: Polyomino, k):
    """``int_P exp(2 pi i k.y) dy`` for ``k`` of shape ``(..., 2)``."""
    k = np.asarray(k, dtype=float)
    kx, ky = k[..., 0], k[..., 1]
    cells = np.array(p.sorted_cells(), dtype=float)
    ax, ay = float(p.anchor[0]), float(p.anchor[1])
    lx = 2.0 * (cells[:, 0] + ax) + 1.0
    ly = 2.0 * (cells[:, 1] + ay) + 1.0
    phase = np.pi * (np.multiply.outer(kx, lx) + np.multiply.outer(ky, ly))
    total = np.exp(1j * phase).sum(axis=-1)
    out = total * sinc(kx) * sinc(ky)
    return out if np.ndim(out) else complex(out)


def covariogram_fourier_transform(counts: Mapping[Cell, int], k):
    """Fourier transform of ``g`` from its pair counts (cosine sum)."""
    k = np.asarray(k, dtype=float)
    kx, ky = k[..., 0], k[..., 1]
    d = np.array(list(counts.keys()), dtype=float)
    n = np.array(list(counts.values()), dtype=float)
    phase = 2 * np.pi * (np.multiply.outer(kx, d[:, 0]) + np.multiply.outer(ky, d[:, 1]))
    total = (np.cos(phase) * n).sum(axis=-1)
    out = total * sinc(kx) ** 2 * sinc(ky) ** 2
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class CovariogramGrid:
    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]   # values[iy][ix]

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.values])

    def samples(self):
        for iy, y in enumerate(self.ys):
            for ix, x in enumerate(self.xs):
                yield (x, y), self.values[iy][ix]


def covariogram_grid(p: Polyomino, step) -> CovariogramGrid:
    step = _as_fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    counts = discrete_autocorrelation(p).counts
    x0, y0, x1, y1 = difference_body(p).bounding_box()
    # symmetric box, so the grid is closed under v -> -v
    mx = max(-x0, x1)
    my = max(-y0, y1)
    nx = math.ceil(mx / step)
    ny = math.ceil(my / step)
    xs = tuple(i * step for i in range(-nx, nx + 1))
    ys = tuple(j * step for j in range(-ny, ny + 1))
    values = tuple(tuple(Fraction(covariogram_from_counts(counts, (x, y))) for x in xs) for y in ys)
    return CovariogramGrid(xs, ys, values)
