"""Minimal SVG writers for the plot data (no plotting dependency).

Output is plain text with fixed number formatting, so identical inputs give
identical bytes.
"""

from __future__ import annotations

import math

from .cutproject import ModelSetPatch
from .diffraction import PeakList
from .window import CovariogramGrid, DifferenceBody

SIZE = 600.0


def _n(x: float) -> str:
    return f"{x:.3f}"


class _Canvas:
    """Maps a square data box ``[-half, half]^2`` onto the SVG viewport."""

    def __init__(self, half: float, title: str):
        self.half = half if half > 0 else 1.0
        self.scale = SIZE / (2 * self.half)
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(SIZE)}" height="{int(SIZE)}" '
            f'viewBox="0 0 {int(SIZE)} {int(SIZE)}">',
            f"<title>{title}</title>",
            f'<rect x="0" y="0" width="{int(SIZE)}" height="{int(SIZE)}" fill="white"/>',
        ]

    def px(self, x: float, y: float) -> tuple[float, float]:
        return (x + self.half) * self.scale, (self.half - y) * self.scale

    def circle(self, x: float, y: float, r: float, cls: str, fill: str = "black", stroke: str = "none") -> None:
        cx, cy = self.px(x, y)
        self.parts.append(f'<circle class="{cls}" cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(r)}" '
                          f'fill="{fill}" stroke="{stroke}"/>')

    def rect(self, x: float, y: float, w: float, h: float, fill: str) -> None:
        x0, y0 = self.px(x, y + h)
        self.parts.append(f'<rect x="{_n(x0)}" y="{_n(y0)}" width="{_n(w * self.scale)}" '
                          f'height="{_n(h * self.scale)}" fill="{fill}" stroke="none"/>')

    def line(self, a, b, cls: str, stroke: str = "black", width: float = 1.5) -> None:
        x1, y1 = self.px(*a)
        x2, y2 = self.px(*b)
        self.parts.append(f'<line class="{cls}" x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def covariogram_svg(grid: CovariogramGrid, body: DifferenceBody) -> str:
    """Grey-scale heat map of the covariogram with the difference-body outline."""
    values = grid.to_array()
    top = float(values.max()) or 1.0
    half = max(abs(float(grid.xs[0])), abs(float(grid.ys[0])))
    canvas = _Canvas(half, "covariogram")
    step_x = float(grid.xs[1] - grid.xs[0]) if len(grid.xs) > 1 else 1.0
    step_y = float(grid.ys[1] - grid.ys[0]) if len(grid.ys) > 1 else 1.0
    for iy, y in enumerate(grid.ys):
        for ix, x in enumerate(grid.xs):
            v = values[iy, ix]
            if v <= 0:
                continue
            shade = int(round(255 * (1 - v / top)))
            canvas.rect(float(x) - step_x / 2, float(y) - step_y / 2, step_x, step_y,
                        f"rgb({shade},{shade},{shade})")
    for a, b in body.boundary_edges():
        canvas.line(a, b, "boundary", stroke="red")
    canvas.circle(0.0, 0.0, 3.0, "origin", fill="red")
    return canvas.render()


def patch_svg(patch: ModelSetPatch) -> str:
    canvas = _Canvas(patch.radius, "model set patch")
    for x, y in patch.positions.tolist():
        canvas.circle(x, y, 1.6, "point")
    return canvas.render()


def difference_classes(a: ModelSetPatch, b: ModelSetPatch):
    """Index lists ``(common, only_b, only_a)`` into ``a`` and ``b`` respectively."""
    if a.radius != b.radius:
        raise ValueError("patches must share the same radius")
    in_b, in_a = b.vector_set, a.vector_set
    common = [i for i, n in enumerate(a.vectors) if n in in_b]
    only_a = [i for i, n in enumerate(a.vectors) if n not in in_b]
    only_b = [i for i, n in enumerate(b.vectors) if n not in in_a]
    return common, only_b, only_a


def emit_difference_plot(a: ModelSetPatch, b: ModelSetPatch) -> str:
    """Common points as big dots, ``b`` only as open circles, ``a`` only as small dots."""
    common, only_b, only_a = difference_classes(a, b)
    canvas = _Canvas(a.radius, "patch comparison")
    pa, pb = a.positions, b.positions
    for i in common:
        canvas.circle(pa[i, 0], pa[i, 1], 2.4, "common")
    for i in only_b:
        canvas.circle(pb[i, 0], pb[i, 1], 2.4, "only-second", fill="none", stroke="black")
    for i in only_a:
        canvas.circle(pa[i, 0], pa[i, 1], 1.0, "only-first")
    return canvas.render()


def peaks_svg(peaks: PeakList) -> str:
    """Disks with area proportional to intensity."""
    canvas = _Canvas(peaks.k_max, "diffraction")
    if not len(peaks):
        return canvas.render()
    top = max(p.intensity for p in peaks)
    r_top = 0.06 * SIZE
    for p in peaks:
        r = r_top * math.sqrt(p.intensity / top)
        canvas.circle(p.position[0], p.position[1], r, "peak")
    return canvas.render()
