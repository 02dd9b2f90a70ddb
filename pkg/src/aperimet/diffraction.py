"""Bragg peaks of the model sets.

Peaks sit on the Fourier module L/2; the peak at ``k = direct_image(n)/2``
has intensity ``dens(L)^2 * |FT(1_W)(k*)|^2`` with ``k* = star_image(n)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NoPlacementMatches
from .quadring import OCTAGONAL, LatticeVector, QSqrt2, direct_on_half_module, solve_coefficients, direct_image, star_image
from .window import Polyomino, sinc, window_fourier_transform

S = math.sqrt(2.0) / 2

# the four classes of square-lattice isometries modulo inversion; |FT|^2 is
# blind to translation and to inversion, so these exhaust the distinct cases
PLACEMENTS: dict[str, tuple[int, int, int, int]] = {
    "identity": (1, 0, 0, 1),
    "rotate90": (0, -1, 1, 0),
    "mirror_x": (-1, 0, 0, 1),
    "transpose": (0, 1, 1, 0),
}

MIRROR_LINES: dict[str, tuple[int, int, int, int]] = {
    "x_axis": (1, 0, 0, -1),
    "y_axis": (-1, 0, 0, 1),
    "diagonal": (0, 1, 1, 0),
    "antidiagonal": (0, -1, -1, 0),
}


@dataclass(frozen=True)
class BraggPeak:
    module_vector: LatticeVector
    position: tuple[float, float]
    intensity: float


@dataclass(frozen=True)
class PeakList:
    peaks: tuple[BraggPeak, ...]
    k_max: float
    intensity_min: float
    internal_axis_cutoff: float
    internal_radius: float
    coefficient_bound: int
    candidates: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def as_dict(self) -> dict[LatticeVector, float]:
        return {p.module_vector: p.intensity for p in self.peaks}

    def metadata(self) -> dict[str, float]:
        return {
            "k_max": self.k_max,
            "intensity_min": self.intensity_min,
            "internal_axis_cutoff": self.internal_axis_cutoff,
            "internal_radius": self.internal_radius,
            "coefficient_bound": self.coefficient_bound,
            "candidates": self.candidates,
            "peaks": len(self.peaks),
        }


def module_coordinates(n) -> tuple[np.ndarray, np.ndarray]:
    """Float ``k`` and ``k*`` for coefficient rows ``n`` of shape ``(..., 4)``."""
    n = np.asarray(n, dtype=float)
    n1, n2, n3, n4 = n[..., 0], n[..., 1], n[..., 2], n[..., 3]
    k = np.stack([(n1 + (n2 - n4) * S) / 2, (n3 + (n2 + n4) * S) / 2], axis=-1)
    ks = np.stack([(n1 - (n2 - n4) * S) / 2, (n3 - (n2 + n4) * S) / 2], axis=-1)
    return k, ks


def intensity_at_internal(window: Polyomino, kstar) -> np.ndarray:
    """``dens(L)^2 |FT(1_W)(k*)|^2`` for internal wave vectors."""
    ft = window_fourier_transform(window, kstar)
    dens = float(OCTAGONAL.lattice_density)
    return dens * dens * np.abs(ft) ** 2


def intensity(window: Polyomino, k) -> float:
    """Intensity of the Bragg peak at ``k = direct_image(n)/2`` given ``n``."""
    _, ks = module_coordinates(np.asarray(k))
    return float(intensity_at_internal(window, ks))


def closed_form_f(kappa, lam):
    """The printed trigonometric factor pair, taken literally."""
    kappa = np.asarray(kappa, dtype=float)
    lam = np.asarray(lam, dtype=float)
    pi = np.pi
    first = 3 + 2 * np.cos(2 * pi * lam) + 4 * np.cos(pi * lam) * np.cos(pi * (2 * kappa + 3 * lam))
    second = (5 + 6 * np.cos(2 * pi * kappa) + 2 * np.cos(4 * pi * kappa)
              + 4 * (2 * np.cos(pi * kappa) + np.cos(3 * pi * kappa)) * np.cos(pi * (3 * kappa + 6 * lam)))
    return first * second


def closed_form_I(kappa, lam):
    f = closed_form_f(kappa, lam)
    shape = sinc(kappa) * sinc(lam)
    return f / 16 * shape * shape


@dataclass(frozen=True)
class ClosedFormCheck:
    placement: str
    max_relative_error: float
    errors: dict[str, float]


def _relative_error(a: np.ndarray, b: np.ndarray) -> float:
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def verify_closed_form(p: Polyomino, samples: int = 1000, seed: int = 0,
                       tolerance: float = 1e-9) -> ClosedFormCheck:
    """Compare the window's intensity with the closed form on random wave vectors.

    Tries each placement class and raises :class:`NoPlacementMatches` when
    none reproduces the formula within ``tolerance``.
    """
    rng = np.random.default_rng(seed)
    k = rng.uniform(-3.0, 3.0, size=(samples, 2))
    target = closed_form_I(k[:, 0], k[:, 1])
    errors = {}
    for name, iso in PLACEMENTS.items():
        q = p.transformed(iso)
        dens = q.area / 4
        ft = window_fourier_transform(q, k) / q.area
        errors[name] = _relative_error(dens * dens * np.abs(ft) ** 2, target)
    best = min(errors, key=errors.get)
    if errors[best] > tolerance:
        raise NoPlacementMatches(f"best placement {best} has relative error {errors[best]:.3g}")
    return ClosedFormCheck(best, errors[best], errors)


def _axis_options(k_max: float, axis_cut: float, bound: int) -> np.ndarray:
    """Rows ``(n, q, k, k*)`` with ``2k = n + q s``, ``2k* = n - q s`` inside the cuts."""
    qmax = math.floor((k_max + axis_cut) * math.sqrt(2.0)) + 1
    rows = []
    for q in range(-qmax, qmax + 1):
        lo = math.floor(-2 * k_max - q * S) - 1
        hi = math.ceil(2 * k_max - q * S) + 1
        for n in range(max(lo, -bound), min(hi, bound) + 1):
            rows.append((n, q))
    arr = np.array(rows, dtype=np.int64).reshape(-1, 2)
    k = (arr[:, 0] + arr[:, 1] * S) / 2
    ks = (arr[:, 0] - arr[:, 1] * S) / 2
    keep = (np.abs(k) <= k_max + 1e-12) & (np.abs(ks) <= axis_cut)
    return arr[keep], k[keep], ks[keep]


def _decay_factor(t: np.ndarray) -> np.ndarray:
    """Upper bound ``min(1, 1/(pi |t|))`` on ``|sinc(t)|``."""
    with np.errstate(divide="ignore"):
        return np.minimum(1.0, 1.0 / (np.pi * np.abs(t)))


def _inside_kmax(n: LatticeVector, k_max: float) -> bool:
    kx, ky = direct_on_half_module(n)
    return (kx * kx + ky * ky) <= QSqrt2(Fraction(k_max) ** 2)


def peak_list(window: Polyomino, k_max: float, intensity_min: float,
              internal_scale: float = 1.0) -> PeakList:
    """All Bragg peaks with ``|k| <= k_max`` and intensity ``>= intensity_min``.

    Each cell's transform is bounded per axis by ``min(1, 1/(pi |k*_j|))``,
    so ``I <= (area/4)^2 * m_x^2 * m_y^2``; this fixes the per-axis internal
    cutoff.  ``internal_scale > 1`` widens the scanned region (used to check
    that the cutoff loses nothing).
    """
    if k_max <= 0 or intensity_min <= 0:
        raise ValueError("k_max and intensity_min must be positive")
    dens_w = float(OCTAGONAL.lattice_density) * window.area
    c = math.sqrt(intensity_min) / dens_w
    if c > 1:
        return PeakList((), k_max, intensity_min, 0.0, 0.0, 0, 0)
    axis_cut = internal_scale / (math.pi * c)
    r_star = math.sqrt(2.0) * axis_cut
    bound = math.floor(k_max + r_star) + 1

    xn, xk, xks = _axis_options(k_max, axis_cut, bound)
    yn, yk, yks = _axis_options(k_max, axis_cut, bound)
    mx, my = _decay_factor(xks), _decay_factor(yks)
    # n2 = (a + b)/2, n4 = (b - a)/2 need a = b mod 2
    ok = ((xn[:, 1][:, None] - yn[:, 1][None, :]) % 2 == 0)
    ok &= (xk[:, None] ** 2 + yk[None, :] ** 2) <= k_max * k_max + 1e-9
    ok &= (mx[:, None] * my[None, :]) >= c / internal_scale ** 2 * (1 - 1e-12)
    ix, iy = np.nonzero(ok)
    a, b = xn[ix, 1], yn[iy, 1]
    coeffs = np.column_stack([xn[ix, 0], (a + b) // 2, yn[iy, 0], (b - a) // 2])
    inbox = np.all(np.abs(coeffs) <= bound, axis=1)
    coeffs = coeffs[inbox]
    kstar = np.column_stack([xks[ix][inbox], yks[iy][inbox]])
    kpos = np.column_stack([xk[ix][inbox], yk[iy][inbox]])
    values = intensity_at_internal(window, kstar) if len(coeffs) else np.zeros(0)

    peaks = []
    for row, pos, val in zip(coeffs.tolist(), kpos.tolist(), values.tolist()):
        if val < intensity_min:
            continue
        n = LatticeVector(*row)
        if abs(pos[0] ** 2 + pos[1] ** 2 - k_max * k_max) < 1e-7 and not _inside_kmax(n, k_max):
            continue
        peaks.append(BraggPeak(n, (pos[0], pos[1]), val))
    peaks.sort(key=lambda p: (round(math.hypot(*p.position), 12), p.module_vector))
    return PeakList(tuple(peaks), k_max, intensity_min, axis_cut, r_star, bound, len(coeffs))


def reflect_vector(n, iso: tuple[int, int, int, int]) -> LatticeVector:
    """Apply a linear isometry to the module point; the star map commutes with it."""
    a, b, c, d = iso
    x, y = direct_image(n)
    xs, ys = star_image(n)
    fx, fy, fsx, fsy = (t.to_field() for t in (x, y, xs, ys))
    out = solve_coefficients((a * fx + b * fy, c * fx + d * fy), (a * fsx + b * fsy, c * fsx + d * fsy))
    if out is None:
        raise ValueError("isometry does not preserve the lattice")
    return out


def mirror_discrepancy(window: Polyomino, peaks: PeakList, iso: tuple[int, int, int, int]) -> float:
    """Largest ``|I(k) - I(sigma k)|`` over the listed peaks."""
    if not len(peaks):
        return 0.0
    images = np.array([reflect_vector(p.module_vector, iso) for p in peaks], dtype=np.int64)
    _, ks = module_coordinates(images)
    mirrored = intensity_at_internal(window, ks)
    own = np.array([p.intensity for p in peaks])
    return float(np.max(np.abs(own - mirrored)))
