"""Autocorrelation of model sets: exact coefficients and finite-patch estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .cutproject import ModelSetPatch, S
from .quadring import OCTAGONAL, LatticeVector, QSqrt2, star_fast
from .window import Polyomino, autocorrelation_counts, covariogram_equal, covariogram_from_counts


@lru_cache(maxsize=64)
def _counts(window: Polyomino) -> dict:
    return autocorrelation_counts(window.cells)


def eta(window: Polyomino, x) -> QSqrt2:
    """Exact autocorrelation coefficient ``dens(L) * g_W(x*)`` in Q(sqrt 2)."""
    xs, ys = star_fast(x)
    g = covariogram_from_counts(_counts(window), (xs.to_field(), ys.to_field()))
    return QSqrt2.coerce(g) * OCTAGONAL.lattice_density


@dataclass(frozen=True)
class AutocorrCoefficient:
    location: LatticeVector
    eta: QSqrt2

    @property
    def value(self) -> float:
        return float(self.eta)


def eta_coefficients(window: Polyomino, vectors) -> list[AutocorrCoefficient]:
    return [AutocorrCoefficient(LatticeVector(*v), eta(window, v)) for v in vectors]


@dataclass(frozen=True)
class EmpiricalAutocorrelation:
    radius: float
    weights: dict[LatticeVector, float]
    max_length: float | None = None

    def __getitem__(self, d) -> float:
        return self.weights.get(LatticeVector(*d), 0.0)

    def top(self, count: int) -> list[tuple[LatticeVector, float]]:
        return sorted(self.weights.items(), key=lambda kv: (-kv[1], kv[0]))[:count]


def _internal_diameter(window: Polyomino) -> float:
    x0, y0, x1, y1 = window.bounding_box()
    return math.hypot(x1 - x0 + 1, y1 - y0 + 1)


DENSE_KEY_LIMIT = 20_000_000


@njit(cache=True)
def _pair_histogram(xs, ys, coef, reach, half, base, hist):
    # xs sorted ascending; each unordered pair is counted as d and -d
    n = xs.shape[0]
    lim2 = reach * reach + 1e-9
    b2 = base * base
    b3 = b2 * base
    zero = half * b3 + half * b2 + half * base + half
    hist[zero] += n
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i + 1, n):
            dx = xs[j] - xi
            if dx > reach:
                break
            dy = ys[j] - yi
            if dx * dx + dy * dy > lim2:
                continue
            k = ((coef[j, 0] - coef[i, 0]) * b3 + (coef[j, 1] - coef[i, 1]) * b2
                 + (coef[j, 2] - coef[i, 2]) * base + (coef[j, 3] - coef[i, 3]))
            hist[zero + k] += 1
            hist[zero - k] += 1


def _pair_keys_blocked(pos, coef, reach, half, base, block):
    """Memory-bounded numpy fallback for key ranges too large for a dense histogram."""
    xs = pos[:, 0]
    lim2 = reach * reach + 1e-9
    pieces = []
    for start in range(0, len(pos), block):
        stop = min(start + block, len(pos))
        lo = int(np.searchsorted(xs, xs[start] - reach, "left"))
        hi = int(np.searchsorted(xs, xs[stop - 1] + reach, "right"))
        dp = pos[lo:hi][None, :, :] - pos[start:stop][:, None, :]
        ii, jj = np.nonzero((dp ** 2).sum(axis=-1) <= lim2)
        dn = coef[lo:hi][jj] - coef[start:stop][ii] + half
        keys = ((dn[:, 0] * base + dn[:, 1]) * base + dn[:, 2]) * base + dn[:, 3]
        pieces.append(np.unique(keys, return_counts=True))
    allk = np.concatenate([p[0] for p in pieces])
    allc = np.concatenate([p[1] for p in pieces])
    keys, inv = np.unique(allk, return_inverse=True)
    return keys, np.bincount(inv, weights=allc).astype(np.int64)


def empirical_autocorrelation(patch: ModelSetPatch, max_length: float | None = None,
                              differences=None, block: int = 512) -> EmpiricalAutocorrelation:
    """Pair-difference histogram of a patch divided by ``pi r^2``.

    ``max_length`` keeps only differences with ``|d| <= max_length``; pairs
    are windowed on the sorted x coordinate so the cost scales with it.
    ``differences`` evaluates just the listed lattice vectors instead.
    """
    vol = math.pi * patch.radius ** 2
    if differences is not None:
        diffs = [LatticeVector(*d) for d in differences]
        if not diffs or not len(patch):
            return EmpiricalAutocorrelation(patch.radius, {d: 0.0 for d in diffs}, max_length)
        coef = patch.coefficients
        span = int(np.abs(coef).max()) + max(max(abs(c) for c in d) for d in diffs)
        # linear mixed-radix key, injective while |components| <= span
        radix = np.int64(2 * span + 1)
        scale = np.array([radix ** 3, radix ** 2, radix, 1], dtype=np.int64)
        keys = np.sort(coef @ scale)
        weights = {}
        for d in diffs:
            shifted = keys - int(np.dot(np.array(d, dtype=np.int64), scale))
            idx = np.searchsorted(keys, shifted).clip(max=len(keys) - 1)
            weights[d] = int((keys[idx] == shifted).sum()) / vol
        return EmpiricalAutocorrelation(patch.radius, weights, max_length)

    n_pts = len(patch)
    if n_pts == 0:
        return EmpiricalAutocorrelation(patch.radius, {}, max_length)
    reach = 2 * patch.radius if max_length is None else max_length
    order = np.argsort(patch.positions[:, 0], kind="stable")
    pos = np.ascontiguousarray(patch.positions[order])
    coef = np.ascontiguousarray(patch.coefficients[order])

    # |dn_i| <= (|d| + |d*|) / 2 bounds the key range
    half = int(math.floor((reach + _internal_diameter(patch.window)) / 2)) + 1
    base = 2 * half + 1
    if base ** 4 <= DENSE_KEY_LIMIT:
        hist = np.zeros(base ** 4, dtype=np.int64)
        _pair_histogram(pos[:, 0].copy(), pos[:, 1].copy(), coef, reach, half, base, hist)
        keys = np.nonzero(hist)[0]
        counts = hist[keys]
    else:
        keys, counts = _pair_keys_blocked(pos, coef, reach, half, base, block)
    weights = {}
    for key, c in zip(keys.tolist(), counts.tolist()):
        n4 = key % base
        key //= base
        n3 = key % base
        key //= base
        n2 = key % base
        n1 = key // base
        weights[LatticeVector(n1 - half, n2 - half, n3 - half, n4 - half)] = c / vol
    return EmpiricalAutocorrelation(patch.radius, weights, max_length)


def lens_fraction(distance: float, radius: float) -> float:
    """Area of ``B_r & (B_r + d)`` relative to ``B_r`` for ``|d| = distance``."""
    u = distance / (2 * radius)
    if u >= 1:
        return 0.0
    return (2 / math.pi) * (math.acos(u) - u * math.sqrt(1 - u * u))


def leading_differences(patch: ModelSetPatch, count: int, start_length: float | None = None,
                        slack: float = 0.1) -> list[tuple[LatticeVector, float]]:
    """The ``count`` largest empirical weights over all differences.

    The search radius grows until the ``count``-th weight beats the largest
    weight any longer difference could carry, ``eta(0)`` times the lens
    fraction, inflated by ``slack`` for the finite-patch discrepancy.
    """
    eta0 = float(OCTAGONAL.lattice_density * patch.window.area)
    length = patch.radius / 2 if start_length is None else start_length
    while True:
        emp = empirical_autocorrelation(patch, max_length=length)
        top = emp.top(count)
        if length >= 2 * patch.radius:
            return top
        if len(top) == count and top[-1][1] > eta0 * lens_fraction(length, patch.radius) * (1 + slack):
            return top
        length = min(2 * patch.radius, length * 1.5)


def central_eta_ranking(window: Polyomino, patch: ModelSetPatch, count: int,
                        max_length: float) -> list[AutocorrCoefficient]:
    """Largest ``eta`` among differences occurring with ``|d| <= max_length``."""
    emp = empirical_autocorrelation(patch, max_length=max_length)
    coeffs = eta_coefficients(window, emp.weights)
    coeffs.sort(key=lambda c: (-float(c.eta), c.location))
    return coeffs[:count]


def direct_length(d) -> float:
    n1, n2, n3, n4 = d
    return math.hypot(n1 + (n2 - n4) * S, n3 + (n2 + n4) * S)


def homometric(wa: Polyomino, wb: Polyomino) -> bool:
    """Model sets in the same scheme are homometric iff the window covariograms agree."""
    return covariogram_equal(wa, wb)
