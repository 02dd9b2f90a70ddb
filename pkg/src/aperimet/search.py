"""Homometric pairs: Minkowski-sum construction, the octagonal example pair,
and exhaustive searches over small polyominoes and 1D integer sets."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .diffraction import ClosedFormCheck, verify_closed_form
from .errors import BudgetExceeded, OverlappingSum, ReconstructionFailed
from .window import (
    Cell,
    SQUARE_ISOMETRIES,
    DiscreteAutocorrelation,
    Polyomino,
    autocorrelation_counts,
    congruent,
    discrete_autocorrelation,
    is_edge_connected,
)

ENUMERATION_BUDGET = 10 ** 8

# fixed polyominoes by cell count (OEIS A001168)
FIXED_POLYOMINO_COUNTS = (
    1, 1, 2, 6, 19, 63, 216, 760, 2725, 9910, 36446, 135268, 505861,
    1903890, 7204874, 27394666, 104592937, 400795844, 1540820542,
)


@dataclass(frozen=True)
class PointConfiguration:
    points: frozenset[Cell]

    def __post_init__(self):
        pts = frozenset((int(x), int(y)) for x, y in self.points)
        if not pts:
            raise ValueError("empty configuration")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable[Cell]) -> PointConfiguration:
        points = list(points)
        if len(set(points)) != len(points):
            raise ValueError("duplicate points")
        return cls(frozenset(points))

    def __len__(self) -> int:
        return len(self.points)

    def negated(self) -> PointConfiguration:
        return PointConfiguration(frozenset((-x, -y) for x, y in self.points))

    def normalized(self) -> PointConfiguration:
        x0 = min(p[0] for p in self.points)
        y0 = min(p[1] for p in self.points)
        return PointConfiguration(frozenset((x - x0, y - y0) for x, y in self.points))

    def difference_counts(self) -> dict[Cell, int]:
        return autocorrelation_counts(self.points)


def minkowski_polyomino(u: PointConfiguration, v: PointConfiguration) -> Polyomino:
    """Cells ``{a + b}``; every sum must occur once."""
    sums = [(a[0] + b[0], a[1] + b[1]) for a in sorted(u.points) for b in sorted(v.points)]
    if len(set(sums)) != len(sums):
        raise OverlappingSum("Minkowski sum is not direct")
    return Polyomino(frozenset(sums), require_connected=False)


class TrigPoly:
    """Finite cosine sums ``sum c * cos(pi*(a*kappa + b*lambda))``.

    Frequencies are kept in units of pi so half-frequencies stay integral;
    ``cos`` is even, so ``(a, b)`` and ``(-a, -b)`` share one key.
    """

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {}
        for freq, c in (terms or {}).items():
            self._add(freq, Fraction(c))

    @staticmethod
    def _key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if (a, b) >= (-a, -b) else (-a, -b)

    def _add(self, freq, c: Fraction) -> None:
        key = self._key(*freq)
        total = self.terms.get(key, Fraction(0)) + c
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    @classmethod
    def const(cls, c) -> TrigPoly:
        return cls({(0, 0): c})

    @classmethod
    def cos(cls, a: int, b: int) -> TrigPoly:
        return cls({(a, b): 1})

    def __add__(self, other) -> TrigPoly:
        other = other if isinstance(other, TrigPoly) else TrigPoly.const(other)
        out = TrigPoly(self.terms)
        for freq, c in other.terms.items():
            out._add(freq, c)
        return out

    __radd__ = __add__

    def __mul__(self, other) -> TrigPoly:
        if not isinstance(other, TrigPoly):
            return TrigPoly({f: c * Fraction(other) for f, c in self.terms.items()})
        out = TrigPoly()
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                # cos x cos y = (cos(x + y) + cos(x - y)) / 2
                out._add((a1 + a2, b1 + b2), c1 * c2 / 2)
                out._add((a1 - a2, b1 - b2), c1 * c2 / 2)
        return out

    __rmul__ = __mul__

    def __call__(self, kappa, lam):
        total = 0.0
        for (a, b), c in self.terms.items():
            total = total + float(c) * np.cos(np.pi * (a * np.asarray(kappa) + b * np.asarray(lam)))
        return total

    def difference_counts(self) -> dict[Cell, int]:
        """Read off ``N(d)`` from ``N(0) + sum_{d != 0} N(d) cos(2 pi k.d)``."""
        counts: dict[Cell, int] = {}
        for (a, b), c in self.terms.items():
            if a % 2 or b % 2:
                raise ValueError(f"frequency {(a, b)} is not an integer difference")
            d = (a // 2, b // 2)
            if d == (0, 0):
                if c.denominator != 1:
                    raise ValueError("non-integral constant term")
                counts[d] = int(c)
                continue
            half = c / 2
            if half.denominator != 1 or half < 0:
                raise ValueError(f"coefficient {c} of {d} is not a pair count")
            counts[d] = counts[(-d[0], -d[1])] = int(half)
        return counts


def printed_factors() -> tuple[TrigPoly, TrigPoly]:
    """The two factors of f(kappa, lambda) exactly as printed."""
    c = TrigPoly.cos
    first = 3 + 2 * c(0, 2) + 4 * c(0, 1) * c(2, 3)
    second = 5 + 6 * c(2, 0) + 2 * c(4, 0) + 4 * (2 * c(1, 0) + c(3, 0)) * c(3, 6)
    return first, second


def configurations_with_differences(target: dict[Cell, int], box_w: int, box_h: int) -> list[PointConfiguration]:
    """All translation-normalized point sets in the box with the given difference counts."""
    size = math.isqrt(sum(target.values()))
    if size * size != sum(target.values()) or target.get((0, 0)) != size:
        raise ValueError("counts are not the difference multiset of a point set")
    # the extent of any solution equals the largest offsets
    wx = max(abs(d[0]) for d in target)
    wy = max(abs(d[1]) for d in target)
    if wx >= box_w or wy >= box_h:
        return []
    cells = [(x, y) for x in range(wx + 1) for y in range(wy + 1)]
    out = []
    for pts in combinations(cells, size):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if min(xs) or min(ys) or max(xs) != wx or max(ys) != wy:
            continue
        if autocorrelation_counts(pts) == target:
            out.append(PointConfiguration(frozenset(pts)))
    return out


@dataclass(frozen=True)
class HomometricPairReport:
    left: Polyomino
    right: Polyomino
    congruent: bool
    certificate: DiscreteAutocorrelation
    factors: tuple[PointConfiguration, PointConfiguration] | None = None
    closed_form: tuple[ClosedFormCheck, ClosedFormCheck] | None = field(default=None, compare=False)


def _overlap(p: Polyomino, q: Polyomino) -> int:
    return len(p.normalized().cells & q.normalized().cells)


def reconstruct_paper_pair(box_w: int = 5, box_h: int = 7) -> HomometricPairReport:
    """Rebuild the 15-cell homometric pair from the factorized intensity formula.

    Both factors are expanded into difference counts, matching 3- and
    5-point configurations are found by exhaustive search, and the pair
    ``u + v`` versus its partner with one factor inverted is kept when it is
    connected, non-congruent and closest in overlap (two cells differ each
    way).  The result is checked against the closed form.
    """
    first, second = printed_factors()
    target_u, target_v = first.difference_counts(), second.difference_counts()
    us = sorted(configurations_with_differences(target_u, box_w, box_h), key=lambda c: sorted(c.points))
    vs = sorted(configurations_with_differences(target_v, box_w, box_h), key=lambda c: sorted(c.points))
    if not us or not vs:
        raise ReconstructionFailed(
            f"factor matches: {len(us)} configurations for the first factor, {len(vs)} for the second")

    best = None
    for u in us:
        for v in vs:
            try:
                p1 = minkowski_polyomino(u, v).normalized()
            except OverlappingSum:
                continue
            for partner in ((u.negated(), v), (u, v.negated())):
                try:
                    p2 = minkowski_polyomino(*partner).normalized()
                except OverlappingSum:
                    continue
                if not (p1.is_connected() and p2.is_connected()) or congruent(p1, p2):
                    continue
                score = _overlap(p1, p2)
                if best is None or score > best[0]:
                    best = (score, p1, p2, u, v)
    if best is None:
        raise ReconstructionFailed("no connected non-congruent Minkowski pair among the factor matches")

    _, p1, p2, u, v = best
    left = Polyomino(p1.cells)
    right = Polyomino(p2.cells)
    cert = discrete_autocorrelation(left)
    if cert != discrete_autocorrelation(right) or left.area != 15:
        raise ReconstructionFailed("reconstructed pair fails the covariogram check")
    checks = (verify_closed_form(left), verify_closed_form(right))
    return HomometricPairReport(left, right, congruent(left, right), cert, (u, v), checks)


def difference_windows(left: Polyomino, right: Polyomino) -> tuple[Polyomino, Polyomino]:
    """Cell sets ``left minus right`` and ``right minus left`` at the shared anchor."""
    a = Polyomino(left.cells - right.cells, left.anchor, require_connected=False)
    b = Polyomino(right.cells - left.cells, right.anchor, require_connected=False)
    return a, b


def enumerate_fixed_polyominoes(n: int, box_w: int | None = None, box_h: int | None = None) -> Iterator[frozenset[Cell]]:
    """Redelmeier's algorithm; each translation class is produced once.

    With a box, growth stops as soon as the bounding box exceeds it.
    """
    if n < 1:
        return
    box_w = box_w or n
    box_h = box_h or n

    def allowed(c: Cell) -> bool:
        return c[1] > 0 or (c[1] == 0 and c[0] >= 0)

    poly: list[Cell] = []
    seen = {(0, 0)}

    def grow(untried: list[Cell], xlo: int, xhi: int, yhi: int):
        untried = list(untried)
        while untried:
            c = untried.pop()
            nxlo, nxhi, nyhi = min(xlo, c[0]), max(xhi, c[0]), max(yhi, c[1])
            if nxhi - nxlo >= box_w or nyhi >= box_h:
                continue
            poly.append(c)
            if len(poly) == n:
                yield frozenset(poly)
            else:
                x, y = c
                new = [nb for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))
                       if allowed(nb) and nb not in seen]
                seen.update(new)
                yield from grow(untried + new, nxlo, nxhi, nyhi)
                seen.difference_update(new)
            poly.pop()

    yield from grow([(0, 0)], 0, 0, 0)


def estimated_fixed_count(n: int) -> float:
    if n < len(FIXED_POLYOMINO_COUNTS):
        return float(FIXED_POLYOMINO_COUNTS[n])
    # growth constant ~4.0626 with the usual n^-1 correction
    return 0.3169 * 4.0626 ** n / n


def minkowski_candidates(n_u: int, n_v: int, box_w: int, box_h: int) -> list[Polyomino]:
    """Connected direct sums ``u + v`` (``|u| = n_u``, ``|v| = n_v``) fitting the box."""

    def normalized_sets(k: int) -> dict[tuple[int, int], list[tuple[Cell, ...]]]:
        by_extent = defaultdict(list)
        cells = [(x, y) for x in range(box_w) for y in range(box_h)]
        for pts in combinations(cells, k):
            if min(p[0] for p in pts) == 0 and min(p[1] for p in pts) == 0:
                by_extent[(max(p[0] for p in pts), max(p[1] for p in pts))].append(pts)
        return by_extent

    us, vs = normalized_sets(n_u), normalized_sets(n_v)
    found: dict[tuple[Cell, ...], Polyomino] = {}
    for (wu, hu), ulist in us.items():
        for (wv, hv), vlist in vs.items():
            if wu + wv >= box_w or hu + hv >= box_h:
                continue
            for u in ulist:
                for v in vlist:
                    sums = {(a[0] + b[0], a[1] + b[1]) for a in u for b in v}
                    if len(sums) != n_u * n_v or not is_edge_connected(sums):
                        continue
                    key = tuple(sorted(sums))
                    if key not in found:
                        found[key] = Polyomino(frozenset(sums))
    return [found[k] for k in sorted(found)]


def search_polyomino_pairs(n_cells: int, box_w: int, box_h: int,
                           candidates: Iterable[Polyomino] | None = None) -> list[HomometricPairReport]:
    """Non-congruent polyominoes sharing a covariogram.

    Without ``candidates`` all fixed ``n_cells``-ominoes fitting the box are
    enumerated (guarded by the enumeration budget).
    """
    if n_cells < 1:
        raise ValueError("n_cells must be positive")
    if candidates is None:
        estimate = estimated_fixed_count(n_cells)
        if estimate > ENUMERATION_BUDGET:
            raise BudgetExceeded(f"about {estimate:.3g} fixed polyominoes exceed the budget")
        polys: Iterable[Polyomino] = (Polyomino(c).normalized() for c in enumerate_fixed_polyominoes(n_cells, box_w, box_h))
    else:
        polys = (p.normalized() for p in candidates if p.area == n_cells)

    groups: dict[tuple, dict[tuple[Cell, ...], Polyomino]] = defaultdict(dict)
    for p in polys:
        fp, rep = oriented_fingerprint(p)
        members = groups[fp]
        cls = p.congruence_key()
        if cls not in members:
            members[cls] = rep
    reports = []
    for fp in sorted(groups):
        classes = groups[fp]
        if len(classes) < 2:
            continue
        cert = DiscreteAutocorrelation(dict(fp))
        for a, b in combinations(sorted(classes), 2):
            reports.append(HomometricPairReport(classes[a], classes[b], False, cert))
    return reports


def oriented_fingerprint(p: Polyomino) -> tuple[tuple, Polyomino]:
    """Smallest autocorrelation fingerprint over the 8 isometries, with the
    orientation of ``p`` realizing it.

    Pair counts transform along with the shape, ``N_{gP}(g d) = N_P(d)``, so
    shapes congruent to homometric partners land in one group with a common
    orientation.
    """
    counts = autocorrelation_counts(p.cells)
    best = None
    for iso in SQUARE_ISOMETRIES:
        a, b, c, d = iso
        fp = tuple(sorted(((a * x + b * y, c * x + d * y), n) for (x, y), n in counts.items()))
        if best is None or fp < best[0]:
            best = (fp, [iso])
        elif fp == best[0]:
            best[1].append(iso)
    fp, isos = best
    rep = min((p.transformed(iso).normalized() for iso in isos), key=lambda q: q.sorted_cells())
    return fp, Polyomino(rep.cells)


def difference_multiset(points: Iterable[int]) -> tuple[int, ...]:
    pts = list(points)
    return tuple(sorted(b - a for a in pts for b in pts))


def search_1d_pairs(n_points: int, max_coord: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs of ``n_points``-subsets of ``{0..max_coord}`` spanning the full range
    with equal difference multisets, not related by translation or reflection."""
    if n_points < 2 or max_coord < 1:
        return []
    if math.comb(max_coord + 1, n_points) > ENUMERATION_BUDGET:
        raise BudgetExceeded("too many subsets")
    groups: dict[tuple[int, ...], set[tuple[int, ...]]] = defaultdict(set)
    for inner in combinations(range(1, max_coord), n_points - 2):
        s = (0, *inner, max_coord)
        mirror = tuple(sorted(max_coord - x for x in s))
        groups[difference_multiset(s)].add(min(s, mirror))
    pairs = []
    for key in sorted(groups):
        reps = sorted(groups[key])
        pairs.extend(combinations(reps, 2))
    return pairs


def smallest_1d_pair(n_range: Iterable[int] = range(4, 7), max_coord_limit: int = 20):
    """First ``(n_points, max_coord)`` in lexicographic order with a nonempty result."""
    for n in n_range:
        for m in range(n - 1, max_coord_limit + 1):
            pairs = search_1d_pairs(n, m)
            if pairs:
                return n, m, pairs
    return None
