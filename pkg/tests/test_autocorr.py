import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from aperimet import autocorr
from aperimet.autocorr import (central_eta_ranking, direct_length, empirical_autocorrelation, eta,
                               homometric, lens_fraction, leading_differences)
from aperimet.cutproject import generate_patch
from aperimet.quadring import LatticeVector, QSqrt2
from aperimet.window import Polyomino, covariogram_eval

S = 1 / math.sqrt(2)


def brute_pairs(patch, max_length=None):
    vol = math.pi * patch.radius ** 2
    c = Counter()
    pos = patch.positions
    for i, a in enumerate(patch.vectors):
        for j, b in enumerate(patch.vectors):
            if max_length is not None and np.hypot(*(pos[j] - pos[i])) > max_length + 1e-9:
                continue
            c[LatticeVector(*(x - y for x, y in zip(b, a)))] += 1
    return {d: n / vol for d, n in c.items()}


@pytest.fixture(scope="module")
def small(pair):
    return generate_patch(pair.left, 6.0)


def test_eta_origin_and_float(pair):
    assert eta(pair.left, (0, 0, 0, 0)) == QSqrt2(Fraction(15, 4))
    for n in [(1, 0, 0, 0), (0, 1, 0, 0), (1, -1, 2, 1), (3, 2, -1, 0)]:
        n1, n2, n3, n4 = n
        star = (n1 - S * (n2 - n4), n3 - S * (n2 + n4))
        assert math.isclose(float(eta(pair.left, n)), covariogram_eval(pair.left, star) / 4, abs_tol=1e-12)
        assert eta(pair.left, n) == eta(pair.left, tuple(-c for c in n))


def test_empirical_matches_brute(small):
    full = empirical_autocorrelation(small)
    brute = brute_pairs(small)
    assert full.weights.keys() == brute.keys()
    assert all(math.isclose(full.weights[d], brute[d]) for d in brute)


def test_windowed_and_listed_paths(small):
    emp = empirical_autocorrelation(small, max_length=3.0)
    assert emp.weights == pytest.approx(brute_pairs(small, 3.0))
    keys = sorted(emp.weights)[:40]
    listed = empirical_autocorrelation(small, differences=keys)
    full = empirical_autocorrelation(small)
    assert all(listed[d] == full[d] for d in keys)


def test_blocked_fallback_agrees(small, monkeypatch):
    dense = empirical_autocorrelation(small, max_length=4.0)
    monkeypatch.setattr(autocorr, "DENSE_KEY_LIMIT", 0)
    blocked = empirical_autocorrelation(small, max_length=4.0, block=37)
    assert dense.weights == blocked.weights


def test_lens_fraction():
    assert lens_fraction(0, 1) == 1
    assert lens_fraction(2, 1) == 0
    # Monte Carlo-free check: half-distance lens against numeric integration
    r, d = 1.0, 0.7
    xs = np.linspace(-1, 1, 4001)
    X, Y = np.meshgrid(xs, xs)
    inside = (X ** 2 + Y ** 2 < 1) & ((X - d) ** 2 + Y ** 2 < 1)
    approx = inside.sum() * (xs[1] - xs[0]) ** 2 / math.pi
    assert abs(lens_fraction(d, r) - approx) < 2e-3


def test_leading_differences_are_top(small):
    top = leading_differences(small, 10)
    full = empirical_autocorrelation(small).top(10)
    assert [w for _, w in top] == pytest.approx([w for _, w in full])
    assert top[0][0] == LatticeVector(0, 0, 0, 0)


def test_central_ranking(pair, small):
    ranked = central_eta_ranking(pair.left, small, 5, 2.0)
    assert ranked[0].location == LatticeVector(0, 0, 0, 0)
    values = [float(c.eta) for c in ranked]
    assert values == sorted(values, reverse=True)
    assert all(direct_length(c.location) <= 2.0 + 1e-9 for c in ranked)


def test_homometric(pair):
    assert homometric(pair.left, pair.right)
    assert not homometric(pair.left, Polyomino.from_cells([(0, 0)]))


def test_eta_spec_examples(pair):
    cell = Polyomino.from_cells([(0, 0)])
    assert eta(cell, (1, 0, 0, 0)) == 0
    assert eta(pair.left, (20, 0, 0, 0)) == 0
    assert eta(pair.left, (2, 1, -1, 3)) == eta(pair.left, (-2, -1, 1, -3))


def test_single_point_patch():
    patch = generate_patch(Polyomino.from_cells([(0, 0)]), 0.1)
    emp = empirical_autocorrelation(patch)
    assert emp.weights == {LatticeVector(0, 0, 0, 0): 1 / (math.pi * 0.01)}


def test_occurring_differences_have_positive_eta(pair, small):
    emp = empirical_autocorrelation(small)
    assert all(eta(pair.left, d) > 0 for d in emp.weights)


def test_difference_windows_not_homometric(pair):
    from aperimet.search import difference_windows
    a, b = difference_windows(pair.left, pair.right)
    assert not homometric(a, b)
