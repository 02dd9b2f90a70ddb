import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from aperimet.quadring import QSqrt2, QuadHalf
from aperimet.window import (Polyomino, congruent, covariogram_equal, covariogram_eval,
                             covariogram_fourier_transform, covariogram_grid, difference_body,
                             discrete_autocorrelation, window_fourier_transform)

from conftest import random_polyomino


def raster_overlap(p: Polyomino, v, res: int = 64) -> float:
    """vol(P & (P + v)) by point sampling at cell centres of a 1/res grid.

    Exact for v on the 1/res grid, independent of the pair-count formula."""
    occ = set()
    for x, y in p.cells:
        for i in range(res):
            for j in range(res):
                occ.add((x * res + i, y * res + j))
    sx, sy = round(v[0] * res), round(v[1] * res)
    shifted = {(a + sx, b + sy) for a, b in occ}
    return len(occ & shifted) / res ** 2


def test_trivial_counts():
    assert discrete_autocorrelation(Polyomino.from_cells([(0, 0)])).counts == {(0, 0): 1}
    dom = discrete_autocorrelation(Polyomino.from_cells([(0, 0), (1, 0)]))
    assert dom.counts == {(0, 0): 2, (1, 0): 1, (-1, 0): 1}


def test_u_counts_by_enumeration():
    cells = [(0, 0), (0, 1), (1, 2)]
    expected = {}
    for a, b in product(cells, cells):
        d = (b[0] - a[0], b[1] - a[1])
        expected[d] = expected.get(d, 0) + 1
    u = Polyomino.from_cells(cells, require_connected=False)
    got = discrete_autocorrelation(u).counts
    assert got == expected
    assert got == {(0, 0): 3, (0, 1): 1, (0, -1): 1, (1, 1): 1, (-1, -1): 1, (1, 2): 1, (-1, -2): 1}


def test_covariogram_against_raster():
    rng = random.Random(3)
    for _ in range(6):
        p = random_polyomino(rng, rng.randint(2, 6))
        for _ in range(8):
            v = (Fraction(rng.randint(-200, 200), 64), Fraction(rng.randint(-200, 200), 64))
            assert covariogram_eval(p, v) == Fraction(raster_overlap(p, v)).limit_denominator(64 ** 2)


def test_covariogram_exact_types():
    p = Polyomino.from_cells([(0, 0), (1, 0)])
    assert covariogram_eval(p, (Fraction(1, 2), 0)) == Fraction(3, 2)
    # shift by (1/sqrt2, 0): overlap 2 - 1/sqrt2
    val = covariogram_eval(p, (QuadHalf(0, 1), QuadHalf(0, 0)))
    assert QSqrt2.coerce(val) == QSqrt2(2, Fraction(-1, 2))
    assert isinstance(covariogram_eval(p, (0.3, 0.1)), float)


def test_covariogram_properties_random():
    rng = random.Random(7)
    for _ in range(200):
        p = random_polyomino(rng, rng.randint(1, 8), connected=rng.random() < 0.5)
        body = difference_body(p)
        c = discrete_autocorrelation(p)
        assert c[(0, 0)] == p.area
        assert sum(c.counts.values()) == p.area ** 2
        for _ in range(5):
            v = (Fraction(rng.randint(-60, 60), 7), Fraction(rng.randint(-60, 60), 7))
            g = covariogram_eval(p, v)
            assert g == covariogram_eval(p, (-v[0], -v[1]))
            assert 0 <= g <= p.area
            assert (g > 0) == body.contains(v)


def test_anchor_and_translation_invariance():
    p = Polyomino.from_cells([(0, 0), (1, 0), (1, 1), (2, 1)])
    q = p.translated(5, -3).with_anchor((Fraction(1, 3), Fraction(-2, 7)))
    assert discrete_autocorrelation(p) == discrete_autocorrelation(q)
    assert covariogram_equal(p, q)


def test_reflection_gives_same_covariogram():
    p = Polyomino.from_cells([(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)])
    assert covariogram_equal(p, p.negated())
    assert congruent(p, p.transformed((0, 1, 1, 0)))


def test_difference_body_support():
    p = Polyomino.from_cells([(0, 0), (1, 0)])
    body = difference_body(p)
    assert body.contains((Fraction(19, 10), Fraction(9, 10)))
    assert not body.contains((2, 0))
    assert body.bounding_box() == (-2, -1, 2, 1)
    # outline of the open rectangle (-2,2)x(-1,1): perimeter 12
    assert len(body.boundary_edges()) == 12


def test_fourier_transform_single_cell():
    p = Polyomino.from_cells([(0, 0)])
    k = np.array([[0.0, 0.0], [0.5, 0.0], [1.0, 0.3]])
    ft = window_fourier_transform(p, k)
    # centred unit square: sinc(kx) sinc(ky)
    assert np.allclose(ft, np.sinc(k[:, 0]) * np.sinc(k[:, 1]))


def test_fourier_transform_quadrature():
    p = Polyomino.from_cells([(0, 0), (1, 0), (1, 1)])
    k = np.array([0.37, -0.81])
    m = 200
    t = (np.arange(m) + 0.5) / m
    total = 0j
    for x, y in p.cells:
        X, Y = np.meshgrid(x - 0.5 + t, y - 0.5 + t)
        total += np.exp(2j * np.pi * (k[0] * X + k[1] * Y)).sum() / m ** 2
    assert abs(window_fourier_transform(p, k) - total) < 1e-4


def test_fourier_positivity_random():
    rng = np.random.default_rng(5)
    prng = random.Random(5)
    for _ in range(10):
        p = random_polyomino(prng, prng.randint(1, 10))
        k = rng.uniform(-4, 4, size=(50, 2))
        lhs = covariogram_fourier_transform(discrete_autocorrelation(p).counts, k)
        rhs = np.abs(window_fourier_transform(p, k)) ** 2
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


def test_grid():
    p = Polyomino.from_cells([(0, 0), (1, 0)])
    g = covariogram_grid(p, Fraction(1, 2))
    assert g.xs[0] == -2 and g.xs[-1] == 2 and g.ys[0] == -1
    values = dict(g.samples())
    assert values[(Fraction(0), Fraction(0))] == 2
    assert values[(Fraction(1, 2), Fraction(1, 2))] == Fraction(3, 4)
    with pytest.raises(ValueError):
        covariogram_grid(p, 0)


def test_polyomino_validation():
    with pytest.raises(ValueError):
        Polyomino.from_cells([])
    with pytest.raises(ValueError):
        Polyomino.from_cells([(0, 0), (2, 0)])
    assert Polyomino.from_cells([(0, 0), (2, 0)], require_connected=False).area == 2
    with pytest.raises((TypeError, ValueError)):
        Polyomino.from_cells([(0, 0)], anchor=(0.5, 0.5))
