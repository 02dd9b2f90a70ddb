import math
from fractions import Fraction
from itertools import product

import pytest

from aperimet.cutproject import (coefficient_bound, density_estimate, generate_patch, genericity_check,
                                 limit_density, patch_difference, window_circumradius)
from aperimet.errors import BoundaryHit
from aperimet.quadring import LatticeVector, star_image
from aperimet.search import difference_windows
from aperimet.window import Polyomino

S = 1 / math.sqrt(2)


def brute_patch(window: Polyomino, r: float) -> set:
    """Scan the whole coefficient box with float geometry (margins checked)."""
    bound = coefficient_bound(r, window_circumradius(window))
    ax, ay = float(window.anchor[0]), float(window.anchor[1])
    out = set()
    rng = range(-bound, bound + 1)
    for n in product(rng, rng, rng, rng):
        n1, n2, n3, n4 = n
        x, y = n1 + S * (n2 - n4), n3 + S * (n2 + n4)
        if x * x + y * y >= r * r:
            continue
        xs, ys = n1 - S * (n2 - n4) - ax, n3 - S * (n2 + n4) - ay
        fx, fy = math.floor(xs), math.floor(ys)
        assert min(xs - fx, fx + 1 - xs, ys - fy, fy + 1 - ys) > 1e-9
        if (fx, fy) in window.cells:
            out.add(LatticeVector(*n))
    return out


def test_matches_brute_force():
    w = Polyomino.from_cells([(0, 0), (1, 0), (1, 1)])
    patch = generate_patch(w, 4.0)
    assert set(patch.vectors) == brute_patch(w, 4.0)
    assert len(patch.vectors) == len(set(patch.vectors))


def test_invariants(pair):
    patch = generate_patch(pair.left, 8.0)
    for n in patch.vectors:
        xs, ys = star_image(n)
        cx, cy = math.floor(float(xs) + 0.5), math.floor(float(ys) + 0.5)
        assert (cx, cy) in pair.left.cells
    assert (patch.positions ** 2).sum(axis=1).max() < 64


def test_single_cell_origin():
    w = Polyomino.from_cells([(0, 0)])
    patch = generate_patch(w, 0.1)
    assert patch.vectors == (LatticeVector(0, 0, 0, 0),)


def test_far_window():
    # expected count is area/4 * pi r^2 wherever the window sits
    w = Polyomino.from_cells([(300, 300)])
    assert len(generate_patch(w, 0.01)) == 0
    far = generate_patch(Polyomino.from_cells([(1000, 1000)]), 2.0)
    for n in far.vectors:
        xs, ys = star_image(n)
        assert 999.5 < float(xs) < 1000.5 and 999.5 < float(ys) < 1000.5


def test_boundary_hit():
    w = Polyomino.from_cells([(0, 0)], anchor=(Fraction(0), Fraction(0)))
    with pytest.raises(BoundaryHit):
        generate_patch(w, 3.0)


def test_genericity(pair):
    assert genericity_check(pair.left, 20)
    assert not genericity_check(pair.left.with_anchor((Fraction(0), Fraction(0))), 20)
    assert genericity_check(Polyomino.from_cells([(10**6, 0)]), 3)


def test_density_converges(pair):
    target = float(limit_density(pair.left))
    assert target == 3.75
    patch = generate_patch(pair.left, 30.0)
    assert abs(density_estimate(patch) - target) / target < 0.05


def test_difference_windows(pair):
    a = generate_patch(pair.left, 25.0)
    b = generate_patch(pair.right, 25.0)
    assert patch_difference(a, a) == []
    only_a = patch_difference(a, b)
    wa, wb = difference_windows(pair.left, pair.right)
    assert wa.area == 2 and wb.area == 2
    # points only in the first patch are exactly that patch for the difference window
    assert set(only_a) == set(generate_patch(wa, 25.0).vectors)
    with pytest.raises(ValueError):
        patch_difference(a, generate_patch(pair.right, 24.0))
