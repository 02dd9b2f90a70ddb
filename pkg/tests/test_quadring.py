import math
import random
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from aperimet.quadring import (BASIS_MATRIX, OCTAGONAL, SQRT2, LatticeVector, QSqrt2, QuadHalf, QuadInt,
                               direct_fast, direct_image, direct_on_half_module, dual_basis_matrix,
                               exact_determinant, floor_surd, solve_coefficients, star_by_conjugation,
                               star_fast, star_image, star_on_half_module, surd_sign)

ints = st.integers(-10**6, 10**6)
r2 = sympy.sqrt(2)


def sym(x):
    """sympy value of a QuadInt / QuadHalf, used as an independent oracle."""
    if isinstance(x, QuadHalf):
        return (x.p + x.q * r2) / 2
    return x.p + x.q * r2


@given(ints, ints)
def test_sign_matches_sympy(p, q):
    assert QuadInt(p, q).sign() == int(sympy.sign(p + q * r2))
    assert surd_sign(p, q) == QuadInt(p, q).sign()


def test_sign_against_float_many():
    rng = random.Random(1)
    for _ in range(100_000):
        p, q = rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4)
        v = p + q * math.sqrt(2)
        if abs(v) > 1e-6:
            assert QuadInt(p, q).sign() == (1 if v > 0 else -1)


def test_sign_near_units():
    # (1 + sqrt2)^k and its conjugate get arbitrarily close to integers
    u = QuadInt(1, 1)
    x = QuadInt(1, 0)
    for _ in range(40):
        x = x * u
        c = x.conjugate()
        assert c.sign() == (1 if sym(c) > 0 else -1)
        assert (x * c).q == 0 and abs((x * c).p) == 1


@given(ints, ints, ints, ints)
def test_ring_ops(a, b, c, d):
    x, y = QuadInt(a, b), QuadInt(c, d)
    assert sympy.expand(sym(x * y) - sym(x) * sym(y)) == 0
    assert sym(x + y) == sym(x) + sym(y)
    assert sym(x - y) == sym(x) - sym(y)


@given(ints, ints, ints, ints)
def test_quadhalf_order(a, b, c, d):
    x, y = QuadHalf(a, b), QuadHalf(c, d)
    assert (x < y) == bool(sym(x) < sym(y))
    assert (x == y) == (sympy.simplify(sym(x) - sym(y)) == 0)
    assert sym(x * QuadInt(c, d)).equals(sym(x) * (c + d * r2))


@given(ints, ints, st.integers(-50, 50), st.integers(1, 50))
def test_compare_rational(a, b, num, den):
    x = QuadHalf(a, b)
    r = Fraction(num, den)
    expected = int(sympy.sign(sym(x) - sympy.Rational(num, den)))
    assert x.compare_rational(r) == expected


@given(ints, ints, st.integers(1, 1000))
def test_floor_surd(a, b, d):
    assert floor_surd(a, b, d) == int(sympy.floor((a + b * r2) / d))


def test_qsqrt2_field():
    x = QSqrt2(Fraction(3, 2), Fraction(-1, 3))
    y = QSqrt2(2, 5)
    assert (x / y) * y == x
    assert x.norm() == x.a ** 2 - 2 * x.b ** 2
    assert math.floor(QSqrt2(0, 1)) == 1
    assert QSqrt2(0, 1) * QSqrt2(0, 1) == 2


def test_basis_constants():
    assert abs(exact_determinant(BASIS_MATRIX)) == 4
    assert OCTAGONAL.lattice_density == Fraction(1, 4)
    # B^t B = 2 I checked entrywise with the float matrix (independent of exact path)
    import numpy as np
    b = np.array([[float(e) for e in row] for row in BASIS_MATRIX])
    assert np.allclose(b.T @ b, 2 * np.eye(4))
    dual = np.array([[float(e) for e in row] for row in dual_basis_matrix()])
    assert np.allclose(dual, b / 2)
    assert np.allclose(dual.T @ b, np.eye(4))


def _float_images(n):
    s = 1 / math.sqrt(2)
    n1, n2, n3, n4 = n
    return ((n1 + s * (n2 - n4), n3 + s * (n2 + n4)), (n1 - s * (n2 - n4), n3 - s * (n2 + n4)))


@given(st.tuples(*[st.integers(-500, 500)] * 4))
def test_images_against_float(n):
    d, s = _float_images(n)
    assert all(math.isclose(float(a), b, abs_tol=1e-9) for a, b in zip(direct_image(n), d))
    assert all(math.isclose(float(a), b, abs_tol=1e-9) for a, b in zip(star_image(n), s))
    assert direct_fast(n) == direct_image(n)
    assert star_fast(n) == star_image(n)
    assert star_by_conjugation(n) == star_image(n)


@given(st.tuples(*[st.integers(-500, 500)] * 4))
def test_half_module(n):
    d, s = _float_images(n)
    kx, ky = direct_on_half_module(n)
    sx, sy = star_on_half_module(n)
    assert math.isclose(float(kx), d[0] / 2, abs_tol=1e-9)
    assert math.isclose(float(sy), s[1] / 2, abs_tol=1e-9)
    assert sx == kx.conjugate() and sy == ky.conjugate()


@given(st.tuples(*[st.integers(-500, 500)] * 4))
def test_solve_roundtrip(n):
    x = tuple(c.to_field() for c in direct_image(n))
    xs = tuple(c.to_field() for c in star_image(n))
    assert solve_coefficients(x, xs) == LatticeVector(*n)


def test_solve_rejects_non_lattice():
    half = QSqrt2(Fraction(1, 2))
    assert solve_coefficients((half, QSqrt2(0)), (half, QSqrt2(0))) is None


def test_direct_injective_small_box():
    seen = {}
    rng = range(-3, 4)
    for n in ((a, b, c, d) for a in rng for b in rng for c in rng for d in rng):
        key = direct_image(n)
        assert key not in seen
        seen[key] = n


def test_lattice_vector_arith():
    a = LatticeVector(1, 2, 3, 4)
    assert a + a == LatticeVector(2, 4, 6, 8)
    assert -a == LatticeVector(-1, -2, -3, -4)
    assert a - a == LatticeVector(0, 0, 0, 0)
    assert a * 3 == LatticeVector(3, 6, 9, 12)
    assert SQRT2 == math.sqrt(2)


def test_batch_images_match_scalar():
    import numpy as np
    from aperimet.quadring import images_array, star_by_conjugation_array
    rng = np.random.default_rng(8)
    vecs = rng.integers(-10**9, 10**9, size=(500, 4))
    p, q = images_array(vecs)
    cp, cq = star_by_conjugation_array(vecs)
    for i, row in enumerate(vecs.tolist()):
        d, s = direct_image(row), star_image(row)
        assert [(c.p, c.q) for c in (*d, *s)] == list(zip(p[i].tolist(), q[i].tolist()))
        assert [(c.p, c.q) for c in star_by_conjugation(row)] == list(zip(cp[i].tolist(), cq[i].tolist()))


def test_batch_overflow_guard():
    import pytest
    from aperimet.quadring import images_array
    with pytest.raises(OverflowError):
        images_array([[2 ** 58, 0, 0, 0]])
