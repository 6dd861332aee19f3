from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from adjunctions.coeff import Grid, GridFunction, Poly, odd_coordinate, parity_split, reflect

from conftest import polys

x = Poly.x()


def naive_coeffs(p):
    return list(p.coefficients)


def test_construction_and_printing():
    p = x ** 3 + 2 * x ** 2 - 1
    assert p.coefficients == (-1, 0, 2, 1)
    assert p.degree == 3
    assert str(p) == "x^3 + 2x^2 - 1"
    assert Poly().degree == -1 and Poly().is_zero
    assert Poly([Fraction(1, 2), 0, 0]) == Poly([Fraction(2, 4)])
    assert p(2) == 15


@pytest.mark.parametrize(
    "p, even, odd",
    [
        (x ** 3 + 2 * x ** 2 - 1, 2 * x ** 2 - 1, x ** 3),
        (Poly(), Poly(), Poly()),
        ((1 + x) ** 2, 1 + x ** 2, 2 * x),
    ],
)
def test_parity_split_examples(p, even, odd):
    assert parity_split(p) == (even, odd)


@pytest.mark.parametrize(
    "p, r", [(x, -x), (x ** 2 + 1, x ** 2 + 1), (x ** 3 - x ** 2, -x ** 3 - x ** 2)]
)
def test_reflect_examples(p, r):
    assert reflect(p) == r


def test_odd_coordinate_examples():
    assert odd_coordinate(x ** 3, x) == x ** 2
    assert odd_coordinate(3 * x + x ** 3, x) == 3 + x ** 2
    with pytest.raises(ValueError):
        odd_coordinate(x ** 2, x)
    with pytest.raises(ValueError):
        odd_coordinate(x ** 3, x ** 2)


def test_divide_exact_rejects_remainder():
    assert (x ** 3 + x).divide_exact(x) == x ** 2 + 1
    with pytest.raises(ValueError):
        (x ** 2 + 1).divide_exact(x)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p - p == Poly()
    assert p * 1 == p


@given(polys(), polys())
def test_product_against_convolution(p, q):
    a, b = naive_coeffs(p), naive_coeffs(q)
    conv = [Fraction(0)] * max(len(a) + len(b) - 1, 0)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            conv[i + j] += u * v
    assert p * q == Poly(conv)


@given(polys(), polys())
def test_parity_of_products(p, q):
    pe, po = p.parity_split()
    qe, qo = q.parity_split()
    even, odd = (p * q).parity_split()
    assert odd == pe * qo + po * qe
    assert even == pe * qe + po * qo


@given(polys(), polys())
def test_reflect_is_ring_homomorphism(p, q):
    assert reflect(p * q) == reflect(p) * reflect(q)
    assert reflect(p + q) == reflect(p) + reflect(q)
    assert reflect(reflect(p)) == p


@given(polys())
def test_parity_split_idempotent_and_complete(p):
    even, odd = p.parity_split()
    assert even + odd == p
    assert even.parity_split() == (even, Poly())
    assert reflect(even) == even and reflect(odd) == -odd


@given(polys())
def test_evaluation_matches_coefficients(p):
    t = Fraction(3, 7)
    assert p(t) == sum(c * t ** k for k, c in enumerate(p.coefficients))
    assert reflect(p)(t) == p(-t)


def test_distance_is_exact_zero_only_on_equality():
    p = x ** 2 + Fraction(1, 3)
    assert p.distance(x ** 2 + Fraction(2, 6)) == 0.0
    assert p.distance(p + Fraction(1, 10 ** 30)) > 0.0


def test_grid_is_symmetric_and_avoids_zero():
    g = Grid.uniform(64, 4.0)
    assert 0.0 not in g.full
    np.testing.assert_array_equal(g.full, -g.full[::-1])
    assert g.size == 128
    with pytest.raises(ValueError):
        Grid([0.0, 1.0])


def test_grid_reflection_matches_pointwise_definition(rng):
    g = Grid.uniform(32, 3.0)
    f = GridFunction(g, rng.standard_normal(64))
    pts = g.full
    want = [f.values[np.argmin(np.abs(pts + t))] for t in pts]
    np.testing.assert_array_equal(f.reflect().values, want)


def test_grid_parity_identities(rng):
    g = Grid.uniform(256, 8.0)
    for _ in range(200):
        p = GridFunction(g, rng.standard_normal(512) + 1j * rng.standard_normal(512))
        q = GridFunction(g, rng.standard_normal(512) + 1j * rng.standard_normal(512))
        pe, po = p.parity_split()
        qe, qo = q.parity_split()
        even, odd = (p * q).parity_split()
        assert odd.distance(pe * qo + po * qe) <= 1e-12
        assert even.distance(pe * qe + po * qo) <= 1e-12
        assert (p * q).reflect() == p.reflect() * q.reflect()


def test_grid_odd_coordinate():
    g = Grid.uniform(16, 2.0)
    tau = g.evaluate(np.tanh)
    a = g.evaluate(lambda t: np.cos(t) + t ** 2)
    assert odd_coordinate(a * tau, tau).distance(a) <= 1e-14
    with pytest.raises(ValueError):
        odd_coordinate(a, tau)
    with pytest.raises(ValueError):
        odd_coordinate(a * tau, g.evaluate(lambda t: np.where(np.abs(t) < 0.2, 0.0, t)))


def test_grid_functions_are_immutable(rng):
    f = Grid.uniform(4, 1.0).evaluate(np.sin)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_two_by_two_norms_match_svd(rng):
    g = Grid.uniform(200, 3.0)
    v = rng.standard_normal((400, 2, 2)) + 1j * rng.standard_normal((400, 2, 2))
    v[:50] *= 1e-9
    v[50:60, 1] = 0
    f = GridFunction(g, v)
    np.testing.assert_allclose(f.pointwise_norms(), np.linalg.norm(v, ord=2, axis=(1, 2)), rtol=1e-13)
