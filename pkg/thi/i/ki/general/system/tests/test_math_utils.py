import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from util.mathematik import MathFunctions


def test_kron_kette_order():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.diag([1.0, 2.0, 3.0])
    assert_allclose(MathFunctions.kron_kette([a, b, np.eye(2)]), np.kron(np.kron(a, b), np.eye(2)))
    assert MathFunctions.kron_kette([b]).dtype == np.complex128
    with pytest.raises(ValueError):
        MathFunctions.kron_kette([])


@given(st.integers(1, 9))
def test_spin_x_spectrum(dim):
    spin = (dim - 1) / 2
    sx = MathFunctions.spin_x(dim)
    assert_allclose(np.linalg.eigvalsh(sx), np.arange(-spin, spin + 1), atol=1e-12)
    assert np.array_equal(sx, sx.T)


def test_spin_x_half():
    assert_allclose(MathFunctions.spin_x(2), [[0.0, 0.5], [0.5, 0.0]])
    with pytest.raises(ValueError):
        MathFunctions.spin_x(0)


def test_trapez_kumulativ_linear_exact():
    t = np.linspace(0.0, 2.0, 21)
    assert_allclose(MathFunctions.trapez_kumulativ(t, 0.1), 0.5 * t**2, atol=1e-14)
    zeilen = np.vstack([t, 2 * t])
    assert_allclose(MathFunctions.trapez_kumulativ(zeilen, 0.1, axis=1)[1], t**2, atol=1e-14)
    assert_allclose(MathFunctions.trapez_kumulativ(np.array([3.0]), 0.1), [0.0])


def test_panels_exact_for_polynomials():
    knoten, gewichte = MathFunctions.gauss_legendre_panele([0.0, 1.0, 3.0], 3)
    assert knoten.size == 6
    assert gewichte @ knoten**5 == pytest.approx(3.0**6 / 6, rel=1e-13)
    with pytest.raises(ValueError):
        MathFunctions.gauss_legendre_panele([0.0, 0.0, 1.0], 3)
    with pytest.raises(ValueError):
        MathFunctions.gauss_legendre_panele([0.0, 1.0], 0)


def test_uniform_rule():
    knoten, gewichte = MathFunctions.gauss_legendre_gleichmaessig(0.0, math.pi, 100)
    assert knoten.size == 100
    assert gewichte @ np.sin(knoten) == pytest.approx(2.0, rel=1e-13)


@pytest.mark.parametrize("anker, ende", [(0.0, 10.0), (10.0, 0.0)])
def test_geometric_rule(anker, ende):
    knoten, gewichte = MathFunctions.gauss_legendre_geometrisch(anker, ende, 12)
    assert np.all(np.diff(knoten) > 0.0)
    assert knoten.min() > 0.0
    assert knoten.max() < 10.0
    assert gewichte @ np.exp(-knoten) == pytest.approx(1.0 - math.exp(-10.0), rel=1e-12)


def test_geometric_rule_errors():
    with pytest.raises(ValueError):
        MathFunctions.gauss_legendre_geometrisch(1.0, 1.0, 4)
    with pytest.raises(ValueError):
        MathFunctions.gauss_legendre_geometrisch(0.0, 1.0, 0)


def test_golden_minimum():
    x, f = MathFunctions.golden_minimum(lambda x: (x - 0.3) ** 2, 0.0, 0.25, 1.0, xtol=1e-8)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert f == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        MathFunctions.golden_minimum(abs, 1.0, 0.0, 2.0)


def test_namespace_not_instantiable():
    with pytest.raises(TypeError):
        MathFunctions()
