import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from pascs_qkd.special import (
    MAX_FACTORIAL,
    bivariate_hermite,
    bivariate_hermite_sum,
    factorial,
    hermite_functions,
    hermite_phys,
    laguerre,
    laguerre_sum,
)

reals = st.floats(-4, 4, allow_nan=False)


def test_factorial_table_matches_math():
    for n in range(MAX_FACTORIAL + 1):
        assert factorial(n) == pytest.approx(math.factorial(n), rel=1e-15)
    with pytest.raises(ValueError):
        factorial(MAX_FACTORIAL + 1)
    with pytest.raises(ValueError):
        factorial(-1)


def test_laguerre_low_orders():
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(laguerre(0, x), 1.0)
    np.testing.assert_allclose(laguerre(1, x), 1 - x)
    np.testing.assert_allclose(laguerre(2, x), 0.5 * (x**2 - 4 * x + 2))


@given(st.integers(0, 12), reals)
def test_laguerre_recurrence_matches_sum(n, x):
    assert laguerre(n, x) == pytest.approx(laguerre_sum(n, x), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 3, 7, 15])
def test_laguerre_matches_scipy(n):
    x = np.linspace(-5, 10, 31)
    np.testing.assert_allclose(laguerre(n, x), sp.eval_laguerre(n, x), rtol=1e-10, atol=1e-10)


def test_bivariate_hermite_low_orders():
    e1, e2 = 0.7 - 0.2j, 1.3 + 0.4j
    assert bivariate_hermite(0, 0, e1, e2) == 1
    assert bivariate_hermite(1, 0, e1, e2) == pytest.approx(e1)
    assert bivariate_hermite(0, 1, e1, e2) == pytest.approx(e2)
    assert bivariate_hermite(1, 1, e1, e2) == pytest.approx(e1 * e2 - 1)


@given(st.integers(0, 6), st.integers(0, 6), reals, reals, reals, reals)
def test_bivariate_hermite_recurrence_matches_sum(p, q, a, b, c, d):
    e1, e2 = complex(a, b), complex(c, d)
    assert bivariate_hermite(p, q, e1, e2) == pytest.approx(bivariate_hermite_sum(p, q, e1, e2), rel=1e-9, abs=1e-7)


@given(st.integers(0, 6), st.integers(0, 6), reals, reals, reals, reals)
def test_bivariate_hermite_swap_symmetry(p, q, a, b, c, d):
    e1, e2 = complex(a, b), complex(c, d)
    assert bivariate_hermite(p, q, e1, e2) == pytest.approx(bivariate_hermite(q, p, e2, e1), rel=1e-9, abs=1e-9)


@given(st.integers(0, 8), st.floats(-3, 3))
def test_hermite_phys_matches_scipy(n, x):
    assert hermite_phys(n, x) == pytest.approx(sp.eval_hermite(n, x), rel=1e-10, abs=1e-8)


def test_hermite_functions_orthonormal():
    x, w = np.polynomial.legendre.leggauss(200)
    x, w = 8 * x, 8 * w
    psi = hermite_functions(20, x)
    assert psi.shape == (21, 200)
    gram = (psi * w) @ psi.T
    np.testing.assert_allclose(gram, np.eye(21), atol=1e-12)


def test_hermite_functions_vacuum_density():
    x = np.linspace(-2, 2, 9)
    psi0 = hermite_functions(0, x)[0]
    np.testing.assert_allclose(psi0**2, np.sqrt(2 / np.pi) * np.exp(-2 * x**2))
