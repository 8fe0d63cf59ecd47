from __future__ import annotations

import mpmath
import numpy as np
import pytest

from loxoforge import _kernels
from loxoforge.errors import QuadratureNonConvergent
from loxoforge.quadrature import (CumulativeIntegral, adaptive_simpson, adaptive_simpson_panels,
                                  cumulative_adaptive_simpson)


def test_adaptive_simpson_known_integrals():
    assert adaptive_simpson(np.sin, 0.0, np.pi) == pytest.approx(2.0, abs=1e-10)
    assert adaptive_simpson(np.exp, 0.0, 1.0) == pytest.approx(np.e - 1.0, abs=1e-10)
    ref = float(mpmath.quad(lambda x: 1 / (1 + 25 * x**2), [-1, 1]))
    assert adaptive_simpson(lambda x: 1 / (1 + 25 * x**2), -1.0, 1.0) == pytest.approx(ref, abs=1e-10)


def test_reversed_and_empty_panels():
    out = adaptive_simpson_panels(np.cos, [0.0, 1.0, 2.0], [1.0, 0.0, 2.0], 1e-12)
    np.testing.assert_allclose(out, [np.sin(1.0), -np.sin(1.0), 0.0], atol=1e-12)


def test_cumulative_matches_primitive():
    nodes = np.linspace(0.1, 3.0, 31)
    cum = cumulative_adaptive_simpson(lambda x: 1.0 / x, nodes)
    np.testing.assert_allclose(cum, np.log(nodes / nodes[0]), atol=1e-10)


def test_non_finite_integrand_raises():
    with np.errstate(all="ignore"), pytest.raises(QuadratureNonConvergent):
        adaptive_simpson(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)


def test_depth_limit_raises():
    with pytest.raises(QuadratureNonConvergent):
        adaptive_simpson(lambda x: np.sign(x - 0.3) * np.sqrt(np.abs(x - 0.3)) * 1e6, 0.0, 1.0,
                         tol=1e-18, max_depth=5)


def test_cumulative_integral_queries():
    ci = CumulativeIntegral(np.cos, 0.0, 3.0, u_ref=1.0, value_ref=np.sin(1.0))
    u = np.linspace(0.0, 3.0, 17)
    np.testing.assert_allclose(ci(u), np.sin(u), atol=1e-11)


@pytest.mark.parametrize("n", [3, 4, 11, 12])
def test_simpson_kernel_exact_for_quadratics(n):
    rng = np.random.default_rng(n)
    x = np.sort(np.concatenate([[0.0, 2.0], rng.uniform(0.0, 2.0, n - 2)]))
    y = 3 * x**2 - x + 1
    exact = 8.0 - 2.0 + 2.0
    assert abs(_kernels.simpson_numpy(x, y) - exact) <= 1e-12
    assert abs(_kernels.simpson(x, y) - _kernels.simpson_numpy(x, y)) <= 1e-12


def test_simpson_kernel_two_points_is_trapezoid():
    x, y = np.array([0.0, 2.0]), np.array([1.0, 3.0])
    assert _kernels.simpson(x, y) == 4.0
