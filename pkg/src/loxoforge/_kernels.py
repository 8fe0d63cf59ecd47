"""Batched numeric kernels with a numba path and a pure-numpy fallback.

The numba versions are used when numba imports cleanly and the environment
variable ``LOXOFORGE_DISABLE_NUMBA`` is unset or ``0``.  Both paths are kept
importable so they can be compared directly (see ``benchmarks/``).

Metric codes:
    0  BCV family g_{l,m}; Euclidean space is (0, 0), Heisenberg is (1, 0)
    1  H^2 x R product metric
"""

from __future__ import annotations

import os

import numpy as np

BCV = 0
H2XR = 1

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("LOXOFORGE_DISABLE_NUMBA", "0") in ("", "0")


def gram_numpy(code, ell, m, p, w1, w2):
    x, y = p[:, 0], p[:, 1]
    if code == H2XR:
        return (w1[:, 0] * w2[:, 0] + w1[:, 1] * w2[:, 1]) / (y * y) + w1[:, 2] * w2[:, 2]
    d = 1.0 + m * (x * x + y * y)
    c = 0.5 * ell / d
    t1 = w1[:, 2] + c * (y * w1[:, 0] - x * w1[:, 1])
    t2 = w2[:, 2] + c * (y * w2[:, 0] - x * w2[:, 1])
    return (w1[:, 0] * w2[:, 0] + w1[:, 1] * w2[:, 1]) / (d * d) + t1 * t2


def metric_tensor_numpy(code, ell, m, p):
    n = p.shape[0]
    x, y = p[:, 0], p[:, 1]
    g = np.zeros((n, 3, 3))
    if code == H2XR:
        g[:, 0, 0] = g[:, 1, 1] = 1.0 / (y * y)
        g[:, 2, 2] = 1.0
        return g
    d = 1.0 + m * (x * x + y * y)
    c = 0.5 * ell / d
    theta = np.stack([c * y, -c * x, np.ones(n)], axis=1)
    g += theta[:, :, None] * theta[:, None, :]
    g[:, 0, 0] += 1.0 / (d * d)
    g[:, 1, 1] += 1.0 / (d * d)
    return g


def simpson_numpy(x, y):
    """Composite Simpson on a nonuniform grid; an odd panel count gets a
    quadratic end correction on the last interval."""
    n = x.shape[0]
    if n < 2:
        return 0.0
    if n == 2:
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1])
    h = np.diff(x)
    npair = (n - 1) // 2
    h0 = h[0 : 2 * npair : 2]
    h1 = h[1 : 2 * npair : 2]
    y0 = y[0 : 2 * npair : 2]
    y1 = y[1 : 2 * npair + 1 : 2]
    y2 = y[2 : 2 * npair + 1 : 2]
    hs = h0 + h1
    total = np.sum(
        hs / 6.0 * ((2.0 - h1 / h0) * y0 + hs * hs / (h0 * h1) * y1 + (2.0 - h0 / h1) * y2)
    )
    if (n - 1) % 2:
        a, b = h[-2], h[-1]
        total += (
            y[-1] * (2 * b * b + 3 * a * b) / (6 * (a + b))
            + y[-2] * (b * b + 3 * a * b) / (6 * a)
            - y[-3] * b**3 / (6 * a * (a + b))
        )
    return float(total)


if HAS_NUMBA:

    @numba.njit(cache=True)
    def gram_numba(code, ell, m, p, w1, w2):
        n = p.shape[0]
        out = np.empty(n)
        for i in range(n):
            x = p[i, 0]
            y = p[i, 1]
            if code == 1:
                out[i] = (w1[i, 0] * w2[i, 0] + w1[i, 1] * w2[i, 1]) / (y * y) + w1[i, 2] * w2[i, 2]
            else:
                d = 1.0 + m * (x * x + y * y)
                c = 0.5 * ell / d
                t1 = w1[i, 2] + c * (y * w1[i, 0] - x * w1[i, 1])
                t2 = w2[i, 2] + c * (y * w2[i, 0] - x * w2[i, 1])
                out[i] = (w1[i, 0] * w2[i, 0] + w1[i, 1] * w2[i, 1]) / (d * d) + t1 * t2
        return out

    @numba.njit(cache=True)
    def metric_tensor_numba(code, ell, m, p):
        n = p.shape[0]
        g = np.zeros((n, 3, 3))
        for i in range(n):
            x = p[i, 0]
            y = p[i, 1]
            if code == 1:
                g[i, 0, 0] = 1.0 / (y * y)
                g[i, 1, 1] = 1.0 / (y * y)
                g[i, 2, 2] = 1.0
            else:
                d = 1.0 + m * (x * x + y * y)
                c = 0.5 * ell / d
                th0 = c * y
                th1 = -c * x
                g[i, 0, 0] = 1.0 / (d * d) + th0 * th0
                g[i, 1, 1] = 1.0 / (d * d) + th1 * th1
                g[i, 2, 2] = 1.0
                g[i, 0, 1] = g[i, 1, 0] = th0 * th1
                g[i, 0, 2] = g[i, 2, 0] = th0
                g[i, 1, 2] = g[i, 2, 1] = th1
        return g

    @numba.njit(cache=True)
    def simpson_numba(x, y):
        n = x.shape[0]
        if n < 2:
            return 0.0
        if n == 2:
            return 0.5 * (x[1] - x[0]) * (y[0] + y[1])
        total = 0.0
        npair = (n - 1) // 2
        for k in range(npair):
            i = 2 * k
            h0 = x[i + 1] - x[i]
            h1 = x[i + 2] - x[i + 1]
            hs = h0 + h1
            total += hs / 6.0 * (
                (2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]
            )
        if (n - 1) % 2:
            a = x[n - 2] - x[n - 3]
            b = x[n - 1] - x[n - 2]
            total += (
                y[n - 1] * (2 * b * b + 3 * a * b) / (6 * (a + b))
                + y[n - 2] * (b * b + 3 * a * b) / (6 * a)
                - y[n - 3] * b**3 / (6 * a * (a + b))
            )
        return total

else:  # pragma: no cover
    gram_numba = gram_numpy
    metric_tensor_numba = metric_tensor_numpy
    simpson_numba = simpson_numpy


def gram(code, ell, m, p, w1, w2):
    p = np.ascontiguousarray(p, dtype=np.float64)
    w1 = np.ascontiguousarray(w1, dtype=np.float64)
    w2 = np.ascontiguousarray(w2, dtype=np.float64)
    if USE_NUMBA:
        return gram_numba(code, float(ell), float(m), p, w1, w2)
    return gram_numpy(code, ell, m, p, w1, w2)


def metric_tensor(code, ell, m, p):
    p = np.ascontiguousarray(p, dtype=np.float64)
    if USE_NUMBA:
        return metric_tensor_numba(code, float(ell), float(m), p)
    return metric_tensor_numpy(code, ell, m, p)


def simpson(x, y):
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if USE_NUMBA:
        return float(simpson_numba(x, y))
    return simpson_numpy(x, y)
