"""Adaptive Simpson quadrature, vectorized across panels.

Each panel is refined by the classic recursive rule (accept when
``|S_left + S_right - S| <= 15 tol`` and add the Richardson correction,
otherwise split and halve the tolerance), but all open panels of one
recursion level are evaluated in a single integrand call.  Integrands must
therefore accept and return numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureNonConvergent

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 40
RESOLUTION = 1e-11


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson_panels(f, a, b, tol, max_depth=DEFAULT_MAX_DEPTH):
    """Integrate ``f`` independently over every panel ``[a[i], b[i]]``.

    ``tol`` is the absolute tolerance of each panel (scalar or array).
    Panels may be reversed (``b < a``) or empty.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    tol = np.broadcast_to(np.asarray(tol, dtype=float), a.shape).copy()
    npanel = a.size
    result = np.zeros(npanel)
    live = a != b
    if not np.any(live):
        return result

    owner = np.nonzero(live)[0]
    lo, hi, tl = a[owner], b[owner], tol[owner]
    mid = 0.5 * (lo + hi)
    vals = np.asarray(f(np.concatenate([lo, mid, hi])), dtype=float)
    k = owner.size
    flo, fmid, fhi = vals[:k], vals[k : 2 * k], vals[2 * k :]
    whole = _simpson(flo, fmid, fhi, hi - lo)
    depth = 0

    while owner.size:
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        k = owner.size
        vals = np.asarray(f(np.concatenate([lm, rm])), dtype=float)
        flm, frm = vals[:k], vals[k:]
        left = _simpson(flo, flm, fmid, mid - lo)
        right = _simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        # panels narrower than the float resolution of their abscissa are
        # accepted: further splitting cannot reduce the rounding noise
        done = (np.abs(delta) <= 15.0 * tl) | (np.abs(hi - lo) <= RESOLUTION * np.maximum(1.0, np.abs(mid)))
        if not np.all(np.isfinite(delta)):
            bad = ~np.isfinite(delta)
            i = np.argmax(bad)
            raise QuadratureNonConvergent(float(lo[i]), float(hi[i]), depth)
        np.add.at(result, owner[done], (left + right + delta / 15.0)[done])
        depth += 1
        if depth > max_depth and not np.all(done):
            i = np.argmax(~done)
            raise QuadratureNonConvergent(float(lo[i]), float(hi[i]), depth)
        keep = ~done
        # children: left halves then right halves
        owner = np.concatenate([owner[keep], owner[keep]])
        lo, mid, hi = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([lm[keep], rm[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
        )
        flo, fmid, fhi = (
            np.concatenate([flo[keep], fmid[keep]]),
            np.concatenate([flm[keep], frm[keep]]),
            np.concatenate([fmid[keep], fhi[keep]]),
        )
        whole = np.concatenate([left[keep], right[keep]])
        tl = np.concatenate([tl[keep], tl[keep]]) * 0.5
    return result


def adaptive_simpson(f, a, b, tol=DEFAULT_TOL, max_depth=DEFAULT_MAX_DEPTH):
    return float(adaptive_simpson_panels(f, [a], [b], tol, max_depth)[0])


def cumulative_adaptive_simpson(f, nodes, tol=DEFAULT_TOL, max_depth=DEFAULT_MAX_DEPTH):
    """Integral of ``f`` from ``nodes[0]`` to every node.

    The absolute tolerance is shared between panels in proportion to their
    width, so the end value is within ``tol`` overall.
    """
    nodes = np.asarray(nodes, dtype=float)
    out = np.zeros(nodes.size)
    if nodes.size < 2:
        return out
    widths = np.abs(np.diff(nodes))
    total = widths.sum()
    if total == 0:
        return out
    panel_tol = tol * widths / total
    parts = adaptive_simpson_panels(f, nodes[:-1], nodes[1:], panel_tol, max_depth)
    out[1:] = np.cumsum(parts)
    return out


class CumulativeIntegral:
    """Callable ``F(u) = F(u_ref) + integral_{u_ref}^{u} f`` on an interval.

    Values at a grid of checkpoints are precomputed; a query integrates from
    the nearest checkpoint, so nearby queries share their error and finite
    differences of ``F`` stay accurate.
    """

    def __init__(self, f, lo, hi, u_ref, value_ref=0.0, n_checkpoints=129, tol=DEFAULT_TOL,
                 query_tol=1e-11):
        self.f = f
        self.tol = query_tol
        self.checkpoints = np.unique(np.append(np.linspace(lo, hi, n_checkpoints), u_ref))
        i_ref = int(np.searchsorted(self.checkpoints, u_ref))
        cum = cumulative_adaptive_simpson(f, self.checkpoints, tol=tol)
        self.values = cum - cum[i_ref] + value_ref

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        flat = u.reshape(-1)
        idx = np.clip(np.searchsorted(self.checkpoints, flat), 1, self.checkpoints.size - 1)
        left, right = self.checkpoints[idx - 1], self.checkpoints[idx]
        idx = np.where(np.abs(flat - left) <= np.abs(right - flat), idx - 1, idx)
        start = self.checkpoints[idx]
        parts = adaptive_simpson_panels(self.f, start, flat, self.tol)
        return (self.values[idx] + parts).reshape(u.shape)
