"""Independent checks of loxodrome traces.

The oracle only uses the ambient metric, the Killing field and finite
differences of the embedded surface and of the trace samples themselves.  The
surface's closed-form coefficients enter one field only,
``max_analytic_numeric_dev``, which compares the two.

The tangent is beta' = psi_u + psi_v v'(u), where v'(u) is differentiated
from the sampled v values with a 9-point stencil.  Taking v' from the
integrand instead would make the check blind to a corrupted v column, since
the coefficients of an invariant surface do not depend on v.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .catalog import build_catalog_surface, catalog_ids
from .errors import ConfigError, LoxoforgeError
from .lox import LoxodromeSpec, LoxodromeTrace, geodesic_residual, trace
from .surface import InvariantSurface, numeric_coeffs, omega_of, psi_partials

DEFAULT_TOLERANCES = {
    "angle": 1e-6,
    "unit_speed": 1e-6,
    "coeff_identity": 1e-8,
    "analytic_numeric": 1e-6,
    "curvature": 1e-6,
    "arc_length": 1e-6,
}
SUITE_ANGLES = (np.pi / 8, np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2)
SUITE_GRID = 401
GEODESIC_TOL = 1e-8
STENCIL = 9
CURVATURE_H = 1e-4


def tolerances(overrides=None):
    """Defaults, then ``LOXOFORGE_TOL_<NAME>`` env vars, then ``overrides``."""
    tol = dict(DEFAULT_TOLERANCES)
    for key in tol:
        env = os.environ.get(f"LOXOFORGE_TOL_{key.upper()}")
        if env:
            try:
                tol[key] = float(env)
            except ValueError:
                raise ConfigError(f"LOXOFORGE_TOL_{key.upper()} is not a number: {env!r}") from None
    for key, val in (overrides or {}).items():
        if key not in tol:
            raise ConfigError(f"unknown tolerance {key!r}")
        tol[key] = float(val)
    return tol


@dataclass
class VerificationReport:
    surface_id: str
    spec: dict
    max_angle_dev: float
    max_unit_speed_dev: float
    max_coeff_identity_dev: float
    max_analytic_numeric_dev: float
    curvature_ode_residual: float | None
    clairaut_drift: float
    arc_length_rel_err: float
    tolerances: dict = field(default_factory=dict)
    angle_dev: np.ndarray | None = field(default=None, repr=False)
    error: str | None = None

    @property
    def checks(self):
        pairs = {
            "angle": self.max_angle_dev,
            "unit_speed": self.max_unit_speed_dev,
            "coeff_identity": self.max_coeff_identity_dev,
            "analytic_numeric": self.max_analytic_numeric_dev,
            "arc_length": self.arc_length_rel_err,
        }
        if self.curvature_ode_residual is not None:
            pairs["curvature"] = self.curvature_ode_residual
        return pairs

    @property
    def passed(self):
        if self.error is not None:
            return False
        return all(np.isfinite(v) and v <= self.tolerances[k] for k, v in self.checks.items())

    def to_dict(self):
        d = asdict(self)
        d.pop("angle_dev")
        d["pass"] = self.passed
        return d


def derivative_weights(x, stencil=STENCIL):
    """Finite-difference weights for d/dx at every node of a 1-D grid.

    Returns ``(idx, w)`` with ``dy/dx[i] ~ sum_k w[i, k] * y[idx[i, k]]``.
    Windows are centred where possible and shifted inward at the ends.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    m = min(stencil, n)
    start = np.clip(np.arange(n) - m // 2, 0, n - m)
    idx = start[:, None] + np.arange(m)
    scale = float(np.mean(np.abs(np.diff(x)))) or 1.0
    t = (x[idx] - x[:, None]) / scale
    vander = t[:, None, :] ** np.arange(m)[None, :, None]
    rhs = np.zeros((n, m, 1))
    rhs[:, 1, 0] = 1.0
    w = np.linalg.solve(vander, rhs)[:, :, 0] / scale
    return idx, w


def sample_derivative(x, y, stencil=STENCIL):
    idx, w = derivative_weights(x, stencil)
    return np.sum(w * np.asarray(y, dtype=float)[idx], axis=1)


def _omega_curvature_residual(surf: InvariantSurface, u, K):
    h = CURVATURE_H * np.maximum(1.0, np.abs(u))
    lo, hi = surf.u_domain
    ok = (u - h > lo) & (u + h < hi)
    u, h = u[ok], h[ok]
    w0, wp, wm = omega_of(surf, u), omega_of(surf, u + h), omega_of(surf, u - h)
    w_uu = (wp - 2.0 * w0 + wm) / (h * h)
    return float(np.max(np.abs(w_uu + K * w0))) if u.size else 0.0


def verify_trace(surf: InvariantSurface, tr: LoxodromeTrace, tols=None) -> VerificationReport:
    """Run every oracle check on ``tr``; failures are report entries."""
    tol = tolerances(tols)
    spec = tr.spec
    try:
        if len(tr) < 2:
            raise ConfigError("empty trace")
        u, v = np.asarray(tr.u, dtype=float), np.asarray(tr.v, dtype=float)
        space = surf.space
        theta0 = spec.theta0
        dv = sample_derivative(u, v)
        p, pu, pv = psi_partials(surf, u, v)
        beta = pu + pv * dv[:, None]
        x = space.killing_eval(p)
        bb = space.metric_eval(p, beta, beta)
        xx = space.metric_eval(p, x, x)
        bx = space.metric_eval(p, beta, x)
        cross = np.sqrt(np.maximum(bb * xx - bx * bx, 0.0))
        angle = np.arctan2(cross, bx)
        # the minus branch meets the orbits at theta0 measured from -X
        target = theta0 if spec.sign > 0 else np.pi - theta0
        angle_dev = np.abs(angle - target)
        speed = np.sqrt(bb)
        unit_dev = np.abs(speed * np.sin(theta0) - 1.0)

        e, f, g = numeric_coeffs(surf, u)
        w_num = omega_of(surf, u)
        coeff_dev = np.abs(e * g - f * f - w_num**2) / w_num**2
        ea, fa, wa = surf.coefficients(u)
        an_dev = np.max(np.abs(np.stack([ea - e, fa - f, wa - w_num])))

        curv = None
        if surf.constant_curvature is not None:
            curv = _omega_curvature_residual(surf, u, surf.constant_curvature)

        # g(d beta/ds, X) is conserved along geodesics; for a loxodrome it
        # equals omega cos(theta0), so its drift only reports how far the
        # trace is from being a geodesic
        du_ds = np.sign(u[-1] - u[0]) * np.sin(theta0)
        q = bx * du_ds
        drift = float(np.max(np.abs(q - q[0])))

        length = _kernels.simpson(u, speed)
        expected = (u[-1] - u[0]) / np.sin(theta0)
        arc_err = abs(length - expected) / abs(expected) if expected else 0.0
        return VerificationReport(
            surface_id=surf.name, spec=spec.as_dict(),
            max_angle_dev=float(np.max(angle_dev)), max_unit_speed_dev=float(np.max(unit_dev)),
            max_coeff_identity_dev=float(np.max(coeff_dev)),
            max_analytic_numeric_dev=float(an_dev), curvature_ode_residual=curv,
            clairaut_drift=drift, arc_length_rel_err=float(arc_err), tolerances=tol,
            angle_dev=angle_dev,
        )
    except LoxoforgeError as exc:
        nan = float("nan")
        return VerificationReport(surf.name, spec.as_dict(), nan, nan, nan, nan, None, nan, nan,
                                  tol, None, f"{type(exc).__name__}: {exc}")


def verify_flatness_theorem(surf: InvariantSurface, theta0: float, grid=SUITE_GRID):
    """Trace one loxodrome; report whether it is a geodesic and max |K| on it.

    A geodesic loxodrome at an angle other than 0 or pi/2 can only live on a
    flat surface, so ``is_geodesic`` should imply ``max_abs_K ~ 0``.
    """
    lo, hi = surf.trace_range or surf.u_domain
    tr = trace(surf, LoxodromeSpec(theta0, "plus", lo, 0.0, grid), hi)
    is_geodesic = geodesic_residual(surf, tr) <= GEODESIC_TOL
    u = tr.u
    h = CURVATURE_H * np.maximum(1.0, np.abs(u))
    w0, wp, wm = omega_of(surf, u), omega_of(surf, u + h), omega_of(surf, u - h)
    k = -(wp - 2.0 * w0 + wm) / (h * h) / w0
    return bool(is_geodesic), float(np.max(np.abs(k)))


def corrupt_trace(tr: LoxodromeTrace, factor=1.1) -> LoxodromeTrace:
    """Negative control: scale every v sample."""
    return tr.with_v(np.asarray(tr.v) * factor)


def suite_trace(surf: InvariantSurface, theta0, branch, grid=SUITE_GRID):
    lo, hi = surf.trace_range or surf.u_domain
    return trace(surf, LoxodromeSpec(theta0, branch, lo, 0.0, grid), hi)


def _verify_surface(args):
    source, angles, branches, grid, tols, corrupt = args
    surf = build_catalog_surface(source) if isinstance(source, str) else source
    out = []
    for theta0 in angles:
        for branch in branches:
            try:
                tr = suite_trace(surf, theta0, branch, grid)
            except LoxoforgeError as exc:
                nan = float("nan")
                spec = {"theta0": theta0, "branch": branch}
                out.append(VerificationReport(surf.name, spec, nan, nan, nan, nan, None, nan, nan,
                                              tolerances(tols), None,
                                              f"{type(exc).__name__}: {exc}"))
                continue
            if corrupt:
                tr = corrupt_trace(tr)
            out.append(verify_trace(surf, tr, tols))
    return out


def run_suite(surfaces=None, angles=SUITE_ANGLES, branches=("plus", "minus"), grid=SUITE_GRID,
              tols=None, corrupt=False, workers=1):
    """Verify every (surface, angle, branch) combination; reports keep input order.

    ``surfaces`` holds catalog ids or built surfaces (default: the whole
    catalog).  Only id-only suites fan out to worker processes.
    """
    surfaces = list(catalog_ids() if surfaces is None else surfaces)
    if not surfaces or not len(angles) or not len(branches):
        raise ConfigError("empty suite selection")
    jobs = [(s, tuple(angles), tuple(branches), grid, tols, corrupt) for s in surfaces]
    if workers > 1 and all(isinstance(s, str) for s in surfaces):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_verify_surface, jobs))
    else:
        chunks = [_verify_surface(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]
