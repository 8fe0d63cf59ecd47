"""Loxodromes on invariant surfaces.

A loxodrome meeting the orbits at angle theta0 is traced as
beta(u) = psi(u, v(u)) with

    dv/du = (-F(u) +/- cot(theta0) omega(u)) / omega(u)^2,

integrated by cumulative adaptive Simpson.  Arc length between orbits is
(u2 - u1) / sin(theta0).  Constant-curvature surfaces with a horizontal lift
also have closed forms (:class:`ClosedFormSolution`).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BadParams, DomainViolation, InconsistentConstants, NearSingularOrbit, WrongCurvatureClass
from .quadrature import DEFAULT_MAX_DEPTH, DEFAULT_TOL, cumulative_adaptive_simpson
from .surface import InvariantSurface

TOL_OMEGA = 1e-9
EPS_DOM = 1e-4
BRANCHES = {"plus": 1.0, "minus": -1.0}


@dataclass(frozen=True)
class LoxodromeSpec:
    theta0: float
    branch: str = "plus"
    u0: float = 0.0
    v0: float = 0.0
    grid: int = 201

    def __post_init__(self):
        if not 0.0 < self.theta0 < np.pi:
            raise BadParams(f"theta0 must lie in (0, pi), got {self.theta0!r}")
        if self.branch not in BRANCHES:
            raise BadParams(f"branch must be 'plus' or 'minus', got {self.branch!r}")
        if int(self.grid) < 2:
            raise BadParams("a trace needs at least 2 samples")

    @property
    def sign(self):
        return BRANCHES[self.branch]

    def as_dict(self):
        return {"theta0": self.theta0, "branch": self.branch, "u0": self.u0, "v0": self.v0,
                "grid": int(self.grid)}


@dataclass(frozen=True, eq=False)
class LoxodromeTrace:
    surface: InvariantSurface
    spec: LoxodromeSpec
    u: np.ndarray
    v: np.ndarray
    points: np.ndarray
    s: np.ndarray
    monotone: bool = True
    diverging: bool = False

    @property
    def samples(self):
        return list(zip(self.u.tolist(), self.v.tolist(), map(tuple, self.points.tolist()),
                        self.s.tolist()))

    def __len__(self):
        return self.u.size

    def with_v(self, v):
        """Copy with replaced v samples; points are re-embedded."""
        v = np.asarray(v, dtype=float)
        return replace(self, v=v, points=self.surface.psi(self.u, v))


def cos(theta):
    """cos(theta), exactly 0 at the float nearest pi/2."""
    return 0.0 if theta == 0.5 * np.pi else float(np.cos(theta))


def cot(theta):
    """cot(theta), exactly 0 at the float nearest pi/2 so meridians stay at v0."""
    return 0.0 if theta == 0.5 * np.pi else 1.0 / np.tan(theta)


def integrand(surf: InvariantSurface, spec: LoxodromeSpec, u, tol_omega=TOL_OMEGA):
    """dv/du of the loxodrome at ``u`` (scalar or array)."""
    u_arr = np.asarray(u, dtype=float)
    _, f, w = surf.coefficients(u_arr)
    w = np.asarray(w, dtype=float)
    bad = ~(w > tol_omega)
    if np.any(bad):
        i = int(np.argmax(bad.reshape(-1)))
        raise NearSingularOrbit(float(u_arr.reshape(-1)[i]), float(w.reshape(-1)[i]))
    out = (-f + spec.sign * cot(spec.theta0) * w) / (w * w)
    return float(out) if out.ndim == 0 else out


def arc_length(u1, u2, theta0):
    return (u2 - u1) / np.sin(theta0)


def trace(surf: InvariantSurface, spec: LoxodromeSpec, u_end, eps_dom=EPS_DOM,
          tol=DEFAULT_TOL, max_depth=DEFAULT_MAX_DEPTH) -> LoxodromeTrace:
    lo, hi = surf.u_domain
    a, b = sorted((spec.u0, u_end))
    if a < lo + eps_dom or b > hi - eps_dom:
        raise DomainViolation(
            f"trace interval [{a}, {b}] leaves the clamped domain [{lo + eps_dom}, {hi - eps_dom}]"
        )
    u = np.linspace(spec.u0, u_end, int(spec.grid))
    v = spec.v0 + cumulative_adaptive_simpson(lambda t: integrand(surf, spec, t), u, tol, max_depth)
    rate = integrand(surf, spec, u)
    monotone = bool(np.all(rate >= 0) or np.all(rate <= 0))
    diverging = bool(eps_dom > 0 and np.any(np.abs(v) > 1.0 / eps_dom))
    return LoxodromeTrace(
        surface=surf, spec=spec, u=u, v=v, points=surf.psi(u, v),
        s=arc_length(spec.u0, u, spec.theta0), monotone=monotone, diverging=diverging,
    )


def clairaut_quantity(surf: InvariantSurface, tr: LoxodromeTrace):
    """omega(u_i) cos(theta0) at every sample."""
    return surf.omega(tr.u) * cos(tr.spec.theta0)


def geodesic_residual(surf: InvariantSurface, tr: LoxodromeTrace):
    """max |d/ds (F u' + omega^2 v')| along the trace (primes are d/ds)."""
    if len(tr) < 3:
        raise BadParams("geodesic_residual needs at least 3 samples")
    _, f, w = surf.coefficients(tr.u)
    direction = np.sign(tr.u[-1] - tr.u[0]) or 1.0
    du_ds = direction * np.sin(tr.spec.theta0)
    dv_ds = integrand(surf, tr.spec, tr.u) * du_ds
    q = f * du_ds + w * w * dv_ds
    return float(np.max(np.abs(np.gradient(q, tr.s))))


# -- constant curvature closed forms -------------------------------------------------
@dataclass(frozen=True)
class ClosedFormSolution:
    """Closed-form v(u) on a constant-curvature surface with horizontal lift.

    ``kind`` is ``positive`` (K = 1/R^2), ``negative`` (K = -1/R^2) or
    ``flat``.  ``a`` is the first integral of the curvature equation
    (omega^2 + R^2 omega_u^2, omega^2 - R^2 omega_u^2, or omega_u for flat);
    ``c`` is the constant value of omega in the flat a = 0 case.
    """

    kind: str
    R: float = 1.0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    branch: str = "plus"

    @property
    def curvature(self):
        return {"positive": 1.0, "negative": -1.0, "flat": 0.0}[self.kind] / (
            1.0 if self.kind == "flat" else self.R**2
        )

    @property
    def case(self):
        if self.kind == "negative":
            return "a=0" if self.a == 0 else ("a<0" if self.a < 0 else "a>0")
        if self.kind == "flat":
            return "a=0" if self.a == 0 else "a!=0"
        return "a>0"


def _primitive(cf: ClosedFormSolution, surf: InvariantSurface, theta0, u):
    """Closed-form antiderivative of the loxodrome integrand (no constant)."""
    u = np.asarray(u, dtype=float)
    sgn = BRANCHES[cf.branch]
    ct = cot(theta0)
    w = surf.omega(u)
    wu = surf.d_omega(u)
    R, a = cf.R, cf.a
    if cf.kind == "positive":
        return -sgn * R * ct / np.sqrt(a) * np.arcsinh(R * wu / w)
    if cf.kind == "negative":
        if a == 0:
            return -sgn * ct / wu
        if a < 0:
            return -sgn * R * ct / np.sqrt(-a) * np.log(np.abs((R * wu + np.sqrt(-a)) / w))
        return sgn * R * ct / np.sqrt(a) * np.arcsin(R * wu / w)
    if a == 0:
        return sgn * ct / cf.c * u
    return sgn * ct / a * np.log(w)


def fit_closed_form(surf: InvariantSurface, kind: str, theta0: float, branch="plus", R=1.0,
                    u0=None, v0=0.0, n_samples=20, drift_tol=1e-6, zero_tol=1e-9,
                    eps_dom=EPS_DOM) -> ClosedFormSolution:
    """Estimate the constants of the closed form from the surface.

    ``a`` is the mean of the conserved quantity over ``n_samples`` points;
    ``b`` is fixed by v(u0) = v0.
    """
    if kind not in ("positive", "negative", "flat"):
        raise BadParams(f"unknown curvature class {kind!r}")
    lo, hi = surf.u_domain
    lo_s, hi_s = surf.trace_range or (lo + eps_dom, hi - eps_dom)
    u = np.linspace(lo_s, hi_s, n_samples)
    w, wu, wuu = surf.omega(u), surf.d_omega(u), surf.dd_omega(u)
    curv = {"positive": 1.0 / R**2, "negative": -1.0 / R**2, "flat": 0.0}[kind]
    ode = np.max(np.abs(wuu + curv * w))
    if ode > 1e-6:
        raise WrongCurvatureClass(f"|omega_uu + K omega| = {ode:.3e} for K = {curv}")
    c = 0.0
    if kind == "positive":
        q = w**2 + R**2 * wu**2
    elif kind == "negative":
        q = w**2 - R**2 * wu**2
    else:
        q = wu
    a = float(np.mean(q))
    drift = float(np.max(np.abs(q - a)))
    if drift > drift_tol:
        raise InconsistentConstants(f"conserved quantity drifts by {drift:.3e}")
    if kind == "positive" and a <= 0:
        raise InconsistentConstants("positive curvature requires a > 0")
    if kind != "positive" and abs(a) <= zero_tol:
        a = 0.0
        if kind == "flat":
            c = float(np.mean(w))
    cf = ClosedFormSolution(kind=kind, R=R, a=a, c=c, branch=branch)
    if u0 is None:
        u0 = 0.5 * (lo_s + hi_s)
    return replace(cf, b=float(v0 - _primitive(cf, surf, theta0, u0)))


def closed_form_v(cf: ClosedFormSolution, surf: InvariantSurface, theta0: float, u):
    out = _primitive(cf, surf, theta0, u) + cf.b
    return float(out) if np.ndim(out) == 0 else out
