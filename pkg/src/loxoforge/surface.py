"""Invariant surfaces psi(u, v) = phi_v(gamma(u)) and their induced metric.

Each (ambient family, Killing field) pair has a :class:`QuotientModel` that
knows the orbit-space coordinates (xi1, xi2): how to lift a profile point to
the ambient chart, the closed-form coefficients E, F, omega of the pull-back
metric, and how to complete a half-specified profile to unit speed in the
quotient metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .ambient import AmbientSpace
from .errors import BadParams, DomainViolation, NonPositiveVolume, SpeedDeficitNegative
from .quadrature import CumulativeIntegral

FD_STEP = 1e-6
CURVATURE_STEP = 1e-5
DEFICIT_SLACK = 1e-8


def _fd_step(x, base=FD_STEP):
    return base * (1.0 + np.abs(x))


# -- quotient models -----------------------------------------------------------
class QuotientModel:
    """Orbit-space description for one Killing field.

    ``free_index`` names the profile coordinate that is prescribed when the
    other one is recovered from the unit-speed condition.
    """

    free_index = 1

    def __init__(self, space: AmbientSpace):
        self.space = space

    def lift(self, xi1, xi2):
        raise NotImplementedError

    def coefficients(self, xi1, xi2, d1, d2):
        raise NotImplementedError

    def completion(self, free, dfree):
        """Return (speed deficit, derivative of the other coordinate / sqrt(deficit))."""
        raise NotImplementedError

    def regular(self, xi1, xi2):
        return np.ones(np.shape(xi1), dtype=bool)


class _Translation(QuotientModel):
    def __init__(self, space):
        super().__init__(space)
        n = np.asarray(space.axis)
        helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = helper - n * np.dot(helper, n)
        e1 /= np.linalg.norm(e1)
        self.e1, self.e2 = e1, np.cross(n, e1)

    def lift(self, xi1, xi2):
        return np.outer(xi1, self.e1) + np.outer(xi2, self.e2)

    def coefficients(self, xi1, xi2, d1, d2):
        return d1**2 + d2**2, np.zeros_like(xi1), np.ones_like(xi1)

    def completion(self, free, dfree):
        return 1.0 - dfree**2, np.ones_like(free)


class _Helicoidal(QuotientModel):
    def lift(self, xi1, xi2):
        return np.stack([xi1, np.zeros_like(xi1), xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        a = self.space.a
        return d1**2 + d2**2, a * d2, np.sqrt(xi1**2 + a * a)

    def completion(self, free, dfree):
        a = self.space.a
        return 1.0 - dfree**2, np.sqrt(a * a + free**2) / free

    def regular(self, xi1, xi2):
        return xi1 > 0


class _BCVRotation(QuotientModel):
    # xi1 is the Euclidean radius f, xi2 the height
    def lift(self, xi1, xi2):
        return np.stack([xi1, np.zeros_like(xi1), xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        ell, m = self.space.ell, self.space.m
        den = 1.0 + m * xi1**2
        e = d1**2 / den**2 + d2**2
        f = -ell * xi1**2 * d2 / (2.0 * den)
        omega = xi1 * np.sqrt(4.0 + ell**2 * xi1**2) / (2.0 * den)
        return e, f, omega

    def completion(self, free, dfree):
        ell, m = self.space.ell, self.space.m
        den = 1.0 + m * free**2
        return 1.0 - dfree**2 / den**2, 0.5 * np.sqrt(4.0 + ell**2 * free**2)

    def regular(self, xi1, xi2):
        ok = xi1 > 0
        if self.space.m < 0:
            ok &= xi1**2 < -1.0 / self.space.m
        return ok


class _G24(QuotientModel):
    # xi1 = b x - z (for a = 1), xi2 = y
    free_index = 2

    def lift(self, xi1, xi2):
        return np.stack([np.zeros_like(xi1), xi2, -xi1], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        a, b = self.space.a, self.space.b
        return d2**2 / xi2**2 + d1**2, -b * d1, np.sqrt(a * a / xi2**2 + b * b)

    def completion(self, free, dfree):
        a, b = self.space.a, self.space.b
        omega = np.sqrt(a * a / free**2 + b * b)
        return free**2 - dfree**2, omega / abs(a)

    def regular(self, xi1, xi2):
        return xi2 > 0


class _G4(QuotientModel):
    free_index = 2

    def lift(self, xi1, xi2):
        return np.stack([xi1, xi2, np.zeros_like(xi1)], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        return (d1**2 + d2**2) / xi2**2, np.zeros_like(xi1), np.ones_like(xi1)

    def completion(self, free, dfree):
        return free**2 - dfree**2, np.ones_like(free)

    def regular(self, xi1, xi2):
        return xi2 > 0


class _G34(QuotientModel):
    # xi1 = polar angle theta, xi2 = z - b ln r; lift at r = 1
    def lift(self, xi1, xi2):
        return np.stack([np.cos(xi1), np.sin(xi1), xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        b = self.space.b
        s2 = np.sin(xi1) ** 2
        return d1**2 / s2 + d2**2, b * d2, np.sqrt(1.0 / s2 + b * b)

    def completion(self, free, dfree):
        b = self.space.b
        s2 = np.sin(free) ** 2
        return s2 - dfree**2, np.sqrt(1.0 / s2 + b * b)

    def regular(self, xi1, xi2):
        return (xi1 > 0) & (xi1 < np.pi)


class _G14(QuotientModel):
    # xi1 = (r^2 + 1) / (r sin theta) >= 2; lift on the y-axis at r = (xi1 + sqrt(xi1^2 - 4)) / 2
    def lift(self, xi1, xi2):
        r = 0.5 * (xi1 + np.sqrt(xi1**2 - 4.0))
        return np.stack([np.zeros_like(xi1), r, xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        b = self.space.b
        q = xi1**2 - 4.0
        return d1**2 / q + d2**2, b * d2, np.sqrt(0.25 * q + b * b)

    def completion(self, free, dfree):
        b = self.space.b
        q = free**2 - 4.0
        omega = np.sqrt(0.25 * q + b * b)
        return 1.0 - dfree**2 / q, 2.0 * omega / np.sqrt(q)

    def regular(self, xi1, xi2):
        return xi1 > 2.0


class _HeisG1(QuotientModel):
    # xi1 = y, xi2 = x y / 2 - z
    def lift(self, xi1, xi2):
        return np.stack([np.zeros_like(xi1), xi1, -xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        return d1**2 + d2**2, -xi1 * d2, np.sqrt(1.0 + xi1**2)

    def completion(self, free, dfree):
        return 1.0 - dfree**2, np.sqrt(1.0 + free**2)


class _HeisG3(QuotientModel):
    def lift(self, xi1, xi2):
        return np.stack([xi1, xi2, np.zeros_like(xi1)], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        f = 0.5 * (d1 * xi2 - d2 * xi1)
        return d1**2 + d2**2 + f**2, f, np.ones_like(xi1)

    def completion(self, free, dfree):
        return 1.0 - dfree**2, np.ones_like(free)


class _HeisG43(QuotientModel):
    # xi1 = r, xi2 = z - a theta
    def lift(self, xi1, xi2):
        return np.stack([xi1, np.zeros_like(xi1), xi2], axis=-1)

    def coefficients(self, xi1, xi2, d1, d2):
        a = self.space.a
        omega = 0.5 * np.sqrt(4.0 * xi1**2 + (xi1**2 - 2.0 * a) ** 2)
        return d1**2 + d2**2, 0.5 * d2 * (2.0 * a - xi1**2), omega

    def completion(self, free, dfree):
        a = self.space.a
        omega = 0.5 * np.sqrt(4.0 * free**2 + (free**2 - 2.0 * a) ** 2)
        return 1.0 - dfree**2, omega / free

    def regular(self, xi1, xi2):
        return xi1 > 0


_MODELS = {
    ("euclidean3", "translation"): _Translation,
    ("euclidean3", "helicoidal"): _Helicoidal,
    ("bcv", "rotation"): _BCVRotation,
    ("h2xr", "g24"): _G24,
    ("h2xr", "g4"): _G4,
    ("h2xr", "g34"): _G34,
    ("h2xr", "g14"): _G14,
    ("heisenberg3", "g1"): _HeisG1,
    ("heisenberg3", "g3"): _HeisG3,
    ("heisenberg3", "g43"): _HeisG43,
}


def quotient_model(space: AmbientSpace) -> QuotientModel:
    return _MODELS[(space.family, space.killing)](space)


# -- profiles --------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Profile (xi1(u), xi2(u)) in orbit-space coordinates.

    All four callables are vectorized over ``u``.
    """

    u_domain: tuple
    xi1: Callable
    xi2: Callable
    dxi1: Callable
    dxi2: Callable
    provenance: str = "closed_form"

    def point(self, u):
        return self.xi1(u), self.xi2(u)


def _fd(func):
    def d(u):
        u = np.asarray(u, dtype=float)
        h = _fd_step(u)
        return (func(u + h) - func(u - h)) / (2.0 * h)

    return d


def closed_form_profile(u_domain, xi1, xi2, dxi1=None, dxi2=None):
    return ProfileCurve(
        tuple(u_domain), xi1, xi2, dxi1 or _fd(xi1), dxi2 or _fd(xi2), "closed_form"
    )


def sampled_profile(u, xi1, xi2):
    """Monotone cubic interpolation of a tabulated profile."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 2 or np.any(np.diff(u) <= 0):
        raise BadParams("sampled profile needs a strictly increasing u grid of length >= 2")
    p1 = PchipInterpolator(u, np.asarray(xi1, dtype=float), extrapolate=False)
    p2 = PchipInterpolator(u, np.asarray(xi2, dtype=float), extrapolate=False)
    return ProfileCurve(
        (float(u[0]), float(u[-1])), p1, p2, p1.derivative(), p2.derivative(), "sampled"
    )


def profile_from_constraint(space: AmbientSpace, given, params=None, u_domain=(0.0, 1.0),
                            dgiven=None) -> ProfileCurve:
    """Complete a profile from one prescribed coordinate.

    ``given`` is the family's free coordinate (xi1 for most families, xi2 = y
    for the H2xR G24 and G4 cases).  The other coordinate is the cumulative
    integral of its unit-speed derivative, pinned to ``params['xi2_0']`` (or
    ``'xi1_0'``) at ``params['u_ref']`` (default: domain midpoint).
    ``params['sign']`` selects the root of the square root (default +1).
    """
    params = dict(params or {})
    model = quotient_model(space)
    lo, hi = (float(x) for x in u_domain)
    if not lo < hi:
        raise BadParams("u_domain must satisfy u_min < u_max")
    dgiven = dgiven or _fd(given)
    sign = float(params.get("sign", 1.0))
    other_name = "xi2_0" if model.free_index == 1 else "xi1_0"
    value_ref = float(params.get(other_name, 0.0))
    u_ref = float(params.get("u_ref", 0.5 * (lo + hi)))

    def rate(u):
        u = np.asarray(u, dtype=float)
        free = np.asarray(given(u), dtype=float)
        deficit, factor = model.completion(free, np.asarray(dgiven(u), dtype=float))
        deficit = np.asarray(deficit, dtype=float)
        bad = deficit < -DEFICIT_SLACK
        if np.any(bad):
            i = int(np.argmax(bad))
            raise SpeedDeficitNegative(float(u.reshape(-1)[i]), float(deficit.reshape(-1)[i]))
        return sign * factor * np.sqrt(np.maximum(deficit, 0.0))

    width = hi - lo
    margin = 1e-4 * width
    # probe the whole domain once so an infeasible profile fails at construction
    rate(np.linspace(lo + margin, hi - margin, 257))
    other = CumulativeIntegral(rate, lo + margin, hi - margin, u_ref, value_ref)

    if model.free_index == 1:
        return ProfileCurve((lo, hi), given, other, dgiven, rate, "ode_integrated")
    return ProfileCurve((lo, hi), other, given, rate, dgiven, "ode_integrated")


# -- surfaces ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class InvariantSurface:
    name: str
    space: AmbientSpace
    profile: ProfileCurve
    omega_u: Optional[Callable] = None
    omega_uu: Optional[Callable] = None
    constant_curvature: Optional[float] = None
    horizontal: bool = False
    provenance: str = ""
    trace_range: Optional[tuple] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "model", quotient_model(self.space))

    @property
    def u_domain(self):
        return self.profile.u_domain

    def lift(self, u):
        u = np.asarray(u, dtype=float)
        pts = self.model.lift(np.atleast_1d(self.profile.xi1(u)), np.atleast_1d(self.profile.xi2(u)))
        return pts.reshape(u.shape + (3,))

    def psi(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        base = self.lift(u.reshape(-1))
        return self.space.flow(base, v.reshape(-1)).reshape(u.shape + (3,))

    def coefficients(self, u):
        """Closed-form (E, F, omega) from the family formulas."""
        u = np.asarray(u, dtype=float)
        pr = self.profile
        return self.model.coefficients(pr.xi1(u), pr.xi2(u), pr.dxi1(u), pr.dxi2(u))

    def E(self, u):
        return self.coefficients(u)[0]

    def F(self, u):
        return self.coefficients(u)[1]

    def omega(self, u):
        return self.coefficients(u)[2]

    def d_omega(self, u):
        if self.omega_u is not None:
            return self.omega_u(np.asarray(u, dtype=float))
        u = np.asarray(u, dtype=float)
        h = CURVATURE_STEP * np.maximum(1.0, np.abs(u))
        return (self.omega(u + h) - self.omega(u - h)) / (2.0 * h)

    def dd_omega(self, u):
        if self.omega_uu is not None:
            return self.omega_uu(np.asarray(u, dtype=float))
        u = np.asarray(u, dtype=float)
        h = CURVATURE_STEP * np.maximum(1.0, np.abs(u))
        return (self.omega(u + h) - 2.0 * self.omega(u) + self.omega(u - h)) / (h * h)

    def check_u(self, u, margin=0.0):
        u = np.asarray(u, dtype=float)
        lo, hi = self.u_domain
        if np.any(u - margin < lo) or np.any(u + margin > hi):
            raise DomainViolation(f"u outside ({lo}, {hi}) with margin {margin}")


def psi_partials(surf: InvariantSurface, u, v):
    """psi and its central-difference partials at arrays (u, v)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    hu = _fd_step(u)
    hv = _fd_step(v)
    uu = np.concatenate([u + hu, u - hu, u, u])
    vv = np.concatenate([v, v, v + hv, v - hv])
    pts = surf.psi(uu, vv)
    n = u.size
    psi_u = (pts[:n] - pts[n : 2 * n]) / (2.0 * hu[:, None])
    psi_v = (pts[2 * n : 3 * n] - pts[3 * n :]) / (2.0 * hv[:, None])
    return surf.psi(u, v), psi_u, psi_v


def numeric_coeffs(surf: InvariantSurface, u):
    """(E, F, G) from finite-difference partials of psi and the ambient metric."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    surf.check_u(u_arr, margin=float(np.max(_fd_step(u_arr))))
    p, pu, pv = psi_partials(surf, u_arr, np.zeros_like(u_arr))
    g = surf.space.metric_eval
    e, f, gg = g(p, pu, pu), g(p, pu, pv), g(p, pv, pv)
    if np.ndim(u) == 0:
        return float(e[0]), float(f[0]), float(gg[0])
    return e, f, gg


def omega_of(surf: InvariantSurface, u):
    """sqrt(g(X, X)) along the lift, evaluated from the ambient metric."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    p = surf.lift(u_arr)
    x = surf.space.killing_eval(p)
    g = surf.space.metric_eval(p, x, x)
    bad = ~(g > 0)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NonPositiveVolume(float(u_arr[i]), float(g[i]))
    w = np.sqrt(g)
    return float(w[0]) if np.ndim(u) == 0 else w


def gauss_curvature(surf: InvariantSurface, u):
    """K = -omega_uu / omega."""
    u_arr = np.asarray(u, dtype=float)
    k = -surf.dd_omega(u_arr) / surf.omega(u_arr)
    return float(k) if np.ndim(k) == 0 else k


def curvature_of_omega(omega, u, h=None):
    """K for a bare volume function ``omega`` by second differences."""
    u = np.asarray(u, dtype=float)
    if h is None:
        h = CURVATURE_STEP * np.maximum(1.0, np.abs(u))
    dd = (omega(u + h) - 2.0 * omega(u) + omega(u - h)) / (h * h)
    k = -dd / omega(u)
    return float(k) if np.ndim(k) == 0 else k
