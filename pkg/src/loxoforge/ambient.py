"""Three-dimensional ambient spaces, their Killing fields and isometry flows.

Every space uses one global Cartesian chart (x, y, z).  All point/vector
arguments may be a single triple or an ``(N, 3)`` batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BadParams, DomainViolation

FAMILIES = ("euclidean3", "bcv", "h2xr", "heisenberg3")

KILLING_BY_FAMILY = {
    "euclidean3": ("translation", "helicoidal"),
    "bcv": ("rotation",),
    "h2xr": ("g24", "g34", "g14", "g4"),
    "heisenberg3": ("g1", "g3", "g43"),
}

BCV_MARGIN = 1e-12


def _batch(p):
    arr = np.asarray(p, dtype=float)
    return np.atleast_2d(arr), arr.ndim == 1


@dataclass(frozen=True)
class AmbientSpace:
    """A Riemannian 3-space together with the Killing field in use.

    ``a`` and ``b`` are the constants of the Killing field combinations
    (helicoidal pitch, G24/G34/G14 twist, G43 pitch); ``ell`` and ``m`` are
    the BCV parameters.
    """

    family: str
    killing: str
    a: float = 0.0
    b: float = 0.0
    ell: float = 0.0
    m: float = 0.0
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadParams(f"unknown ambient family {self.family!r}")
        if self.killing not in KILLING_BY_FAMILY[self.family]:
            raise BadParams(f"Killing field {self.killing!r} not available in {self.family}")
        if self.killing == "translation":
            ax = np.asarray(self.axis, dtype=float)
            n = np.linalg.norm(ax)
            if ax.shape != (3,) or n == 0:
                raise BadParams("translation axis must be a nonzero 3-vector")
            object.__setattr__(self, "axis", tuple(float(c) for c in ax / n))
        if self.killing == "g24" and self.a == 0:
            raise BadParams("G24 needs a != 0 (a = 0 is the G4 cylinder case)")

    # -- constructors -------------------------------------------------
    @classmethod
    def euclidean_translation(cls, axis=(0.0, 0.0, 1.0)):
        return cls("euclidean3", "translation", axis=tuple(axis))

    @classmethod
    def euclidean_helicoidal(cls, a=0.0):
        return cls("euclidean3", "helicoidal", a=float(a))

    @classmethod
    def bcv(cls, ell, m):
        return cls("bcv", "rotation", ell=float(ell), m=float(m))

    @classmethod
    def h2xr(cls, killing, a=1.0, b=0.0):
        return cls("h2xr", killing, a=float(a), b=float(b))

    @classmethod
    def heisenberg(cls, killing, a=0.0):
        return cls("heisenberg3", killing, a=float(a))

    # -- metric -------------------------------------------------------
    @property
    def _metric_code(self):
        if self.family == "h2xr":
            return _kernels.H2XR, 0.0, 0.0
        if self.family == "heisenberg3":
            return _kernels.BCV, 1.0, 0.0
        if self.family == "bcv":
            return _kernels.BCV, self.ell, self.m
        return _kernels.BCV, 0.0, 0.0

    def admissible(self, p):
        """Boolean mask of points inside the coordinate domain."""
        pts, single = _batch(p)
        finite = np.all(np.isfinite(pts), axis=1)
        if self.family == "h2xr":
            ok = finite & (pts[:, 1] > 0)
        elif self.family == "bcv" and self.m < 0:
            ok = finite & (pts[:, 0] ** 2 + pts[:, 1] ** 2 < -1.0 / self.m - BCV_MARGIN)
        else:
            ok = finite
        return bool(ok[0]) if single else ok

    def check_domain(self, p):
        pts, _ = _batch(p)
        ok = np.atleast_1d(self.admissible(pts))
        if not np.all(ok):
            bad = pts[np.argmin(ok)]
            raise DomainViolation(f"point {tuple(bad)} lies outside the {self.family} domain", bad)

    def metric_tensor(self, p):
        pts, single = _batch(p)
        self.check_domain(pts)
        code, ell, m = self._metric_code
        g = _kernels.metric_tensor(code, ell, m, pts)
        return g[0] if single else g

    def metric_eval(self, p, w1, w2):
        """g_p(w1, w2)."""
        pts, single = _batch(p)
        self.check_domain(pts)
        n = pts.shape[0]
        w1 = np.broadcast_to(np.asarray(w1, dtype=float), (n, 3))
        w2 = np.broadcast_to(np.asarray(w2, dtype=float), (n, 3))
        code, ell, m = self._metric_code
        out = _kernels.gram(code, ell, m, pts, w1, w2)
        return float(out[0]) if single else out

    def norm(self, p, w):
        return np.sqrt(self.metric_eval(p, w, w))

    # -- Killing field and flow --------------------------------------
    def killing_eval(self, p):
        pts, single = _batch(p)
        self.check_domain(pts)
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        one, zero = np.ones_like(x), np.zeros_like(x)
        k, a, b = self.killing, self.a, self.b
        if k == "translation":
            out = np.broadcast_to(np.asarray(self.axis), pts.shape).copy()
        elif k in ("helicoidal", "g43"):
            out = np.stack([-y, x, a * one], axis=1)
        elif k == "rotation":
            out = np.stack([-y, x, zero], axis=1)
        elif k == "g24":
            out = np.stack([a * one, zero, b * one], axis=1)
        elif k == "g34":
            out = np.stack([x, y, b * one], axis=1)
        elif k == "g14":
            out = np.stack([0.5 * (x * x - y * y + 1.0), x * y, b * one], axis=1)
        elif k in ("g4", "g3"):
            out = np.stack([zero, zero, one], axis=1)
        elif k == "g1":
            out = np.stack([one, zero, 0.5 * y], axis=1)
        else:  # pragma: no cover - guarded in __post_init__
            raise BadParams(k)
        return out[0] if single else out

    def flow(self, p, t):
        """Closed-form flow of the Killing field, phi_t(p).

        ``t`` broadcasts against the batch of points.
        """
        pts, single = _batch(p)
        self.check_domain(pts)
        t = np.asarray(t, dtype=float)
        if t.ndim:
            single = False
            t = t.reshape(-1)
            if pts.shape[0] == 1 and t.size > 1:
                pts = np.repeat(pts, t.size, axis=0)
        t = np.broadcast_to(t, pts.shape[:1])
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        k, a, b = self.killing, self.a, self.b
        if k == "translation":
            out = pts + t[:, None] * np.asarray(self.axis)[None, :]
        elif k in ("helicoidal", "rotation", "g43"):
            c, s = np.cos(t), np.sin(t)
            pitch = 0.0 if k == "rotation" else a
            out = np.stack([c * x - s * y, s * x + c * y, z + pitch * t], axis=1)
        elif k == "g24":
            out = np.stack([x + a * t, y, z + b * t], axis=1)
        elif k == "g34":
            e = np.exp(t)
            out = np.stack([e * x, e * y, z + b * t], axis=1)
        elif k == "g14":
            r2 = x * x + y * y
            c, s = np.cos(t), np.sin(t)
            den = (1.0 - r2) * c - 2.0 * x * s + 1.0 + r2
            if np.any(den <= 0):
                raise DomainViolation("G14 orbit denominator vanished")
            out = np.stack([((1.0 - r2) * s + 2.0 * x * c) / den, 2.0 * y / den, z + b * t], axis=1)
        elif k in ("g4", "g3"):
            out = np.stack([x, y, z + t], axis=1)
        elif k == "g1":
            out = np.stack([x + t, y, z + 0.5 * y * t], axis=1)
        else:  # pragma: no cover
            raise BadParams(k)
        return out[0] if single else out

    def describe(self):
        if self.family == "euclidean3":
            if self.killing == "translation":
                return f"R3, translation along {self.axis}"
            return f"R3, helicoidal a={self.a:g}"
        if self.family == "bcv":
            return f"BCV(l={self.ell:g}, m={self.m:g}), rotation"
        if self.family == "h2xr":
            tag = {"g24": f"G24 a={self.a:g} b={self.b:g}", "g34": f"G34 b={self.b:g}",
                   "g14": f"G14 b={self.b:g}", "g4": "G4"}[self.killing]
            return f"H2xR, {tag}"
        tag = {"g1": "G1", "g3": "G3", "g43": f"G43 a={self.a:g}"}[self.killing]
        return f"Heisenberg H3, {tag}"


def metric_eval(space: AmbientSpace, p, w1, w2):
    return space.metric_eval(p, w1, w2)


def killing_eval(space: AmbientSpace, p):
    return space.killing_eval(p)


def flow(space: AmbientSpace, p, t):
    return space.flow(p, t)
