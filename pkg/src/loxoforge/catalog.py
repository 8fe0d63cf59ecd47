"""Named invariant surfaces.

Each entry documents its ambient space, default parameters, u-domain and the
example it reproduces.  ``build_catalog_surface(id, params)`` returns a fully
wired :class:`~loxoforge.surface.InvariantSurface`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ambient import AmbientSpace
from .errors import BadParams, UnknownCatalogId
from .surface import InvariantSurface, closed_form_profile, profile_from_constraint

SQ2 = np.sqrt(2.0)


def _arccot(x):
    return 0.5 * np.pi - np.arctan(x)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    family: str
    defaults: dict
    u_domain: tuple
    trace_range: tuple
    provenance: str
    build: Callable


def _const(c):
    return lambda u: np.full(np.shape(u), float(c))


def _surface(name, space, profile, params, entry_range, provenance, **kw):
    return InvariantSurface(
        name=name, space=space, profile=profile, params=dict(params),
        trace_range=entry_range, provenance=provenance, **kw
    )


# -- R3 ------------------------------------------------------------------------------
def _sphere(p):
    space = AmbientSpace.euclidean_helicoidal(0.0)
    prof = closed_form_profile((0.0, np.pi), np.sin, np.cos, np.cos, lambda u: -np.sin(u))
    return space, prof, dict(omega_u=np.cos, omega_uu=lambda u: -np.sin(u),
                             constant_curvature=1.0, horizontal=True)


def _pseudosphere(p):
    space = AmbientSpace.euclidean_helicoidal(0.0)

    def xi2(u):
        w = np.sqrt(1.0 - np.exp(-2.0 * u))
        return np.arctanh(w) - w

    prof = closed_form_profile(
        (0.0, 6.0), lambda u: np.exp(-u), xi2, lambda u: -np.exp(-u),
        lambda u: np.sqrt(1.0 - np.exp(-2.0 * u)),
    )
    return space, prof, dict(omega_u=lambda u: -np.exp(-u), omega_uu=lambda u: np.exp(-u),
                             constant_curvature=-1.0, horizontal=True)


def _twisted(xi1, dxi1, domain):
    def make(p):
        space = AmbientSpace.euclidean_helicoidal(p["a"])
        prof = profile_from_constraint(space, xi1, {"xi2_0": 0.0}, domain, dgiven=dxi1)
        return space, prof, {}

    return make


def _right_cylinder(p):
    space = AmbientSpace.euclidean_translation((0.0, 0.0, 1.0))
    r = p["radius"]
    prof = closed_form_profile(
        (-np.pi, np.pi), lambda u: r * np.cos(u / r), lambda u: r * np.sin(u / r),
        lambda u: -np.sin(u / r), lambda u: np.cos(u / r),
    )
    return space, prof, dict(constant_curvature=0.0, horizontal=True)


def _circular_cylinder(p):
    space = AmbientSpace.euclidean_helicoidal(0.0)
    r = p["radius"]
    prof = closed_form_profile((-3.0, 3.0), _const(r), lambda u: np.asarray(u, float) * 1.0,
                               _const(0.0), _const(1.0))
    return space, prof, dict(omega_u=_const(0.0), omega_uu=_const(0.0),
                             constant_curvature=0.0, horizontal=True)


def _cone(p):
    space = AmbientSpace.euclidean_helicoidal(0.0)
    s = np.sin(p["half_angle"])
    c = np.cos(p["half_angle"])
    prof = closed_form_profile((0.0, 4.0), lambda u: s * np.asarray(u, float),
                               lambda u: c * np.asarray(u, float), _const(s), _const(c))
    return space, prof, dict(omega_u=_const(s), omega_uu=_const(0.0),
                             constant_curvature=0.0, horizontal=True)


def _cosh_rotational(p):
    space = AmbientSpace.euclidean_helicoidal(0.0)
    prof = profile_from_constraint(space, np.cosh, {"xi2_0": 0.0, "u_ref": 0.0},
                                   (-0.85, 0.85), dgiven=np.sinh)
    return space, prof, dict(omega_u=np.sinh, omega_uu=np.cosh,
                             constant_curvature=-1.0, horizontal=True)


# -- BCV -----------------------------------------------------------------------------
def _bcv_cylinder(p):
    space = AmbientSpace.bcv(p["ell"], p["m"])
    prof = profile_from_constraint(space, _const(p["radius"]), {"xi2_0": 0.0},
                                   (-3.0, 3.0), dgiven=_const(0.0))
    return space, prof, dict(constant_curvature=0.0)


def _bcv_rotational(p):
    space = AmbientSpace.bcv(p["ell"], p["m"])
    prof = profile_from_constraint(space, np.sin, {"xi2_0": 0.0}, (0.0, np.pi), dgiven=np.cos)
    return space, prof, {}


# -- H2 x R --------------------------------------------------------------------------
def _minimal_graph(p):
    space = AmbientSpace.h2xr("g24", a=1.0, b=0.0)
    prof = closed_form_profile(
        (-4.0, 4.0), lambda u: np.asarray(u, float) / SQ2, lambda u: np.exp(u / SQ2),
        _const(1.0 / SQ2), lambda u: np.exp(u / SQ2) / SQ2,
    )
    return space, prof, dict(constant_curvature=-0.5)


def _g24_twisted(p):
    space = AmbientSpace.h2xr("g24", a=1.0, b=p["b"])
    prof = profile_from_constraint(space, lambda u: np.exp(0.5 * u), {"xi1_0": 0.0},
                                   (-3.0, 3.0), dgiven=lambda u: 0.5 * np.exp(0.5 * u))
    return space, prof, {}


def _horocycle_cylinder(p):
    space = AmbientSpace.h2xr("g4")
    prof = closed_form_profile((-3.0, 3.0), lambda u: np.asarray(u, float) * 1.0, _const(1.0),
                               _const(1.0), _const(0.0))
    return space, prof, dict(constant_curvature=0.0, horizontal=True)


def _funnel(p):
    space = AmbientSpace.h2xr("g34", b=1.0)
    prof = closed_form_profile(
        (-3.0, 3.0), lambda u: 2.0 * _arccot(np.exp(-u)), _const(0.0),
        lambda u: 1.0 / np.cosh(u), _const(0.0),
    )
    return space, prof, {}


def _g14_surface(p):
    space = AmbientSpace.h2xr("g14", b=p["b"])
    prof = profile_from_constraint(
        space, lambda u: 2.0 * np.cosh(1.0 + 0.5 * u), {"xi2_0": 0.0}, (-1.5, 2.0),
        dgiven=lambda u: np.sinh(1.0 + 0.5 * u),
    )
    return space, prof, {}


# -- Heisenberg -------------------------------------------------------------------------
def _heis_g1(p):
    space = AmbientSpace.heisenberg("g1")
    prof = profile_from_constraint(space, lambda u: 0.8 * np.sin(u), {"xi2_0": 0.0},
                                   (-2.0, 2.0), dgiven=lambda u: 0.8 * np.cos(u))
    return space, prof, {}


def _heis_g3_cylinder(p):
    space = AmbientSpace.heisenberg("g3")
    prof = closed_form_profile((-3.0, 3.0), np.cos, np.sin, lambda u: -np.sin(u), np.cos)
    return space, prof, dict(constant_curvature=0.0)


def _helicoidal_catenoid(p):
    space = AmbientSpace.heisenberg("g43", a=p["a"])
    prof = closed_form_profile(
        (-4.0, 4.0), lambda u: np.sqrt(np.asarray(u, float) ** 2 + 1.0),
        lambda u: 0.5 * (u - _arccot(u)),
        lambda u: u / np.sqrt(np.asarray(u, float) ** 2 + 1.0),
        lambda u: 0.5 * (1.0 + 1.0 / (1.0 + np.asarray(u, float) ** 2)),
    )
    return space, prof, {}


_ENTRIES = [
    CatalogEntry("sphere", "R3 rotational", {}, (0.0, np.pi), (0.2, np.pi - 0.2),
                 "unit sphere, profile (sin u, cos u)", _sphere),
    CatalogEntry("pseudosphere", "R3 rotational", {}, (0.0, 6.0), (0.2, 3.0),
                 "pseudosphere, xi1 = e^{-u}", _pseudosphere),
    CatalogEntry("twisted_sphere", "R3 helicoidal", {"a": 1.0}, (0.0, np.pi), (0.3, np.pi - 0.3),
                 "twisted sphere, xi1 = sin u, xi2 = E(u, -1)",
                 _twisted(np.sin, np.cos, (0.0, np.pi))),
    CatalogEntry("twisted_pseudosphere", "R3 helicoidal", {"a": 1.0}, (0.0, 3.0), (0.2, 2.5),
                 "twisted pseudosphere, xi1 = e^{-u}, xi2 via 2F1",
                 _twisted(lambda u: np.exp(-u), lambda u: -np.exp(-u), (0.0, 3.0))),
    CatalogEntry("right_cylinder", "R3 translational", {"radius": 1.0}, (-np.pi, np.pi), (-2.5, 2.5),
                 "flat right cylinder over a circle, E=1, F=0, omega=1", _right_cylinder),
    CatalogEntry("circular_cylinder", "R3 rotational", {"radius": 1.0}, (-3.0, 3.0), (-2.5, 2.5),
                 "vertical circular cylinder, omega constant", _circular_cylinder),
    CatalogEntry("cone", "R3 rotational", {"half_angle": np.pi / 6}, (0.0, 4.0), (0.3, 3.5),
                 "flat cone, omega linear in u", _cone),
    CatalogEntry("cosh_rotational", "R3 rotational", {}, (-0.85, 0.85), (-0.8, 0.8),
                 "rotational surface with omega = cosh u, K = -1", _cosh_rotational),
    CatalogEntry("bcv_cylinder", "BCV rotational", {"ell": 1.0, "m": 0.0, "radius": 1.0},
                 (-3.0, 3.0), (-2.5, 2.5), "vertical cylinder in a BCV space", _bcv_cylinder),
    CatalogEntry("bcv_rotational", "BCV rotational", {"ell": 1.0, "m": -0.25}, (0.0, np.pi),
                 (0.3, np.pi - 0.3), "rotational surface with radius sin u in BCV(1, -1/4)",
                 _bcv_rotational),
    CatalogEntry("minimal_graph", "H2xR G2", {}, (-4.0, 4.0), (-3.0, 3.0),
                 "minimal graph z = -ln y, G2-invariant", _minimal_graph),
    CatalogEntry("g24_twisted", "H2xR G24", {"b": 1.0}, (-3.0, 3.0), (-2.5, 2.5),
                 "G24-invariant surface with xi2 = e^{u/2}, b = 1", _g24_twisted),
    CatalogEntry("horocycle_cylinder", "H2xR G4", {}, (-3.0, 3.0), (-2.5, 2.5),
                 "right cylinder over a horocycle, loxodromes are helices", _horocycle_cylinder),
    CatalogEntry("funnel", "H2xR G34", {}, (-3.0, 3.0), (-2.5, 2.5),
                 "complete minimal surface in H2xR, z = ln sqrt(x^2 + y^2)", _funnel),
    CatalogEntry("g14_surface", "H2xR G14", {"b": 0.5}, (-1.5, 2.0), (-1.2, 1.8),
                 "G14-invariant surface with xi1 = 2 cosh(1 + u/2)", _g14_surface),
    CatalogEntry("heis_g1", "H3 G1", {}, (-2.0, 2.0), (-1.8, 1.8),
                 "G1-invariant surface with xi1 = 0.8 sin u", _heis_g1),
    CatalogEntry("heis_g3_cylinder", "H3 G3", {}, (-3.0, 3.0), (-2.5, 2.5),
                 "vertical cylinder over the unit circle, general helices", _heis_g3_cylinder),
    CatalogEntry("helicoidal_catenoid", "H3 G43", {"a": 0.5}, (-4.0, 4.0), (-3.0, 3.0),
                 "helicoidal minimal surface in H3, a = 1/2", _helicoidal_catenoid),
]

CATALOG = {e.id: e for e in _ENTRIES}


def catalog_ids():
    return list(CATALOG)


def build_catalog_surface(id: str, params=None) -> InvariantSurface:
    try:
        entry = CATALOG[id]
    except KeyError:
        raise UnknownCatalogId(f"unknown catalog id {id!r}") from None
    merged = dict(entry.defaults)
    for key, val in (params or {}).items():
        if key not in entry.defaults:
            raise BadParams(f"{id} does not take parameter {key!r}")
        merged[key] = float(val)
    space, profile, extra = entry.build(merged)
    return _surface(id, space, profile, merged, entry.trace_range, entry.provenance, **extra)
