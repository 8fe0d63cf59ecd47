"""Strict JSON surface configuration.

Example::

    {
      "schema_version": 1,
      "family": "euclidean3",
      "killing": "helicoidal",
      "params": {"a": 1.0},
      "profile": {"xi1": "sin(u)", "xi2": "constraint", "u_min": 0, "u_max": 3.14159},
      "eps_dom": 1e-4
    }

``profile`` is one of ``{"catalog_id": ..., "params": {...}}``, an expression
profile (``xi1``/``xi2`` strings, one of which may be ``"constraint"``) or
``{"sampled": {"u": [...], "xi1": [...], "xi2": [...]}}``.  Unknown keys are
rejected at every level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .ambient import AmbientSpace
from .catalog import build_catalog_surface
from .errors import ConfigError
from .expr import derivative, parse
from .lox import EPS_DOM
from .surface import InvariantSurface, closed_form_profile, profile_from_constraint, quotient_model, sampled_profile

SCHEMA_VERSION = 1
TOP_KEYS = {"schema_version", "name", "family", "killing", "params", "profile", "eps_dom",
            "trace_range", "tolerances", "output"}
PARAM_KEYS = {"a", "b", "ell", "m", "axis"}
EXPR_PROFILE_KEYS = {"xi1", "xi2", "u_min", "u_max", "xi1_0", "xi2_0", "u_ref", "sign"}
OUTPUT_KEYS = {"format", "samples"}
UNIT_SPEED_TOL = 1e-6


def _reject_unknown(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"unknown field(s) in {where}: {', '.join(extra)}")


def _number(obj, key, where, default=None):
    val = obj.get(key, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    return float(val)


@dataclass
class SurfaceConfig:
    schema_version: int
    profile: dict
    family: str | None = None
    killing: str | None = None
    params: dict = field(default_factory=dict)
    name: str = "custom"
    eps_dom: float = EPS_DOM
    trace_range: tuple | None = None
    tolerances: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data) -> SurfaceConfig:
        _reject_unknown(data, TOP_KEYS, "config")
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"schema_version must be {SCHEMA_VERSION}")
        if "profile" not in data:
            raise ConfigError("config.profile is required")
        params = data.get("params", {})
        _reject_unknown(params, PARAM_KEYS, "params")
        output = data.get("output", {})
        _reject_unknown(output, OUTPUT_KEYS, "output")
        tols = data.get("tolerances", {})
        if not isinstance(tols, dict):
            raise ConfigError("tolerances must be a JSON object")
        eps = _number(data, "eps_dom", "config", EPS_DOM)
        if eps < 0:
            raise ConfigError("eps_dom must be non-negative")
        tr = data.get("trace_range")
        if tr is not None:
            if not (isinstance(tr, list) and len(tr) == 2 and tr[0] < tr[1]):
                raise ConfigError("trace_range must be [u_min, u_max] with u_min < u_max")
            tr = (float(tr[0]), float(tr[1]))
        profile = data["profile"]
        if not isinstance(profile, dict):
            raise ConfigError("profile must be a JSON object")
        if "catalog_id" not in profile and not (data.get("family") and data.get("killing")):
            raise ConfigError("family and killing are required unless profile names a catalog_id")
        return cls(
            schema_version=SCHEMA_VERSION, profile=profile, family=data.get("family"),
            killing=data.get("killing"), params=params, name=str(data.get("name", "custom")),
            eps_dom=eps, trace_range=tr, tolerances=tols, output=output,
        )

    @classmethod
    def load(cls, path) -> SurfaceConfig:
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        cfg = cls.from_dict(data)
        if "name" not in data:
            cfg.name = Path(path).stem
        return cfg

    def space(self) -> AmbientSpace:
        kw = {k: float(v) for k, v in self.params.items() if k != "axis"}
        if "axis" in self.params:
            kw["axis"] = tuple(float(c) for c in self.params["axis"])
        return AmbientSpace(self.family, self.killing, **kw)

    def build(self) -> InvariantSurface:
        prof = self.profile
        if "catalog_id" in prof:
            _reject_unknown(prof, {"catalog_id", "params"}, "profile")
            surf = build_catalog_surface(prof["catalog_id"], prof.get("params"))
            if self.trace_range is not None:
                surf = replace(surf, trace_range=self.trace_range)
            return surf
        space = self.space()
        if "sampled" in prof:
            _reject_unknown(prof, {"sampled"}, "profile")
            table = prof["sampled"]
            _reject_unknown(table, {"u", "xi1", "xi2"}, "profile.sampled")
            try:
                profile = sampled_profile(table["u"], table["xi1"], table["xi2"])
            except KeyError as exc:
                raise ConfigError(f"profile.sampled.{exc.args[0]} is required") from None
        else:
            profile = self._expr_profile(space, prof)
        return InvariantSurface(
            name=self.name, space=space, profile=profile, provenance="config",
            trace_range=self.trace_range, params=dict(self.params),
        )

    @staticmethod
    def _expr_profile(space, prof):
        _reject_unknown(prof, EXPR_PROFILE_KEYS, "profile")
        for key in ("xi1", "xi2", "u_min", "u_max"):
            if key not in prof:
                raise ConfigError(f"profile.{key} is required")
        lo = _number(prof, "u_min", "profile")
        hi = _number(prof, "u_max", "profile")
        if not lo < hi:
            raise ConfigError("profile.u_min must be less than profile.u_max")
        xi1, xi2 = prof["xi1"], prof["xi2"]
        free = quotient_model(space).free_index
        if xi1 == "constraint" or xi2 == "constraint":
            given_key = "xi1" if free == 1 else "xi2"
            if prof[given_key] == "constraint":
                raise ConfigError(
                    f"this Killing field prescribes {given_key}; the other coordinate is the constraint"
                )
            given = parse(prof[given_key])
            params = {k: _number(prof, k, "profile") for k in ("xi1_0", "xi2_0", "u_ref", "sign")
                      if k in prof}
            return profile_from_constraint(
                space, given, params, (lo, hi), dgiven=lambda u: derivative(given, u)
            )
        e1, e2 = parse(xi1), parse(xi2)
        for e in (e1, e2):
            # fail early on expressions undefined inside the domain
            e(np.linspace(lo, hi, 33)[1:-1])
        profile = closed_form_profile((lo, hi), e1, e2, lambda u: derivative(e1, u),
                                      lambda u: derivative(e2, u))
        # the loxodrome integral assumes a unit-speed profile in the orbit space
        u = np.linspace(lo, hi, 33)[1:-1]
        e, f, w = quotient_model(space).coefficients(e1(u), e2(u), profile.dxi1(u), profile.dxi2(u))
        speed_dev = float(np.max(np.abs(e - f * f / (w * w) - 1.0)))
        if speed_dev > UNIT_SPEED_TOL:
            raise ConfigError(
                f"profile is not unit speed in the orbit space (deviation {speed_dev:.2e}); "
                "use \"constraint\" for one coordinate"
            )
        return profile


def load_surface(source: str):
    """Catalog id or path to a JSON config; returns (surface, config or None)."""
    if source.endswith(".json") or Path(source).is_file():
        cfg = SurfaceConfig.load(source)
        return cfg.build(), cfg
    return build_catalog_surface(source), None
