"""Loxodromes on invariant surfaces of three-dimensional Riemannian spaces."""

from .ambient import AmbientSpace, flow, killing_eval, metric_eval
from .catalog import CATALOG, build_catalog_surface, catalog_ids
from .errors import ConfigError, LoxoforgeError, NumericError
from .expr import ProfileExpr, derivative, evaluate, parse
from .lox import (ClosedFormSolution, LoxodromeSpec, LoxodromeTrace, arc_length, clairaut_quantity,
                  closed_form_v, fit_closed_form, geodesic_residual, integrand, trace)
from .surface import InvariantSurface, gauss_curvature, numeric_coeffs, omega_of
from .verify import VerificationReport, corrupt_trace, run_suite, verify_flatness_theorem, verify_trace

__version__ = "0.1.0"
