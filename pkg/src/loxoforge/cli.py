"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .catalog import CATALOG, catalog_ids
from .config import load_surface
from .errors import ConfigError, LoxoforgeError, NumericError
from .export import (MalformedTraceFile, infer_theta0, mesh_obj, plot_svg, read_trace_csv,
                     trace_csv, trace_json)
from .expr import EvalError, parse_angle
from .lox import EPS_DOM, LoxodromeSpec, LoxodromeTrace, arc_length, trace
from .verify import SUITE_ANGLES, SUITE_GRID, run_suite, verify_trace

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _angle(text):
    try:
        val = parse_angle(text)
    except LoxoforgeError as exc:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}: {exc}") from None
    return val


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _range(surf, eps_dom):
    lo, hi = surf.u_domain
    return surf.trace_range or (lo + eps_dom, hi - eps_dom)


def _eps(args, cfg):
    if args.eps_dom is not None:
        return args.eps_dom
    return cfg.eps_dom if cfg is not None else EPS_DOM


def _tols(cfg):
    return cfg.tolerances if cfg is not None else None


# -- subcommands -----------------------------------------------------------------------
def cmd_list(args):
    lines = []
    for sid in catalog_ids():
        e = CATALOG[sid]
        params = ", ".join(f"{k}={v:g}" for k, v in e.defaults.items()) or "-"
        lo, hi = e.u_domain
        lines.append(f"{sid:<22} {e.family:<18} params: {params:<26} u in ({lo:.6g}, {hi:.6g})  "
                     f"# {e.provenance}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _trace_from_args(args):
    surf, cfg = load_surface(args.surface)
    eps = _eps(args, cfg)
    lo, hi = _range(surf, eps)
    u0 = lo if args.u0 is None else args.u0
    u_end = hi if args.u_end is None else args.u_end
    spec = LoxodromeSpec(args.theta0, args.branch, u0, args.v0, args.samples)
    return surf, cfg, trace(surf, spec, u_end, eps_dom=eps)


def cmd_trace(args):
    surf, cfg, tr = _trace_from_args(args)
    report = verify_trace(surf, tr, _tols(cfg))
    fmt = args.format or (cfg.output.get("format") if cfg else None) or "csv"
    if fmt == "csv":
        text = trace_csv(tr, report.angle_dev)
    elif fmt == "json":
        text = trace_json(tr, report.angle_dev, report)
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    _write(args.out, text)
    if tr.diverging:
        print("warning: trace diverges toward a singular orbit", file=sys.stderr)
    return EXIT_OK


def _trace_from_csv(surf, path, theta0, branch):
    cols = read_trace_csv(Path(path).read_text(encoding="utf-8"))
    if theta0 is None:
        theta0 = infer_theta0(cols)
    u, v = cols["u"], cols["v"]
    spec = LoxodromeSpec(theta0, branch, float(u[0]), float(v[0]), u.size)
    return LoxodromeTrace(surf, spec, u, v, surf.psi(u, v), arc_length(u[0], u, theta0))


def cmd_verify(args):
    cfg = None
    if args.trace_file:
        if not args.surface or len(args.surface) != 1:
            raise ConfigError("--trace-file needs exactly one --surface")
        surf, cfg = load_surface(args.surface[0])
        tr = _trace_from_csv(surf, args.trace_file, args.theta0[0] if args.theta0 else None,
                             args.branch or "plus")
        if args.corrupt:
            tr = tr.with_v(tr.v * 1.1)
        reports = [verify_trace(surf, tr, _tols(cfg))]
    else:
        sources = []
        for item in (args.surface if args.surface is not None else catalog_ids()):
            for sid in (s.strip() for s in item.split(",")):
                if not sid:
                    continue
                if sid.endswith(".json"):
                    surf, cfg = load_surface(sid)
                    sources.append(surf)
                elif sid not in CATALOG:
                    raise ConfigError(f"unknown catalog id {sid!r}")
                else:
                    sources.append(sid)
        angles = tuple(args.theta0) if args.theta0 else SUITE_ANGLES
        branches = (args.branch,) if args.branch else ("plus", "minus")
        reports = run_suite(sources, angles, branches, args.samples or SUITE_GRID, _tols(cfg),
                            corrupt=args.corrupt, workers=args.workers)
    doc = [r.to_dict() for r in reports]
    _write(args.out, json.dumps(doc, indent=2) + "\n")
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.surface_id} theta0={r.spec.get('theta0'):.6g} "
              f"branch={r.spec.get('branch')} angle_dev={r.max_angle_dev:.3e}"
              + (f" error={r.error}" if r.error else ""), file=sys.stderr)
    print(f"{len(reports) - len(failed)}/{len(reports)} reports pass", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_mesh(args):
    surf, cfg = load_surface(args.surface)
    eps = _eps(args, cfg)
    lo, hi = surf.u_domain
    u_min = lo + eps if args.u_min is None else args.u_min
    u_max = hi - eps if args.u_max is None else args.u_max
    if args.u_samples < 2 or args.v_samples < 2:
        raise ConfigError("mesh grids need at least 2 samples in each direction")
    u_grid = np.linspace(u_min, u_max, args.u_samples)
    surf.check_u(u_grid)
    traces = []
    if args.traces:
        t_lo, t_hi = _range(surf, eps)
        width = args.v_max - args.v_min
        for k in range(args.traces):
            v0 = args.v_min + k * width / args.traces
            spec = LoxodromeSpec(args.theta0, args.branch, t_lo, v0, args.samples)
            traces.append(trace(surf, spec, t_hi, eps_dom=eps))
    text = mesh_obj(surf, u_grid, (args.v_min, args.v_max), args.v_samples, traces)
    _write(args.out, text)
    return EXIT_OK


def cmd_plot(args):
    series, labels = [], []
    for path in args.input:
        cols = read_trace_csv(Path(path).read_text(encoding="utf-8"))
        theta0 = args.theta0 if args.theta0 is not None else infer_theta0(cols)
        series.append((cols["u"], cols["v"]))
        labels.append(f"{Path(path).stem}: theta0 = {theta0:.6g}")
    _write(args.out, plot_svg(series, labels, title=args.title or "v(u)"))
    return EXIT_OK


# -- parser --------------------------------------------------------------------------
def build_parser():
    p = _Parser(prog="loxoforge", description="Loxodromes on invariant surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("list", help="list catalog surfaces")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("trace", help="trace one loxodrome")
    sp.add_argument("--surface", required=True, help="catalog id or config.json")
    sp.add_argument("--theta0", type=_angle, required=True, help="radians or e.g. pi/6")
    sp.add_argument("--branch", choices=("plus", "minus"), default="plus")
    sp.add_argument("--u0", type=float)
    sp.add_argument("--v0", type=float, default=0.0)
    sp.add_argument("--u-end", type=float)
    sp.add_argument("--samples", type=int, default=201)
    sp.add_argument("--eps-dom", type=float)
    sp.add_argument("--out", default="-")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("verify", help="run the verification oracle")
    sp.add_argument("--surface", action="append",
                    help="catalog id, comma list or config.json (repeatable; default: all)")
    sp.add_argument("--theta0", type=_angle, action="append")
    sp.add_argument("--branch", choices=("plus", "minus"))
    sp.add_argument("--samples", type=int)
    sp.add_argument("--trace-file", help="verify a CSV written by 'trace'")
    sp.add_argument("--corrupt", action="store_true", help="scale v by 1.1 (negative control)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("mesh", help="export the surface as OBJ")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--u-samples", type=int, default=32)
    sp.add_argument("--v-samples", type=int, default=64)
    sp.add_argument("--u-min", type=float)
    sp.add_argument("--u-max", type=float)
    sp.add_argument("--v-min", type=_angle, default=0.0)
    sp.add_argument("--v-max", type=_angle, default=2.0 * np.pi)
    sp.add_argument("--traces", type=int, default=0, help="number of loxodromes to overlay")
    sp.add_argument("--theta0", type=_angle, default=np.pi / 4)
    sp.add_argument("--branch", choices=("plus", "minus"), default="plus")
    sp.add_argument("--samples", type=int, default=201)
    sp.add_argument("--eps-dom", type=float)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("plot", help="SVG plot of v(u) from trace CSVs")
    sp.add_argument("input", nargs="+", help="one CSV, or several to overlay")
    sp.add_argument("--theta0", type=_angle)
    sp.add_argument("--title")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, MalformedTraceFile) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, EvalError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except LoxoforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
