"""Writers and readers for traces, meshes and plots.

Every writer is deterministic: the same input gives byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import ConfigError, LoxoforgeError
from .lox import LoxodromeTrace
from .surface import InvariantSurface

CSV_COLUMNS = ("u", "v", "x", "y", "z", "s", "angle_dev")


class MalformedTraceFile(LoxoforgeError):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def trace_columns(tr: LoxodromeTrace, angle_dev=None):
    if angle_dev is None:
        angle_dev = np.full(len(tr), np.nan)
    p = np.asarray(tr.points)
    return {"u": tr.u, "v": tr.v, "x": p[:, 0], "y": p[:, 1], "z": p[:, 2], "s": tr.s,
            "angle_dev": np.asarray(angle_dev)}


def trace_csv(tr: LoxodromeTrace, angle_dev=None) -> str:
    cols = trace_columns(tr, angle_dev)
    lines = [",".join(CSV_COLUMNS)]
    for i in range(len(tr)):
        lines.append(",".join(_fmt(cols[c][i]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def trace_json(tr: LoxodromeTrace, angle_dev=None, report=None) -> str:
    cols = trace_columns(tr, angle_dev)
    doc = {
        "surface": tr.surface.name,
        "spec": tr.spec.as_dict(),
        "monotone": tr.monotone,
        "diverging": tr.diverging,
        "columns": list(CSV_COLUMNS),
        "samples": {c: [float(x) for x in cols[c]] for c in CSV_COLUMNS},
    }
    if report is not None:
        doc["report"] = report.to_dict()
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def read_trace_csv(text: str) -> dict:
    """Parse a trace CSV back into float arrays keyed by column name."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise MalformedTraceFile(f"header must be {','.join(CSV_COLUMNS)}")
    body = [r for r in rows[1:] if r]
    if len(body) < 2:
        raise MalformedTraceFile("a trace needs at least 2 rows")
    try:
        data = np.array([[float(x) for x in r] for r in body])
    except ValueError as exc:
        raise MalformedTraceFile(f"non-numeric value ({exc})") from None
    if data.shape[1] != len(CSV_COLUMNS):
        raise MalformedTraceFile("wrong number of columns")
    return {c: data[:, i] for i, c in enumerate(CSV_COLUMNS)}


def infer_theta0(cols) -> float:
    """Angle in (0, pi/2] from the s column: s = (u - u0) / sin(theta0)."""
    du = cols["u"][-1] - cols["u"][0]
    ds = cols["s"][-1] - cols["s"][0]
    if ds == 0:
        raise MalformedTraceFile("s column is constant")
    return float(np.arcsin(np.clip(du / ds, -1.0, 1.0)))


# -- OBJ -----------------------------------------------------------------------------
def _periodic(surf: InvariantSurface, period, samples=5, tol=1e-9):
    lo, hi = surf.trace_range or surf.u_domain
    base = surf.lift(np.linspace(lo, hi, samples))
    moved = surf.space.flow(base, np.full(samples, period))
    return bool(np.max(np.abs(moved - base)) <= tol * max(1.0, float(np.max(np.abs(base)))))


def mesh_grid(surf: InvariantSurface, u_grid, v_range, nv):
    """Vertices psi(u_i, v_j) (row-major in i) and quad faces.

    When the v-range spans a full period of the flow the last column is
    dropped and faces wrap around in v.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    nu = u_grid.size
    if nu < 2 or nv < 2:
        raise ConfigError("mesh grids need at least 2 samples in each direction")
    v0, v1 = (float(x) for x in v_range)
    wrap = np.isclose(abs(v1 - v0), 2.0 * np.pi, rtol=0, atol=1e-12) and _periodic(surf, v1 - v0)
    v_grid = np.linspace(v0, v1, nv, endpoint=not wrap)
    uu, vv = np.meshgrid(u_grid, v_grid, indexing="ij")
    verts = surf.psi(uu, vv).reshape(-1, 3)
    faces = []
    ncol = nv if wrap else nv - 1
    for i in range(nu - 1):
        for j in range(ncol):
            j1 = (j + 1) % nv
            faces.append((i * nv + j, (i + 1) * nv + j, (i + 1) * nv + j1, i * nv + j1))
    return verts, np.array(faces, dtype=int).reshape(-1, 4), wrap


def mesh_obj(surf: InvariantSurface, u_grid, v_range, nv, traces=()) -> str:
    verts, faces, _ = mesh_grid(surf, u_grid, v_range, nv)
    out = [f"# {surf.name}", f"o {surf.name}"]
    out += [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in verts]
    out += ["f " + " ".join(str(k + 1) for k in f) for f in faces]
    offset = len(verts)
    for k, tr in enumerate(traces):
        pts = np.asarray(tr.points)
        out.append(f"o trace_{k}")
        out += [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in pts]
        out.append("l " + " ".join(str(offset + i + 1) for i in range(len(pts))))
        offset += len(pts)
    return "\n".join(out) + "\n"


# -- SVG -----------------------------------------------------------------------------
SVG_W, SVG_H, MARGIN = 640, 480, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _nice(x):
    return format(float(x), ".4g")


def plot_svg(series, labels=None, title="") -> str:
    """Polylines of (u, v) for each series with axes and tick labels.

    ``series`` is a list of (u, v) pairs of arrays.
    """
    if not series:
        raise ConfigError("nothing to plot")
    u_all = np.concatenate([np.asarray(u, float) for u, _ in series])
    v_all = np.concatenate([np.asarray(v, float) for _, v in series])
    umin, umax = float(u_all.min()), float(u_all.max())
    vmin, vmax = float(v_all.min()), float(v_all.max())
    if umax == umin:
        umin, umax = umin - 1.0, umax + 1.0
    if vmax - vmin < 1e-12 * max(1.0, abs(vmin)):
        vmin, vmax = vmin - 1.0, vmax + 1.0
    pw, ph = SVG_W - 2 * MARGIN, SVG_H - 2 * MARGIN

    def sx(u):
        return MARGIN + (np.asarray(u, float) - umin) / (umax - umin) * pw

    def sy(v):
        return SVG_H - MARGIN - (np.asarray(v, float) - vmin) / (vmax - vmin) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
        f'viewBox="0 0 {SVG_W} {SVG_H}">',
        f'<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{SVG_H - MARGIN}" x2="{SVG_W - MARGIN}" y2="{SVG_H - MARGIN}" '
        'stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{SVG_H - MARGIN}" stroke="black"/>',
    ]
    for k in range(5):
        t = k / 4
        ux = MARGIN + t * pw
        vy = SVG_H - MARGIN - t * ph
        out.append(f'<text x="{ux:.2f}" y="{SVG_H - MARGIN + 18}" font-size="11" '
                   f'text-anchor="middle">{_nice(umin + t * (umax - umin))}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{vy + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{_nice(vmin + t * (vmax - vmin))}</text>')
    out.append(f'<text x="{SVG_W / 2:.0f}" y="{SVG_H - 10}" font-size="13" '
               'text-anchor="middle">u</text>')
    out.append(f'<text x="14" y="{SVG_H / 2:.0f}" font-size="13">v</text>')
    if title:
        out.append(f'<text x="{SVG_W / 2:.0f}" y="24" font-size="14" '
                   f'text-anchor="middle">{title}</text>')
    for k, (u, v) in enumerate(series):
        pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(sx(u), sy(v)))
        color = COLORS[k % len(COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        if labels:
            out.append(f'<text x="{SVG_W - MARGIN - 4}" y="{MARGIN + 16 * (k + 1)}" font-size="12" '
                       f'text-anchor="end" fill="{color}">{labels[k]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
