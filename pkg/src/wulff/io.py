"""Flat-file formats: OFF meshes, CSV polygon loops, SVG plots, JSON reports.

Every writer goes through :func:`atomic_write`, so a crashed run never
leaves a half-written artifact behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import WulffError
from .geometry import Polytope, _edges, convex_hull


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def to_off(P: Polytope) -> str:
    if P.dim != 3:
        raise WulffError("OFF output is for 3-D polytopes; use CSV for polygons")
    lines = ["OFF", f"{len(P.vertices)} {len(P.facets)} {len(_edges(P))}"]
    lines += [" ".join(fmt(c) for c in v) for v in P.vertices]
    lines += [" ".join(str(i) for i in (len(f.vertices), *f.vertices)) for f in P.facets]
    return "\n".join(lines) + "\n"


def to_csv(P: Polytope) -> str:
    if P.dim != 2:
        raise WulffError("CSV loops are for 2-D polygons; use OFF for 3-D")
    loop = np.vstack([P.vertices, P.vertices[:1]])
    return "x,y\n" + "".join(f"{fmt(x)},{fmt(y)}\n" for x, y in loop)


def to_json(P: Polytope) -> str:
    doc = {
        "dimension": P.dim,
        "vertices": P.vertices.tolist(),
        "facets": [
            {"normal": f.normal.tolist(), "offset": f.offset, "vertices": list(f.vertices)}
            for f in P.facets
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_off(text: str) -> Polytope:
    tokens = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    tokens = [t for t in tokens if t]
    if not tokens or tokens[0] != "OFF":
        raise WulffError("missing OFF header")
    try:
        nv = int(tokens[1].split()[0])
        verts = np.array([[float(c) for c in tokens[2 + i].split()[:3]] for i in range(nv)])
    except (IndexError, ValueError) as exc:
        raise WulffError(f"malformed OFF file: {exc}") from exc
    return convex_hull(verts)


def parse_csv(text: str) -> Polytope:
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        try:
            rows.append([float(c) for c in ln.split(",")])
        except ValueError:
            if rows:
                raise WulffError(f"malformed CSV row: {ln!r}") from None
            # header
    pts = np.array(rows)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise WulffError("CSV polygons need exactly two columns")
    if len(pts) > 1 and np.array_equal(pts[0], pts[-1]):
        pts = pts[:-1]
    return convex_hull(pts)


def read_polytope(path) -> Polytope:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".off":
        return parse_off(text)
    if path.suffix.lower() == ".csv":
        return parse_csv(text)
    if path.suffix.lower() == ".json":
        doc = json.loads(text)
        return convex_hull(np.array(doc["vertices"], dtype=float))
    raise WulffError(f"unrecognized polytope file type: {path.suffix}")


def write_polytope(P: Polytope, path, fmt_name: str | None = None) -> Path:
    fmt_name = fmt_name or ("off" if P.dim == 3 else "csv")
    if fmt_name == "off":
        return atomic_write(path, to_off(P))
    if fmt_name == "csv":
        return atomic_write(path, to_csv(P))
    if fmt_name == "json":
        return atomic_write(path, to_json(P))
    if fmt_name == "svg":
        return emit_svg(P, path)
    raise WulffError(f"unknown format {fmt_name!r}")


SVG_SIZE = 800


def svg_document(P: Polytope, overlay: Polytope | None = None, size: int = SVG_SIZE) -> str:
    bodies = [P] + ([overlay] if overlay is not None else [])
    if any(b.dim != 2 for b in bodies):
        raise WulffError("SVG plots are for 2-D polygons")
    pts = np.vstack([b.vertices for b in bodies] + [np.zeros((1, 2))])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    margin = 0.05 * span
    lo, span = lo - margin, span + 2 * margin
    k = size / span

    def xy(p):
        return f"{(p[0] - lo[0]) * k:.6f}", f"{size - (p[1] - lo[1]) * k:.6f}"

    def path(V):
        head, *rest = [xy(p) for p in V]
        return "M " + " ".join(head) + "".join(f" L {x} {y}" for x, y in rest) + " Z"

    ox, oy = xy((0.0, 0.0))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        "<style>.axis{stroke:#999;stroke-width:1}"
        ".body{fill:none;stroke:#1f4e9c;stroke-width:2}"
        ".overlay{fill:none;stroke:#c0392b;stroke-width:2;stroke-dasharray:6 4}</style>",
        f'<line class="axis" x1="0" y1="{oy}" x2="{size}" y2="{oy}"/>',
        f'<line class="axis" x1="{ox}" y1="0" x2="{ox}" y2="{size}"/>',
        f'<path class="body" d="{path(P.vertices)}"/>',
    ]
    if overlay is not None:
        parts.append(f'<path class="overlay" d="{path(overlay.vertices)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(P: Polytope, path, overlay: Polytope | None = None) -> Path:
    return atomic_write(path, svg_document(P, overlay))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")
