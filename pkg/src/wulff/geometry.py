"""Convex polytope primitives in two and three dimensions.

A :class:`Polytope` carries both representations at once: the vertex list
(exactly the extreme points) and the facet half-spaces together with the
indices of the vertices lying on each facet.  All incidence decisions use a
single absolute tolerance, ``TOL``, scaled by the coordinate extent.

Two-dimensional polytopes keep their vertices in counter-clockwise order and
facet ``i`` is the edge ``(i, i + 1)``.  Three-dimensional facets list their
vertices counter-clockwise as seen from outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    NonpositiveScale,
    OriginNotInterior,
    Unbounded,
    WulffError,
)

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """The set ``{x : <x, normal> <= offset}`` with a unit ``normal``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        length = np.linalg.norm(n)
        if not np.isfinite(length) or length == 0.0:
            raise WulffError("half-space normal must be a nonzero finite vector")
        object.__setattr__(self, "normal", n / length)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_unnormalized(cls, normal, offset) -> "HalfSpace":
        """Half-space ``<x, normal> <= offset`` with both sides rescaled."""
        n = np.asarray(normal, dtype=float)
        length = np.linalg.norm(n)
        return cls(n / length, float(offset) / length)


@dataclass(frozen=True, eq=False)
class Facet:
    normal: np.ndarray
    offset: float
    vertices: tuple[int, ...]
    generator: int | None = None

    @property
    def halfspace(self) -> HalfSpace:
        return HalfSpace(self.normal, self.offset)


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    facets: tuple[Facet, ...]
    tol: float = TOL
    # generator indices of half-spaces that produced no facet
    redundant: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def normals(self) -> np.ndarray:
        return np.array([f.normal for f in self.facets])

    @property
    def offsets(self) -> np.ndarray:
        return np.array([f.offset for f in self.facets])

    def halfspaces(self) -> list[HalfSpace]:
        return [f.halfspace for f in self.facets]

    def contains(self, x, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.normals @ x - self.offsets <= tol * _extent(self.vertices)))

    def validate(self) -> None:
        """Raise ``WulffError`` if any representation invariant is broken."""
        d = self.dim
        if d not in (2, 3):
            raise WulffError(f"unsupported dimension {d}")
        if not np.all(np.isfinite(self.vertices)):
            raise WulffError("non-finite vertex coordinates")
        eps = 10 * self.tol * _extent(self.vertices)
        slack = self.vertices @ self.normals.T - self.offsets
        if slack.max() > eps:
            raise WulffError(f"vertex outside a facet half-space by {slack.max():.3e}")
        for k, f in enumerate(self.facets):
            if len(f.vertices) < d:
                raise WulffError(f"facet {k} has fewer than {d} vertices")
            on = self.vertices[list(f.vertices)] @ f.normal - f.offset
            if np.abs(on).max() > eps:
                raise WulffError(f"facet {k} lists a vertex off its plane")
        if len(_extreme_indices(self.vertices, self.tol)) != len(self.vertices):
            raise WulffError("vertex list contains non-extreme points")
        if not _positively_spanning(self.normals, self.tol):
            raise WulffError("facet normals do not positively span")


def _extent(points: np.ndarray) -> float:
    return max(1.0, float(np.abs(points).max(initial=0.0)))


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise DimensionMismatch(f"expected an (n, 2) or (n, 3) point array, got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise WulffError("points must be finite")
    return pts


def _merge_close(points: np.ndarray, eps: float) -> np.ndarray:
    """Indices of representatives after merging points closer than ``eps``.

    Each cluster keeps its lexicographically smallest member.
    """
    n = len(points)
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in cKDTree(points).query_pairs(eps):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(n)])
    order = np.lexsort(points.T[::-1])
    keep = {}
    for i in order:
        keep.setdefault(roots[i], i)
    return np.array(sorted(keep.values()))


# --------------------------------------------------------------------------
# hull kernels


def _hull_2d(points: np.ndarray, eps: float) -> list[int]:
    """Monotone chain; returns ccw indices of strict extreme points.

    The chain itself uses the exact orientation sign.  Near-collinear
    vertices are pruned afterwards, and only when they sit between their
    neighbours, so rounding noise in the sort order cannot drop a corner.
    """
    order = np.lexsort((points[:, 1], points[:, 0])).tolist()
    xy = points.tolist()

    def turn(o, a, b):
        (ox, oy), (ax, ay), (bx, by) = xy[o], xy[a], xy[b]
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)

    def chain(idx):
        out: list[int] = []
        for i in idx:
            while len(out) >= 2 and turn(out[-2], out[-1], i) <= 0:
                out.pop()
            out.append(i)
        return out

    ring = chain(order)[:-1] + chain(order[::-1])[:-1]
    changed = True
    while changed and len(ring) > 3:
        changed = False
        for k in range(len(ring)):
            o, a, b = ring[k - 1], ring[k], ring[(k + 1) % len(ring)]
            (ox, oy), (ax, ay), (bx, by) = xy[o], xy[a], xy[b]
            span = math.hypot(bx - ox, by - oy)
            between = (ax - ox) * (bx - ox) + (ay - oy) * (by - oy) >= 0 and \
                (bx - ax) * (bx - ox) + (by - ay) * (by - oy) >= 0
            if between and turn(o, a, b) <= eps * span:
                del ring[k]
                changed = True
                break
    # start at the lexicographically smallest survivor
    first = min(range(len(ring)), key=lambda k: xy[ring[k]])
    return ring[first:] + ring[:first]


def _order_loop(points: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Argsort of coplanar ``points`` ccw when viewed from ``normal``."""
    u, w = _plane_basis(normal)
    c = points.mean(axis=0)
    rel = points - c
    return np.argsort(np.arctan2(rel @ w, rel @ u), kind="stable")


def _plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = normal / np.linalg.norm(normal)
    k = int(np.argmin(np.abs(n)))
    # n x e_k, written out to skip np.cross overhead on tiny arrays
    u = np.zeros(3)
    u[(k + 1) % 3], u[(k + 2) % 3] = n[(k + 2) % 3], -n[(k + 1) % 3]
    u /= np.linalg.norm(u)
    w = np.array([n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]])
    return u, w


def _hull_3d(points: np.ndarray, eps: float) -> tuple[list[int], list[tuple[np.ndarray, float, list[int]]]]:
    """Hull with coplanar triangles merged into polygonal facets.

    Returns the extreme point indices and ``(normal, offset, members)``
    facets, where ``members`` are indices into ``points`` ordered ccw.
    """
    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateInput(f"qhull rejected the point set: {exc}".splitlines()[0]) from exc
    simplices = hull.simplices
    eqs = hull.equations
    tri = points[simplices]  # (F, 3, 3)
    # coplanar triangles form connected patches, so grow each facet
    # through the triangle adjacency instead of scanning every triangle
    assigned = np.zeros(len(simplices), dtype=bool)
    groups = []
    for s in range(len(simplices)):
        if assigned[s]:
            continue
        n, b = eqs[s, :3], -eqs[s, 3]
        assigned[s] = True
        patch, stack = [s], [s]
        while stack:
            for t in hull.neighbors[stack.pop()]:
                if not assigned[t] and eqs[t, :3] @ n > 0 and np.abs(tri[t] @ n - b).max() <= eps:
                    assigned[t] = True
                    patch.append(t)
                    stack.append(t)
        groups.append(np.unique(simplices[patch]))

    facets = []
    for g in groups:
        pts = points[g]
        c = pts.mean(axis=0)
        normal = np.linalg.svd(pts - c)[2][-1]
        # orient outward using the centroid of all hull points
        if normal @ (c - points[hull.vertices].mean(axis=0)) < 0:
            normal = -normal
        u, w = _plane_basis(normal)
        local = np.column_stack([(pts - c) @ u, (pts - c) @ w])
        corner = _hull_2d(local, eps)
        facets.append((normal, g[corner]))

    extreme = np.array(sorted({int(i) for _, idx in facets for i in idx}))
    out = []
    for normal, _ in facets:
        h = points[extreme] @ normal
        on = [int(i) for i in extreme[h >= h.max() - eps]]
        sub = points[on]
        offset = float(np.mean(sub @ normal))
        order = _order_loop(sub, normal)
        out.append((normal, offset, [on[k] for k in order]))
    return [int(i) for i in extreme], out


def _extreme_indices(points: np.ndarray, tol: float) -> list[int]:
    eps = tol * _extent(points)
    if points.shape[1] == 2:
        return _hull_2d(points, eps)
    return _hull_3d(points, eps)[0]


def _affine_rank(points: np.ndarray, eps: float) -> int:
    centered = points - points.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    return int(np.sum(s > eps))


def _positively_spanning(normals: np.ndarray, tol: float) -> bool:
    if len(normals) <= normals.shape[1]:
        return False
    try:
        core = _hull_core(normals, tol)
    except DegenerateInput:
        return False
    return all(off > tol for _, off, _ in core[1])


def _hull_core(points: np.ndarray, tol: float):
    """Shared hull routine: returns (vertex source indices, facets).

    Facets are ``(normal, offset, positions)`` with ``positions`` indexing
    into the returned vertex list.
    """
    pts = _as_points(points)
    d = pts.shape[1]
    eps = tol * _extent(pts)
    if len(pts) < d + 1:
        raise DegenerateInput(f"need at least {d + 1} points in {d}-D, got {len(pts)}")
    reps = _merge_close(pts, eps)
    sub = pts[reps]
    if len(sub) < d + 1 or _affine_rank(sub, eps) < d:
        raise DegenerateInput("points are affinely dependent")
    if d == 2:
        ring = _hull_2d(sub, eps)
        if len(ring) < 3:
            raise DegenerateInput("points are collinear")
        verts = sub[ring]
        facets = []
        for i in range(len(ring)):
            a, b = verts[i], verts[(i + 1) % len(ring)]
            e = b - a
            n = np.array([e[1], -e[0]]) / np.linalg.norm(e)
            facets.append((n, float(0.5 * (n @ a + n @ b)), [i, (i + 1) % len(ring)]))
        return reps[ring], facets
    extreme, raw = _hull_3d(sub, eps)
    pos = {s: k for k, s in enumerate(extreme)}
    facets = [(n, off, [pos[i] for i in idx]) for n, off, idx in raw]
    return reps[extreme], facets


# --------------------------------------------------------------------------
# public operations


def convex_hull(points, tol: float = TOL) -> Polytope:
    """Convex hull of a finite point set in 2-D or 3-D.

    Raises ``DegenerateInput`` when the points span fewer than d dimensions.
    """
    pts = _as_points(points)
    src, facets = _hull_core(pts, tol)
    verts = pts[src]
    return Polytope(
        verts,
        tuple(Facet(n, off, tuple(idx)) for n, off, idx in facets),
        tol=tol,
    )


def halfspace_intersection(hs: Sequence[HalfSpace], tol: float = TOL) -> Polytope:
    """Bounded polytope ``∩ H`` for half-spaces whose offsets are all positive.

    Works in the polar picture: the half-space ``<x, v> <= g`` maps to the
    dual point ``v / g``; facets of the dual hull become vertices of the
    intersection and dual vertices become facets.  Half-spaces whose dual
    point is not extreme produce no facet and are listed in ``redundant``.
    """
    hs = list(hs)
    if not hs:
        raise Unbounded("no half-spaces given")
    normals = np.array([h.normal for h in hs])
    offsets = np.array([h.offset for h in hs])
    d = normals.shape[1]
    if d not in (2, 3):
        raise DimensionMismatch(f"unsupported dimension {d}")
    if len(hs) < d + 1:
        raise Unbounded(f"{len(hs)} half-spaces cannot bound a {d}-D region")
    if np.any(offsets <= 0):
        raise OriginNotInterior("half-space offsets must be strictly positive")
    dual = normals / offsets[:, None]
    try:
        src, dfacets = _hull_core(dual, tol)
    except DegenerateInput as exc:
        raise Unbounded("normals do not span R^d") from exc
    # dual facet offsets <= 0 mean the origin is not strictly inside conv(dual)
    if min(off for _, off, _ in dfacets) <= tol * _extent(dual):
        raise Unbounded("normals do not positively span R^d")

    verts = []
    for _, _, pos in dfacets:
        gens = src[pos]
        x, *_ = np.linalg.lstsq(normals[gens], offsets[gens], rcond=None)
        verts.append(x)
    verts = np.array(verts)

    if d == 2:
        # dual edge j joins dual vertices j, j+1 -> primal vertex j;
        # primal edge (j, j+1) lies on the half-space of dual vertex j+1
        k = len(src)
        facets = tuple(
            Facet(normals[src[(j + 1) % k]], float(offsets[src[(j + 1) % k]]),
                  (j, (j + 1) % k), int(src[(j + 1) % k]))
            for j in range(k)
        )
    else:
        incident: dict[int, list[int]] = {p: [] for p in range(len(src))}
        for j, (_, _, pos) in enumerate(dfacets):
            for p in pos:
                incident[p].append(j)
        facets = []
        for p, js in incident.items():
            g = int(src[p])
            order = _order_loop(verts[js], normals[g])
            facets.append(Facet(normals[g], float(offsets[g]), tuple(js[i] for i in order), g))
        facets = tuple(facets)
    redundant = tuple(sorted(set(range(len(hs))) - {int(s) for s in src}))
    return Polytope(verts, facets, tol=tol, redundant=redundant)


def facet_measures(P: Polytope) -> list[tuple[np.ndarray, float]]:
    """Outward unit normal and (d-1)-measure of each facet."""
    V = P.vertices
    out = []
    for f in P.facets:
        pts = V[list(f.vertices)]
        if P.dim == 2:
            m = float(np.linalg.norm(pts[1] - pts[0]))
        else:
            m = _polygon_area_3d(pts, f.normal)
        out.append((f.normal, m))
    return out


def _polygon_area_3d(pts: np.ndarray, normal: np.ndarray) -> float:
    c = pts.mean(axis=0)
    rel = pts - c
    cross = np.cross(rel, np.roll(rel, -1, axis=0)).sum(axis=0)
    return float(0.5 * cross @ normal)


def _shoelace(pts: np.ndarray) -> float:
    c = pts.mean(axis=0)
    x, y = (pts - c).T
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def volume(P: Polytope) -> float:
    """Lebesgue measure: shoelace in 2-D, facet-cone sum in 3-D."""
    if P.dim == 2:
        return float(_shoelace(P.vertices))
    c = P.vertices.mean(axis=0)
    total = 0.0
    for (n, area), f in zip(facet_measures(P), P.facets):
        total += (f.offset - n @ c) * area
    return float(total / 3.0)


def centroid(P: Polytope) -> np.ndarray:
    """Center of mass of the solid body."""
    V = P.vertices
    if P.dim == 2:
        c0 = V.mean(axis=0)
        a, b = V - c0, np.roll(V - c0, -1, axis=0)
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        return c0 + ((a + b) * cross[:, None]).sum(axis=0) / (3.0 * cross.sum())
    c0 = V.mean(axis=0)
    num = np.zeros(3)
    den = 0.0
    for f in P.facets:
        pts = V[list(f.vertices)]
        for i in range(1, len(pts) - 1):
            a, b, c = pts[0] - c0, pts[i] - c0, pts[i + 1] - c0
            vol = np.dot(a, np.cross(b, c)) / 6.0
            num += vol * (a + b + c) / 4.0
            den += vol
    return c0 + num / den


def support_function(P: Polytope, v) -> float:
    """``max_{x in P} <x, v>``."""
    return float(np.max(P.vertices @ np.asarray(v, dtype=float)))


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise DimensionMismatch(f"cannot add a {P.dim}-D and a {Q.dim}-D polytope")
    sums = (P.vertices[:, None, :] + Q.vertices[None, :, :]).reshape(-1, P.dim)
    return convex_hull(sums, tol=min(P.tol, Q.tol))


def scale(P: Polytope, h: float) -> Polytope:
    """Homothety ``x -> h x`` about the origin."""
    if not h > 0:
        raise NonpositiveScale(f"scale factor must be positive, got {h}")
    facets = tuple(Facet(f.normal, f.offset * h, f.vertices, f.generator) for f in P.facets)
    return Polytope(P.vertices * h, facets, tol=P.tol, redundant=P.redundant)


def translate(P: Polytope, t) -> Polytope:
    t = np.asarray(t, dtype=float)
    if t.shape != (P.dim,):
        raise DimensionMismatch(f"translation must have {P.dim} components")
    facets = tuple(Facet(f.normal, f.offset + float(f.normal @ t), f.vertices, f.generator)
                   for f in P.facets)
    return Polytope(P.vertices + t, facets, tol=P.tol, redundant=P.redundant)


def extreme_points(P: Polytope) -> np.ndarray:
    return P.vertices.copy()


def point_distance(P: Polytope, x) -> float:
    """Euclidean distance from ``x`` to the body ``P`` (0 inside)."""
    x = np.asarray(x, dtype=float)
    if np.all(P.normals @ x - P.offsets <= 0.0):
        return 0.0
    V = P.vertices
    edges = _edges(P)
    a, b = V[edges[:, 0]], V[edges[:, 1]]
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", x - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    best = float(np.min(np.linalg.norm(a + t[:, None] * ab - x, axis=1)))
    if P.dim == 3:
        for f in P.facets:
            gap = float(x @ f.normal - f.offset)
            if gap <= 0 or gap >= best:
                continue
            y = x - gap * f.normal
            pts = V[list(f.vertices)]
            rel = np.roll(pts, -1, axis=0) - pts
            side = np.einsum("ij,ij->i", np.cross(rel, y - pts), np.broadcast_to(f.normal, pts.shape))
            if np.all(side >= 0):
                best = gap
    return best


def _edges(P: Polytope) -> np.ndarray:
    seen = set()
    for f in P.facets:
        loop = f.vertices
        for i in range(len(loop) if P.dim == 3 else 1):
            a, b = loop[i], loop[(i + 1) % len(loop)]
            seen.add((min(a, b), max(a, b)))
    return np.array(sorted(seen))


def hausdorff_distance(P: Polytope, Q: Polytope) -> float:
    """Hausdorff distance between convex bodies, via vertex-to-body distances."""
    if P.dim != Q.dim:
        raise DimensionMismatch(f"cannot compare a {P.dim}-D and a {Q.dim}-D polytope")
    a = max(point_distance(Q, v) for v in P.vertices)
    b = max(point_distance(P, v) for v in Q.vertices)
    return max(a, b)


def section(P: Polytope, normal, offset: float) -> np.ndarray:
    """Cross-section of a 3-D polytope with the plane ``<x, normal> = offset``.

    Returns the polygon as ccw 2-D coordinates in the plane basis (possibly
    fewer than 3 points when the plane only touches the body).
    """
    if P.dim != 3:
        raise DimensionMismatch("sections are defined for 3-D polytopes")
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    V = P.vertices
    s = V @ n - offset
    eps = P.tol * _extent(V)
    pts = [V[i] for i in np.flatnonzero(np.abs(s) <= eps)]
    for i, j in _edges(P):
        if (s[i] < -eps and s[j] > eps) or (s[i] > eps and s[j] < -eps):
            t = s[i] / (s[i] - s[j])
            pts.append(V[i] + t * (V[j] - V[i]))
    if len(pts) < 3:
        return np.zeros((len(pts), 2))
    pts = np.array(pts)
    u, w = _plane_basis(n)
    local = np.column_stack([pts @ u, pts @ w])
    sub = local[_merge_close(local, eps)]
    return sub[_hull_2d(sub, eps)] if len(sub) >= 3 else sub


def polygon_area(loop: np.ndarray) -> float:
    if len(loop) < 3:
        return 0.0
    return abs(_shoelace(np.asarray(loop, dtype=float)))


def regular_polygon(m: int, radius: float = 1.0, phase: float = 0.0) -> Polytope:
    t = phase + 2 * np.pi * np.arange(m) / m
    return convex_hull(radius * np.column_stack([np.cos(t), np.sin(t)]))


def box(lo, hi) -> Polytope:
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    corners = np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(len(lo), -1).T
    return convex_hull(corners)


def cross_polytope(d: int, radius: float = 1.0) -> Polytope:
    eye = np.eye(d) * radius
    return convex_hull(np.vstack([eye, -eye]))
