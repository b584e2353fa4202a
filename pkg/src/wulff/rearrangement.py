"""Steiner symmetrization, Brunn's concavity principle and Brunn-Minkowski.

The 2-D symmetral is computed exactly from the piecewise-linear chord
function.  In 3-D the chord length along ``theta`` is the minimum over
(upper facet, lower facet) pairs of affine functions, so the symmetral is
itself a half-space intersection; ``steiner_3d`` slices it into a
:class:`SlabBody` with midpoint-rule cross-sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .construction import sphere_directions
from .errors import DimensionMismatch, EmptySlices, ResolutionTooLow
from .geometry import (
    HalfSpace,
    Polytope,
    _extent,
    _plane_basis,
    centroid,
    convex_hull,
    halfspace_intersection,
    minkowski_sum,
    polygon_area,
    scale,
    section,
    support_function,
    translate,
    volume,
)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class SlabBody:
    """A stack of convex prisms sliced perpendicular to ``axis``.

    ``heights`` holds the ``n + 1`` slab boundaries along ``axis``;
    ``sections[k]`` is the ccw cross-section polygon of slab ``k`` in the
    in-plane coordinates ``(basis[0], basis[1])``.
    """

    axis: np.ndarray
    heights: np.ndarray
    sections: tuple[np.ndarray, ...]
    basis: tuple[np.ndarray, np.ndarray] = field(repr=False)

    @property
    def thickness(self) -> float:
        return float(self.heights[1] - self.heights[0])

    @property
    def volume(self) -> float:
        return float(sum(polygon_area(s) for s in self.sections) * self.thickness)

    def to_polytope(self) -> Polytope:
        """Hull of the cross-sections placed at their mid-heights."""
        u, w = self.basis
        mids = 0.5 * (self.heights[1:] + self.heights[:-1])
        pts = [s[:, :1] * u + s[:, 1:] * w + t * self.axis
               for s, t in zip(self.sections, mids) if len(s)]
        return convex_hull(np.vstack(pts))


@dataclass(frozen=True)
class ConcavityReport:
    offsets: np.ndarray
    values: np.ndarray
    exponent: float
    violation: float

    def to_dict(self) -> dict:
        return {
            "offsets": self.offsets.tolist(),
            "values": self.values.tolist(),
            "exponent": self.exponent,
            "violation": self.violation,
        }


def steiner_2d(P: Polytope, theta) -> Polytope:
    """Exact Steiner symmetral of a polygon about the line ``theta⊥``."""
    if P.dim != 2:
        raise DimensionMismatch("steiner_2d expects a polygon")
    theta = _unit(theta)
    perp = np.array([-theta[1], theta[0]])
    V = P.vertices
    s, t = V @ perp, V @ theta
    s1, t1 = np.roll(s, -1), np.roll(t, -1)
    lo, hi = np.minimum(s, s1), np.maximum(s, s1)
    # breakpoints are the vertex projections themselves, so span tests and
    # flatness are exact comparisons with no tolerance band
    flat = hi == lo
    x = np.unique(s)[:, None]
    spans = (x >= lo) & (x <= hi)
    frac = np.clip(np.where(flat, 0.0, (x - s) / np.where(flat, 1.0, s1 - s)), 0.0, 1.0)
    cut = t + frac * (t1 - t)
    # edges parallel to theta contribute both endpoints
    top = np.where(spans, np.where(flat, np.maximum(t, t1), cut), -np.inf).max(axis=1)
    bottom = np.where(spans, np.where(flat, np.minimum(t, t1), cut), np.inf).min(axis=1)
    half = 0.5 * (top - bottom)[:, None]
    pts = np.vstack([x * perp + half * theta, x * perp - half * theta])
    return convex_hull(pts, tol=P.tol)


def steiner_polytope(P: Polytope, theta) -> Polytope:
    """Exact Steiner symmetral of a polytope in any supported dimension.

    Writes ``x = y + t theta`` with ``y ⊥ theta``.  Upper facets bound ``t``
    from above by affine ``a_i(y)``, lower facets from below by ``b_j(y)``;
    the chord is ``min_{i,j} (a_i - b_j)`` so the symmetral is cut out by
    ``±2t <= a_i(y) - b_j(y)`` together with the vertical facets.
    """
    theta = _unit(theta)
    normals, offsets = P.normals, P.offsets
    alpha = normals @ theta
    up, low = np.flatnonzero(alpha > 1e-12), np.flatnonzero(alpha < -1e-12)
    vert = np.flatnonzero(np.abs(alpha) <= 1e-12)

    # a pair only shapes the chord where both facets sit over the same
    # point of the shadow, so pairs with disjoint projected boxes are dropped
    frame = np.array(_plane_basis(theta)) if P.dim == 3 else np.array([[-theta[1], theta[0]]])
    eps = P.tol * _extent(P.vertices)
    boxes = []
    for f in P.facets:
        proj = P.vertices[list(f.vertices)] @ frame.T
        boxes.append((proj.min(axis=0) - eps, proj.max(axis=0) + eps))
    lo = np.array([b[0] for b in boxes])
    hi = np.array([b[1] for b in boxes])
    overlap = np.all((lo[up][:, None] <= hi[low][None]) & (lo[low][None] <= hi[up][:, None]), axis=2)
    i, j = np.nonzero(overlap)
    i, j = up[i], low[j]

    w = normals[i] / alpha[i, None] - normals[j] / alpha[j, None]
    b = offsets[i] / alpha[i] - offsets[j] / alpha[j]
    hs_normals = np.vstack([w + 2 * theta, w - 2 * theta, normals[vert] - alpha[vert, None] * theta])
    hs_offsets = np.concatenate([b, b, offsets[vert]])

    c = centroid(P)
    y0 = c - (c @ theta) * theta
    shifted = hs_offsets - hs_normals @ y0
    hs = [HalfSpace.from_unnormalized(n, b) for n, b in zip(hs_normals, shifted)]
    S = halfspace_intersection(hs, tol=P.tol)
    return translate(S, y0)


def steiner_3d(B, theta, resolution: int = 128) -> SlabBody:
    """Steiner symmetral of a 3-D body, returned as ``resolution`` slabs along ``theta``."""
    if resolution < 32:
        raise ResolutionTooLow(f"resolution must be at least 32, got {resolution}")
    P = B.to_polytope() if isinstance(B, SlabBody) else B
    if P.dim != 3:
        raise DimensionMismatch("steiner_3d expects a 3-D body")
    theta = _unit(theta)
    S = steiner_polytope(P, theta)
    top = support_function(S, theta)
    heights = np.linspace(-top, top, resolution + 1)
    mids = 0.5 * (heights[1:] + heights[:-1])
    u, w = _plane_basis(theta)
    sections = []
    for t in mids:
        loop = section(S, theta, t)
        # section() reports in its own basis; it matches _plane_basis(theta)
        sections.append(loop)
    return SlabBody(theta, heights, tuple(sections), (u, w))


def asphericity(P: Polytope) -> float:
    """``(circumradius - inradius) / inradius`` about the centroid."""
    c = centroid(P)
    outer = float(np.max(np.linalg.norm(P.vertices - c, axis=1)))
    inner = float(np.min(P.offsets - P.normals @ c))
    return (outer - inner) / inner


def _reduce(P: Polytope, cap: int) -> Polytope:
    """Inner approximation by at most ``cap`` support points, volume restored."""
    if len(P.vertices) <= cap:
        return P
    dirs = sphere_directions(P.dim, cap)
    keep = np.unique(np.argmax(P.vertices @ dirs.T, axis=0))
    Q = convex_hull(P.vertices[keep], tol=P.tol)
    c = centroid(P)
    factor = (volume(P) / volume(Q)) ** (1.0 / P.dim)
    return translate(scale(translate(Q, -c), factor), c)


def iterate_symmetrizations(B: Polytope, rng: np.random.Generator | int, count: int,
                            max_vertices: int | None = None) -> tuple[Polytope, list[float]]:
    """Apply ``count`` Steiner symmetrizations in random directions.

    Returns the final body and the asphericity trace, whose first entry is
    the input's asphericity.  The vertex count doubles with each step, so
    bodies with more than ``max_vertices`` vertices are replaced by a
    volume-preserving inner approximation.  The default cap is 256 in 2-D
    and 128 in 3-D, where each exact step is far more expensive.
    """
    if max_vertices is None:
        max_vertices = 256 if B.dim == 2 else 128
    rng = np.random.default_rng(rng)
    step = steiner_2d if B.dim == 2 else steiner_polytope
    trace = [asphericity(B)]
    for _ in range(count):
        theta = _unit(rng.normal(size=B.dim))
        B = _reduce(step(B, theta), max_vertices)
        trace.append(asphericity(B))
    return B, trace


def brunn_minkowski_margin(A: Polytope, B: Polytope) -> float:
    """``|A+B|^(1/d) - |A|^(1/d) - |B|^(1/d)``; nonnegative by Brunn-Minkowski."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"cannot add a {A.dim}-D and a {B.dim}-D body")
    d = A.dim
    return volume(minkowski_sum(A, B)) ** (1 / d) - volume(A) ** (1 / d) - volume(B) ** (1 / d)


def brunn_concavity_profile(K: Polytope, f_normal, samples: int = 64,
                            exponent: float | None = None) -> ConcavityReport:
    """Section areas of ``K`` across parallel planes, raised to ``exponent``.

    The planes are normal to ``f_normal`` and evenly span the support of
    ``K`` along it; the two endpoint offsets are assigned ``f = 0``.  The
    default exponent is ``1 / (d - 1)``, the reciprocal of the section
    dimension.
    """
    if K.dim != 3:
        raise DimensionMismatch("concavity profiles are sliced from 3-D bodies")
    if samples < 16:
        raise ValueError(f"samples must be at least 16, got {samples}")
    n = _unit(f_normal)
    if exponent is None:
        exponent = 1.0 / (K.dim - 1)
    hi = support_function(K, n)
    lo = -support_function(K, -n)
    if hi - lo <= K.tol:
        raise EmptySlices("body has no extent along the slicing normal")
    offsets = np.linspace(lo, hi, samples)
    values = np.zeros(samples)
    for j in range(1, samples - 1):
        values[j] = polygon_area(section(K, n, offsets[j])) ** exponent
    mid = 0.5 * (values[:-2] + values[2:]) - values[1:-1]
    violation = float(max(0.0, mid.max()))
    return ConcavityReport(offsets, values, float(exponent), violation)


def reflect(P: Polytope, theta) -> Polytope:
    """Mirror image across the hyperplane ``theta⊥``."""
    theta = _unit(theta)
    R = np.eye(P.dim) - 2 * np.outer(theta, theta)
    return convex_hull(P.vertices @ R, tol=P.tol)


def steiner_sum_containment(A: Polytope, B: Polytope, theta) -> float:
    """Largest amount by which ``S(A) + S(B)`` leaves ``S(A + B)`` (0 if contained)."""
    step = steiner_2d if A.dim == 2 else steiner_polytope
    lhs = minkowski_sum(step(A, theta), step(B, theta))
    rhs = step(minkowski_sum(A, B), theta)
    slack = lhs.vertices @ rhs.normals.T - rhs.offsets
    return float(max(0.0, slack.max()))
