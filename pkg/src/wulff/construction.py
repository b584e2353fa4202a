"""Two independent constructions of the Wulff shape and their comparison.

``wulff_shape`` intersects the half-spaces ``<x, v> <= gamma(v)``.
``fu_shape`` instead plots the radial function obtained from the first
Legendre transform, ``r(theta) = min gamma(v) / <theta, v>`` over listed
``v`` with ``<theta, v> > 0``, and hulls the sampled boundary points.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InsufficientSamples
from .geometry import Polytope, convex_hull, halfspace_intersection, hausdorff_distance
from .integrand import CrystallineIntegrand


@dataclass(frozen=True)
class EquivalenceReport:
    hausdorff_gap: float
    sample_count: int
    max_radial_error: float
    tolerance: float
    verdict: bool

    def to_dict(self) -> dict:
        return asdict(self)


def wulff_shape(I: CrystallineIntegrand) -> Polytope:
    return halfspace_intersection(I.halfspaces())


def fu_radius(I: CrystallineIntegrand, theta) -> float:
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    dots = I.normals @ theta
    ok = dots > 0
    return float(np.min(I.gammas[ok] / dots[ok]))


def fu_radii(I: CrystallineIntegrand, thetas: np.ndarray) -> np.ndarray:
    """Vectorized ``fu_radius`` over the rows of ``thetas``."""
    dots = thetas @ I.normals.T
    with np.errstate(divide="ignore"):
        ratio = np.where(dots > 0, I.gammas[None, :] / np.where(dots > 0, dots, 1.0), np.inf)
    return ratio.min(axis=1)


def sphere_directions(d: int, samples: int) -> np.ndarray:
    """Uniform angular grid in 2-D, Fibonacci sphere in 3-D."""
    if d == 2:
        t = 2 * np.pi * np.arange(samples) / samples
        return np.column_stack([np.cos(t), np.sin(t)])
    k = np.arange(samples) + 0.5
    z = 1 - 2 * k / samples
    phi = np.pi * (3 - np.sqrt(5)) * k
    rho = np.sqrt(1 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def fu_directions(I: CrystallineIntegrand, samples: int, include_vertices: bool = True) -> np.ndarray:
    d = I.dim
    if samples < 4 * d:
        raise InsufficientSamples(f"need at least {4 * d} samples in {d}-D, got {samples}")
    dirs = sphere_directions(d, samples)
    if include_vertices:
        V = wulff_shape(I).vertices
        dirs = np.vstack([dirs, V / np.linalg.norm(V, axis=1)[:, None]])
    return dirs


def fu_shape(I: CrystallineIntegrand, samples: int, include_vertices: bool = True) -> Polytope:
    """Hull of the sampled radial plot ``r(theta) theta``.

    With ``include_vertices`` the sample set is augmented by the directions of
    the half-space construction's vertices, so corners are hit exactly.
    """
    dirs = fu_directions(I, samples, include_vertices)
    return convex_hull(fu_radii(I, dirs)[:, None] * dirs)


def boundary_radius(P: Polytope, thetas: np.ndarray) -> np.ndarray:
    """Radial function of a body containing the origin, along unit rows."""
    dots = thetas @ P.normals.T
    with np.errstate(divide="ignore"):
        return np.where(dots > 0, P.offsets[None, :] / np.where(dots > 0, dots, 1.0), np.inf).min(axis=1)


def check_equivalence(I: CrystallineIntegrand, samples: int, tol: float | None = None) -> EquivalenceReport:
    if tol is None:
        tol = 1e-9 if I.dim == 2 else 1e-6
    W = wulff_shape(I)
    dirs = fu_directions(I, samples)
    Z = convex_hull(fu_radii(I, dirs)[:, None] * dirs)
    gap = hausdorff_distance(W, Z)
    radial = float(np.max(np.abs(fu_radii(I, dirs) - boundary_radius(W, dirs))))
    return EquivalenceReport(gap, len(dirs), radial, tol, bool(gap <= tol))
