"""Surface energy of polytope boundaries and the Wulff optimality harness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .construction import wulff_shape
from .errors import DegenerateInput, NonpositiveTarget, VolumeMismatch
from .geometry import (
    Polytope,
    centroid,
    convex_hull,
    facet_measures,
    hausdorff_distance,
    minkowski_sum,
    scale,
    translate,
    volume,
)
from .integrand import CrystallineIntegrand, energy_of

DEFAULT_H = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class EnergyReport:
    volume: float
    surface_energy: float
    identity_ratio: float
    facet_energies: list[float]
    facet_measures: list[float]

    def to_dict(self) -> dict:
        return {
            "volume": self.volume,
            "surface_energy": self.surface_energy,
            "identity_ratio": self.identity_ratio,
            "facet_energies": self.facet_energies,
            "facet_measures": self.facet_measures,
        }


@dataclass(frozen=True)
class TrialReport:
    trials: int
    seed: int
    complexity: int
    wulff_energy: float
    min_competitor_energy: float
    min_gap: float
    violations: int
    uniqueness_failures: int
    gaps: list[float] = field(repr=False)
    histogram_edges: list[float] = field(repr=False)
    histogram_counts: list[int] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "complexity": self.complexity,
            "wulff_energy": self.wulff_energy,
            "min_competitor_energy": self.min_competitor_energy,
            "min_gap": self.min_gap,
            "violations": self.violations,
            "uniqueness_failures": self.uniqueness_failures,
            "histogram": {"edges": self.histogram_edges, "counts": self.histogram_counts},
        }


def surface_energy(P: Polytope, I: CrystallineIntegrand) -> EnergyReport:
    """Sum of energy(normal) x measure over the facets of ``P``.

    Listed normals are priced with their table gamma, all others with the
    convexified energy (the Wulff shape's support function).
    """
    measures = facet_measures(P)
    energies = [energy_of(I, n) * m for n, m in measures]
    vol = volume(P)
    total = float(sum(energies))
    return EnergyReport(vol, total, total / (P.dim * vol), energies, [m for _, m in measures])


def scale_to_volume(P: Polytope, target: float) -> Polytope:
    if not target > 0:
        raise NonpositiveTarget(f"target volume must be positive, got {target}")
    return scale(P, (target / volume(P)) ** (1.0 / P.dim))


def wulff_identity_check(I: CrystallineIntegrand) -> float:
    """Relative gap between the Wulff shape's energy and ``d`` times its volume."""
    W = wulff_shape(I)
    rep = surface_energy(W, I)
    return abs(rep.surface_energy - W.dim * rep.volume) / (W.dim * rep.volume)


def growth_derivative(P: Polytope, I: CrystallineIntegrand,
                      h_values=DEFAULT_H, tol: float = 1e-9) -> list[tuple[float, float]]:
    """Finite growth rates ``(|P + hW| - |P|) / h`` for each ``h``.

    ``P`` must already have the Wulff shape's volume.
    """
    W = wulff_shape(I)
    vp, vw = volume(P), volume(W)
    if abs(vp - vw) > tol * vw:
        raise VolumeMismatch(f"volume {vp} differs from the Wulff volume {vw}; rescale first")
    out = []
    for h in h_values:
        if not h > 0:
            raise ValueError(f"h values must be positive, got {h}")
        grown = volume(minkowski_sum(P, scale(W, h)))
        out.append((float(h), float((grown - vp) / h)))
    return out


def extrapolate_limit(pairs: list[tuple[float, float]]) -> float:
    """Polynomial (Neville) extrapolation of ``slope(h)`` to ``h = 0``."""
    h = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    n = len(h)
    table = y.copy()
    for k in range(1, n):
        table[: n - k] = (h[k:] * table[: n - k] - h[: n - k] * table[1 : n - k + 1]) / (h[k:] - h[: n - k])
    return float(table[0])


def random_competitor(rng: np.random.Generator, d: int, complexity: int,
                      anchor: Polytope | None = None) -> Polytope:
    """Random convex polytope from an anisotropic point cloud.

    The cloud is drawn, by a random choice, from a random ellipsoid surface,
    a random cone (apex plus a base ring), or a perturbation of ``anchor``'s
    vertices when one is given.  The hull is translated so its vertex mean
    sits at the origin.  Deterministic given the generator state.
    """
    if complexity < d + 1:
        raise ValueError(f"complexity must be at least {d + 1}")
    kinds = ["ellipsoid", "cone"] + (["anchor"] if anchor is not None else [])
    while True:
        kind = kinds[rng.integers(len(kinds))]
        if kind == "ellipsoid":
            axes = rng.uniform(0.2, 2.0, d)
            q, _ = np.linalg.qr(rng.normal(size=(d, d)))
            u = rng.normal(size=(complexity, d))
            pts = (u / np.linalg.norm(u, axis=1)[:, None]) * axes @ q.T
        elif kind == "cone":
            apex = rng.normal(size=d) * rng.uniform(0.5, 2.0)
            ring = rng.normal(size=(complexity - 1, d))
            ring /= np.linalg.norm(ring, axis=1)[:, None]
            axis = apex / np.linalg.norm(apex)
            ring -= (ring @ axis)[:, None] * axis
            ring *= rng.uniform(0.3, 1.5)
            jitter = rng.normal(scale=0.05, size=(complexity - 1, 1)) * axis
            pts = np.vstack([apex, ring + jitter])
        else:
            V = anchor.vertices
            picks = V[rng.integers(len(V), size=complexity)]
            pts = picks + rng.normal(scale=rng.choice([1e-3, 1e-2, 1e-1]), size=picks.shape)
        try:
            P = convex_hull(pts)
        except DegenerateInput:
            continue
        return translate(P, -P.vertices.mean(axis=0))


def energy_gap(P: Polytope, I: CrystallineIntegrand, W: Polytope | None = None) -> float:
    """``Phi(dP) - Phi(dW)`` after rescaling ``P`` to the Wulff volume."""
    W = wulff_shape(I) if W is None else W
    Q = scale_to_volume(P, volume(W))
    return surface_energy(Q, I).surface_energy - surface_energy(W, I).surface_energy


def optimality_trial(I: CrystallineIntegrand, trials: int, complexity: int, seed: int,
                     tol: float = 1e-9, bins: int = 20) -> TrialReport:
    """Compare the Wulff energy against ``trials`` volume-matched random competitors.

    Trial ``k`` draws from ``default_rng(seed ^ k)``, so any schedule
    reproduces the sequential report.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    W = wulff_shape(I)
    vw = volume(W)
    ew = surface_energy(W, I).surface_energy
    cw = centroid(W)
    energies, gaps = [], []
    violations = uniqueness_failures = 0
    for k in range(trials):
        rng = np.random.default_rng(seed ^ k)
        P = scale_to_volume(random_competitor(rng, I.dim, complexity, anchor=W), vw)
        e = surface_energy(P, I).surface_energy
        gap = e - ew
        energies.append(e)
        gaps.append(gap)
        if gap < -tol:
            violations += 1
        elif gap <= tol:
            aligned = translate(P, cw - centroid(P))
            if hausdorff_distance(aligned, W) > 1e-6:
                uniqueness_failures += 1
    counts, edges = np.histogram(gaps, bins=bins)
    return TrialReport(
        trials=trials,
        seed=seed,
        complexity=complexity,
        wulff_energy=ew,
        min_competitor_energy=float(min(energies)),
        min_gap=float(min(gaps)),
        violations=violations,
        uniqueness_failures=uniqueness_failures,
        gaps=[float(g) for g in gaps],
        histogram_edges=edges.tolist(),
        histogram_counts=counts.tolist(),
    )
