"""Acceptance gate: ten end-to-end criteria, each reported on one line.

Run with ``pytest tests/test_acceptance.py -s`` or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from wulff.construction import check_equivalence, wulff_shape
from wulff.duality import double_polar_check, dual_ball_check
from wulff.energy import (
    energy_gap,
    extrapolate_limit,
    growth_derivative,
    optimality_trial,
    surface_energy,
    wulff_identity_check,
)
from wulff.geometry import box, centroid, convex_hull, cross_polytope, scale, translate, volume
from wulff.integrand import axis_integrand, isotropic_integrand_2d, octahedral_integrand, random_integrand_2d
from wulff.rearrangement import (
    brunn_concavity_profile,
    brunn_minkowski_margin,
    iterate_symmetrizations,
    reflect,
    steiner_2d,
    steiner_3d,
)
from wulff.geometry import hausdorff_distance

pytestmark = pytest.mark.acceptance

SEED = 20240601


def integrand_suite():
    """Square, cube, octahedron and 25 seeded random planar tables."""
    named = [("square", axis_integrand(2)), ("cube", axis_integrand(3)), ("octahedron", octahedral_integrand())]
    for k in range(25):
        rng = np.random.default_rng([SEED, k])
        m = int(rng.integers(8, 17))
        named.append((f"random-{k}", random_integrand_2d(rng, m, (0.5, 2.0))))
    return named


def random_polytope(rng, d, n=20):
    """Hull of a skewed Gaussian cloud, re-centred so the origin is well inside."""
    while True:
        P = convex_hull(rng.normal(size=(n, d)) * rng.uniform(0.3, 2.0, d))
        P = translate(P, -centroid(P))
        if P.offsets.min() >= 0.05:
            return P


def random_polygon(rng, n=10):
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = rng.uniform(0.5, 2.0, 2)
    return convex_hull(np.column_stack([r[0] * np.cos(t), r[1] * np.sin(t)]) + rng.normal(size=2))


def unit(v):
    return v / np.linalg.norm(v)


# each criterion returns (passed, one-line detail)


def criterion_1():
    worst = {2: 0.0, 3: 0.0}
    ok = True
    for _, I in integrand_suite():
        tol = 1e-9 if I.dim == 2 else 1e-6
        rep = check_equivalence(I, 720 if I.dim == 2 else 2000, tol)
        worst[I.dim] = max(worst[I.dim], rep.hausdorff_gap)
        ok &= rep.verdict
    return ok, f"max gap 2-D {worst[2]:.2e} (<= 1e-9), 3-D {worst[3]:.2e} (<= 1e-6) over 28 integrands"


def criterion_2():
    worst = max(wulff_identity_check(I) for _, I in integrand_suite())
    rep = surface_energy(wulff_shape(axis_integrand(3)), axis_integrand(3))
    cube_exact = rep.surface_energy == 24 and rep.volume == 8
    return worst <= 1e-9 and cube_exact, (
        f"max relative identity error {worst:.2e} (<= 1e-9); cube energy {rep.surface_energy!r} = 3 x {rep.volume!r}")


def criterion_3():
    violations, worst_eq, trials, min_gap = 0, 0.0, 0, math.inf
    for k, (_, I) in enumerate(integrand_suite()):
        n = 500 if I.dim == 2 else 100
        rep = optimality_trial(I, n, 12, seed=SEED + k, tol=1e-9)
        violations += rep.violations
        trials += n
        min_gap = min(min_gap, rep.min_gap)
        worst_eq = max(worst_eq, abs(energy_gap(wulff_shape(I), I)))
    return violations == 0 and worst_eq <= 1e-12, (
        f"{violations} violations in {trials} competitors (min gap {min_gap:.3e}); equality-case gap {worst_eq:.2e} (<= 1e-12)")


def criterion_4():
    I = axis_integrand(3)
    W = wulff_shape(I)
    pairs = growth_derivative(W, I)
    slope = dict(pairs)[1e-3]
    limit = extrapolate_limit(pairs)
    target = 8 * ((1.001) ** 3 - 1) / 0.001
    return abs(slope - target) <= 1e-9 and abs(limit - 24) <= 1e-6, (
        f"slope(1e-3) - 24.024008 = {slope - target:.2e} (|.| <= 1e-9); limit - 24 = {limit - 24:.2e} (|.| <= 1e-6)")


def criterion_5():
    rng = np.random.default_rng(SEED + 5)
    worst2 = max(double_polar_check(random_polytope(rng, 2)) for _ in range(500))
    worst3 = max(double_polar_check(random_polytope(rng, 3)) for _ in range(100))
    ball = max(dual_ball_check(I) for _, I in integrand_suite())
    ok = max(worst2, worst3, ball) <= 1e-9
    return ok, f"double polar 2-D {worst2:.2e}, 3-D {worst3:.2e}; dual ball {ball:.2e} (all <= 1e-9)"


def criterion_6():
    rng = np.random.default_rng(SEED + 6)
    worst, homothetic = math.inf, 0.0
    for k in range(1100):
        d = 2 if k < 1000 else 3
        A, B = random_polytope(rng, d, 12), random_polytope(rng, d, 12)
        worst = min(worst, brunn_minkowski_margin(A, B))
        c, t = rng.uniform(0.2, 5.0), rng.normal(size=d)
        homothetic = max(homothetic, abs(brunn_minkowski_margin(A, scale(translate(A, t), c))))
    sq_dm = brunn_minkowski_margin(box([-1, -1], [1, 1]), cross_polytope(2))
    closed = math.sqrt(14) - 2 - math.sqrt(2)
    ok = worst >= -1e-9 and homothetic <= 1e-9 and abs(sq_dm - closed) <= 1e-9
    return ok, (f"min margin {worst:.3e} (>= -1e-9) over 1000 2-D + 100 3-D pairs; homothetic {homothetic:.2e}; "
                f"square+diamond error {abs(sq_dm - closed):.2e}")


def criterion_7():
    rng = np.random.default_rng(SEED + 7)
    area_err, sym_err, convex = 0.0, 0.0, True
    for _ in range(200):
        P = random_polygon(rng)
        theta = unit(rng.normal(size=2))
        S = steiner_2d(P, theta)
        area_err = max(area_err, abs(volume(S) - volume(P)) / volume(P))
        sym_err = max(sym_err, hausdorff_distance(reflect(S, theta), S))
        try:
            S.validate()
        except ValueError:
            convex = False
    res = 128
    slab_err = 0.0
    for body, theta in [(box([-1] * 3, [1] * 3), [0, 0, 1]), (box([-1] * 3, [1] * 3), [1, 1, 1]),
                        (cross_polytope(3, math.sqrt(3)), [1, 2, 3])]:
        slab = steiner_3d(body, np.array(theta, dtype=float), res)
        slab_err = max(slab_err, abs(slab.volume - volume(body)) / volume(body))
    ok = area_err <= 1e-12 and sym_err <= 1e-9 and convex and slab_err <= 2 / res
    return ok, (f"2-D area error {area_err:.2e} (<= 1e-12), reflection {sym_err:.2e}, convex {convex}; "
                f"3-D slab error {slab_err:.2e} (<= {2 / res:.4f})")


def criterion_8():
    _, trace = iterate_symmetrizations(box([-0.5, -0.5], [0.5, 0.5]), np.random.default_rng(SEED + 8), 200)
    return trace[-1] <= 0.02, f"asphericity {trace[0]:.4f} -> {trace[-1]:.2e} after 200 steps (<= 0.02)"


def criterion_9():
    m = 360
    I = isotropic_integrand_2d(m)
    W = wulff_shape(I)
    area = volume(W)
    energy = surface_energy(W, I).surface_energy
    closed = m * math.tan(math.pi / m)
    ok = (abs(area - closed) <= 1e-12 and abs(area - math.pi) <= 1e-4 * math.pi
          and abs(energy - 2 * math.pi) <= 1e-4 * 2 * math.pi)
    return ok, (f"area - m tan(pi/m) = {area - closed:.2e}; area/pi - 1 = {area / math.pi - 1:.2e}; "
                f"energy/(2 pi) - 1 = {energy / (2 * math.pi) - 1:.2e}")


def criterion_10():
    rng = np.random.default_rng(SEED + 10)
    dirs = [unit(v) for v in rng.normal(size=(20, 3))]
    worst = 0.0
    for K in (box([-1] * 3, [1] * 3), cross_polytope(3, math.sqrt(3))):
        for n in dirs:
            worst = max(worst, brunn_concavity_profile(K, n).violation)
    raw = brunn_concavity_profile(box([-1] * 3, [1] * 3), np.ones(3), exponent=1.0).violation
    return worst <= 1e-9 and raw > 1e-3, (
        f"max violation at exponent 1/2: {worst:.2e} (<= 1e-9); exponent 1 on the cube diagonal: {raw:.2e} (> 1e-3)")


CRITERIA = [
    ("1 construction equivalence", criterion_1),
    ("2 Wulff identity", criterion_2),
    ("3 Wulff optimality", criterion_3),
    ("4 growth derivative", criterion_4),
    ("5 double polar", criterion_5),
    ("6 Brunn-Minkowski", criterion_6),
    ("7 Steiner symmetrization", criterion_7),
    ("8 Steiner-Schwarz rounding", criterion_8),
    ("9 isotropic limit", criterion_9),
    ("10 Brunn concavity", criterion_10),
]


def report(name, ok, detail) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + report(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(report(name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
