import numpy as np
import pytest

from wulff.geometry import box, convex_hull, cross_polytope, translate, centroid
from wulff.integrand import axis_integrand, octahedral_integrand


@pytest.fixture
def square():
    return box([-1, -1], [1, 1])


@pytest.fixture
def cube():
    return box([-1, -1, -1], [1, 1, 1])


@pytest.fixture
def diamond():
    return cross_polytope(2)


@pytest.fixture
def square_integrand():
    return axis_integrand(2)


@pytest.fixture
def cube_integrand():
    return axis_integrand(3)


@pytest.fixture
def octahedron_integrand():
    return octahedral_integrand()


def random_body(rng, d, n=20, inradius=0.05):
    """Random hull re-centred on its centroid, with an interior margin."""
    while True:
        P = convex_hull(rng.normal(size=(n, d)) * rng.uniform(0.3, 2.0, d))
        P = translate(P, -centroid(P))
        if P.offsets.min() >= inradius:
            return P


def random_polygon(rng, n=10):
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = rng.uniform(0.5, 2.0, 2)
    return convex_hull(np.column_stack([r[0] * np.cos(t), r[1] * np.sin(t)]) + rng.normal(size=2))
