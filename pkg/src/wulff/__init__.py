"""Faceted Wulff shapes from crystalline integrands, with convex-geometry checks."""

from .construction import EquivalenceReport, check_equivalence, fu_radius, fu_shape, wulff_shape
from .duality import double_polar_check, dual_ball_check, polar
from .energy import (
    EnergyReport,
    TrialReport,
    growth_derivative,
    optimality_trial,
    random_competitor,
    scale_to_volume,
    surface_energy,
    wulff_identity_check,
)
from .errors import WulffError
from .geometry import (
    HalfSpace,
    Polytope,
    convex_hull,
    extreme_points,
    facet_measures,
    halfspace_intersection,
    hausdorff_distance,
    minkowski_sum,
    scale,
    support_function,
    translate,
    volume,
)
from .integrand import CrystallineIntegrand, parse_integrand, phi_star, support_value
from .rearrangement import (
    SlabBody,
    brunn_concavity_profile,
    brunn_minkowski_margin,
    iterate_symmetrizations,
    steiner_2d,
    steiner_3d,
)

__version__ = "0.1.0"
