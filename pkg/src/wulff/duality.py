"""Polar bodies and the checks built on them."""

from __future__ import annotations

import numpy as np

from .construction import wulff_shape
from .errors import OriginNotInterior
from .geometry import Facet, Polytope, _order_loop, convex_hull, hausdorff_distance
from .integrand import CrystallineIntegrand


def polar(P: Polytope) -> Polytope:
    """Polar body ``{x : <x, y> <= 1 for all y in P}``.

    Computed combinatorially: each facet ``(v, h)`` of ``P`` becomes the vertex
    ``v / h`` and each vertex ``p`` becomes the facet ``<x, p> <= 1``.
    """
    offsets = P.offsets
    if np.min(offsets) < P.tol:
        raise OriginNotInterior(f"origin is within {np.min(offsets):.3e} of the boundary")
    verts = P.normals / offsets[:, None]

    facets = []
    if P.dim == 2:
        # edge normals turn ccw, so polar vertices are already ccw; vertex
        # i+1 of P joins edges i and i+1 and becomes polar edge (i, i+1)
        k = len(P.vertices)
        for i in range(k):
            p = P.vertices[(i + 1) % k]
            r = float(np.linalg.norm(p))
            facets.append(Facet(p / r, 1.0 / r, (i, (i + 1) % k)))
    else:
        incident: list[list[int]] = [[] for _ in range(len(P.vertices))]
        for j, f in enumerate(P.facets):
            for i in f.vertices:
                incident[i].append(j)
        for i, js in enumerate(incident):
            p = P.vertices[i]
            r = float(np.linalg.norm(p))
            order = _order_loop(verts[js], p)
            facets.append(Facet(p / r, 1.0 / r, tuple(js[o] for o in order)))
    return Polytope(verts, tuple(facets), tol=P.tol)


def double_polar_check(P: Polytope) -> float:
    return hausdorff_distance(polar(polar(P)), P)


def dual_ball_check(I: CrystallineIntegrand) -> float:
    """Distance between the Wulff shape and the polar of ``conv{v / gamma}``."""
    dual_ball = convex_hull(I.normals / I.gammas[:, None])
    return hausdorff_distance(wulff_shape(I), polar(dual_ball))
