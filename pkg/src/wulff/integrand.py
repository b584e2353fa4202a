"""Crystalline surface-energy integrands.

An integrand is stored as a finite table of (unit normal, energy) pairs.
``phi_star`` evaluates the table with its degree-one homogeneous extension;
``support_value`` evaluates the convexified energy, which is the support
function of the Wulff shape and is defined in every direction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from .errors import InvalidEnergy, SchemaError, SpanError, UnlistedDirection
from .geometry import HalfSpace, Polytope, _positively_spanning, halfspace_intersection, support_function

ANGULAR_TOL = 1e-9


def _angle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between unit vector ``a`` and each row of unit array ``b``."""
    cos = b @ a
    sin = np.linalg.norm(b - cos[:, None] * a, axis=1)
    return np.arctan2(sin, cos)


@dataclass(frozen=True, eq=False)
class CrystallineIntegrand:
    normals: np.ndarray
    gammas: np.ndarray
    unoriented: bool = False

    def __post_init__(self):
        normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        gammas = np.asarray(self.gammas, dtype=float).reshape(-1)
        d = normals.shape[1]
        if d not in (2, 3):
            raise SchemaError(f"dimension must be 2 or 3, got {d}")
        if len(normals) != len(gammas):
            raise SchemaError("normals and gammas differ in length")
        if not np.all(np.isfinite(gammas)) or np.any(gammas <= 0):
            raise InvalidEnergy("every gamma must be finite and strictly positive")
        lengths = np.linalg.norm(normals, axis=1)
        if not np.all(np.isfinite(lengths)) or np.any(lengths == 0):
            raise SchemaError("normals must be nonzero finite vectors")
        normals = normals / lengths[:, None]

        keep_n: list[np.ndarray] = []
        keep_g: list[float] = []
        for n, g in zip(normals, gammas):
            if keep_n:
                ang = _angle(n, np.array(keep_n))
                j = int(np.argmin(ang))
                if ang[j] <= ANGULAR_TOL:
                    keep_g[j] = min(keep_g[j], float(g))
                    continue
            keep_n.append(n)
            keep_g.append(float(g))
        normals, gammas = np.array(keep_n), np.array(keep_g)
        if not _positively_spanning(normals, 1e-12):
            raise SpanError("directions do not positively span R^d; the Wulff shape is unbounded")
        if self.unoriented:
            for n, g in zip(normals, gammas):
                ang = _angle(-n, normals)
                j = int(np.argmin(ang))
                if ang[j] > ANGULAR_TOL or gammas[j] != g:
                    raise SchemaError("unoriented integrand is not closed under v -> -v")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "gammas", gammas)

    @property
    def dim(self) -> int:
        return int(self.normals.shape[1])

    def __len__(self) -> int:
        return len(self.gammas)

    def halfspaces(self) -> list[HalfSpace]:
        return [HalfSpace(n, g) for n, g in zip(self.normals, self.gammas)]

    def scaled(self, c: float) -> "CrystallineIntegrand":
        return CrystallineIntegrand(self.normals, self.gammas * c, self.unoriented)

    def lookup(self, direction) -> int | None:
        """Index of the listed direction matching ``direction``, if any."""
        v = np.asarray(direction, dtype=float)
        v = v / np.linalg.norm(v)
        ang = _angle(v, self.normals)
        j = int(np.argmin(ang))
        return j if ang[j] <= ANGULAR_TOL else None

    @cached_property
    def crystal(self) -> Polytope:
        return halfspace_intersection(self.halfspaces())

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dim,
            "symmetrize": False,
            "facets": [{"normal": n.tolist(), "gamma": float(g)}
                       for n, g in zip(self.normals, self.gammas)],
        }


def symmetrize(I: CrystallineIntegrand) -> CrystallineIntegrand:
    """Antipodal closure; a pair listed with different energies keeps the smaller."""
    return _closed(I.normals, I.gammas)


def _closed(normals: np.ndarray, gammas: np.ndarray) -> CrystallineIntegrand:
    # duplicate merging keeps the smaller gamma, so v and -v end up equal
    normals = normals / np.linalg.norm(normals, axis=1)[:, None]
    return CrystallineIntegrand(np.vstack([normals, -normals]),
                                np.concatenate([gammas, gammas]), unoriented=True)


def phi_star(I: CrystallineIntegrand, p) -> float:
    """Homogeneous extension ``|p| * gamma(p / |p|)`` of the listed energies."""
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    if not r > 0:
        raise UnlistedDirection("phi_star is undefined at the origin")
    j = I.lookup(p / r)
    if j is None:
        raise UnlistedDirection(f"direction {np.round(p / r, 12).tolist()} is not in the table")
    return r * float(I.gammas[j])


def support_value(I: CrystallineIntegrand, v) -> float:
    """Convexified energy in direction ``v``: the Wulff shape's support function."""
    v = np.asarray(v, dtype=float)
    return support_function(I.crystal, v / np.linalg.norm(v))


def energy_of(I: CrystallineIntegrand, normal) -> float:
    """Listed gamma for table directions, convexified energy elsewhere."""
    j = I.lookup(normal)
    if j is not None:
        return float(I.gammas[j])
    return support_value(I, normal)


_TOP_KEYS = {"dimension", "symmetrize", "facets"}
_FACET_KEYS = {"normal", "gamma"}


def parse_integrand(text: str | bytes | dict) -> CrystallineIntegrand:
    """Build an integrand from its JSON document (string or decoded dict)."""
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    missing = {"dimension", "facets"} - doc.keys()
    extra = doc.keys() - _TOP_KEYS
    if missing or extra:
        raise SchemaError(f"missing fields {sorted(missing)}, unexpected fields {sorted(extra)}")
    d = doc["dimension"]
    if isinstance(d, bool) or d not in (2, 3):
        raise SchemaError("dimension must be 2 or 3")
    sym = doc.get("symmetrize", False)
    if not isinstance(sym, bool):
        raise SchemaError("symmetrize must be a boolean")
    facets = doc["facets"]
    if not isinstance(facets, list) or not facets:
        raise SchemaError("facets must be a non-empty list")

    normals, gammas = [], []
    for k, f in enumerate(facets):
        if not isinstance(f, dict) or f.keys() != _FACET_KEYS:
            raise SchemaError(f"facet {k} must have exactly the fields 'normal' and 'gamma'")
        n, g = f["normal"], f["gamma"]
        if (not isinstance(n, list) or len(n) != d
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in n)):
            raise SchemaError(f"facet {k}: normal must be a list of {d} numbers")
        if isinstance(g, bool) or not isinstance(g, (int, float)):
            raise SchemaError(f"facet {k}: gamma must be a number")
        if not math.isfinite(g) or g <= 0:
            raise InvalidEnergy(f"facet {k}: gamma must be finite and positive, got {g}")
        if not any(n):
            raise SchemaError(f"facet {k}: normal is the zero vector")
        normals.append(n)
        gammas.append(g)

    normals = np.array(normals, dtype=float)
    gammas = np.array(gammas, dtype=float)
    if sym:
        return _closed(normals, gammas)
    return CrystallineIntegrand(normals, gammas)


def load_integrand(path) -> CrystallineIntegrand:
    with open(path, encoding="utf-8") as fh:
        return parse_integrand(fh.read())


# common tables


def axis_integrand(d: int, gamma: float = 1.0) -> CrystallineIntegrand:
    eye = np.eye(d)
    return CrystallineIntegrand(np.vstack([eye, -eye]), np.full(2 * d, gamma))


def octahedral_integrand(gamma: float = 1.0) -> CrystallineIntegrand:
    signs = np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1], indexing="ij")).reshape(3, -1).T
    return CrystallineIntegrand(signs / np.sqrt(3), np.full(8, gamma))


def isotropic_integrand_2d(m: int, gamma: float = 1.0) -> CrystallineIntegrand:
    t = 2 * np.pi * np.arange(m) / m
    return CrystallineIntegrand(np.column_stack([np.cos(t), np.sin(t)]), np.full(m, gamma))


def random_integrand_2d(rng: np.random.Generator, m: int,
                        gamma_range: tuple[float, float] = (0.5, 2.0)) -> CrystallineIntegrand:
    """``m`` random directions with uniform energies; redraws until spanning."""
    while True:
        t = rng.uniform(0, 2 * np.pi, m)
        g = rng.uniform(*gamma_range, m)
        try:
            return CrystallineIntegrand(np.column_stack([np.cos(t), np.sin(t)]), g)
        except SpanError:
            continue
