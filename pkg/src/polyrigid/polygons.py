"""Cyclic polygons from their side lengths.

A triangulated polygon is cyclic exactly when psi_0 vanishes on every
diagonal (and in E^2, psi_0 = phi_0), so the polygon is the solution of a
prescribed-curvature problem with zero targets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .energy import Flavor
from .errors import InfeasibleSpec, NoCyclicPolygon, SolverError
from .generators import fan_triangles
from .mesh import build_surface, edge_label
from .solver import ProblemSpec, SolverOptions, solve
from .trig import Geometry


@dataclass(frozen=True)
class CyclicPolygon:
    sides: np.ndarray
    geometry: Geometry
    diagonals: dict  # "0-k" -> length
    circumradius: float
    central_angles: np.ndarray
    coordinates: np.ndarray  # planar, or Poincare disk for H^2

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry.value,
            "sides": self.sides.tolist(),
            "diagonals": self.diagonals,
            "circumradius": self.circumradius,
            "coordinates": self.coordinates.tolist(),
        }


def _chord_ratio(g: Geometry, sides: np.ndarray, R: float) -> np.ndarray:
    return np.clip(g.m(0.5 * sides) / g.m(R), -1.0, 1.0)


def circumradius(sides, geometry) -> tuple[float, np.ndarray]:
    """Radius and central angles of the circle through a cyclic polygon."""
    g = Geometry.parse(geometry)
    s = np.asarray(sides, dtype=float)
    big = int(np.argmax(s))
    r_min = 0.5 * s[big]  # m is increasing, so m(R) >= m(s_max/2)

    def total(R):
        return 2.0 * np.arcsin(_chord_ratio(g, s, R)).sum() - 2.0 * np.pi

    def outside(R):
        x = np.arcsin(_chord_ratio(g, s, R))
        return x.sum() - 2.0 * x[big]

    # total decreases from >= 0 towards -2 pi; outside starts negative and
    # ends with the sign of sum_{i != big} m(s_i/2) - m(s_big/2)
    centred = total(r_min) >= 0
    f = total if centred else outside
    cap = 700.0 if g is Geometry.HYPERBOLIC else 1e9 * r_min
    hi = 2.0 * r_min
    while (f(hi) >= 0) if centred else (f(hi) <= 0):
        hi *= 2.0
        if hi > cap:
            raise NoCyclicPolygon("no circle passes through a polygon with these sides")
    if f(r_min) == 0:
        R = r_min
    else:
        R = optimize.brentq(f, r_min, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    delta = 2.0 * np.arcsin(_chord_ratio(g, s, R))
    if not centred:
        delta[big] = 2.0 * np.pi - delta[big]
    return float(R), delta


def polygon_problem(sides, geometry, triangles=None) -> ProblemSpec:
    g = Geometry.parse(geometry)
    s = np.asarray(sides, dtype=float)
    n = len(s)
    if n < 3:
        raise NoCyclicPolygon("a polygon needs at least three sides")
    if np.any(s <= 0):
        raise NoCyclicPolygon("side lengths must be positive")
    if np.any(s >= s.sum() - s):
        raise NoCyclicPolygon("a side is at least the sum of the others")
    if g is Geometry.SPHERICAL:
        raise InfeasibleSpec("cyclic polygons are solved in E^2 and H^2")
    surface = build_surface(n, fan_triangles(n) if triangles is None else triangles)
    boundary = {edge_label(i, (i + 1) % n): float(s[i]) for i in range(n)}
    if set(boundary) != set(surface.edge_labels(surface.boundary_edges)):
        raise InfeasibleSpec("triangulation boundary is not the polygon")
    flavor = Flavor.W_PHI if g is Geometry.EUCLIDEAN else Flavor.W_PSI
    targets = {lab: 0.0 for lab in surface.edge_labels(surface.interior_edges)}
    return ProblemSpec(surface, g, 0.0, flavor, boundary, targets)


def cyclic_polygon_solve(sides, geometry="euclidean", triangles=None, tol: float = 1e-12) -> CyclicPolygon:
    g = Geometry.parse(geometry)
    problem = polygon_problem(sides, g, triangles)
    s = problem.surface
    if len(s.interior_edges):
        try:
            report = solve(problem, SolverOptions(tol=tol))
        except SolverError as exc:
            raise NoCyclicPolygon(f"solver failed: {exc}") from None
        if report.no_geometric_solution:
            raise NoCyclicPolygon("no cyclic polygon with these sides")
        lengths = report.solution.lengths
    else:
        lengths = np.zeros(s.edge_count)
    diagonals = {
        lab: float(lengths[e]) for lab, e in zip(s.edge_labels(s.interior_edges), s.interior_edges)
    }
    side_arr = np.asarray(sides, dtype=float)
    R, delta = circumradius(side_arr, g)
    polar = np.concatenate([[0.0], np.cumsum(delta)[:-1]])
    rad = R if g is Geometry.EUCLIDEAN else np.tanh(0.5 * R)
    coords = rad * np.c_[np.cos(polar), np.sin(polar)]
    return CyclicPolygon(side_arr, g, diagonals, R, delta, coords)
