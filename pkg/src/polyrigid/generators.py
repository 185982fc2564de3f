"""Test meshes, metrics and polygons with known answers."""
from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .mesh import CirclePackingMetric, PolyhedralMetric, Surface, build_surface
from .trig import Geometry


def hexagon_fan() -> Surface:
    """Center 0 with six spokes; triangles (0, k, k+1)."""
    tri = [(0, k, k % 6 + 1) for k in range(1, 7)]
    return build_surface(7, tri)


def _delaunay_surface(points: np.ndarray) -> Surface:
    tri = Delaunay(points).simplices
    return build_surface(len(points), np.sort(tri, axis=1))


def hex_patch_points(rings: int = 2) -> np.ndarray:
    """Triangular-lattice points within hexagonal distance ``rings``."""
    pts = []
    for q in range(-rings, rings + 1):
        for r in range(-rings, rings + 1):
            if abs(q + r) <= rings:
                pts.append((q + 0.5 * r, r * np.sqrt(3) / 2))
    pts.sort(key=lambda p: (round(p[0] ** 2 + p[1] ** 2, 9), np.arctan2(p[1], p[0])))
    return np.array(pts)


def hex_patch(rings: int = 2) -> Surface:
    """Hexagonal patch of the triangular lattice; 19 vertices for rings=2."""
    return _delaunay_surface(hex_patch_points(rings))


def planar_lengths(surface: Surface, points: np.ndarray) -> np.ndarray:
    e = surface.edges
    return np.linalg.norm(points[e[:, 0]] - points[e[:, 1]], axis=1)


def random_disk(rng: np.random.Generator, jitter: float = 0.15):
    """Center, 7 points at radius 1 and 14 at radius 2, jittered, Delaunay
    triangulated (about 28 triangles). Returns (surface, points)."""
    pts = [np.zeros(2)]
    for count, rad in ((7, 1.0), (14, 2.0)):
        phase = rng.uniform(0, 2 * np.pi)
        ang = phase + 2 * np.pi * np.arange(count) / count
        pts.extend(rad * np.c_[np.cos(ang), np.sin(ang)])
    pts = np.array(pts)
    pts[1:] += rng.uniform(-jitter, jitter, size=(len(pts) - 1, 2))
    return _delaunay_surface(pts), pts


def disk_metric(surface: Surface, points: np.ndarray, geometry) -> PolyhedralMetric:
    """Planar edge lengths reused in every geometry.

    The open moduli space is the same for E^2 and H^2, so planar lengths
    are valid hyperbolic lengths; for S^2 they are halved so that every
    triangle stays small.
    """
    g = Geometry.parse(geometry)
    lengths = planar_lengths(surface, points)
    if g is Geometry.SPHERICAL:
        lengths = 0.5 * lengths
    return PolyhedralMetric(surface, lengths, g)


def annulus_strip(n: int = 8) -> Surface:
    """Band between an outer and an inner n-gon; every triangle has exactly
    one boundary edge. Outer vertices 0..n-1, inner n..2n-1."""
    tri = []
    for i in range(n):
        o, o1 = i, (i + 1) % n
        a, a1 = n + i, n + (i + 1) % n
        tri.append((o, o1, a))
        tri.append((a, o1, a1))
    return build_surface(2 * n, tri)


def annulus_points(n: int, rng: np.random.Generator | None = None, jitter: float = 0.1) -> np.ndarray:
    ang = 2 * np.pi * np.arange(n) / n
    outer = 2.0 * np.c_[np.cos(ang), np.sin(ang)]
    inner = 1.0 * np.c_[np.cos(ang + np.pi / n), np.sin(ang + np.pi / n)]
    pts = np.vstack([outer, inner])
    if rng is not None:
        pts = pts + rng.uniform(-jitter, jitter, size=pts.shape)
    return pts


def unit_packing(surface: Surface, geometry="euclidean") -> CirclePackingMetric:
    return CirclePackingMetric(surface, np.ones(surface.vertex_count), geometry)


# -- polygons -----------------------------------------------------------------------


def fan_triangles(n: int) -> list[tuple[int, int, int]]:
    return [(0, k, k + 1) for k in range(1, n - 1)]


def alternating_hexagon_triangles() -> list[tuple[int, int, int]]:
    """Hexagon cut by the three alternating diagonals 1-3, 3-5, 5-1."""
    return [(1, 2, 3), (3, 4, 5), (5, 0, 1), (1, 3, 5)]


def chord(geometry, radius: float, central_angle):
    """Length of a chord subtending ``central_angle`` in a circle of the
    given radius: m(s/2) = m(R) sin(angle/2)."""
    g = Geometry.parse(geometry)
    x = g.m(radius) * np.sin(0.5 * np.asarray(central_angle, dtype=float))
    if g is Geometry.EUCLIDEAN:
        return 2.0 * x
    if g is Geometry.HYPERBOLIC:
        return 2.0 * np.arcsinh(x)
    raise ValueError("cyclic polygons are Euclidean or hyperbolic")


def random_cyclic_polygon(rng: np.random.Generator, n: int, geometry, radius: float | None = None):
    """Sample central angles; return (sides, polar angles, radius)."""
    w = rng.uniform(0.4, 1.6, size=n)
    delta = 2 * np.pi * w / w.sum()
    if radius is None:
        radius = float(rng.uniform(0.5, 2.0))
    sides = chord(geometry, radius, delta)
    polar = np.concatenate([[0.0], np.cumsum(delta)[:-1]])
    return sides, polar, radius


def polygon_diagonal_oracle(geometry, radius: float, polar: np.ndarray, a: int, b: int) -> float:
    return float(chord(geometry, radius, polar[b] - polar[a]))
