"""Edge curvatures phi_h, psi_h and the vertex curvature k_h."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotApplicable, UnsupportedGeometry
from .integrals import integral_kernel  # noqa: F401  (re-exported)
from .integrals import cos_from_zero, sin_from_half_pi, tan_half_from_half_pi
from .mesh import CirclePackingMetric, PolyhedralMetric, Surface
from .trig import Geometry, alphas


@dataclass(frozen=True)
class EdgeCurvatureVector:
    surface: Surface
    values: np.ndarray  # aligned with surface.interior_edges
    flavor: str
    h: float
    geometry: Geometry

    @property
    def edges(self) -> np.ndarray:
        return self.surface.interior_edges

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(self.surface.edge_labels(self.edges), self.values.tolist()))


@dataclass(frozen=True)
class VertexCurvatureVector:
    surface: Surface
    values: np.ndarray  # aligned with surface.interior_vertices
    h: float
    geometry: Geometry

    @property
    def vertices(self) -> np.ndarray:
        return self.surface.interior_vertices

    def as_mapping(self) -> dict[str, float]:
        return {str(v): float(x) for v, x in zip(self.vertices, self.values)}


def _scatter_interior(surface: Surface, per_corner: np.ndarray) -> np.ndarray:
    """Sum per-(triangle, local edge) values onto interior edges."""
    total = np.zeros(surface.edge_count)
    np.add.at(total, surface.triangle_edges.ravel(), per_corner.ravel())
    return total[surface.interior_edges]


def phi_h(surface: Surface, metric: PolyhedralMetric, h: float) -> EdgeCurvatureVector:
    """Sum over the two facing angles a of int_a^{pi/2} sin^h t dt."""
    theta = metric.angles()
    vals = _scatter_interior(surface, -sin_from_half_pi(h, theta))
    return EdgeCurvatureVector(surface, vals, "phi", float(h), metric.geometry)


def psi_h(surface: Surface, metric: PolyhedralMetric, h: float) -> EdgeCurvatureVector:
    """Sum over both sides of int_0^{(b+c-a)/2} cos^h t dt."""
    theta = metric.angles()
    vals = _scatter_interior(surface, -cos_from_zero(h, alphas(theta)))
    return EdgeCurvatureVector(surface, vals, "psi", float(h), metric.geometry)


def k_h(surface: Surface, packing: CirclePackingMetric, h: float) -> VertexCurvatureVector:
    """(2 - m/2) pi minus the sum of int_{pi/2}^{theta} tan^h(t/2) dt at v."""
    theta = packing.angles()
    per_corner = tan_half_from_half_pi(h, theta)
    sums = np.zeros(surface.vertex_count)
    np.add.at(sums, surface.triangles.ravel(), per_corner.ravel())
    m = surface.vertex_degree
    k = (2.0 - 0.5 * m) * np.pi - sums
    iv = surface.interior_vertices
    return VertexCurvatureVector(surface, k[iv], float(h), packing.geometry)


def angle_defect(surface: Surface, metric) -> np.ndarray:
    """2 pi minus the angle sum at every vertex (all vertices)."""
    theta = metric.angles()
    sums = np.zeros(surface.vertex_count)
    np.add.at(sums, surface.triangles.ravel(), theta.ravel())
    return 2.0 * np.pi - sums


def is_delaunay(surface: Surface, metric: PolyhedralMetric, eps: float = 1e-12) -> bool:
    """psi_0 >= -eps on every interior edge.

    The sign of psi_h does not depend on h because cos^h is positive on
    (-pi/2, pi/2), so h = 0 is used.
    """
    if metric.geometry is Geometry.SPHERICAL:
        raise UnsupportedGeometry("Delaunay criterion is stated for E^2 and H^2")
    return bool(np.all(psi_h(surface, metric, 0.0).values >= -eps))


def vertex_edge_identity_check(surface: Surface, metric: PolyhedralMetric, vertex: int) -> float:
    """Residual of sum_{v < e} psi_0(e) - (2 pi - k_0(v)) at an interior vertex.

    Each triangle at v contributes (theta_v + theta_w - theta_x)/2 and
    (theta_v + theta_x - theta_w)/2 to its two edges through v, which sum to
    theta_v; so the identity needs only that v is interior.
    """
    v = int(vertex)
    if surface.vertex_boundary[v]:
        raise NotApplicable(f"vertex {v} lies on the boundary")
    psi = psi_h(surface, metric, 0.0)
    by_edge = dict(zip(psi.edges.tolist(), psi.values.tolist()))
    incident = [e for e, (a, b) in enumerate(surface.edges.tolist()) if v in (a, b)]
    total = sum(by_edge[e] for e in incident)
    k0 = angle_defect(surface, metric)[v]
    return float(total - (2.0 * np.pi - k0))
