"""Discrete curvatures phi_h, psi_h, k_h on triangulated surfaces and the
convex energies that prescribe them, in E^2, H^2 and S^2."""
from __future__ import annotations

from .curvature import angle_defect, is_delaunay, k_h, phi_h, psi_h, vertex_edge_identity_check
from .energy import EnergyProblem, Flavor
from .errors import *  # noqa: F401,F403
from .mesh import CirclePackingMetric, PolyhedralMetric, Surface, build_surface, edge_label
from .packing import layout, packing_complete
from .polygons import cyclic_polygon_solve
from .solver import ProblemSpec, SolveReport, SolverOptions, problem_from_metric, rigidity_probe, solve
from .trig import Geometry, angles_from_lengths, extended_angles

__version__ = "0.1.0"
