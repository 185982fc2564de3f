"""Bordered triangulated surfaces and the metrics living on them."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import trig
from .errors import (
    BadIndex,
    ClosedSurface,
    Disconnected,
    DuplicateTriangle,
    InvalidMetric,
    IsolatedVertex,
    MissingEdgeLength,
    NonManifoldEdge,
    NonPositiveRadius,
    UnsupportedGeometry,
)
from .trig import Geometry


def edge_label(u: int, v: int) -> str:
    a, b = sorted((int(u), int(v)))
    return f"{a}-{b}"


def parse_edge_label(label: str) -> tuple[int, int]:
    a, b = (int(p) for p in str(label).split("-"))
    if a == b:
        raise ValueError(f"degenerate edge key {label!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, eq=False)
class Surface:
    """Immutable combinatorial surface; build with :func:`build_surface`.

    Local convention: ``triangle_edges[t, i]`` is the edge opposite
    ``triangles[t, i]``.
    """

    vertex_count: int
    triangles: np.ndarray
    edges: np.ndarray
    edge_boundary: np.ndarray
    vertex_boundary: np.ndarray
    triangle_class: np.ndarray
    triangle_edges: np.ndarray
    edge_faces: tuple = field(repr=False)
    edge_index: dict = field(repr=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    @property
    def interior_edges(self) -> np.ndarray:
        return np.flatnonzero(~self.edge_boundary)

    @property
    def boundary_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_boundary)

    @property
    def interior_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.vertex_boundary)

    @property
    def boundary_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.vertex_boundary)

    @property
    def vertex_degree(self) -> np.ndarray:
        """Number of triangles incident to each vertex."""
        return np.bincount(self.triangles.ravel(), minlength=self.vertex_count)

    def edge_id(self, u: int, v: int) -> int:
        key = (int(u), int(v)) if u < v else (int(v), int(u))
        return self.edge_index[key]

    def edge_labels(self, which=None) -> list[str]:
        idx = range(self.edge_count) if which is None else which
        return [f"{self.edges[e, 0]}-{self.edges[e, 1]}" for e in idx]

    def vertex_triangles(self, v: int) -> list[tuple[int, int]]:
        """(triangle, local index of v) for every triangle at v."""
        t, i = np.nonzero(self.triangles == v)
        return list(zip(t.tolist(), i.tolist()))


def build_surface(vertex_count: int, triangles) -> Surface:
    tri = np.asarray(triangles, dtype=np.int64)
    if tri.ndim != 2 or tri.shape[1] != 3 or len(tri) == 0:
        raise BadIndex("triangles must be a non-empty list of index triples")
    n = int(vertex_count)
    if np.any(tri < 0) or np.any(tri >= n):
        raise BadIndex("triangle vertex index out of range")
    if np.any((tri[:, 0] == tri[:, 1]) | (tri[:, 1] == tri[:, 2]) | (tri[:, 0] == tri[:, 2])):
        raise BadIndex("repeated vertex within a triangle")
    keys = {tuple(sorted(t)) for t in tri.tolist()}
    if len(keys) != len(tri):
        raise DuplicateTriangle("duplicate triangle")
    if len(np.unique(tri)) != n:
        raise IsolatedVertex("every vertex must belong to a triangle")

    incidence: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for t, (a, b, c) in enumerate(tri.tolist()):
        for local, (u, v) in enumerate(((b, c), (a, c), (a, b))):
            key = (u, v) if u < v else (v, u)
            incidence[key].append((t, local))

    ordered = sorted(incidence)
    edge_index = {key: e for e, key in enumerate(ordered)}
    edges = np.array(ordered, dtype=np.int64)
    faces = tuple(tuple(incidence[key]) for key in ordered)
    counts = np.array([len(f) for f in faces])
    if np.any(counts > 2):
        bad = ordered[int(np.argmax(counts > 2))]
        raise NonManifoldEdge(f"edge {bad} has {counts.max()} incident triangles")
    edge_boundary = counts == 1
    if not edge_boundary.any():
        raise ClosedSurface("surface has no boundary edge")

    graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    ncomp, _ = connected_components(graph, directed=False)
    if ncomp != 1:
        raise Disconnected(f"surface has {ncomp} components")

    vertex_boundary = np.zeros(n, dtype=bool)
    vertex_boundary[edges[edge_boundary].ravel()] = True

    triangle_edges = np.empty_like(tri)
    for e, f in enumerate(faces):
        for t, local in f:
            triangle_edges[t, local] = e
    triangle_class = (~edge_boundary[triangle_edges]).sum(axis=1)

    return Surface(
        vertex_count=n,
        triangles=tri,
        edges=edges,
        edge_boundary=edge_boundary,
        vertex_boundary=vertex_boundary,
        triangle_class=triangle_class,
        triangle_edges=triangle_edges,
        edge_faces=faces,
        edge_index=edge_index,
    )


def is_stripped(surface: Surface) -> bool:
    """Every triangle has at least one boundary edge."""
    has_boundary = surface.edge_boundary[surface.triangle_edges].any(axis=1)
    return bool(np.all(surface.triangle_class < 3) and np.all(has_boundary))


class PolyhedralMetric:
    """Edge lengths aligned with ``surface.edges``.

    Single-writer: the length array is shared, not copied, by
    :meth:`triangle_lengths` callers.
    """

    def __init__(self, surface: Surface, lengths, geometry, validate: bool = True):
        self.surface = surface
        self.geometry = Geometry.parse(geometry)
        self.lengths = np.asarray(lengths, dtype=float).copy()
        if self.lengths.shape != (surface.edge_count,):
            raise InvalidMetric("one length per edge required")
        if validate:
            if np.any(self.lengths <= 0):
                raise InvalidMetric("edge lengths must be positive")
            if self.geometry is Geometry.SPHERICAL and np.any(self.lengths >= np.pi):
                raise InvalidMetric("spherical edge lengths must be < pi")
            bad = validate_metric(surface, self)
            if bad:
                raise InvalidMetric(f"triangles {bad} violate the triangle inequalities")

    @classmethod
    def from_mapping(cls, surface: Surface, mapping: Mapping, geometry, validate: bool = True):
        lengths = np.empty(surface.edge_count)
        lookup = {}
        for key, val in mapping.items():
            k = parse_edge_label(key) if isinstance(key, str) else tuple(sorted(key))
            lookup[k] = float(val)
        for e, (u, v) in enumerate(surface.edges.tolist()):
            if (u, v) not in lookup:
                raise MissingEdgeLength(f"no length for edge {u}-{v}")
            lengths[e] = lookup[(u, v)]
        return cls(surface, lengths, geometry, validate=validate)

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(self.surface.edge_labels(), self.lengths.tolist()))

    def triangle_lengths(self) -> np.ndarray:
        """(T, 3) lengths; column i is opposite local vertex i."""
        return self.lengths[self.surface.triangle_edges]

    def angles(self) -> np.ndarray:
        return trig.angles_from_lengths(self.triangle_lengths(), self.geometry)


class CirclePackingMetric:
    def __init__(self, surface: Surface, radii, geometry):
        g = Geometry.parse(geometry)
        if g is Geometry.SPHERICAL:
            raise UnsupportedGeometry("circle packings are Euclidean or hyperbolic")
        r = np.asarray(radii, dtype=float).copy()
        if r.shape != (surface.vertex_count,):
            raise InvalidMetric("one radius per vertex required")
        if np.any(r <= 0):
            raise NonPositiveRadius("radii must be positive")
        self.surface = surface
        self.geometry = g
        self.radii = r

    @classmethod
    def from_mapping(cls, surface: Surface, mapping: Mapping, geometry):
        r = np.full(surface.vertex_count, np.nan)
        for key, val in mapping.items():
            r[int(key)] = float(val)
        if np.any(np.isnan(r)):
            missing = np.flatnonzero(np.isnan(r)).tolist()
            raise InvalidMetric(f"no radius for vertices {missing}")
        return cls(surface, r, geometry)

    def as_mapping(self) -> dict[str, float]:
        return {str(v): float(x) for v, x in enumerate(self.radii)}

    def edge_lengths(self) -> np.ndarray:
        e = self.surface.edges
        return self.radii[e[:, 0]] + self.radii[e[:, 1]]

    def polyhedral(self) -> PolyhedralMetric:
        return PolyhedralMetric(self.surface, self.edge_lengths(), self.geometry)

    def triangle_radii(self) -> np.ndarray:
        return self.radii[self.surface.triangles]

    def angles(self) -> np.ndarray:
        l = trig.packing_lengths(self.triangle_radii(), self.geometry)
        return trig.angles_from_lengths(l, self.geometry)


def validate_metric(surface: Surface, metric) -> list[int]:
    """Indices of triangles whose length triple is not strictly admissible."""
    if isinstance(metric, PolyhedralMetric):
        lengths, geometry = metric.lengths, metric.geometry
    elif isinstance(metric, CirclePackingMetric):
        lengths, geometry = metric.edge_lengths(), metric.geometry
    else:
        raise TypeError("expected a PolyhedralMetric or CirclePackingMetric")
    ok = trig.in_moduli_space(lengths[surface.triangle_edges], geometry)
    return np.flatnonzero(~ok).tolist()
