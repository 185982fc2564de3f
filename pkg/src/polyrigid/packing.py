"""Circle-packing completion, planar layout and SVG rendering."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .energy import Flavor
from .errors import LayoutInconsistent, UnsupportedGeometry
from .mesh import CirclePackingMetric, Surface
from .solver import ProblemSpec, SolveReport, SolverOptions, solve
from .trig import Geometry

LAYOUT_TOL = 1e-6


def packing_complete(surface: Surface, boundary_radii, geometry="euclidean", h: float = 0.0,
                     targets=None, options: SolverOptions | None = None) -> SolveReport:
    """Solve for interior radii; targets default to k_h = 0 everywhere."""
    if targets is None:
        targets = np.zeros(len(surface.interior_vertices))
    spec = ProblemSpec(surface, geometry, h, Flavor.U_PACKING, boundary_radii, targets)
    return solve(spec, options)


def _third_point(pu, pv, du, dv, side: float) -> np.ndarray:
    """Point at distance du from pu and dv from pv, on the given side of
    the directed line pu -> pv (+1 left, -1 right)."""
    base = pv - pu
    L = np.hypot(*base)
    x = (du * du - dv * dv + L * L) / (2 * L)
    y = np.sqrt(max(du * du - x * x, 0.0))
    e = base / L
    n = np.array([-e[1], e[0]])
    return pu + x * e + side * y * n


def _cross(a, b, c) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


@dataclass(frozen=True)
class Layout:
    centers: np.ndarray
    radii: np.ndarray
    residual: float


def layout(packing: CirclePackingMetric) -> Layout:
    """Place circle centres by breadth-first propagation over triangles.

    The seed triangle has its first vertex at the origin and its second on
    the positive x-axis. Each neighbouring triangle puts its new vertex on
    the far side of the shared edge.
    """
    if packing.geometry is not Geometry.EUCLIDEAN:
        raise UnsupportedGeometry("layout is implemented for Euclidean packings")
    s = packing.surface
    r = packing.radii
    pos = np.full((s.vertex_count, 2), np.nan)
    a, b, c = s.triangles[0]
    pos[a] = (0.0, 0.0)
    pos[b] = (r[a] + r[b], 0.0)
    pos[c] = _third_point(pos[a], pos[b], r[a] + r[c], r[b] + r[c], 1.0)

    seen = np.zeros(s.triangle_count, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for local in range(3):
            e = s.triangle_edges[t, local]
            for t2, local2 in s.edge_faces[e]:
                if seen[t2]:
                    continue
                seen[t2] = True
                queue.append(t2)
                u, v = s.edges[e]
                w = s.triangles[t2, local2]
                if np.isnan(pos[w, 0]):
                    opp = s.triangles[t, local]
                    side = -np.sign(_cross(pos[u], pos[v], pos[opp])) or 1.0
                    pos[w] = _third_point(pos[u], pos[v], r[u] + r[w], r[v] + r[w], side)
    e = s.edges
    gaps = np.linalg.norm(pos[e[:, 0]] - pos[e[:, 1]], axis=1) - (r[e[:, 0]] + r[e[:, 1]])
    return Layout(pos, r.copy(), float(np.max(np.abs(gaps))))


def checked_layout(packing: CirclePackingMetric, tol: float = LAYOUT_TOL) -> Layout:
    lay = layout(packing)
    if lay.residual > tol:
        raise LayoutInconsistent(f"tangency residual {lay.residual:.3e} exceeds {tol:g}")
    return lay


def developability_gap(packing: CirclePackingMetric, vertex: int) -> float:
    """Unfold the star of an interior vertex triangle by triangle and report
    how far the first neighbour lands from its starting placement."""
    s = packing.surface
    r = packing.radii
    v = int(vertex)
    star = [tuple(int(x) for x in s.triangles[t]) for t, _ in s.vertex_triangles(v)]
    first = star.pop(0)
    a, b = [x for x in first if x != v]
    origin = np.zeros(2)
    start = np.array([r[v] + r[a], 0.0])
    pos = {a: start}
    pos[b] = _third_point(origin, start, r[v] + r[b], r[a] + r[b], 1.0)
    prev_other, cur = a, b
    placed_a = None
    while star:
        k = next((i for i, tri in enumerate(star) if cur in tri), None)
        if k is None:
            raise LayoutInconsistent(f"star of vertex {v} is not a closed fan")
        tri = star.pop(k)
        (w,) = [x for x in tri if x not in (v, cur)]
        side = -np.sign(_cross(origin, pos[cur], pos[prev_other])) or 1.0
        p = _third_point(origin, pos[cur], r[v] + r[w], r[cur] + r[w], side)
        if w == a and not star:
            placed_a = p
        else:
            pos[w] = p
        prev_other, cur = cur, w
    if placed_a is None:
        raise LayoutInconsistent(f"star of vertex {v} does not close")
    return float(np.linalg.norm(placed_a - start))


def svg_document(lay: Layout, surface: Surface, size: int = 1000, margin: float = 20.0) -> str:
    """Circles and the tangency graph in a fixed 1000-unit viewBox."""
    lo = (lay.centers - lay.radii[:, None]).min(axis=0)
    hi = (lay.centers + lay.radii[:, None]).max(axis=0)
    scale = (size - 2 * margin) / float(np.max(hi - lo))
    off = margin + 0.5 * ((size - 2 * margin) - scale * (hi - lo))

    def xy(p):
        q = off + scale * (p - lo)
        return q[0], size - q[1]

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}">',
        '<g fill="none" stroke="#1f4e79" stroke-width="1.5">',
    ]
    for p, rad in zip(lay.centers, lay.radii):
        x, y = xy(p)
        lines.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="{scale * rad:.6f}"/>')
    lines.append("</g>")
    lines.append('<g stroke="#b03a2e" stroke-width="1">')
    for u, v in surface.edges:
        x1, y1 = xy(lay.centers[u])
        x2, y2 = xy(lay.centers[v])
        lines.append(f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
