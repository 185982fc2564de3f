"""Recover interior lengths (or radii) from boundary data and curvatures.

The shifted energy ``E(u) - c.u`` is convex in chart coordinates, and its
critical point is the metric whose curvatures equal the targets. A damped
Newton method with a fraction-to-boundary rule keeps every iterate in the
open chart box.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import linalg

from . import curvature as curv
from . import trig
from .energy import EnergyProblem, Flavor, line_integral, triangle_kind
from .errors import InfeasibleSpec, LineSearchFailure, MaxIterations
from .mesh import CirclePackingMetric, PolyhedralMetric, Surface, parse_edge_label
from .trig import Geometry

__all__ = [
    "Flavor",
    "ProblemSpec",
    "SolveReport",
    "SolverOptions",
    "RigidityVerdict",
    "curvature_values",
    "problem_from_metric",
    "rigidity_probe",
    "solve",
]


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iter: int = 200
    backtrack: float = 0.5
    armijo: float = 1e-4
    fraction_to_boundary: float = 0.9
    max_step: float = 1.0  # cap on |d|_inf relative to 1 + |u|_inf
    max_halvings: int = 60


def _aligned(surface: Surface, data, index: np.ndarray, by_edge: bool, what: str) -> np.ndarray:
    """Turn a mapping keyed by edge labels / vertex ids (or a plain array)
    into an array aligned with ``index``."""
    if not isinstance(data, Mapping):
        arr = np.asarray(data, dtype=float)
        if arr.shape != (len(index),):
            raise InfeasibleSpec(f"{what}: expected {len(index)} values, got shape {arr.shape}")
        return arr.copy()
    lookup = {}
    for key, val in data.items():
        if by_edge:
            k = parse_edge_label(key) if isinstance(key, str) else tuple(sorted(int(x) for x in key))
            if k not in surface.edge_index:
                raise InfeasibleSpec(f"{what}: {key!r} is not an edge")
            lookup[surface.edge_index[k]] = float(val)
        else:
            lookup[int(key)] = float(val)
    if set(lookup) != set(index.tolist()):
        raise InfeasibleSpec(f"{what}: keys do not match the expected {'edge' if by_edge else 'vertex'} set")
    return np.array([lookup[i] for i in index.tolist()])


@dataclass
class ProblemSpec:
    surface: Surface
    geometry: Geometry
    h: float
    flavor: Flavor
    boundary_data: object
    targets: object
    initial_guess: object = None

    def __post_init__(self):
        self.geometry = Geometry.parse(self.geometry)
        self.flavor = Flavor.parse(self.flavor)
        self.h = float(self.h)
        if not np.isfinite(self.h):
            raise InfeasibleSpec("h must be finite")
        triangle_kind(self.flavor, self.geometry, self.surface)  # compatibility
        s = self.surface
        packing = self.flavor is Flavor.U_PACKING
        bnd = s.boundary_vertices if packing else s.boundary_edges
        inner = s.interior_vertices if packing else s.interior_edges
        self.boundary_values = _aligned(s, self.boundary_data, bnd, not packing, "boundary data")
        self.target_values = _aligned(s, self.targets, inner, not packing, "targets")
        if not np.all(np.isfinite(self.target_values)):
            raise InfeasibleSpec("targets must be finite")
        if np.any(self.boundary_values <= 0):
            raise InfeasibleSpec("boundary lengths/radii must be positive")
        self.initial_values = (
            None
            if self.initial_guess is None
            else _aligned(s, self.initial_guess, inner, not packing, "initial guess")
        )

    @property
    def packing(self) -> bool:
        return self.flavor is Flavor.U_PACKING

    def fixed_array(self) -> np.ndarray:
        s = self.surface
        size = s.vertex_count if self.packing else s.edge_count
        full = np.zeros(size)
        full[s.boundary_vertices if self.packing else s.boundary_edges] = self.boundary_values
        return full


@dataclass
class SolveReport:
    solution: PolyhedralMetric | CirclePackingMetric
    iterations: int
    final_gradient_norm: float
    converged: bool
    descent_path_stayed_admissible: bool
    no_geometric_solution: bool = False
    energy_trace: list = field(default_factory=list)
    steepest_descent_steps: int = 0

    def interior_values(self) -> np.ndarray:
        s = self.solution.surface
        if isinstance(self.solution, CirclePackingMetric):
            return self.solution.radii[s.interior_vertices]
        return self.solution.lengths[s.interior_edges]

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_gradient_norm": self.final_gradient_norm,
            "descent_path_stayed_admissible": self.descent_path_stayed_admissible,
            "no_geometric_solution": self.no_geometric_solution,
            "steepest_descent_steps": self.steepest_descent_steps,
        }


# -- initial guess ---------------------------------------------------------------


def _feasible_interval(a, b, geometry: Geometry):
    lo = np.abs(a - b)
    hi = a + b
    if geometry is Geometry.SPHERICAL:
        hi = np.minimum(hi, 2 * np.pi - a - b)
    return lo, hi


def default_initial_lengths(problem: ProblemSpec, sweeps: int = 200) -> np.ndarray:
    """Mean boundary length on interior edges, then edge-wise moves to the
    midpoint of the feasible interval until every triangle is admissible."""
    s = problem.surface
    g = problem.geometry
    lengths = problem.fixed_array()
    inner = s.interior_edges
    lengths[inner] = problem.boundary_values.mean()
    free = ~s.edge_boundary
    for _ in range(sweeps):
        bad = np.flatnonzero(~trig.in_moduli_space(lengths[s.triangle_edges], g, slack=1e-9))
        if len(bad) == 0:
            break
        for t in bad:
            e = s.triangle_edges[t]
            if trig.in_moduli_space(lengths[e], g, slack=1e-9):
                continue
            for i in range(3):
                if not free[e[i]]:
                    continue
                a, b = lengths[e[(i + 1) % 3]], lengths[e[(i + 2) % 3]]
                lo, hi = _feasible_interval(a, b, g)
                if hi > lo:
                    lengths[e[i]] = 0.5 * (lo + hi)
                    break
            else:
                # every free edge is pinned by its neighbours; grow the free ones
                for i in range(3):
                    if free[e[i]]:
                        lengths[e[i]] *= 1.1
    if g is Geometry.SPHERICAL:
        lengths = np.clip(lengths, 1e-6, np.pi - 1e-6)
    return lengths[inner]


# -- Newton -------------------------------------------------------------------------


def _box_step(u, d, lo, hi, fraction):
    cap = np.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where((d > 0) & np.isfinite(hi), (hi - u) / d, np.inf)
        down = np.where((d < 0) & np.isfinite(lo), (lo - u) / d, np.inf)
    cap = min(cap, float(np.min(up, initial=np.inf)), float(np.min(down, initial=np.inf)))
    return min(1.0, fraction * cap)


def solve(problem: ProblemSpec, options: SolverOptions | None = None) -> SolveReport:
    opts = options or SolverOptions()
    energy = EnergyProblem(
        problem.surface, problem.flavor, problem.geometry, problem.h, problem.fixed_array()
    )
    shift = energy.linear_term(problem.target_values)
    lo, hi = energy.chart.image

    if problem.initial_values is not None:
        start = problem.initial_values
    elif problem.packing:
        start = np.full(energy.size, problem.boundary_values.mean())
    else:
        start = default_initial_lengths(problem)
    u = energy.to_u(start)
    if not energy.in_box(u):
        raise InfeasibleSpec("initial guess lies outside the chart image")

    def shifted_grad(x):
        return energy.gradient(x) - shift

    def finite_grad(x):
        if not energy.in_box(x):
            return None
        try:
            g = shifted_grad(x)
        except Exception:  # chart inversion at the very edge of the box
            return None
        return g if np.all(np.isfinite(g)) else None

    g = finite_grad(u)
    if g is None:
        raise InfeasibleSpec("the energy gradient is not finite at the initial guess")

    trace = [0.0]
    failures = 0
    steepest = False
    sd_steps = 0
    it = 0
    gnorm = float(np.max(np.abs(g), initial=0.0))
    while gnorm > opts.tol:
        if it >= opts.max_iter:
            report = _report(problem, energy, u, it, gnorm, False, trace, sd_steps)
            raise MaxIterations(f"no convergence after {it} iterations", report)
        it += 1
        if steepest:
            d = -g
        else:
            H = energy.hessian(u).toarray()
            lam = max(1e-10, 1e-8 * float(np.max(np.abs(H).sum(axis=1), initial=0.0)))
            try:
                d = linalg.solve(H + lam * np.eye(len(u)), -g, assume_a="sym")
            except linalg.LinAlgError:
                d = -g
        slope = float(g @ d)
        if slope >= 0:
            d, slope = -g, -float(g @ g)
        # flat (extension) regions make the Newton step unbounded
        cap = opts.max_step * (1.0 + float(np.max(np.abs(u), initial=0.0)))
        big = float(np.max(np.abs(d), initial=0.0))
        if big > cap:
            d, slope = d * (cap / big), slope * (cap / big)
        t = _box_step(u, d, lo, hi, opts.fraction_to_boundary)
        accepted = False
        for _ in range(opts.max_halvings):
            trial = u + t * d
            g_new = finite_grad(trial)
            if g_new is not None:
                dE = line_integral(shifted_grad, u, trial, region_fn=energy.regions)
                armijo = dE <= opts.armijo * t * slope
                # near the optimum the energy decrease drowns in rounding
                noise = abs(dE) <= 1e-13 * max(1.0, abs(t * slope)) and np.max(np.abs(g_new)) < gnorm
                if armijo or noise:
                    accepted = True
                    break
            t *= opts.backtrack
        if not accepted:
            failures += 1
            if not steepest and failures >= 2:
                steepest = True
                continue
            if steepest and failures >= 4:
                report = _report(problem, energy, u, it, gnorm, False, trace, sd_steps)
                raise LineSearchFailure("line search failed to find a decrease", report)
            continue
        if steepest:
            sd_steps += 1
        u, g = trial, g_new
        trace.append(trace[-1] + dE)
        gnorm = float(np.max(np.abs(g), initial=0.0))
    return _report(problem, energy, u, it, gnorm, True, trace, sd_steps)


def _report(problem, energy: EnergyProblem, u, it, gnorm, converged, trace, sd_steps) -> SolveReport:
    full = energy.full_values(u)
    s = problem.surface
    if problem.packing:
        metric = CirclePackingMetric(s, full, problem.geometry)
        admissible = True
    else:
        admissible = bool(np.all(energy.regions(u) == 0)) and bool(
            np.all(trig.in_moduli_space(full[s.triangle_edges], problem.geometry))
        )
        metric = PolyhedralMetric(s, full, problem.geometry, validate=admissible)
    return SolveReport(
        solution=metric,
        iterations=it,
        final_gradient_norm=gnorm,
        converged=converged,
        descent_path_stayed_admissible=admissible,
        no_geometric_solution=converged and not admissible,
        energy_trace=trace,
        steepest_descent_steps=sd_steps,
    )


# -- forward problem and rigidity -------------------------------------------------


def curvature_values(surface: Surface, metric, flavor, h: float) -> np.ndarray:
    """The curvature prescribed by ``flavor``, aligned with interior edges
    (or interior vertices)."""
    f = Flavor.parse(flavor)
    if f is Flavor.U_PACKING:
        return curv.k_h(surface, metric, h).values
    if f is Flavor.W_PSI:
        return curv.psi_h(surface, metric, h).values
    return curv.phi_h(surface, metric, h).values


def problem_from_metric(surface, metric, flavor, h, initial_guess=None) -> ProblemSpec:
    """Boundary data and curvatures of a known metric, as a ProblemSpec."""
    f = Flavor.parse(flavor)
    if f is Flavor.U_PACKING:
        boundary = metric.radii[surface.boundary_vertices]
    else:
        boundary = metric.lengths[surface.boundary_edges]
    return ProblemSpec(
        surface=surface,
        geometry=metric.geometry,
        h=h,
        flavor=f,
        boundary_data=boundary,
        targets=curvature_values(surface, metric, f, h),
        initial_guess=initial_guess,
    )


@dataclass(frozen=True)
class RigidityVerdict:
    boundary_agree: bool
    curvature_agree: bool
    interior_agree: bool
    boundary_gap: float
    curvature_gap: float
    interior_gap: float

    @property
    def counterexample_candidate(self) -> bool:
        return self.boundary_agree and self.curvature_agree and not self.interior_agree


def rigidity_probe(surface, metric_a, metric_b, flavor, h: float, tol: float = 1e-8) -> RigidityVerdict:
    f = Flavor.parse(flavor)

    def split(m):
        if f is Flavor.U_PACKING:
            return m.radii[surface.boundary_vertices], m.radii[surface.interior_vertices]
        return m.lengths[surface.boundary_edges], m.lengths[surface.interior_edges]

    ba, ia = split(metric_a)
    bb, ib = split(metric_b)
    ca = curvature_values(surface, metric_a, f, h)
    cb = curvature_values(surface, metric_b, f, h)

    def gap(x, y):
        return float(np.max(np.abs(x - y), initial=0.0))

    bg, cg, ig = gap(ba, bb), gap(ca, cb), gap(ia, ib)
    return RigidityVerdict(bg <= tol, cg <= tol, ig <= tol, bg, cg, ig)
