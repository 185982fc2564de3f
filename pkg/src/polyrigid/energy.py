"""Triangle energies, their extensions past degenerate triangles, and assembly.

Triangle kinds
--------------
``E_phi``, ``S_phi``  phi-type energy in the xi chart (Euclidean, spherical)
``H_psi``             psi-type energy in the hyperbolic xi chart
``H_phi``             phi-type energy in the gamma chart (stripped surfaces)
``C_E``, ``C_H``      circle-packing energy in the g chart

Gradients are taken with respect to the chart coordinates of the three
edges (or vertices) of a triangle. Corner ``i`` carries

* phi:  int_{pi/2}^{theta_i} sin^h
* psi:  int_0^{alpha_i} cos^h,  alpha_i = (theta_i - theta_j - theta_k)/2
* pack: -int_{pi/2}^{theta_i} tan^h(t/2)

with extended (locally constant) angles outside the moduli space, where the
Hessian vanishes. Summed over a surface this makes the gradient of the
total energy ``-phi_h``, ``-psi_h`` or ``k_h - (2 - m/2) pi``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse, special

from . import trig
from .charts import Chart
from .errors import InfeasibleSpec, OutOfDomain, UnsupportedArity
from .integrals import cos_from_zero, sin_from_half_pi, tan_half_from_half_pi
from .mesh import Surface, is_stripped
from .trig import Geometry

BOUNDARY_SLACK = 1e-12

E, H, S = Geometry.EUCLIDEAN, Geometry.HYPERBOLIC, Geometry.SPHERICAL

# kind -> (geometry, chart, integrand)
KINDS = {
    "E_phi": (E, "xi", "phi"),
    "S_phi": (S, "xi", "phi"),
    "H_psi": (H, "xi", "psi"),
    "H_phi": (H, "gamma", "phi"),
    "C_E": (E, "g", "pack"),
    "C_H": (H, "g", "pack"),
}

_ALPHA = 0.5 * np.array([[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
_OFF = np.ones((3, 3)) - np.eye(3)


def _kind(kind: str):
    try:
        return KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown triangle energy {kind!r}") from None


def chart_for(kind: str, h: float) -> Chart:
    geom, chart, _ = _kind(kind)
    return Chart(chart, h, geom)


# -- per-triangle terms ----------------------------------------------------------


def region_codes(kind: str, values) -> np.ndarray:
    """0 inside the moduli space, 1..3 when side ``code - 1`` is too long,
    4 for the spherical region ``l_1 + l_2 + l_3 >= 2 pi``."""
    geom, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    if integ == "pack":
        return np.zeros(v.shape[:-1], dtype=np.int8)
    r = trig.half_perimeter_offsets(v)
    code = np.where(np.any(r <= 0, axis=-1), 1 + np.argmin(r, axis=-1), 0).astype(np.int8)
    if geom is S:
        code = np.where(v.sum(axis=-1) >= 2 * np.pi, 4, code).astype(np.int8)
    return code


def interior_mask(kind: str, values) -> np.ndarray:
    geom, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    if integ == "pack":
        return np.ones(v.shape[:-1], dtype=bool)
    return trig.in_moduli_space(v, geom, slack=BOUNDARY_SLACK)


def triangle_gradient(kind: str, values, h: float) -> np.ndarray:
    """Gradient in chart coordinates from lengths (or radii), shape (..., 3)."""
    geom, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    if integ == "pack":
        theta = trig.angles_from_lengths(trig.packing_lengths(v, geom), geom)
        return -tan_half_from_half_pi(h, theta)
    theta = trig.extended_angles(v, geom)
    if integ == "phi":
        return sin_from_half_pi(h, theta)
    return cos_from_zero(h, trig.alphas(theta))


def factorized_hessian(kind: str, values, h: float):
    """``(c, D, A)`` with Hessian ``c * diag(D) A diag(D)``; interior points only.

    phi kinds:  D = m(l)^{h+1}, A = M(theta), c = kappa^{h-1} / prod m(l)
                where kappa = sin(theta_i)/m(l_i)
    H_psi:      D = tanh^h(l/2), A = P(l), c = K^h / (2 sin(theta_i) sinh l_j sinh l_k)
                where K = cos(alpha_i)/tanh(l_i/2)
    pack:       D = m(r)^{-h}, A = [-m(r_j) d theta_i / d r_j], c = K^h
                where K = m(r_i) tan(theta_i/2)
    """
    geom, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    if integ == "pack":
        l = trig.packing_lengths(v, geom)
        theta = trig.angles_from_lengths(l, geom)
        mr = geom.m(v)
        K = (mr * np.tan(0.5 * theta)).mean(axis=-1)
        dtheta = trig.angle_jacobian(l, geom) @ _OFF
        A = -dtheta * mr[..., None, :]
        A = 0.5 * (A + np.swapaxes(A, -1, -2))
        return K**h, mr ** (-h), A
    theta = trig.angles_from_lengths(v, geom)
    m = geom.m(v)
    kappa = (np.sin(theta) / m).mean(axis=-1)
    if integ == "phi":
        c = kappa ** (h - 1) / np.prod(m, axis=-1)
        return c, m ** (h + 1), trig.matrix_M(theta)
    th = np.tanh(0.5 * v)
    K = (np.cos(trig.alphas(theta)) / th).mean(axis=-1)
    c = K**h / (2.0 * kappa * np.prod(m, axis=-1))
    return c, th**h, trig.matrix_P(v)


def _compose(c, D, A) -> np.ndarray:
    return np.asarray(c)[..., None, None] * D[..., :, None] * A * D[..., None, :]


def chain_rule_hessian(kind: str, values, h: float) -> np.ndarray:
    """Hessian as ``w_i * d q_i / d x_j / f(x_j)``, with ``q`` the angle
    quantity of the integrand, ``w`` the integrand at ``q`` and ``f`` the
    chart density."""
    geom, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    dens = chart_for(kind, h).density(v)
    if integ == "pack":
        l = trig.packing_lengths(v, geom)
        theta = trig.angles_from_lengths(l, geom)
        w = -np.tan(0.5 * theta) ** h
        dq = trig.angle_jacobian(l, geom) @ _OFF
    else:
        theta = trig.angles_from_lengths(v, geom)
        jac = trig.angle_jacobian(v, geom)
        if integ == "phi":
            w = np.sin(theta) ** h
            dq = jac
        else:
            w = np.cos(trig.alphas(theta)) ** h
            dq = _ALPHA @ jac
    return w[..., :, None] * dq / dens[..., None, :]


def triangle_hessian(kind: str, values, h: float) -> np.ndarray:
    """Hessian in chart coordinates, zero on extension regions."""
    _, _, integ = _kind(kind)
    v = np.asarray(values, dtype=float)
    out = np.zeros(v.shape + (3,))
    inside = interior_mask(kind, v)
    if np.any(inside):
        if integ == "pack":
            out[inside] = chain_rule_hessian(kind, v[inside], h)
        else:
            out[inside] = _compose(*factorized_hessian(kind, v[inside], h))
    return out


# -- public single-triangle API --------------------------------------------------


@dataclass(frozen=True)
class TriangleEnergyEval:
    grad: np.ndarray
    hess: np.ndarray
    region: str  # "interior" or "extension"


def _triangle_eval(kind: str, u, fixed, s: int, h: float) -> TriangleEnergyEval:
    if s not in (1, 2, 3):
        raise UnsupportedArity(f"a triangle has 1, 2 or 3 free entries, not {s}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    fixed = np.atleast_1d(np.asarray(fixed, dtype=float)) if fixed is not None else np.empty(0)
    if u.shape != (s,) or fixed.shape != (3 - s,):
        raise ValueError(f"need {s} chart values and {3 - s} fixed values")
    chart = chart_for(kind, h)
    free = np.atleast_1d(chart.inverse(u))
    if np.any(fixed <= 0) or np.any(fixed >= chart.t_max):
        raise OutOfDomain("fixed values must lie in the chart domain")
    values = np.concatenate([free, fixed])
    grad = triangle_gradient(kind, values, h)[:s]
    hess = triangle_hessian(kind, values, h)[:s, :s]
    region = "interior" if bool(interior_mask(kind, values)) else "extension"
    return TriangleEnergyEval(grad=grad, hess=hess, region=region)


def triangle_energy_F(u, fixed_lengths, flavor: str, s: int, h: float) -> TriangleEnergyEval:
    """Free edges first, then the fixed (boundary) lengths."""
    if flavor not in ("E_phi", "H_psi", "S_phi"):
        raise ValueError(f"unknown F flavor {flavor!r}")
    return _triangle_eval(flavor, u, fixed_lengths, s, h)


def triangle_energy_G(u, fixed_lengths, s: int, h: float) -> TriangleEnergyEval:
    if s == 3:
        raise UnsupportedArity("the gamma-chart energy is used on stripped surfaces only (s <= 2)")
    return _triangle_eval("H_phi", u, fixed_lengths, s, h)


def triangle_energy_C(u, fixed_radii, geometry, s: int, h: float) -> TriangleEnergyEval:
    g = Geometry.parse(geometry)
    kind = {E: "C_E", H: "C_H"}.get(g)
    if kind is None:
        raise OutOfDomain("circle packings are Euclidean or hyperbolic")
    return _triangle_eval(kind, u, fixed_radii, s, h)


# -- line integration -----------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(40)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W
# smooth reparametrisation that flattens square-root behaviour at the ends
_MAP_T = special.betainc(3.0, 3.0, _GL_X)
_MAP_DT = _GL_X**2 * (1.0 - _GL_X) ** 2 / special.beta(3.0, 3.0)


def _breakpoints(region_fn, a: np.ndarray, d: np.ndarray, samples: int = 48, ways: int = 16) -> list[float]:
    def codes_at(ts):
        # one row of region codes per point, whatever shape region_fn returns
        return np.asarray(region_fn(a[None, :] + ts[:, None] * d[None, :])).reshape(len(ts), -1)

    ts = np.linspace(0.0, 1.0, samples + 1)
    codes = codes_at(ts)
    out = [0.0]
    frac = np.arange(1, ways) / ways
    for k in range(samples):
        if np.array_equal(codes[k], codes[k + 1]):
            continue
        lo, hi = ts[k], ts[k + 1]
        c_lo = codes[k]
        # ways-ary search: every round evaluates ways - 1 points in one batch
        while hi - lo > 4 * np.finfo(float).eps * max(1.0, abs(hi)):
            inner = lo + (hi - lo) * frac
            same = np.all(codes_at(inner) == c_lo, axis=-1)
            first_diff = int(np.argmin(same)) if not same.all() else len(inner)
            new_lo = inner[first_diff - 1] if first_diff > 0 else lo
            new_hi = inner[first_diff] if first_diff < len(inner) else hi
            if new_lo == lo and new_hi == hi:
                break
            lo, hi = new_lo, new_hi
        out.append(0.5 * (lo + hi))
    out.append(1.0)
    return out


def line_integral(grad_fn, a, b, region_fn=None) -> float:
    """int_0^1 grad(a + t (b - a)) . (b - a) dt, split where ``region_fn``
    changes value.

    Both callables take a batch of points with shape (N, dim).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    breaks = [0.0, 1.0] if region_fn is None else _breakpoints(region_fn, a, d)
    ts, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo:
            ts.append(lo + (hi - lo) * _MAP_T)
            ws.append((hi - lo) * _GL_W * _MAP_DT)
    ts = np.concatenate(ts)
    vals = grad_fn(a[None, :] + ts[:, None] * d[None, :]) @ d
    return float(np.sum(np.concatenate(ws) * vals))


def triangle_energy_difference(kind: str, h: float, u0, u1) -> float:
    """F(u1) - F(u0) for one triangle with all three entries free."""
    chart = chart_for(kind, h)
    return line_integral(
        lambda u: triangle_gradient(kind, chart.inverse(u), h),
        u0,
        u1,
        region_fn=lambda u: region_codes(kind, chart.inverse(u)),
    )


# -- global assembly ------------------------------------------------------------


class Flavor(str, Enum):
    W_PHI = "W_phi"
    W_PSI = "W_psi"
    V_PHI = "V_phi"
    U_PACKING = "U_packing"

    @classmethod
    def parse(cls, value) -> "Flavor":
        if isinstance(value, Flavor):
            return value
        key = str(value).strip()
        aliases = {"W_psi_hyperbolic": "W_psi", "V_phi_stripped": "V_phi", "U": "U_packing"}
        key = aliases.get(key, key)
        for f in cls:
            if key.lower() == f.value.lower():
                return f
        raise ValueError(f"unknown flavor {value!r}")


def triangle_kind(flavor, geometry, surface: Surface | None = None) -> str:
    """Map a global flavor and geometry to the triangle energy, checking
    compatibility."""
    f = Flavor.parse(flavor)
    g = Geometry.parse(geometry)
    table = {
        (Flavor.W_PHI, E): "E_phi",
        (Flavor.W_PHI, S): "S_phi",
        (Flavor.W_PSI, H): "H_psi",
        (Flavor.V_PHI, H): "H_phi",
        (Flavor.U_PACKING, E): "C_E",
        (Flavor.U_PACKING, H): "C_H",
    }
    kind = table.get((f, g))
    if kind is None:
        raise InfeasibleSpec(f"{f.value} is not defined in {g.value} geometry")
    if f is Flavor.V_PHI and surface is not None and not is_stripped(surface):
        raise InfeasibleSpec("V_phi needs a stripped surface (every triangle touches the boundary)")
    return kind


class EnergyProblem:
    """Total energy W, V or U on a surface with fixed boundary data.

    ``fixed`` holds a value for every edge (or vertex); only boundary
    entries are read. Variables are chart coordinates of the interior edges
    (or interior vertices) in the surface's deterministic order.
    """

    def __init__(self, surface: Surface, flavor, geometry, h: float, fixed):
        self.surface = surface
        self.flavor = Flavor.parse(flavor)
        self.geometry = Geometry.parse(geometry)
        self.h = float(h)
        self.kind = triangle_kind(self.flavor, self.geometry, surface)
        self.chart = chart_for(self.kind, self.h)
        self.packing = self.flavor is Flavor.U_PACKING
        if self.packing:
            self.variables = surface.interior_vertices
            self.corners = surface.triangles
            size = surface.vertex_count
        else:
            self.variables = surface.interior_edges
            self.corners = surface.triangle_edges
            size = surface.edge_count
        self.fixed = np.asarray(fixed, dtype=float).copy()
        if self.fixed.shape != (size,):
            raise ValueError(f"fixed data must have {size} entries")
        self.slot = np.full(size, -1)
        self.slot[self.variables] = np.arange(len(self.variables))
        self.local_slot = self.slot[self.corners]
        keep = self.local_slot.ravel() >= 0
        self._scatter = sparse.csr_matrix(
            (np.ones(int(keep.sum())), (self.local_slot.ravel()[keep], np.flatnonzero(keep))),
            shape=(len(self.variables), self.local_slot.size),
        )
        if self.packing:
            m = surface.vertex_degree[self.variables]
            self.offset = (2.0 - 0.5 * m) * np.pi
        else:
            self.offset = np.zeros(len(self.variables))

    @property
    def size(self) -> int:
        return len(self.variables)

    def full_values(self, u) -> np.ndarray:
        """Lengths (or radii) of every edge (vertex); ``u`` may carry a
        leading batch axis."""
        u = np.asarray(u, dtype=float)
        full = np.broadcast_to(self.fixed, u.shape[:-1] + self.fixed.shape).copy()
        full[..., self.variables] = self.chart.inverse(u)
        return full

    def to_u(self, values) -> np.ndarray:
        return np.atleast_1d(self.chart.forward(np.asarray(values, dtype=float)))

    def local(self, full: np.ndarray) -> np.ndarray:
        return full[..., self.corners]

    def in_box(self, u) -> bool:
        return bool(np.all(self.chart.contains(u)))

    def regions(self, u) -> np.ndarray:
        return region_codes(self.kind, self.local(self.full_values(u)))

    def _scatter_grad(self, per_corner: np.ndarray) -> np.ndarray:
        flat = per_corner.reshape(per_corner.shape[:-2] + (-1,))
        return (self._scatter @ flat.T).T

    def gradient(self, u) -> np.ndarray:
        loc = self.local(self.full_values(u))
        return self._scatter_grad(triangle_gradient(self.kind, loc, self.h))

    def hessian(self, u) -> sparse.csr_matrix:
        loc = self.local(self.full_values(u))
        return self._assemble_hessian(triangle_hessian(self.kind, loc, self.h))

    def gradient_and_hessian(self, u):
        loc = self.local(self.full_values(u))
        g = self._scatter_grad(triangle_gradient(self.kind, loc, self.h))
        return g, self._assemble_hessian(triangle_hessian(self.kind, loc, self.h))

    def _assemble_hessian(self, per_tri: np.ndarray) -> sparse.csr_matrix:
        rows = np.broadcast_to(self.local_slot[:, :, None], per_tri.shape)
        cols = np.broadcast_to(self.local_slot[:, None, :], per_tri.shape)
        keep = (rows >= 0) & (cols >= 0)
        mat = sparse.coo_matrix(
            (per_tri[keep], (rows[keep], cols[keep])), shape=(self.size, self.size)
        ).tocsr()
        mat.sum_duplicates()
        return mat

    def curvature(self, u) -> np.ndarray:
        """The curvature whose negative (or shifted value) is the gradient."""
        g = self.gradient(u)
        return g + self.offset if self.packing else -g

    def linear_term(self, targets) -> np.ndarray:
        """Gradient of the unshifted energy at the metric with these curvatures."""
        t = np.asarray(targets, dtype=float)
        return t - self.offset if self.packing else -t

    def energy_difference(self, u0, u1) -> float:
        return line_integral(self.gradient, u0, u1, region_fn=self.regions)
