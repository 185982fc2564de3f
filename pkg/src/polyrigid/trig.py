"""Per-triangle trigonometry in Euclidean, hyperbolic and spherical geometry.

Every function is vectorised over leading axes: a length triple is an array
whose last axis has size 3, and entry ``i`` is the edge opposite vertex ``i``
(so ``theta[..., i]`` faces ``lengths[..., i]``).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateTriangle,
    IndexMismatch,
    NonPositiveLength,
    NonPositiveRadius,
    UnsupportedGeometry,
)

_J = np.array([1, 2, 0])
_K = np.array([2, 0, 1])


class Geometry(str, Enum):
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    SPHERICAL = "spherical"

    @classmethod
    def parse(cls, value) -> "Geometry":
        if isinstance(value, Geometry):
            return value
        key = str(value).strip().lower()
        for g in cls:
            if key in (g.value, g.value[0], g.name.lower()):
                return g
        raise ValueError(f"unknown geometry {value!r}")

    def m(self, x):
        """Length function: x, sinh x or sin x."""
        if self is Geometry.EUCLIDEAN:
            return np.asarray(x, dtype=float)
        if self is Geometry.HYPERBOLIC:
            return np.sinh(x)
        return np.sin(x)

    def half_t(self, x):
        """x, tanh x or tan x; used by the cos(alpha) tangent law."""
        if self is Geometry.EUCLIDEAN:
            return np.asarray(x, dtype=float)
        if self is Geometry.HYPERBOLIC:
            return np.tanh(x)
        return np.tan(x)


def _as_triples(lengths) -> np.ndarray:
    arr = np.asarray(lengths, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"expected a trailing axis of size 3, got shape {arr.shape}")
    return arr


def cyclic(arr: np.ndarray):
    """Return (x_i, x_j, x_k) with (i, j, k) running over the cyclic shifts."""
    return arr, arr[..., _J], arr[..., _K]


def half_perimeter_offsets(lengths) -> np.ndarray:
    """r_i = (l_j + l_k - l_i) / 2."""
    l = _as_triples(lengths)
    li, lj, lk = cyclic(l)
    return 0.5 * (lj + lk - li)


def in_moduli_space(lengths, geometry, slack: float = 0.0) -> np.ndarray:
    """Strict membership in the open moduli space, shrunk by ``slack``."""
    g = Geometry.parse(geometry)
    l = _as_triples(lengths)
    ok = np.all(l > slack, axis=-1) & np.all(half_perimeter_offsets(l) > slack, axis=-1)
    if g is Geometry.SPHERICAL:
        ok &= np.all(l < np.pi - slack, axis=-1)
        ok &= (2.0 * np.pi - l.sum(axis=-1)) > slack
    return ok


def _half_angle(l: np.ndarray, g: Geometry) -> np.ndarray:
    r = half_perimeter_offsets(l)
    s = 0.5 * l.sum(axis=-1, keepdims=True)
    ri, rj, rk = cyclic(g.m(r))
    num = np.sqrt(np.clip(rj * rk, 0.0, None))
    den = np.sqrt(np.clip(g.m(s) * ri, 0.0, None))
    return 2.0 * np.arctan2(num, den)


def angles_from_lengths(lengths, geometry, slack: float = 0.0) -> np.ndarray:
    """Inner angles of nondegenerate triangles.

    Uses the half-angle form of the cosine law,
    ``tan(theta_i/2)^2 = m(r_j) m(r_k) / (m(s) m(r_i))``, which is well
    conditioned for needle triangles where ``arccos`` is not.
    """
    g = Geometry.parse(geometry)
    l = _as_triples(lengths)
    if not np.all(in_moduli_space(l, g, slack)):
        raise DegenerateTriangle(f"lengths outside the {g.value} moduli space")
    return _half_angle(l, g)


def cosine_law_angles(lengths, geometry) -> np.ndarray:
    """Angles straight from the cosine law with a 1e-12 clamping band.

    Kept as an independent route for cross-checks.
    """
    g = Geometry.parse(geometry)
    l = _as_triples(lengths)
    li, lj, lk = cyclic(l)
    if g is Geometry.EUCLIDEAN:
        c = (lj**2 + lk**2 - li**2) / (2 * lj * lk)
    elif g is Geometry.HYPERBOLIC:
        c = (np.cosh(lj) * np.cosh(lk) - np.cosh(li)) / (np.sinh(lj) * np.sinh(lk))
    else:
        c = (np.cos(li) - np.cos(lj) * np.cos(lk)) / (np.sin(lj) * np.sin(lk))
    if np.any(np.abs(c) > 1.0 + 1e-12) or not np.all(np.isfinite(c)):
        raise DegenerateTriangle("cosine outside [-1, 1]")
    return np.arccos(np.clip(c, -1.0, 1.0))


def extended_angles(lengths, geometry) -> np.ndarray:
    """Angles extended by constants to all of J^3.

    Inside the moduli space these are the usual angles. Where
    ``l_j + l_k <= l_i`` the triple is flattened: ``theta_i = pi`` and the
    other two vanish. In spherical geometry, ``l_1 + l_2 + l_3 >= 2 pi``
    gives ``pi`` for all three angles (the limiting hemisphere).
    """
    g = Geometry.parse(geometry)
    l = _as_triples(lengths)
    if np.any(l <= 0):
        raise NonPositiveLength("edge lengths must be positive")
    if g is Geometry.SPHERICAL and np.any(l >= np.pi):
        raise NonPositiveLength("spherical edge lengths must lie in (0, pi)")

    theta = np.zeros(l.shape)
    r = half_perimeter_offsets(l)
    inside = np.all(r > 0, axis=-1)
    if g is Geometry.SPHERICAL:
        big = l.sum(axis=-1) >= 2.0 * np.pi
        inside &= ~big
        theta[big] = np.pi
    theta[inside] = _half_angle(l[inside], g)
    flat = r <= 0
    theta[flat] = np.pi  # at most one r_i <= 0 per triple on J^3
    return theta


def angle_jacobian(lengths, geometry) -> np.ndarray:
    """Matrix ``[d theta_i / d l_j]`` with shape (..., 3, 3).

    d theta_i / d l_i = m_i / (sin theta_i m_j m_k) and
    d theta_i / d l_j = -cos theta_k d theta_i / d l_i.
    """
    g = Geometry.parse(geometry)
    l = _as_triples(lengths)
    theta = angles_from_lengths(l, g)
    mi, mj, mk = cyclic(g.m(l))
    diag = mi / (np.sin(theta) * mj * mk)
    cos = np.cos(theta)
    jac = np.empty(l.shape + (3,))
    for i in range(3):
        for j in range(3):
            if i == j:
                jac[..., i, i] = diag[..., i]
            else:
                k = 3 - i - j
                jac[..., i, j] = -cos[..., k] * diag[..., i]
    return jac


@dataclass(frozen=True)
class AuxCoords:
    r: np.ndarray
    alpha: np.ndarray

    @property
    def zeta(self) -> np.ndarray:
        return self.alpha.sum(axis=-1)

    def lengths(self) -> np.ndarray:
        _, rj, rk = cyclic(self.r)
        return rj + rk


def aux_coords(lengths, geometry) -> AuxCoords:
    """r_i = (l_j + l_k - l_i)/2 and alpha_i = (theta_i - theta_j - theta_k)/2."""
    l = _as_triples(lengths)
    theta = angles_from_lengths(l, geometry)
    ti, tj, tk = cyclic(theta)
    return AuxCoords(r=half_perimeter_offsets(l), alpha=0.5 * (ti - tj - tk))


def alphas(theta) -> np.ndarray:
    ti, tj, tk = cyclic(np.asarray(theta, dtype=float))
    return 0.5 * (ti - tj - tk)


def tangent_law_values(lengths, geometry, kind: str = "auto") -> np.ndarray:
    """Per-index tangent-law quantities; all three agree for a valid triangle.

    ``kind="inradius"`` gives m(r_i) tan(theta_i/2) (the inradius, tanh of it,
    or tan of it). ``kind="cos_alpha"`` gives cos(alpha_i) / t(l_i/2) with
    t = identity, tanh or tan.
    """
    g = Geometry.parse(geometry)
    if kind == "auto":
        kind = "inradius" if g is Geometry.EUCLIDEAN else "cos_alpha"
    aux = aux_coords(lengths, g)
    l = _as_triples(lengths)
    if kind == "inradius":
        theta = angles_from_lengths(l, g)
        return g.m(aux.r) * np.tan(0.5 * theta)
    if kind == "cos_alpha":
        return np.cos(aux.alpha) / g.half_t(0.5 * l)
    raise ValueError(f"unknown tangent-law kind {kind!r}")


def tangent_law_invariant(lengths, geometry, kind: str = "auto", rtol: float = 1e-9):
    vals = tangent_law_values(lengths, geometry, kind)
    spread = vals.max(axis=-1) - vals.min(axis=-1)
    if np.any(spread > rtol * np.abs(vals).max(axis=-1)):
        raise IndexMismatch(f"tangent-law values disagree: {vals}")
    return vals.mean(axis=-1)


def matrix_P(lengths) -> np.ndarray:
    """Hyperbolic matrix with p_ii = tanh^2(l_i/2)(sum cosh l + 1) and
    p_ij = -cosh l_i - cosh l_j + cosh l_k + 1."""
    l = _as_triples(lengths)
    if not np.all(in_moduli_space(l, Geometry.HYPERBOLIC)):
        raise DegenerateTriangle("lengths violate the triangle inequality")
    ch = np.cosh(l)
    total = ch.sum(axis=-1) + 1.0
    P = np.empty(l.shape + (3,))
    for i in range(3):
        for j in range(3):
            if i == j:
                P[..., i, i] = np.tanh(0.5 * l[..., i]) ** 2 * total
            else:
                k = 3 - i - j
                P[..., i, j] = -ch[..., i] - ch[..., j] + ch[..., k] + 1.0
    return P


def matrix_M(angles) -> np.ndarray:
    """m_ii = 1, m_ij = -cos theta_k."""
    th = _as_triples(angles)
    cos = np.cos(th)
    M = np.empty(th.shape + (3,))
    for i in range(3):
        for j in range(3):
            M[..., i, j] = 1.0 if i == j else -cos[..., 3 - i - j]
    return M


def packing_lengths(radii, geometry) -> np.ndarray:
    """Edge lengths r_j + r_k opposite each vertex of a tangent-circle triple."""
    g = Geometry.parse(geometry)
    if g is Geometry.SPHERICAL:
        raise UnsupportedGeometry("circle packings are Euclidean or hyperbolic")
    r = _as_triples(radii)
    if np.any(r <= 0):
        raise NonPositiveRadius("radii must be positive")
    _, rj, rk = cyclic(r)
    return rj + rk


def packing_angle_jacobian(radii, geometry) -> np.ndarray:
    """``[d theta_i / d r_j]`` for the packing lengths."""
    l = packing_lengths(radii, geometry)
    dl_dr = np.ones((3, 3)) - np.eye(3)
    return angle_jacobian(l, geometry) @ dl_dr
