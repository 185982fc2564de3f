"""Monotone coordinate charts in which the triangle energies are convex.

``xi``    edge lengths, phi-type energies in E^2 / S^2 and psi-type in H^2
``gamma`` edge lengths, phi-type energy in H^2 on stripped surfaces
``g``     circle-packing radii, E^2 and H^2

Each chart is ``u(t) = int_1^t f(x) dx`` for a positive density ``f``,
except the Euclidean ones which use the closed forms ``-t^{-h}/h`` and
``t^h/h`` (``log t`` at h = 0).
"""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy import integrate, special

from .errors import OutOfDomain, OutOfImage
from .trig import Geometry

_INT_TOL = 1e-12


def _base_fn(name: str):
    return {
        "tanh_half": lambda x: np.tanh(0.5 * x),
        "sin": np.sin,
        "sinh": np.sinh,
    }[name]


def _elementary(name: str, p: int):
    """Antiderivative of base(x)^p for integer p via the reduction formulas."""
    b = _base_fn(name)
    if name == "tanh_half":
        if p == 0:
            return lambda x: x
        if p == 1:
            return lambda x: 2.0 * np.log(np.cosh(0.5 * x))
        if p == -1:
            return lambda x: 2.0 * np.log(np.sinh(0.5 * x))
        if p > 1:
            lower = _elementary(name, p - 2)
            return lambda x: lower(x) - 2.0 / (p - 1) * b(x) ** (p - 1)
        upper = _elementary(name, p + 2)
        return lambda x: upper(x) + 2.0 / (p + 1) * b(x) ** (p + 1)

    co = np.cos if name == "sin" else np.cosh
    sign = -1.0 if name == "sin" else 1.0  # d/dx cos = -sin, d/dx cosh = sinh
    if p == 0:
        return lambda x: x
    if p == 1:
        return lambda x: sign * co(x)
    if p == -1:
        if name == "sin":
            return lambda x: np.log(np.tan(0.5 * x))
        return lambda x: np.log(np.tanh(0.5 * x))
    if p > 1:
        lower = _elementary(name, p - 2)
        return lambda x: (sign * b(x) ** (p - 1) * co(x) - sign * (p - 1) * lower(x)) / p
    upper = _elementary(name, p + 2)
    return lambda x: (b(x) ** (p + 1) * co(x) - sign * (p + 2) * upper(x)) / (p + 1)


_TAIL_START = {"sinh": 6.0, "tanh_half": 10.0}


def _hypergeometric(name: str, p: float):
    """Antiderivative of base(x)^p for non-integer p.

    Gauss hypergeometric closed forms on moderate arguments, and for large x
    the first terms of the exponential expansion of the integrand, since
    ``tanh x`` rounds to 1 there.
    """

    def sin_form(x):
        c = np.cos(x)
        return -c * special.hyp2f1(0.5, 0.5 * (1 - p), 1.5, c * c)

    def sinh_core(x):
        y = np.tanh(x)
        return y ** (p + 1) / (p + 1) * special.hyp2f1(0.5 * (p + 1), 0.5 * p + 1, 0.5 * (p + 3), y * y)

    def sinh_tail(x):
        # sinh^p = 2^-p e^{pt} (1 - p w + p(p-1)/2 w^2 + ...), w = e^{-2t}
        return 2.0**-p * (
            np.exp(p * x) / p
            - p * np.exp((p - 2) * x) / (p - 2)
            + 0.5 * p * (p - 1) * np.exp((p - 4) * x) / (p - 4)
        )

    def tanh_core(x):
        y = np.tanh(0.5 * x)
        return 2.0 * y ** (p + 1) / (p + 1) * special.hyp2f1(1.0, 0.5 * (p + 1), 0.5 * (p + 3), y * y)

    def tanh_tail(x):
        # tanh^p(t/2) = 1 - 2p z + 2p^2 z^2 + ..., z = e^{-t}
        return x + 2.0 * p * np.exp(-x) - p * p * np.exp(-2.0 * x)

    if name == "sin":
        return sin_form
    core, tail = (sinh_core, sinh_tail) if name == "sinh" else (tanh_core, tanh_tail)
    x0 = _TAIL_START[name]
    shift = float(core(np.float64(x0)) - tail(np.float64(x0)))

    def anti(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.where(x <= x0, core(np.minimum(x, x0)), tail(np.maximum(x, x0)) + shift)

    return anti


def _closed_inverse(name: str, p: float):
    """Explicit inverse of F(t) = int_1^t base^p for the cases that have one."""
    if p == 0:
        return lambda u: u + 1.0
    if p != -1:
        return None
    if name == "sin":  # F = log tan(t/2) - log tan(1/2)
        return lambda u: 2.0 * np.arctan(math.tan(0.5) * np.exp(u))
    if name == "tanh_half":  # F = 2 log sinh(t/2) - 2 log sinh(1/2)
        return lambda u: 2.0 * np.arcsinh(math.sinh(0.5) * np.exp(0.5 * u))
    if name == "sinh":  # F = log tanh(t/2) - log tanh(1/2)
        return lambda u: 2.0 * np.arctanh(math.tanh(0.5) * np.exp(u))
    return None


class Chart:
    """One-dimensional chart ``t -> u`` applied componentwise."""

    def __init__(self, kind: str, h: float, geometry):
        self.kind = kind
        self.h = float(h)
        self.geometry = Geometry.parse(geometry)
        g = self.geometry
        valid = {
            ("xi", Geometry.EUCLIDEAN): ("power", -self.h - 1),
            ("g", Geometry.EUCLIDEAN): ("power", self.h - 1),
            ("xi", Geometry.HYPERBOLIC): ("tanh_half", -self.h - 1),
            ("xi", Geometry.SPHERICAL): ("sin", -self.h - 1),
            ("gamma", Geometry.HYPERBOLIC): ("sinh", -self.h - 1),
            ("g", Geometry.HYPERBOLIC): ("sinh", self.h - 1),
        }
        if (kind, g) not in valid:
            raise OutOfDomain(f"chart {kind!r} is not defined in {g.value} geometry")
        self.base, self.power = valid[(kind, g)]
        self.t_max = math.pi if g is Geometry.SPHERICAL else math.inf

    def __repr__(self):
        return f"Chart({self.kind!r}, h={self.h}, geometry={self.geometry.value!r})"

    # -- density and antiderivative -------------------------------------------------
    def density(self, t):
        """du/dt."""
        t = np.asarray(t, dtype=float)
        if self.base == "power":
            return t**self.power
        with np.errstate(over="ignore"):
            return _base_fn(self.base)(t) ** self.power

    @cached_property
    def _antiderivative(self):
        if self.base == "power":
            return None
        p = self.power
        if float(p).is_integer():
            return _elementary(self.base, int(p))
        return _hypergeometric(self.base, p)

    def _check_domain(self, t: np.ndarray) -> None:
        if np.any(~(t > 0)) or np.any(t >= self.t_max):
            raise OutOfDomain(f"{self!r}: argument outside (0, {self.t_max})")

    def _raw_forward(self, t: np.ndarray) -> np.ndarray:
        h = self.h
        if self.base == "power":
            if h == 0:
                return np.log(t)
            if self.kind == "xi":
                return -(t ** (-h)) / h
            return t**h / h
        anti = self._antiderivative
        if anti is not None:
            with np.errstate(all="ignore"):
                return anti(t) - anti(np.float64(1.0))
        f = lambda x: float(self.density(x))  # noqa: E731
        out = np.empty(t.shape)
        for idx in np.ndindex(t.shape):
            out[idx] = integrate.quad(f, 1.0, t[idx], epsabs=_INT_TOL, epsrel=_INT_TOL, limit=200)[0]
        return out

    def forward(self, t):
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        out = self._raw_forward(t_arr)
        return float(out) if out.ndim == 0 else out

    # -- image ----------------------------------------------------------------------
    @cached_property
    def image(self) -> tuple[float, float]:
        """Open interval ``(lo, hi)`` that the chart maps onto."""
        h, p = self.h, self.power
        if self.base == "power":
            if h == 0:
                return (-math.inf, math.inf)
            if self.kind == "xi":
                return (-math.inf, 0.0) if h > 0 else (0.0, math.inf)
            return (0.0, math.inf) if h > 0 else (-math.inf, 0.0)
        # every base behaves like x near 0
        lo = -math.inf if p <= -1 else -self._improper(0.0)
        if self.base == "tanh_half":
            hi = math.inf
        elif self.base == "sin":
            hi = math.inf if p <= -1 else self._improper(math.pi)
        else:
            hi = math.inf if p >= 0 else self._improper(math.inf)
        return (lo, hi)

    def _improper(self, end: float) -> float:
        """|int_1^end f| for a convergent improper end."""
        anti = self._antiderivative
        if anti is not None:
            with np.errstate(all="ignore"):
                val = float(anti(np.float64(end)) - anti(np.float64(1.0)))
            if math.isfinite(val):
                return abs(val)
        f = lambda x: float(self.density(x))  # noqa: E731
        a, b = sorted((1.0, end))
        return abs(integrate.quad(f, a, b, epsabs=_INT_TOL, epsrel=_INT_TOL, limit=400)[0])

    def contains(self, u) -> np.ndarray:
        lo, hi = self.image
        u = np.asarray(u, dtype=float)
        return (u > lo) & (u < hi)

    # -- inverse --------------------------------------------------------------------
    def _to_t(self, s):
        if self.t_max == math.inf:
            return np.exp(s)
        return self.t_max / (1.0 + np.exp(-s))

    def inverse(self, u):
        u_arr = np.asarray(u, dtype=float)
        if not np.all(self.contains(u_arr)):
            raise OutOfImage(f"{self!r}: value outside the open image {self.image}")
        h = self.h
        if self.base == "power":
            if h == 0:
                t = np.exp(u_arr)
            elif self.kind == "xi":
                t = (-h * u_arr) ** (-1.0 / h)
            else:
                t = (h * u_arr) ** (1.0 / h)
        else:
            closed = _closed_inverse(self.base, self.power)
            t = closed(u_arr) if closed is not None else self._solve(u_arr)
        return float(t) if np.ndim(t) == 0 else t

    def _from_t(self, t):
        if self.t_max == math.inf:
            return np.log(t)
        return -np.log(self.t_max / t - 1.0)

    def _solve(self, u: np.ndarray) -> np.ndarray:
        """Newton in t, safeguarded by a bisection bracket in the stretched
        variable s (t = e^s, or a logistic map onto (0, pi))."""
        flat = u.ravel()
        lo = np.full(flat.shape, -60.0)
        hi = np.full(flat.shape, 60.0)
        with np.errstate(all="ignore"):
            lo = np.where(self._raw_forward(self._to_t(lo)) > flat, -700.0, lo)
            hi = np.where(self._raw_forward(self._to_t(hi)) < flat, 700.0, hi)
        for _ in range(12):
            mid = 0.5 * (lo + hi)
            with np.errstate(all="ignore"):
                below = self._raw_forward(self._to_t(mid)) < flat
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        s = 0.5 * (lo + hi)
        t = self._to_t(s)
        prev = hi - lo
        active = np.ones(flat.shape, dtype=bool)
        for _ in range(100):
            with np.errstate(all="ignore"):
                resid = self._raw_forward(t) - flat
                # overflow at the extremes; F is increasing
                resid = np.where(np.isnan(resid), np.where(s > 0, np.inf, -np.inf), resid)
                lo = np.where(resid < 0, np.maximum(lo, s), lo)
                hi = np.where(resid > 0, np.minimum(hi, s), hi)
                cand = t - resid / self.density(t)
                s_cand = self._from_t(cand)
            step = np.abs(s_cand - s)
            slow = (step > 0.5 * prev) & (step > 1e-12 * np.maximum(1.0, np.abs(s)))
            bad = ~np.isfinite(s_cand) | (s_cand <= lo) | (s_cand >= hi) | slow
            s_next = np.where(bad, 0.5 * (lo + hi), s_cand)
            t_next = np.where(bad, self._to_t(s_next), cand)
            done = (
                (np.abs(cand - t) <= 4e-16 * np.abs(t))
                | (np.abs(resid) <= 1e-15 * np.maximum(1.0, np.abs(flat)))
                | (hi - lo <= 1e-15 * np.maximum(1.0, np.abs(s)))
            )
            upd = active & ~done
            prev = np.where(upd, np.abs(s_next - s), prev)
            s = np.where(upd, s_next, s)
            t = np.where(upd, t_next, t)
            active &= ~done
            if not active.any():
                break
        return t.reshape(u.shape)

    def dt_du(self, t):
        return 1.0 / self.density(t)


def chart_forward(values, chart: str, h: float, geometry):
    return Chart(chart, h, geometry).forward(values)


def chart_inverse(u, chart: str, h: float, geometry):
    return Chart(chart, h, geometry).inverse(u)
