"""Signed integrals of sin^h, cos^h, tan^h(t/2) and sinh^h.

Integer exponents in [-2, 2] use elementary antiderivatives. Other exponents
use incomplete beta functions where those converge and adaptive quadrature
otherwise.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .errors import SingularIntegrand

KINDS = ("sin_pow", "cos_pow", "tan_half_pow", "sinh_pow")

_QUAD_TOL = 1e-12


def _base(kind: str, t):
    if kind == "sin_pow":
        return np.sin(t)
    if kind == "cos_pow":
        return np.cos(t)
    if kind == "tan_half_pow":
        return np.tan(0.5 * t)
    if kind == "sinh_pow":
        return np.sinh(t)
    raise ValueError(f"unknown integrand kind {kind!r}")


def integrand(kind: str, h: float):
    return lambda t: _base(kind, t) ** h


def _elementary(kind: str, h: int):
    """Antiderivative of base^h for integer h in [-2, 2], or None."""
    if h == 0:
        return lambda x: x
    table = {
        "sin_pow": {
            1: lambda x: -np.cos(x),
            2: lambda x: 0.5 * x - 0.25 * np.sin(2 * x),
            -1: lambda x: np.log(np.abs(np.tan(0.5 * x))),
            -2: lambda x: -1.0 / np.tan(x),
        },
        "cos_pow": {
            1: np.sin,
            2: lambda x: 0.5 * x + 0.25 * np.sin(2 * x),
            -1: lambda x: np.arctanh(np.sin(x)),
            -2: np.tan,
        },
        "tan_half_pow": {
            1: lambda x: -2.0 * np.log(np.abs(np.cos(0.5 * x))),
            2: lambda x: 2.0 * np.tan(0.5 * x) - x,
            -1: lambda x: 2.0 * np.log(np.abs(np.sin(0.5 * x))),
            -2: lambda x: -2.0 / np.tan(0.5 * x) - x,
        },
        "sinh_pow": {
            1: np.cosh,
            2: lambda x: 0.25 * np.sinh(2 * x) - 0.5 * x,
            -1: lambda x: np.log(np.abs(np.tanh(0.5 * x))),
            -2: lambda x: -1.0 / np.tanh(x),
        },
    }
    return table[kind].get(h)


def half_period_integral(h: float) -> float:
    """int_0^{pi/2} sin^h t dt; +inf for h <= -1."""
    if h <= -1:
        return math.inf
    return 0.5 * math.sqrt(math.pi) * math.exp(
        math.lgamma(0.5 * (h + 1)) - math.lgamma(0.5 * h + 1)
    )


def _sin_from_zero(h: float, x):
    """int_0^x sin^h for x in [0, pi], h > -1."""
    a = 0.5 * (h + 1)
    full = special.beta(a, 0.5)
    x = np.asarray(x, dtype=float)
    low = np.minimum(x, np.pi - x)
    part = 0.5 * full * special.betainc(a, 0.5, np.sin(low) ** 2)
    return np.where(x <= 0.5 * np.pi, part, full - part)


def _beta_antiderivative(kind: str, h: float):
    if kind == "sin_pow" and h > -1:
        return lambda x: _sin_from_zero(h, x)
    if kind == "cos_pow" and h > -1:
        s = half_period_integral(h)
        return lambda x: np.sign(x) * (s - _sin_from_zero(h, 0.5 * np.pi - np.abs(x)))
    if kind == "tan_half_pow" and -1 < h < 1:
        a, b = 0.5 * (h + 1), 0.5 * (1 - h)
        full = special.beta(a, b)
        return lambda x: full * special.betainc(a, b, np.sin(0.5 * np.asarray(x)) ** 2)
    return None


def _check_domain(kind: str, h: float, lo, hi) -> None:
    """Raise if [lo, hi] meets a singularity of base^h or leaves the window
    where base^h is real."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise SingularIntegrand("infinite integration limits")
    integer = float(h).is_integer()
    if not integer:
        windows = {
            "sin_pow": (0.0, np.pi),
            "cos_pow": (-0.5 * np.pi, 0.5 * np.pi),
            "tan_half_pow": (0.0, np.pi),
            "sinh_pow": (0.0, np.inf),
        }
        a, b = windows[kind]
        if np.any(lo < a) or np.any(hi > b):
            raise SingularIntegrand(f"{kind}^{h} is not real on the interval")

    def hits(offset, period):
        k_lo = np.ceil((lo - offset) / period)
        k_hi = np.floor((hi - offset) / period)
        return np.any(k_lo <= k_hi)

    bad = False
    if kind == "tan_half_pow" and h > 0:
        bad = hits(np.pi, 2 * np.pi)
    elif h < 0:
        if kind == "sin_pow":
            bad = hits(0.0, np.pi)
        elif kind == "cos_pow":
            bad = hits(0.5 * np.pi, np.pi)
        elif kind == "tan_half_pow":
            bad = hits(0.0, 2 * np.pi)
        elif kind == "sinh_pow":
            bad = np.any((lo <= 0) & (hi >= 0))
    if bad:
        raise SingularIntegrand(f"{kind}^{h} is singular on the interval")


def quad_integral(kind: str, h: float, a: float, b: float) -> float:
    """Plain adaptive quadrature; the reference route for the fast paths."""
    f = integrand(kind, h)
    val, _ = integrate.quad(f, a, b, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200)
    return val


def integral_kernel(kind: str, h: float, a, b):
    """Signed integral of base(t)^h from ``a`` to ``b`` (``b < a`` allowed).

    ``a`` and ``b`` broadcast; scalars in give a float out.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown integrand kind {kind!r}")
    h = float(h)
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    _check_domain(kind, h, np.minimum(a_arr, b_arr), np.maximum(a_arr, b_arr))

    anti = _elementary(kind, int(h)) if h.is_integer() else None
    if anti is None:
        anti = _beta_antiderivative(kind, h)
    if anti is not None:
        with np.errstate(divide="ignore"):
            out = np.where(a_arr == b_arr, 0.0, anti(b_arr) - anti(a_arr))
    else:
        out = np.empty(a_arr.shape)
        for idx in np.ndindex(a_arr.shape):
            out[idx] = quad_integral(kind, h, a_arr[idx], b_arr[idx])
    if out.ndim == 0:
        return float(out)
    return out


def sin_from_half_pi(h: float, theta):
    """int_{pi/2}^{theta} sin^h for theta in [0, pi], extended values included.

    At theta in {0, pi} the improper value is returned (infinite for h <= -1).
    """
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape)
    lo = theta <= 0.0
    hi = theta >= np.pi
    mid = ~(lo | hi)
    s = half_period_integral(h)
    out[lo] = -s
    out[hi] = s
    if np.any(mid):
        out[mid] = integral_kernel("sin_pow", h, 0.5 * np.pi, theta[mid])
    return out


def cos_from_zero(h: float, alpha):
    """int_0^{alpha} cos^h for alpha in [-pi/2, pi/2], endpoints improper."""
    alpha = np.asarray(alpha, dtype=float)
    out = np.empty(alpha.shape)
    edge = np.abs(alpha) >= 0.5 * np.pi
    s = half_period_integral(h)
    out[edge] = np.sign(alpha[edge]) * s
    if np.any(~edge):
        out[~edge] = integral_kernel("cos_pow", h, 0.0, alpha[~edge])
    return out


def tan_half_from_half_pi(h: float, theta):
    """int_{pi/2}^{theta} tan^h(t/2) for theta in (0, pi)."""
    theta = np.asarray(theta, dtype=float)
    return np.asarray(integral_kernel("tan_half_pow", h, 0.5 * np.pi, theta), dtype=float)
