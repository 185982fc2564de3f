"""Randomised invariant audit.

Every check is vectorised over ``samples`` random triangles (or segments)
drawn from a generator seeded by ``seed``, so the report is bit-identical for
a fixed seed.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import energy as en
from . import trig
from .integrals import cos_from_zero, sin_from_half_pi
from .trig import Geometry

E, H, S = Geometry.EUCLIDEAN, Geometry.HYPERBOLIC, Geometry.SPHERICAL
FORM_H = (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0)
# for -1 < h < 0 the gradient is only Holder with exponent (1 + h) / 2 in the
# triangle slack, so a float64 crossing cannot resolve a 1e-6 jump there
CONTINUITY_H = (0.0, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float


def random_triangles(rng: np.random.Generator, n: int, geometry) -> np.ndarray:
    """Length triples from positive offsets r, l_i = r_j + r_k."""
    g = Geometry.parse(geometry)
    if g is S:
        r = rng.uniform(0.05, 1.0, size=(n, 3))
    else:
        r = np.exp(rng.uniform(np.log(0.05), np.log(1.5), size=(n, 3)))
    _, rj, rk = trig.cyclic(r)
    return rj + rk


def random_radii(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.exp(rng.uniform(np.log(0.1), np.log(2.0), size=(n, 3)))


def _fd_jacobian(fn, x: np.ndarray, step: float) -> np.ndarray:
    out = np.empty(x.shape + (x.shape[-1],))
    for j in range(x.shape[-1]):
        xp = x.copy()
        xm = x.copy()
        xp[..., j] += step
        xm[..., j] -= step
        out[..., :, j] = (fn(xp) - fn(xm)) / (2 * step)
    return out


def chart_space_jacobian(kind: str, values: np.ndarray, h: float, step: float) -> np.ndarray:
    """d(gradient)/du by central differences in lengths (radii), divided by
    the chart density."""
    dens = en.chart_for(kind, h).density(values)
    fd = _fd_jacobian(lambda v: en.triangle_gradient(kind, v, h), values, step)
    return fd / dens[..., None, :]


def _samples_for(kind: str, rng, n: int) -> np.ndarray:
    geom, _, integ = en.KINDS[kind]
    return random_radii(rng, n) if integ == "pack" else random_triangles(rng, n, geom)


def _angle_sums(rng, n) -> list[CheckResult]:
    out = []
    l = random_triangles(rng, n, E)
    dev = np.abs(trig.angles_from_lengths(l, E).sum(-1) - np.pi).max()
    out.append(CheckResult("euclidean angle sum equals pi", bool(dev < 1e-12), float(dev), 1e-12))
    l = random_triangles(rng, n, H)
    worst = float((trig.angles_from_lengths(l, H).sum(-1) - np.pi).max())
    out.append(CheckResult("hyperbolic angle sum below pi", worst < 0, worst, 0.0))
    l = random_triangles(rng, n, S)
    worst = float((np.pi - trig.angles_from_lengths(l, S).sum(-1)).max())
    out.append(CheckResult("spherical angle sum above pi", worst < 0, worst, 0.0))
    return out


def _jacobians(rng, n) -> CheckResult:
    worst = 0.0
    for g in (E, H, S):
        l = random_triangles(rng, n, g)
        ana = trig.angle_jacobian(l, g)
        fd = _fd_jacobian(lambda x: trig.angles_from_lengths(x, g), l, 1e-6)
        scale = np.abs(ana).max(axis=(-1, -2), keepdims=True)
        worst = max(worst, float((np.abs(fd - ana) / scale).max()))
    return CheckResult("angle jacobian vs finite differences", worst < 1e-6, worst, 1e-6)


def _matrices(rng, n, inject_fault: bool) -> list[CheckResult]:
    out = []
    l = random_triangles(rng, n, H)
    P = trig.matrix_P(l)
    if inject_fault:
        P = -P
    mins = np.linalg.eigvalsh(P)[:, 0] / np.abs(P).max(axis=(-1, -2))
    worst = float(mins.min())
    out.append(CheckResult("P positive definite", worst > 0, worst, 0.0))

    l = random_triangles(rng, n, E)
    M = trig.matrix_M(trig.angles_from_lengths(l, E))
    kern = float(np.abs(np.einsum("nij,nj->ni", M, l)).max())
    out.append(CheckResult("euclidean M annihilates the lengths", kern < 1e-10, kern, 1e-10))
    low = float(np.linalg.eigvalsh(M)[:, 0].min())
    out.append(CheckResult("euclidean M positive semidefinite", low > -1e-12, low, -1e-12))

    l = random_triangles(rng, n, S)
    low = float(np.linalg.eigvalsh(trig.matrix_M(trig.angles_from_lengths(l, S)))[:, 0].min())
    out.append(CheckResult("spherical M positive definite", low > 0, low, 0.0))
    return out


def _tangent_laws(rng, n) -> CheckResult:
    worst = 0.0
    for g in (E, H, S):
        for kind in ("inradius", "cos_alpha"):
            v = trig.tangent_law_values(random_triangles(rng, n, g), g, kind)
            spread = (v.max(-1) - v.min(-1)) / np.abs(v).max(-1)
            worst = max(worst, float(spread.max()))
    return CheckResult("tangent laws agree across indices", worst < 1e-9, worst, 1e-9)


def _closedness(rng, n) -> CheckResult:
    worst = 0.0
    for kind in en.KINDS:
        for h in FORM_H:
            v = _samples_for(kind, rng, n)
            J = chart_space_jacobian(kind, v, h, 1e-5)
            worst = max(worst, float(np.abs(J - np.swapaxes(J, -1, -2)).max()))
    return CheckResult("closed forms have symmetric mixed partials", worst < 1e-6, worst, 1e-6)


def _hessians(rng, n) -> CheckResult:
    worst = 0.0
    for kind in en.KINDS:
        for h in FORM_H:
            v = _samples_for(kind, rng, n)
            ana = en.triangle_hessian(kind, v, h)
            fd = chart_space_jacobian(kind, v, h, 1e-6)
            scale = np.abs(ana).max(axis=(-1, -2), keepdims=True)
            worst = max(worst, float((np.abs(fd - ana) / scale).max()))
    return CheckResult("triangle hessians vs finite differences", worst < 1e-5, worst, 1e-5)


def _phi_psi(rng, n) -> CheckResult:
    worst = 0.0
    theta = trig.angles_from_lengths(random_triangles(rng, n, E), E)
    for h in FORM_H:
        a = sin_from_half_pi(h, theta)
        b = cos_from_zero(h, trig.alphas(theta))
        worst = max(worst, float(np.abs(a - b).max()))
    return CheckResult("euclidean phi and psi terms coincide", worst < 1e-10, worst, 1e-10)


def crossing_jump(kind: str, h: float, inside: np.ndarray, outside: np.ndarray, iters: int = 64) -> float:
    """Bisect the segment inside -> outside (in chart coordinates) for the
    boundary of the moduli space and return the gradient jump there."""
    chart = en.chart_for(kind, h)
    a = chart.forward(inside)
    b = chart.forward(outside)
    lo, hi = 0.0, 1.0
    code0 = en.region_codes(kind, inside)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if en.region_codes(kind, chart.inverse(a + mid * (b - a))) == code0:
            lo = mid
        else:
            hi = mid
    g_lo = en.triangle_gradient(kind, chart.inverse(a + lo * (b - a)), h)
    g_hi = en.triangle_gradient(kind, chart.inverse(a + hi * (b - a)), h)
    return float(np.abs(g_hi - g_lo).max())


def _continuity(rng, n) -> CheckResult:
    worst = 0.0
    count = max(1, n // 50)
    for kind in ("E_phi", "S_phi", "H_psi", "H_phi"):
        geom = en.KINDS[kind][0]
        for h in CONTINUITY_H:
            for l in random_triangles(rng, count, geom):
                far = l.copy()
                i = int(rng.integers(3))
                far[i] = l[(i + 1) % 3] + l[(i + 2) % 3] + rng.uniform(0.05, 0.5)
                if geom is S:
                    far = np.minimum(far, np.pi - 1e-3)
                    if en.region_codes(kind, far) == 0:
                        continue
                worst = max(worst, crossing_jump(kind, h, l, far))
    return CheckResult("gradient continuous across degenerate triangles", worst < 1e-6, worst, 1e-6)


def run_audit(seed: int = 0, samples: int = 1000, inject_fault: bool = False) -> dict:
    seq = np.random.SeedSequence(int(seed))
    rngs = [np.random.default_rng(s) for s in seq.spawn(9)]
    n = int(samples)
    checks: list[CheckResult] = []
    checks += _angle_sums(rngs[0], n)
    checks.append(_jacobians(rngs[1], n))
    checks += _matrices(rngs[2], n, inject_fault)
    checks.append(_tangent_laws(rngs[3], n))
    checks.append(_closedness(rngs[4], n))
    checks.append(_hessians(rngs[5], n))
    checks.append(_phi_psi(rngs[6], n))
    checks.append(_continuity(rngs[7], n))
    return {
        "seed": int(seed),
        "samples": n,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
