"""The ten acceptance criteria, each at its stated tolerance.

Every test prints a single ``[PASS]``/``[FAIL]`` line (visible under
``pytest -v`` as well as ``python tests/test_acceptance.py``).
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from conftest import acos_angles, central_jacobian, sample_triangles
from polyrigid import curvature as curv
from polyrigid import energy as en
from polyrigid import generators as gen
from polyrigid import trig
from polyrigid.mesh import CirclePackingMetric, PolyhedralMetric, build_surface
from polyrigid.packing import checked_layout, packing_complete
from polyrigid.polygons import cyclic_polygon_solve
from polyrigid.solver import problem_from_metric, solve

FORM_H = (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0)
ALL_KINDS = ("E_phi", "S_phi", "H_psi", "H_phi", "C_E", "C_H")
EXTENDED_KINDS = ("E_phi", "S_phi", "H_psi", "H_phi")


@pytest.fixture
def line(capsys):
    def emit(number: int, passed: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
        assert passed, detail

    return emit


def density(kind: str, h: float, t: np.ndarray) -> np.ndarray:
    """du/dt of the chart each triangle energy is convex in."""
    return {
        "E_phi": lambda: t ** (-h - 1),
        "S_phi": lambda: np.sin(t) ** (-h - 1),
        "H_psi": lambda: np.tanh(t / 2) ** (-h - 1),
        "H_phi": lambda: np.sinh(t) ** (-h - 1),
        "C_E": lambda: t ** (h - 1),
        "C_H": lambda: np.sinh(t) ** (h - 1),
    }[kind]()


def samples_for(kind: str, rng, n: int) -> np.ndarray:
    if kind.startswith("C_"):
        return np.exp(rng.uniform(np.log(0.1), np.log(2.0), size=(n, 3)))
    return sample_triangles(rng, n, en.KINDS[kind][0].value)


def u_jacobian(kind: str, h: float, v: np.ndarray, step: float) -> np.ndarray:
    """d(grad)/du: differences in lengths (or radii), then the chain rule
    through the chart density."""
    J = central_jacobian(lambda x: en.triangle_gradient(kind, x, h), v, step)
    return J / density(kind, h, v)[:, None, :]


# -- 1 ------------------------------------------------------------------------------


def test_criterion_1_trigonometry(line):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst_sum = worst_jac = 0.0
    hyp_ok = sph_ok = True
    for g in ("euclidean", "hyperbolic", "spherical"):
        l = sample_triangles(rng, 10_000, g)
        theta = trig.angles_from_lengths(l, g)
        sums = theta.sum(-1)
        if g == "euclidean":
            worst_sum = float(np.abs(sums - np.pi).max())
        elif g == "hyperbolic":
            hyp_ok = bool(np.all(sums < np.pi))
        else:
            sph_ok = bool(np.all(sums > np.pi))
        ana = trig.angle_jacobian(l, g)
        fd = central_jacobian(lambda x: acos_angles(x, g), l, 1e-6)
        rel = np.abs(fd - ana).max(axis=(1, 2)) / np.abs(ana).max(axis=(1, 2))
        worst_jac = max(worst_jac, float(rel.max()))
    elapsed = time.perf_counter() - start
    passed = worst_sum < 1e-12 and hyp_ok and sph_ok and worst_jac < 1e-6 and elapsed < 5
    line(
        1,
        passed,
        f"E angle-sum err {worst_sum:.1e} (<1e-12), H sum<pi {hyp_ok}, S sum>pi {sph_ok}, "
        f"jacobian rel err {worst_jac:.1e} (<1e-6), {elapsed:.2f}s (<5s)",
    )


# -- 2 ------------------------------------------------------------------------------


def test_criterion_2_matrix_definiteness(line):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    P = trig.matrix_P(sample_triangles(rng, 10_000, "hyperbolic"))
    p_min = float(np.linalg.eigvalsh(P)[:, 0].min())
    l = sample_triangles(rng, 10_000, "euclidean")
    M = trig.matrix_M(acos_angles(l, "euclidean"))
    kern = float(np.abs(np.einsum("nij,nj->ni", M, l)).max())
    psd = float(np.linalg.eigvalsh(M)[:, 0].min())
    Ms = trig.matrix_M(acos_angles(sample_triangles(rng, 10_000, "spherical"), "spherical"))
    s_min = float(np.linalg.eigvalsh(Ms)[:, 0].min())
    elapsed = time.perf_counter() - start
    passed = p_min > 0 and kern < 1e-10 and psd > -1e-12 and s_min > 0 and elapsed < 5
    line(
        2,
        passed,
        f"min eig P {p_min:.2e} (>0), |M l| {kern:.1e} (<1e-10), min eig E-M {psd:.1e} (>=0), "
        f"min eig S-M {s_min:.2e} (>0), {elapsed:.2f}s (<5s)",
    )


# -- 3 ------------------------------------------------------------------------------


def test_criterion_3_closed_forms(line):
    rng = np.random.default_rng(3)
    worst, where = 0.0, ""
    for kind in ALL_KINDS:
        for h in FORM_H:
            J = u_jacobian(kind, h, samples_for(kind, rng, 1000), 1e-5)
            err = float(np.abs(J - np.swapaxes(J, 1, 2)).max())
            if err > worst:
                worst, where = err, f"{kind} h={h}"
    line(3, worst < 1e-6, f"mixed-partial asymmetry {worst:.1e} (<1e-6), worst at {where}")


# -- 4 ------------------------------------------------------------------------------


def test_criterion_4_hessian_factorizations(line):
    rng = np.random.default_rng(4)
    worst, where = 0.0, ""
    for kind in ALL_KINDS:
        for h in FORM_H:
            v = samples_for(kind, rng, 1000)
            ana = en.triangle_hessian(kind, v, h)
            fd = u_jacobian(kind, h, v, 1e-6)
            rel = float((np.abs(fd - ana).max(axis=(1, 2)) / np.abs(ana).max(axis=(1, 2))).max())
            if rel > worst:
                worst, where = rel, f"{kind} h={h}"
    line(4, worst < 1e-5, f"hessian rel err {worst:.1e} (<1e-5), worst at {where}")


# -- 5 ------------------------------------------------------------------------------


def _crossing_segments(rng, geometry: str, n: int):
    inside = sample_triangles(rng, n, geometry)
    far = inside.copy()
    i = rng.integers(3, size=n)
    idx = np.arange(n)
    far[idx, i] = inside[idx, (i + 1) % 3] + inside[idx, (i + 2) % 3] + rng.uniform(0.05, 0.5, n)
    if geometry == "spherical":
        far = np.minimum(far, np.pi - 1e-3)
    return inside, far


def gradient_jumps(kind: str, h: float, inside: np.ndarray, far: np.ndarray) -> np.ndarray:
    """Bisect each segment (in length space) down to adjacent floats around
    the first region change and compare the gradients on either side."""
    lo = np.zeros(len(inside))
    hi = np.ones(len(inside))
    d = far - inside
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        same = en.region_codes(kind, inside + mid[:, None] * d) == 0
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    g_in = en.triangle_gradient(kind, inside + lo[:, None] * d, h)
    g_out = en.triangle_gradient(kind, inside + hi[:, None] * d, h)
    return np.abs(g_out - g_in).max(axis=1)


def midpoint_violation(kind: str, h: float, a: np.ndarray, b: np.ndarray) -> float:
    """F((a+b)/2) - (F(a)+F(b))/2 in chart coordinates."""
    m = 0.5 * (a + b)
    return 0.5 * (en.triangle_energy_difference(kind, h, a, m) - en.triangle_energy_difference(kind, h, m, b))


def test_criterion_5_extension(line):
    rng = np.random.default_rng(5)
    worst_jump, jump_at = 0.0, ""
    for kind in EXTENDED_KINDS:
        g = en.KINDS[kind][0].value
        inside, far = _crossing_segments(rng, g, 500)
        crossing = en.region_codes(kind, far) != 0
        for h in (0.0, 0.5, 1.0, 2.0):
            j = float(gradient_jumps(kind, h, inside[crossing], far[crossing]).max())
            if j > worst_jump:
                worst_jump, jump_at = j, f"{kind} h={h}"
    worst_convex, convex_at = -np.inf, ""
    for kind in ALL_KINDS:
        if kind.startswith("C_"):
            a, b = samples_for(kind, rng, 500), samples_for(kind, rng, 500)
        else:
            a, b = _crossing_segments(rng, en.KINDS[kind][0].value, 500)
        for h in (0.0, 1.0):
            chart = en.chart_for(kind, h)
            ua, ub = chart.forward(a), chart.forward(b)
            v = max(midpoint_violation(kind, h, x, y) for x, y in zip(ua, ub))
            if v > worst_convex:
                worst_convex, convex_at = v, f"{kind} h={h}"
    passed = worst_jump < 1e-6 and worst_convex < 1e-9
    line(
        5,
        passed,
        f"gradient jump {worst_jump:.1e} (<1e-6, at {jump_at}), "
        f"midpoint-convexity violation {worst_convex:.1e} (<1e-9, at {convex_at})",
    )


# -- 6 ------------------------------------------------------------------------------


def perturbed_start(rng, chart, surface, metric, h: float, scale: float = 0.2):
    """Interior values moved by up to ``scale`` relative in u; for h <= -1
    the move is halved until every triangle is nondegenerate (the extended
    gradient is infinite there)."""
    packing = isinstance(metric, CirclePackingMetric)
    idx = surface.interior_vertices if packing else surface.interior_edges
    full = (metric.radii if packing else metric.lengths).copy()
    u = chart.forward(full[idx])
    while True:
        u0 = u + scale * np.abs(u) * rng.uniform(-1, 1, len(u))
        if np.all(chart.contains(u0)):
            full[idx] = chart.inverse(u0)
            if packing or h > -1 or np.all(trig.in_moduli_space(full[surface.triangle_edges], metric.geometry)):
                return full[idx]
        scale *= 0.5


def _hexagon_fan_points(rng):
    ang = np.arange(6) * np.pi / 3
    pts = np.r_[[[0.0, 0.0]], np.c_[np.cos(ang), np.sin(ang)]]
    pts[1:] *= rng.uniform(0.9, 1.1, (6, 1))
    return pts


def test_criterion_6_rigidity_recovery(line):
    rng = np.random.default_rng(6)
    meshes = {"hexagon fan": (gen.hexagon_fan(), _hexagon_fan_points(rng))}
    meshes["random disk"] = gen.random_disk(rng)
    worst_err = worst_time = 0.0
    cases = 0
    for surface, pts in meshes.values():
        for flavor, g in (("W_phi", "euclidean"), ("W_phi", "spherical"), ("W_psi", "hyperbolic")):
            metric = gen.disk_metric(surface, pts, g)
            for h in (-2.0, 0.0, 1.0):
                chart = en.chart_for(en.triangle_kind(flavor, g), h)
                start = time.perf_counter()
                guess = perturbed_start(rng, chart, surface, metric, h)
                report = solve(problem_from_metric(surface, metric, flavor, h, initial_guess=guess))
                worst_time = max(worst_time, time.perf_counter() - start)
                err = np.abs(report.interior_values() - metric.lengths[surface.interior_edges]).max()
                worst_err = max(worst_err, float(err))
                cases += 1
    triangles = meshes["random disk"][0].triangle_count
    passed = worst_err < 1e-8 and worst_time < 5
    line(
        6,
        passed,
        f"{cases} cases (fan + {triangles}-triangle disk), max interior error {worst_err:.1e} (<1e-8), "
        f"slowest {worst_time:.2f}s (<5s)",
    )


# -- 7 ------------------------------------------------------------------------------


def test_criterion_7_stripped_hyperbolic(line):
    rng = np.random.default_rng(7)
    surface = gen.annulus_strip(8)
    metric = PolyhedralMetric(
        surface, gen.planar_lengths(surface, gen.annulus_points(8, rng)), "hyperbolic"
    )
    worst = 0.0
    for h in (-1.0, 0.0, 1.0):
        chart = en.chart_for("H_phi", h)
        guess = perturbed_start(rng, chart, surface, metric, h)
        report = solve(problem_from_metric(surface, metric, "V_phi", h, initial_guess=guess))
        err = float(np.abs(report.interior_values() - metric.lengths[surface.interior_edges]).max())
        worst = max(worst, err)
    line(7, worst < 1e-8, f"annulus strip V_phi, h in {{-1, 0, 1}}: max error {worst:.1e} (<1e-8)")


# -- 8 ------------------------------------------------------------------------------


def test_criterion_8_cyclic_polygons(line):
    rng = np.random.default_rng(8)
    hexagon = cyclic_polygon_solve(np.ones(6), "euclidean")
    short = [hexagon.diagonals[k] for k in ("0-2", "0-4")]
    hex_err = max(abs(x - np.sqrt(3)) for x in short)
    long_err = abs(hexagon.diagonals["0-3"] - 2.0)
    r_err = abs(hexagon.circumradius - 1.0)
    worst = 0.0
    count = 0
    for g in ("euclidean", "hyperbolic"):
        for _ in range(100):
            n = int(rng.integers(4, 13))
            sides, polar, radius = gen.random_cyclic_polygon(rng, n, g)
            poly = cyclic_polygon_solve(sides, g)
            for label, val in poly.diagonals.items():
                a, b = map(int, label.split("-"))
                worst = max(worst, abs(val - gen.polygon_diagonal_oracle(g, radius, polar, a, b)))
            count += 1
    passed = hex_err < 1e-8 and long_err < 1e-8 and r_err < 1e-8 and worst < 1e-8
    line(
        8,
        passed,
        f"hexagon short-diagonal err {hex_err:.1e}, long {long_err:.1e}, radius {r_err:.1e}; "
        f"{count} random n-gons max diagonal err {worst:.1e} (all <1e-8)",
    )


# -- 9 ------------------------------------------------------------------------------


def test_criterion_9_circle_packing(line):
    rng = np.random.default_rng(9)
    unit_err = layout_res = 0.0
    for surface in (gen.hexagon_fan(), gen.hex_patch()):
        boundary = np.ones(len(surface.boundary_vertices))
        report = packing_complete(surface, boundary, "euclidean", 0.0)
        unit_err = max(unit_err, float(np.abs(report.interior_values() - 1.0).max()))
        layout_res = max(layout_res, checked_layout(report.solution).residual)
    surface = gen.hex_patch()
    inversion = 0.0
    for g in ("euclidean", "hyperbolic"):
        for h in (0.0, 1.0):
            radii = rng.uniform(0.5, 1.5, surface.vertex_count)
            packing = CirclePackingMetric(surface, radii, g)
            chart = en.chart_for("C_E" if g == "euclidean" else "C_H", h)
            guess = perturbed_start(rng, chart, surface, packing, h)
            report = solve(problem_from_metric(surface, packing, "U_packing", h, initial_guess=guess))
            err = np.abs(report.interior_values() - radii[surface.interior_vertices]).max()
            inversion = max(inversion, float(err))
    passed = unit_err < 1e-10 and layout_res < 1e-9 and inversion < 1e-8
    line(
        9,
        passed,
        f"unit radii err {unit_err:.1e} (<1e-10), layout residual {layout_res:.1e} (<1e-9), "
        f"self-inversion {inversion:.1e} (<1e-8)",
    )


# -- 10 -----------------------------------------------------------------------------


def test_criterion_10_curvature_identities(line):
    rng = np.random.default_rng(10)
    phi_psi = k0_err = star_err = 0.0
    for _ in range(10):
        surface, pts = gen.random_disk(rng)
        metric = gen.disk_metric(surface, pts, "euclidean")
        for h in FORM_H:
            d = curv.phi_h(surface, metric, h).values - curv.psi_h(surface, metric, h).values
            phi_psi = max(phi_psi, float(np.abs(d).max()))
        for g in ("euclidean", "hyperbolic"):
            m = gen.disk_metric(surface, pts, g)
            theta = acos_angles(m.triangle_lengths(), g)
            sums = np.zeros(surface.vertex_count)
            np.add.at(sums, surface.triangles.ravel(), theta.ravel())
            k0 = 2 * np.pi - sums
            psi0 = dict(zip(surface.interior_edges.tolist(), curv.psi_h(surface, m, 0.0).values))
            for v in surface.interior_vertices:
                star = [e for e, (a, b) in enumerate(surface.edges.tolist()) if v in (a, b)]
                star_err = max(star_err, abs(sum(psi0[e] for e in star) - (2 * np.pi - k0[v])))
    for surface in (gen.hexagon_fan(), gen.hex_patch()):
        radii = rng.uniform(0.5, 1.5, surface.vertex_count)
        packing = CirclePackingMetric(surface, radii, "euclidean")
        theta = acos_angles(packing.polyhedral().triangle_lengths(), "euclidean")
        sums = np.zeros(surface.vertex_count)
        np.add.at(sums, surface.triangles.ravel(), theta.ravel())
        k0 = curv.k_h(surface, packing, 0.0).values
        k0_err = max(k0_err, float(np.abs(k0 - (2 * np.pi - sums[surface.interior_vertices])).max()))
    quad = build_surface(4, [(0, 1, 2), (0, 2, 3)])
    cyclic = 0.0
    for g in ("euclidean", "hyperbolic"):
        for _ in range(50):
            sides, polar, radius = gen.random_cyclic_polygon(rng, 4, g)
            diag = gen.polygon_diagonal_oracle(g, radius, polar, 0, 2)
            lengths = {"0-1": sides[0], "1-2": sides[1], "2-3": sides[2], "0-3": sides[3], "0-2": diag}
            m = PolyhedralMetric.from_mapping(quad, lengths, g)
            cyclic = max(cyclic, abs(float(curv.psi_h(quad, m, 0.0).values[0])))
    passed = phi_psi < 1e-10 and k0_err < 1e-12 and star_err < 1e-10 and cyclic < 1e-9
    line(
        10,
        passed,
        f"E phi-psi {phi_psi:.1e} (<1e-10), k0 {k0_err:.1e} (<1e-12), "
        f"star identity {star_err:.1e} (<1e-10), cyclic-quad psi0 {cyclic:.1e} (<1e-9)",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
