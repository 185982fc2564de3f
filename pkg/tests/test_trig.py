from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import acos_angles, central_jacobian, sample_triangles
from polyrigid import trig
from polyrigid.errors import DegenerateTriangle, IndexMismatch, NonPositiveLength, UnsupportedGeometry

GEOMS = ("euclidean", "hyperbolic", "spherical")

offsets = st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3)


def from_offsets(r):
    r = np.asarray(r)
    return np.array([r[1] + r[2], r[2] + r[0], r[0] + r[1]])


# -- angles -------------------------------------------------------------------------


def test_right_triangle():
    theta = trig.angles_from_lengths([3, 4, 5], "euclidean")
    np.testing.assert_allclose(theta, [math.atan2(3, 4), math.atan2(4, 3), math.pi / 2], atol=1e-15)
    np.testing.assert_allclose(theta, [0.6435011, 0.9272952, 1.5707963], atol=5e-8)


def test_equilateral_and_octant():
    np.testing.assert_allclose(trig.angles_from_lengths([1, 1, 1], "e"), np.full(3, math.pi / 3), atol=1e-15)
    octant = trig.angles_from_lengths(np.full(3, math.pi / 2), "s")
    np.testing.assert_allclose(octant, np.full(3, math.pi / 2), atol=1e-15)


def test_hyperbolic_equilateral():
    c = math.cosh(1) * (math.cosh(1) - 1) / math.sinh(1) ** 2
    assert c == pytest.approx(0.60677, abs=1e-5)
    theta = trig.angles_from_lengths([1, 1, 1], "h")
    np.testing.assert_allclose(theta, np.full(3, math.acos(c)), atol=1e-14)
    assert theta[0] == pytest.approx(0.918798, abs=1e-6)


@pytest.mark.parametrize("g", GEOMS)
def test_half_angle_matches_cosine_law(g, rng):
    l = sample_triangles(rng, 2000, g)
    np.testing.assert_allclose(trig.angles_from_lengths(l, g), acos_angles(l, g), atol=1e-12)
    np.testing.assert_allclose(trig.cosine_law_angles(l, g), acos_angles(l, g), atol=1e-12)


def test_angle_sums(rng):
    for g, check in (
        ("euclidean", lambda s: np.abs(s - np.pi).max() < 1e-12),
        ("hyperbolic", lambda s: np.all(s < np.pi)),
        ("spherical", lambda s: np.all(s > np.pi)),
    ):
        assert check(trig.angles_from_lengths(sample_triangles(rng, 10_000, g), g).sum(-1)), g


def test_degenerate_rejected():
    with pytest.raises(DegenerateTriangle):
        trig.angles_from_lengths([1, 1, 2.5], "euclidean")
    with pytest.raises(DegenerateTriangle):
        trig.angles_from_lengths([2.5, 2.5, 2.5], "spherical")
    with pytest.raises(DegenerateTriangle):
        trig.angles_from_lengths([1, -1, 1], "euclidean")
    with pytest.raises(NonPositiveLength):
        trig.extended_angles([1, -1, 1], "euclidean")


def test_slack_membership():
    l = np.array([1.0, 1.0, 2.0 - 1e-10])
    assert trig.in_moduli_space(l, "e")
    assert not trig.in_moduli_space(l, "e", slack=1e-6)


# -- extension ----------------------------------------------------------------------


def test_extended_examples():
    np.testing.assert_array_equal(trig.extended_angles([1, 1, 2], "e"), [0, 0, math.pi])
    np.testing.assert_allclose(trig.extended_angles([1, 1, 1], "e"), np.full(3, math.pi / 3))
    np.testing.assert_array_equal(trig.extended_angles([1, 1, 2.5], "h"), [0, 0, math.pi])
    np.testing.assert_array_equal(trig.extended_angles([2.9, 2.9, 2.9], "s"), np.full(3, math.pi))


@pytest.mark.parametrize("g", GEOMS)
def test_extended_angles_continuous_across_boundary(g, rng):
    """Bisect each segment to adjacent floats around the crossing; the jump
    there shrinks like the square root of the length resolution."""
    inside = sample_triangles(rng, 300, g)
    far = inside.copy()
    far[:, 2] = inside[:, 0] + inside[:, 1] + 0.3
    if g == "spherical":
        far = np.minimum(far, math.pi - 1e-3)
    d = far - inside
    lo, hi = np.zeros(len(d)), np.ones(len(d))
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        ok = trig.in_moduli_space(inside + mid[:, None] * d, g)
        lo, hi = np.where(ok, mid, lo), np.where(ok, hi, mid)
    a = trig.extended_angles(inside + lo[:, None] * d, g)
    b = trig.extended_angles(inside + hi[:, None] * d, g)
    assert np.abs(a - b).max() < 1e-6


# -- jacobian -----------------------------------------------------------------------


def test_jacobian_examples():
    J = trig.angle_jacobian([1, 1, 1], "e")
    np.testing.assert_allclose(np.diag(J), np.full(3, 2 / math.sqrt(3)), atol=1e-12)
    assert J[0, 1] == pytest.approx(-1 / math.sqrt(3), abs=1e-12)
    assert trig.angle_jacobian([3, 4, 5], "e")[2, 2] == pytest.approx(5 / 12, abs=1e-14)


@pytest.mark.parametrize("g", GEOMS)
def test_jacobian_vs_differences(g, rng):
    l = sample_triangles(rng, 1000, g)
    ana = trig.angle_jacobian(l, g)
    fd = central_jacobian(lambda x: acos_angles(x, g), l, 1e-6)
    rel = np.abs(fd - ana).max(axis=(1, 2)) / np.abs(ana).max(axis=(1, 2))
    assert rel.max() < 1e-6


@given(offsets)
def test_euclidean_jacobian_columns_sum_to_zero(r):
    J = trig.angle_jacobian(from_offsets(r), "e")
    assert np.abs(J.sum(axis=0)).max() < 1e-9 * np.abs(J).max()


@pytest.mark.parametrize("g", ["euclidean", "hyperbolic"])
def test_radius_jacobian_symmetry(g, rng):
    """(1/s_i) d theta_i / d r_j is symmetric, s = r or sinh r."""
    r = np.exp(rng.uniform(-2, 0.5, size=(500, 3)))
    s = r if g == "euclidean" else np.sinh(r)
    A = trig.packing_angle_jacobian(r, g) / s[:, :, None]
    assert np.abs(A - np.swapaxes(A, 1, 2)).max() < 1e-8


def test_hyperbolic_alpha_derivative_proportionality(rng):
    """d(theta_i - theta_j - theta_k)/dl is one positive constant times
    tanh(l_i/2)(sum cosh + 1) on l_i and coth(l_j/2)(-ch_i - ch_j + ch_k + 1)
    on l_j, for every i."""
    for l in sample_triangles(rng, 200, "hyperbolic"):
        J = trig.angle_jacobian(l, "h")
        ch = np.cosh(l)
        ratios = []
        for i in range(3):
            row = J[i] - J[(i + 1) % 3] - J[(i + 2) % 3]
            ratios.append(row[i] / (np.tanh(l[i] / 2) * (ch.sum() + 1)))
            for j in ((i + 1) % 3, (i + 2) % 3):
                k = 3 - i - j
                ratios.append(row[j] / ((-ch[i] - ch[j] + ch[k] + 1) / np.tanh(l[j] / 2)))
        ratios = np.array(ratios)
        assert ratios.min() > 0
        assert np.ptp(ratios) < 1e-8 * ratios.mean()
        # the common constant is 1 / (sin theta_i sinh l_j sinh l_k), the same for every i
        theta = acos_angles(l, "h")
        assert ratios.mean() == pytest.approx(1 / (np.sin(theta[0]) * np.sinh(l[1]) * np.sinh(l[2])), rel=1e-8)


# -- auxiliary coordinates and tangent laws -----------------------------------------


def test_aux_examples():
    np.testing.assert_allclose(trig.aux_coords([3, 4, 5], "e").r, [3, 2, 1])
    np.testing.assert_allclose(trig.aux_coords([1, 1, 1], "e").alpha, np.full(3, -math.pi / 6), atol=1e-15)
    a = math.acos(-0.53125)
    b = (math.pi - a) / 2
    alpha = trig.aux_coords([2, 2, 3.5], "e").alpha
    assert alpha[2] == pytest.approx((a - 2 * b) / 2, abs=1e-14)
    assert alpha[2] > 0


@given(offsets)
def test_aux_roundtrip(r):
    l = from_offsets(r)
    np.testing.assert_allclose(trig.aux_coords(l, "e").lengths(), l, rtol=1e-14)


def test_tangent_law_examples():
    assert trig.tangent_law_invariant([1, 1, 1], "e") == pytest.approx(0.5 * math.tan(math.pi / 6), abs=1e-15)
    assert trig.tangent_law_invariant([3, 4, 5], "e") == pytest.approx(1.0, abs=1e-14)
    theta = math.acos(math.cosh(1) * (math.cosh(1) - 1) / math.sinh(1) ** 2)
    vals = trig.tangent_law_values([1, 1, 1], "h", "cos_alpha")
    np.testing.assert_allclose(vals, math.cos(-theta / 2) / math.tanh(0.5), atol=1e-12)


@pytest.mark.parametrize("g", GEOMS)
@pytest.mark.parametrize("kind", ["inradius", "cos_alpha"])
def test_tangent_laws_index_free(g, kind, rng):
    vals = trig.tangent_law_values(sample_triangles(rng, 2000, g), g, kind)
    assert (np.ptp(vals, axis=-1) / np.abs(vals).max(-1)).max() < 1e-12


def test_tangent_law_mismatch_detected(monkeypatch):
    monkeypatch.setattr(trig, "tangent_law_values", lambda *a, **k: np.array([1.0, 1.0, 1.1]))
    with pytest.raises(IndexMismatch):
        trig.tangent_law_invariant([1, 1, 1], "e")


# -- matrices -----------------------------------------------------------------------


def test_matrix_P_equilateral():
    P = trig.matrix_P([1, 1, 1])
    assert P[0, 0] == pytest.approx(1.2021, abs=1e-3)
    assert P[0, 1] == pytest.approx(-0.5431, abs=1e-3)
    np.testing.assert_allclose(np.linalg.eigvalsh(P), [0.116, 1.745, 1.745], atol=1e-3)


def test_matrix_P_degenerate_limit():
    mins = [np.linalg.eigvalsh(trig.matrix_P([1, 1, 2 - eps]))[0] for eps in (1e-2, 1e-4, 1e-6)]
    assert all(m > 0 for m in mins)
    assert mins[0] > mins[1] > mins[2]


@settings(max_examples=200)
@given(offsets)
def test_matrix_P_positive_definite(r):
    P = trig.matrix_P(from_offsets(r))
    assert np.linalg.eigvalsh(P)[0] > 0


def test_matrix_P_factorisation(rng):
    """P = 4 cos(zeta) / (sin t1 sin t2 sin t3) D Q D with D = diag cos(alpha)."""
    l = sample_triangles(rng, 200, "hyperbolic")
    theta = acos_angles(l, "h")
    alpha = trig.alphas(theta)
    zeta = -0.5 * theta.sum(-1)
    Q = np.empty(l.shape + (3,))
    for i in range(3):
        for j in range(3):
            Q[:, i, j] = -np.sin(zeta) if i == j else np.sin(alpha[:, 3 - i - j])
    D = np.cos(alpha)
    scale = 4 * np.cos(zeta) / np.prod(np.sin(theta), axis=-1)
    rebuilt = scale[:, None, None] * D[:, :, None] * Q * D[:, None, :]
    np.testing.assert_allclose(rebuilt, trig.matrix_P(l), rtol=1e-9, atol=1e-9)


def test_matrix_M_examples():
    M = trig.matrix_M(np.full(3, math.pi / 3))
    np.testing.assert_allclose(M, np.eye(3) * 1.5 - 0.5, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(M), [0, 1.5, 1.5], atol=1e-14)
    M345 = trig.matrix_M(trig.angles_from_lengths([3, 4, 5], "e"))
    assert np.abs(M345 @ [3, 4, 5]).max() < 1e-12
    np.testing.assert_allclose(trig.matrix_M(np.full(3, math.pi / 2)), np.eye(3), atol=1e-15)


def test_matrix_M_definiteness(rng):
    l = sample_triangles(rng, 5000, "euclidean")
    M = trig.matrix_M(acos_angles(l, "e"))
    assert np.abs(np.einsum("nij,nj->ni", M, l)).max() < 1e-10
    assert np.linalg.eigvalsh(M)[:, 0].min() > -1e-12
    Ms = trig.matrix_M(acos_angles(sample_triangles(rng, 5000, "s"), "s"))
    assert np.linalg.eigvalsh(Ms)[:, 0].min() > 0


# -- packings -----------------------------------------------------------------------


def test_packing_lengths():
    np.testing.assert_array_equal(trig.packing_lengths([1, 1, 1], "e"), [2, 2, 2])
    np.testing.assert_array_equal(trig.packing_lengths([1, 2, 3], "e"), [5, 4, 3])
    with pytest.raises(UnsupportedGeometry):
        trig.packing_lengths([1, 1, 1], "s")


@given(st.lists(st.floats(1e-3, 50.0), min_size=3, max_size=3), st.sampled_from(["e", "h"]))
def test_packing_lengths_always_valid(r, g):
    assert trig.in_moduli_space(trig.packing_lengths(r, g), g)
