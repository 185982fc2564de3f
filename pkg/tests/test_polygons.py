from __future__ import annotations

import math

import numpy as np
import pytest

from polyrigid import generators as gen
from polyrigid.errors import InfeasibleSpec, NoCyclicPolygon
from polyrigid.polygons import circumradius, cyclic_polygon_solve


def test_regular_hexagon():
    poly = cyclic_polygon_solve(np.ones(6))
    r3 = math.sqrt(3)
    for k, v in {"0-2": r3, "0-3": 2.0, "0-4": r3}.items():
        assert poly.diagonals[k] == pytest.approx(v, abs=1e-10)
    assert poly.circumradius == pytest.approx(1.0, abs=1e-12)


def test_unit_square():
    poly = cyclic_polygon_solve([1, 1, 1, 1])
    assert poly.diagonals["0-2"] == pytest.approx(math.sqrt(2), abs=1e-10)
    assert poly.circumradius == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    np.testing.assert_allclose(np.linalg.norm(poly.coordinates, axis=1), math.sqrt(2) / 2, atol=1e-12)


def test_triangle_has_no_diagonals():
    poly = cyclic_polygon_solve([3, 4, 5])
    assert poly.diagonals == {}
    assert poly.circumradius == pytest.approx(2.5, abs=1e-12)


@pytest.mark.parametrize("sides", [[3, 1, 1, 1], [1, 1, 2], [0, 1, 1], [1, 1]])
def test_no_cyclic_polygon(sides):
    with pytest.raises(NoCyclicPolygon):
        cyclic_polygon_solve(sides)


def test_spherical_is_refused():
    with pytest.raises(InfeasibleSpec):
        cyclic_polygon_solve([1, 1, 1, 1], "spherical")


@pytest.mark.parametrize("g", ["euclidean", "hyperbolic"])
def test_alternating_triangulation(g, rng):
    sides, polar, radius = gen.random_cyclic_polygon(rng, 6, g)
    poly = cyclic_polygon_solve(sides, g, triangles=gen.alternating_hexagon_triangles())
    for key in ("1-3", "3-5", "1-5"):
        a, b = map(int, key.split("-"))
        assert poly.diagonals[key] == pytest.approx(gen.polygon_diagonal_oracle(g, radius, polar, a, b), abs=1e-9)


@pytest.mark.parametrize("g", ["euclidean", "hyperbolic"])
@pytest.mark.parametrize("n", [4, 5, 7, 9])
def test_random_cyclic_polygons(g, n, rng):
    for _ in range(3):
        sides, polar, radius = gen.random_cyclic_polygon(rng, n, g)
        poly = cyclic_polygon_solve(sides, g)
        assert poly.circumradius == pytest.approx(radius, rel=1e-10)
        for k in range(2, n - 1):
            got = poly.diagonals[f"0-{k}"]
            assert got == pytest.approx(gen.polygon_diagonal_oracle(g, radius, polar, 0, k), abs=1e-9)


def test_circumradius_when_centre_is_outside():
    # an obtuse triangle: the centre lies beyond the longest side
    R, delta = circumradius([1.0, 1.0, 1.9], "euclidean")
    theta = math.acos((1 + 1 - 1.9**2) / 2)
    assert R == pytest.approx(1.9 / (2 * math.sin(theta)), rel=1e-12)
    assert delta.sum() == pytest.approx(2 * math.pi)


def test_poincare_coordinates(rng):
    sides, polar, radius = gen.random_cyclic_polygon(rng, 6, "hyperbolic")
    poly = cyclic_polygon_solve(sides, "hyperbolic")
    z = poly.coordinates[:, 0] + 1j * poly.coordinates[:, 1]
    np.testing.assert_allclose(np.abs(z), math.tanh(radius / 2), atol=1e-12)
    # hyperbolic distance between consecutive vertices in the disk model
    w = np.roll(z, -1)
    d = 2 * np.arctanh(np.abs((z - w) / (1 - np.conj(w) * z)))
    np.testing.assert_allclose(d, sides, atol=1e-9)
    assert set(poly.to_dict()) == {"geometry", "sides", "diagonals", "circumradius", "coordinates"}
