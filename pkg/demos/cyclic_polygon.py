"""Recover the circle through a polygon from its side lengths alone.

Fan-triangulate the polygon, ask for zero psi_0 curvature on every
diagonal and let the convex solver find the diagonals. The answer is
checked against a polygon built on a known circle.
"""
from __future__ import annotations

import numpy as np

from polyrigid import generators as gen
from polyrigid.polygons import cyclic_polygon_solve


def main() -> None:
    rng = np.random.default_rng(5)
    for geometry in ("euclidean", "hyperbolic"):
        sides, polar, radius = gen.random_cyclic_polygon(rng, 7, geometry)
        poly = cyclic_polygon_solve(sides, geometry)
        print(f"{geometry}: 7 sides {np.round(sides, 4).tolist()}")
        print(f"  circumradius  solved {poly.circumradius:.12f}  true {radius:.12f}")
        for k in range(2, 6):
            true = gen.polygon_diagonal_oracle(geometry, radius, polar, 0, k)
            print(f"  diagonal 0-{k}  solved {poly.diagonals[f'0-{k}']:.12f}  true {true:.12f}")

    # a side longer than the others together cannot be inscribed
    try:
        cyclic_polygon_solve([3, 1, 1, 1])
    except Exception as exc:  # NoCyclicPolygon
        print(f"sides (3, 1, 1, 1): {type(exc).__name__}: {exc}")


if __name__ == "__main__":
    main()
