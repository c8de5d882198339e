"""Shared generators and fixtures for the test suite.

Random sweeps use seeded ``random.Random`` instances so every run is
reproducible bit for bit.
"""

import random

import pytest

from latticejets import linalg
from latticejets.polytope import LatticePolytope, PointConfig, lattice_points


@pytest.fixture
def rem_base_polygon():
    """The quadrilateral whose 11 lattice points lie on a cubic but no conic."""
    return LatticePolytope([(0, 0), (1, 3), (3, 1), (4, 4)])


@pytest.fixture
def rem_base_points(rem_base_polygon):
    return lattice_points(rem_base_polygon)


@pytest.fixture
def type_ii_points():
    """Lattice points of the triangle (0,0), (0,1), (5,0)."""
    return lattice_points(LatticePolytope([(0, 0), (0, 1), (5, 0)]))


def random_full_dim_polytope(rng: random.Random, k: int, coord_bound: int = 6,
                             max_extra: int = 4) -> LatticePolytope:
    """Random full-dimensional lattice polytope with bounded coordinates."""
    while True:
        count = rng.randint(k + 1, k + max_extra)
        pts = [tuple(rng.randint(-coord_bound, coord_bound) for _ in range(k))
               for _ in range(count)]
        try:
            p = LatticePolytope(pts)
        except Exception:
            continue
        if p.is_full_dim:
            return p


def random_config(rng: random.Random, k: int, n_points: int,
                  coord_bound: int = 4) -> PointConfig:
    """Random configuration of distinct lattice points."""
    pts = set()
    while len(pts) < n_points:
        pts.add(tuple(rng.randint(-coord_bound, coord_bound) for _ in range(k)))
    return PointConfig(k, tuple(sorted(pts)))


def random_primitive_direction(rng: random.Random, k: int, bound: int = 3):
    from math import gcd

    from latticejets.polytope import Direction

    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(k))
        if not any(v):
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            return Direction(v)


def random_unimodular(rng: random.Random, k: int, steps: int = 5,
                      shear_bound: int = 3) -> linalg.IntMatrix:
    """Random unimodular matrix as a product of shears and signed swaps."""
    u = linalg.identity(k)
    for _ in range(steps):
        i, j = rng.sample(range(k), 2)
        kind = rng.randrange(3)
        m = [[1 if a == b else 0 for b in range(k)] for a in range(k)]
        if kind == 0:
            m[i][j] = rng.randint(-shear_bound, shear_bound)
        elif kind == 1:
            m[i][i] = 0
            m[j][j] = 0
            m[i][j] = 1
            m[j][i] = -1
        else:
            m[i][i] = -1
        u = linalg.mat_mul(linalg.integer_matrix(m), u)
    return u
