"""Jet matrices, speciality bookkeeping, fundamental forms."""

import random
from fractions import Fraction
from math import comb

import pytest

from latticejets import linalg
from latticejets.errors import InputError
from latticejets.jets import (build_jets, expected_h0, fundamental_form, h0,
                              is_special, min_vanishing_degree)
from latticejets.polytope import LatticePolytope, PointConfig, lattice_points, lattice_width
from tests.conftest import random_config, random_unimodular

PAPER_QUARTICS = ((1, 4, 10, 4, 1),  # w1^4 + 4w1^3w2 + 10w1^2w2^2 + 4w1w2^3 + w2^4
                  (0, 0, 1, 0, 0))   # w1^2 w2^2


def test_build_jets_m1_simplex():
    s = PointConfig(2, ((0, 0), (1, 0), (0, 1)))
    system = build_jets(s, 1)
    assert system.j_matrix == system.lt_matrix
    assert system.j_matrix == ((1, 1, 1), (0, 1, 0), (0, 0, 1))
    assert system.j_ranks == (1, 3)


def test_order_zero_row_is_all_ones():
    rng = random.Random(2)
    s = random_config(rng, 3, 6)
    system = build_jets(s, 2)
    assert system.j_matrix[0] == (1,) * len(s)
    assert system.lt_matrix[0] == (1,) * len(s)


def test_build_jets_rejects_bad_order():
    with pytest.raises(InputError):
        build_jets(PointConfig(2, ((0, 0), (1, 0))), -1)


def test_rem_base_rank_chain(rem_base_points):
    system = build_jets(rem_base_points, 3)
    assert system.j_ranks == (1, 3, 6, 9)


def test_h0_values(rem_base_points):
    assert h0(rem_base_points, 4) == 2
    assert h0(rem_base_points, 3) == 5
    # m = 1: hyperplanes through one point
    assert h0(rem_base_points, 1) == len(rem_base_points) - 1


def test_expected_h0():
    assert expected_h0(10, 2, 4) == 1
    assert expected_h0(10, 2, 3) == 5
    assert expected_h0(7, 3, 0) == 8
    assert expected_h0(3, 2, 5) == 0


def test_is_special(rem_base_points, type_ii_points):
    assert is_special(rem_base_points, 4) is True
    assert is_special(rem_base_points, 3) is False
    assert is_special(type_ii_points, 3) is True


def test_min_vanishing_degree(rem_base_points, type_ii_points):
    assert min_vanishing_degree(type_ii_points) == 2
    assert min_vanishing_degree(rem_base_points) == 3
    corner = lattice_points(LatticePolytope([(0, 0), (2, 0), (0, 2)]))
    assert min_vanishing_degree(corner) == 3


def test_fundamental_form_rem_base_matches_paper(rem_base_points):
    form = fundamental_form(rem_base_points, 4)
    assert form.dim == 2
    red, _ = linalg.rref(linalg.rational_matrix(PAPER_QUARTICS))
    assert form.basis == tuple(red)
    assert form.text() == ["w1^4 + 4*w1^3*w2 + 4*w1*w2^3 + w2^4", "w1^2*w2^2"]


def test_fundamental_form_m1_is_full():
    rng = random.Random(6)
    for _ in range(10):
        s = random_config(rng, 2, 5)
        if not s.differences_generate:
            continue
        assert fundamental_form(s, 1).dim == 2


def test_fundamental_form_dimension_equals_rank_jump():
    rng = random.Random(7)
    for _ in range(25):
        k = rng.choice([2, 3])
        s = random_config(rng, k, rng.randint(4, 9))
        m = rng.choice([2, 3])
        system = build_jets(s, m)
        ranks = system.j_ranks
        assert fundamental_form(s, m).dim == ranks[m] - ranks[m - 1]


def test_rank_j_equals_rank_lt_and_kernels_match():
    rng = random.Random(8)
    for _ in range(25):
        k = rng.choice([2, 3])
        s = random_config(rng, k, rng.randint(3, 8))
        m = rng.choice([1, 2, 3])
        system = build_jets(s, m)
        assert linalg.rank(system.j_matrix) == linalg.rank(system.lt_matrix)
        assert linalg.kernel_basis(system.j_matrix, "right") == \
            linalg.kernel_basis(system.lt_matrix, "right")


def test_h0_chain_monotone():
    rng = random.Random(9)
    for _ in range(15):
        s = random_config(rng, 2, rng.randint(4, 9))
        values = [h0(s, m) for m in range(1, 5)]
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_form_dimension_bounded():
    rng = random.Random(10)
    for _ in range(15):
        k = rng.choice([2, 3])
        s = random_config(rng, k, rng.randint(4, 9))
        m = rng.choice([2, 3])
        assert fundamental_form(s, m).dim <= comb(m + k - 1, k - 1)


def test_translation_invariance():
    rng = random.Random(11)
    for _ in range(15):
        s = random_config(rng, 2, rng.randint(5, 9))
        t = (rng.randint(-6, 6), rng.randint(-6, 6))
        moved = s.translate(t)
        for m in (2, 3):
            assert build_jets(s, m).j_ranks == build_jets(moved, m).j_ranks
            assert is_special(s, m) == is_special(moved, m)
        assert min_vanishing_degree(s) == min_vanishing_degree(moved)


def test_unimodular_equivariance_of_forms():
    rng = random.Random(12)
    for _ in range(10):
        s = random_config(rng, 2, rng.randint(5, 8))
        u = random_unimodular(rng, 2)
        m = rng.choice([2, 3])
        moved = s.apply(u)
        form = fundamental_form(s, m)
        form_moved = fundamental_form(moved, m)
        assert form.dim == form_moved.dim
        # form of U.S equals form of S precomposed with U^T acting on w
        ut = linalg.transpose(u)
        composed = [poly.compose_linear(ut) for poly in form.polynomials()]
        rows = []
        for poly in composed:
            rows.append([poly.terms.get(e, Fraction(0)) for e in form.monomials])
        if rows:
            red, _ = linalg.rref(linalg.rational_matrix(rows))
            red = tuple(r for r in red if any(r))
            assert red == form_moved.basis


def test_min_vanishing_degree_bounded_by_width():
    rng = random.Random(13)
    from tests.conftest import random_full_dim_polytope

    for _ in range(12):
        p = random_full_dim_polytope(rng, 2, coord_bound=4)
        pts = lattice_points(p)
        if len(pts) < 2:
            continue
        assert min_vanishing_degree(pts) <= lattice_width(p).width + 1
