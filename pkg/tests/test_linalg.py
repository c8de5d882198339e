"""Exact linear algebra: ranks, kernels, normal forms, saturation."""

import random
from fractions import Fraction

import pytest

from latticejets import linalg, oracles
from latticejets.errors import ToolkitError
from latticejets.jets import build_jets

U_MATRIX = ((1, -2, 0, 1), (0, 1, -2, 1))  # exponent differences of the worked example


def test_rank_identity():
    assert linalg.rank(linalg.rational_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3


def test_rank_proportional_rows():
    assert linalg.rank(linalg.rational_matrix([[1, 2], [2, 4]])) == 1


def test_rank_empty_matrix_raises():
    with pytest.raises(ToolkitError, match="degenerate"):
        linalg.rank(())


def test_rank_rem_base_jets(rem_base_points):
    # 11 points on a cubic: the order-3 jet matrix cannot have full row rank
    j3 = build_jets(rem_base_points, 3).j_matrix
    assert len(j3) == 10
    assert linalg.rank(j3) == 9
    assert oracles.rank_reference(j3) == 9


def test_rank_agrees_with_reference_on_randoms():
    rng = random.Random(42)
    for _ in range(60):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = tuple(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                        for _ in range(cols)) for _ in range(rows))
        assert linalg.rank(m) == oracles.rank_reference(m)


def test_right_kernel_of_identity_is_empty():
    kb = linalg.kernel_basis(linalg.rational_matrix([[1, 0], [0, 1]]), "right")
    assert kb.dim == 0


def test_left_kernel_type_ii_conics(type_ii_points):
    # conics through the seven points form a pencil: y^2 - y and x*y
    lt = build_jets(type_ii_points, 2).lt_matrix
    kb = linalg.kernel_basis(lt, "left")
    assert kb.dim == 2
    # row order of the matrix: 1, x, y, x^2, x*y, y^2
    y2_minus_y = (0, 0, -1, 0, 0, 1)
    xy = (0, 0, 0, 0, 1, 0)
    for vec in (y2_minus_y, xy):
        stacked = linalg.rational_matrix(list(kb.vectors) + [vec])
        assert linalg.rank(stacked) == kb.dim


def test_left_kernel_rem_base_cubic_unique(rem_base_points):
    lt = build_jets(rem_base_points, 3).lt_matrix
    assert linalg.kernel_basis(lt, "left").dim == 1


def test_kernel_dimension_identity_on_randoms():
    rng = random.Random(1)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = tuple(tuple(Fraction(rng.randint(-5, 5)) for _ in range(cols))
                  for _ in range(rows))
        r = linalg.rank(m)
        assert linalg.kernel_basis(m, "right").dim == cols - r
        assert linalg.kernel_basis(m, "left").dim == rows - r


def test_kernel_is_canonical_rref():
    m = linalg.rational_matrix([[1, 1, 1, 1]])
    kb = linalg.kernel_basis(m, "right")
    # RREF basis: pivots 1, zeros above and below
    red, pivots = linalg.rref(linalg.rational_matrix(kb.vectors))
    assert tuple(red) == kb.vectors
    for r, c in enumerate(pivots):
        assert kb.vectors[r][c] == 1


def test_kernel_vectors_annihilate():
    rng = random.Random(3)
    for _ in range(20):
        m = tuple(tuple(Fraction(rng.randint(-4, 4)) for _ in range(4)) for _ in range(3))
        for v in linalg.kernel_basis(m, "right").vectors:
            assert all(linalg.dot(row, v) == 0 for row in m)
        for v in linalg.kernel_basis(m, "left").vectors:
            assert all(linalg.dot(v, col) == 0 for col in linalg.transpose(m))


def test_smith_normal_form_diag_2_3():
    m = linalg.integer_matrix([[2, 0], [0, 3]])
    u, d, v = linalg.smith_normal_form(m)
    assert linalg.mat_mul(linalg.mat_mul(u, m), v) == d
    assert (d[0][0], d[1][1]) == (1, 6)


def test_smith_normal_form_worked_example_divisors():
    assert linalg.elementary_divisors(linalg.integer_matrix(U_MATRIX)) == (1, 1)


def test_smith_normal_form_zero_row_appended():
    rng = random.Random(9)
    for _ in range(15):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        base = linalg.elementary_divisors(linalg.integer_matrix(m))
        padded = linalg.elementary_divisors(linalg.integer_matrix(m + [[0] * cols]))
        assert base == padded


def test_smith_normal_form_properties_on_randoms():
    rng = random.Random(4)
    for _ in range(40):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = linalg.integer_matrix([[rng.randint(-9, 9) for _ in range(cols)]
                                   for _ in range(rows)])
        u, d, v = linalg.smith_normal_form(m)
        assert linalg.mat_mul(linalg.mat_mul(u, m), v) == d
        assert linalg.bareiss_det(u) in (1, -1)
        assert linalg.bareiss_det(v) in (1, -1)
        diag = [d[i][i] for i in range(min(rows, cols))]
        for a, b in zip(diag, diag[1:]):
            if a:
                assert b % a == 0
            else:
                assert b == 0
        for i, row in enumerate(d):
            for j, x in enumerate(row):
                if i != j:
                    assert x == 0


def test_is_saturated():
    assert linalg.is_saturated(linalg.integer_matrix([[1, 0], [0, 1]])) is True
    assert linalg.is_saturated(linalg.integer_matrix([[2, 0], [0, 1]])) is False
    assert linalg.is_saturated(linalg.integer_matrix(U_MATRIX)) is True


def test_is_saturated_rejects_dependent_rows():
    with pytest.raises(ToolkitError, match="dependent generators"):
        linalg.is_saturated(linalg.integer_matrix([[1, 2], [2, 4]]))


def test_lattice_is_saturated_tolerates_dependent_rows():
    assert linalg.lattice_is_saturated(linalg.integer_matrix([[1, 2], [2, 4]])) is True
    assert linalg.lattice_is_saturated(linalg.integer_matrix([[2, 4], [4, 8]])) is False


def test_integral_kernel_sum_vector():
    assert linalg.integral_kernel(linalg.integer_matrix([[1, 1]])) == ((1, -1),)


def test_integral_kernel_of_identity_is_empty():
    assert linalg.integral_kernel(linalg.identity(3)) == ()


def test_integral_kernel_worked_example_contains_w_and_v():
    kernel = linalg.integral_kernel(linalg.integer_matrix(U_MATRIX))
    assert len(kernel) == 2
    bt = linalg.rational_matrix(linalg.transpose(kernel))
    for target in ((7, 11, 13, 15), (3, 5, 6, 7)):
        sol = linalg.solve(bt, [Fraction(x) for x in target])
        assert sol is not None
        assert all(c.denominator == 1 for c in sol)


def test_integral_kernel_annihilates_and_is_saturated():
    rng = random.Random(5)
    for _ in range(30):
        rows = rng.randint(1, 3)
        cols = rng.randint(2, 5)
        m = linalg.integer_matrix([[rng.randint(-5, 5) for _ in range(cols)]
                                   for _ in range(rows)])
        kernel = linalg.integral_kernel(m)
        for vec in kernel:
            assert all(linalg.dot(row, vec) == 0 for row in m)
        if kernel:
            assert linalg.is_saturated(kernel) is True


def test_determinism_bit_identical():
    m = linalg.integer_matrix([[6, 4, -2], [2, -8, 3]])
    assert linalg.smith_normal_form(m) == linalg.smith_normal_form(m)
    mm = linalg.rational_matrix([[1, 2, 3], [4, 5, 6]])
    assert linalg.kernel_basis(mm, "right") == linalg.kernel_basis(mm, "right")


def test_hermite_normal_form_is_lattice_invariant():
    rng = random.Random(8)
    from tests.conftest import random_unimodular

    for _ in range(20):
        m = linalg.integer_matrix([[rng.randint(-5, 5) for _ in range(4)]
                                   for _ in range(3)])
        u = random_unimodular(rng, 3)
        assert linalg.hermite_normal_form(m) == \
            linalg.hermite_normal_form(linalg.mat_mul(u, m))


def test_complete_to_unimodular():
    for v in ((3, 5, 6, 7), (1, 0, 0), (0, -1), (2, 3), (-3, -5, 7)):
        u = linalg.complete_to_unimodular(v)
        assert u[0] == v
        assert linalg.bareiss_det(u) in (1, -1)
    with pytest.raises(ToolkitError, match="primitive"):
        linalg.complete_to_unimodular((2, 4))


def test_solve_particular_and_inconsistent():
    a = linalg.rational_matrix([[1, 1, 0], [0, 0, 1]])
    sol = linalg.solve(a, [Fraction(3), Fraction(5)])
    assert sol == (Fraction(3), Fraction(0), Fraction(5))  # free variable zeroed
    assert linalg.solve(linalg.rational_matrix([[1], [1]]),
                        [Fraction(0), Fraction(1)]) is None


def test_inverse_unimodular():
    u = linalg.integer_matrix([[2, 1], [1, 1]])
    inv = linalg.inverse_unimodular(u)
    assert linalg.mat_mul(u, inv) == linalg.identity(2)
