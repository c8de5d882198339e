"""The independent brute-force routes themselves."""

import random
from fractions import Fraction

from latticejets import linalg, oracles
from latticejets.polytope import LatticePolytope
from tests.conftest import random_full_dim_polytope


def test_rank_reference_known_values():
    assert oracles.rank_reference([[1, 0], [0, 1]]) == 2
    assert oracles.rank_reference([[1, 2], [2, 4]]) == 1
    assert oracles.rank_reference([[Fraction(1, 2), Fraction(1, 3)]]) == 1


def test_primitive_directions_dedupe_sign():
    dirs = oracles.primitive_directions(2, 1)
    assert set(dirs) == {(0, 1), (1, -1), (1, 0), (1, 1)}


def test_same_span():
    a = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    b = ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1)))
    assert oracles.same_span(a, b)
    assert not oracles.same_span(a[:1], b)


def test_brute_force_width_matches_python_fallback():
    rng = random.Random(71)
    for _ in range(10):
        p = random_full_dim_polytope(rng, 2, coord_bound=5)
        fast_w, fast_dir = oracles.brute_force_width(p, bound=6)
        # force the pure-python branch by faking a huge coordinate bound check
        dirs = oracles.primitive_directions(2, 6)
        best = None
        for v in dirs:
            vals = [sum(a * b for a, b in zip(v, x)) for x in p.vertices]
            w = max(vals) - min(vals)
            best = w if best is None else min(best, w)
        assert fast_w == best


def test_brute_force_width_big_coordinates_python_path():
    # coordinates large enough to route around the int64 fast path
    big = 10 ** 18
    p = LatticePolytope([(0, 0), (big, 1), (1, big)])
    w, direction = oracles.brute_force_width(p, bound=1)
    assert w > 0
    assert direction.coords in ((0, 1), (1, -1), (1, 0), (1, 1))


def test_width_oracle_agrees_record():
    p = LatticePolytope([(0, 0), (0, 1), (2, 1), (3, 0)])
    record = oracles.width_oracle_agrees(p)
    assert record["agree"] and record["main_width"] == 1


def test_rank_oracle_agrees_record():
    record = oracles.rank_oracle_agrees([[1, 2, 3], [2, 4, 6], [0, 1, 0]])
    assert record["agree"] and record["main_rank"] == 2


def test_right_kernel_reference_span():
    m = linalg.rational_matrix([[1, 1, 1, 1], [0, 1, 2, 3]])
    main = linalg.kernel_basis(m, "right").vectors
    ref = oracles.right_kernel_reference(m)
    assert oracles.same_span(main, ref)
