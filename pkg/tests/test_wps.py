"""The weighted-projective-space pipeline."""

from fractions import Fraction

import pytest

from latticejets import linalg
from latticejets.errors import BudgetExceededError, InputError
from latticejets.polytope import width_in_direction
from latticejets.wps import (BinomialGenerator, WeightVector, load_table,
                             lowest_degree_binomials, project_to_3d,
                             rows_by_hash, rr_polytope, screen, width_direction)

W = WeightVector((7, 11, 13, 15))


def test_weight_vector_validation():
    with pytest.raises(InputError):
        WeightVector((2, 4, 6, 8))
    with pytest.raises(InputError):
        WeightVector((0, 1, 1, 1))
    with pytest.raises(InputError):
        WeightVector((1, 1, 1))


def test_well_formed_flag():
    assert W.well_formed is True
    # 6 = 1 + 2 + 3 lies in the semigroup of the other weights
    assert WeightVector((1, 2, 3, 6)).well_formed is False


def test_rr_polytope_unit_weights():
    rr = rr_polytope(WeightVector((1, 1, 1, 1)))
    assert set(rr.vertices) == {(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}


def test_rr_polytope_worked_example():
    rr = rr_polytope(W)
    assert set(rr.vertices) == {(2145, 0, 0, 0), (0, 1365, 0, 0),
                                (0, 0, 1155, 0), (0, 0, 0, 1001)}
    for v in rr.vertices:
        assert sum(a * b for a, b in zip(v, W.weights)) == W.lcm


def test_lowest_degree_binomials_worked_example():
    chosen, alternatives = lowest_degree_binomials(W, 2)
    assert chosen[0].u == (1, -2, 0, 1)
    assert chosen[0].degree == 22
    assert chosen[0].text() == "x1*x4 - x2^2"
    assert chosen[1].u == (0, 1, -2, 1)
    assert chosen[1].degree == 26
    assert chosen[1].text() == "x2*x4 - x3^2"
    assert alternatives == []


def test_lowest_degree_binomials_unit_weights():
    chosen, _ = lowest_degree_binomials(WeightVector((1, 1, 1, 1)), 2)
    assert all(b.degree == 1 for b in chosen)


def test_binomial_properties_on_table_rows():
    for row in load_table()[:10]:
        w = WeightVector(row.weights)
        chosen, _ = lowest_degree_binomials(w, 2)
        for b in chosen:
            assert sum(a * x for a, x in zip(b.u, w.weights)) == 0
            plus_deg = sum(a * x for a, x in zip(b.u_plus, w.weights))
            minus_deg = sum(a * x for a, x in zip(b.u_minus, w.weights))
            assert plus_deg == minus_deg == b.degree


def test_degree_budget_error():
    with pytest.raises(BudgetExceededError):
        lowest_degree_binomials(W, 2, budget=10)


def test_width_direction_worked_example():
    v = width_direction(W, (1, -2, 0, 1), (0, 1, -2, 1))
    assert v == (3, 5, 6, 7)
    # (w, v~) is a basis of a saturated rank-2 lattice
    assert linalg.elementary_divisors(
        linalg.integer_matrix([W.weights, v])) == (1, 1)


def test_width_direction_vertex_values():
    rr = rr_polytope(W)
    values = sorted(sum(a * b for a, b in zip(x, (3, 5, 6, 7))) for x in rr.vertices)
    assert values == [6435, 6825, 6930, 7007]
    assert values[-1] - values[0] == 572


def test_width_direction_rejects_non_orthogonal():
    with pytest.raises(InputError):
        width_direction(W, (1, 0, 0, 0), (0, 1, -2, 1))


def test_projection_preserves_width():
    rr = rr_polytope(W)
    q, v = project_to_3d(rr, (3, 5, 6, 7), W)
    assert v.coords == (1, 0, 0)
    assert q.dim == 3 and q.is_full_dim
    assert width_in_direction(q, v) == 572


def test_projection_alternative_basis_same_verdicts():
    from latticejets.screen import corollary_check

    rr = rr_polytope(W)
    default_basis = linalg.integral_kernel(linalg.integer_matrix([W.weights]))
    # a different (still valid) basis of the same lattice
    u = linalg.integer_matrix([[1, 1, 0], [0, 1, 0], [1, 0, 1]])
    other_basis = linalg.mat_mul(u, default_basis)
    q1, v1 = project_to_3d(rr, (3, 5, 6, 7), W)
    q2, v2 = project_to_3d(rr, (3, 5, 6, 7), W, basis=other_basis)
    assert width_in_direction(q1, v1) == width_in_direction(q2, v2) == 572
    r1 = corollary_check(q1, v1)
    r2 = corollary_check(q2, v2)
    assert (r1.cond1, r1.cond2, r1.cond3, r1.verified) == \
        (r2.cond1, r2.cond2, r2.cond3, r2.verified)
    assert len(r1.slice_config) == len(r2.slice_config)


def test_projection_recovers_weights_if_omitted():
    rr = rr_polytope(W)
    q, v = project_to_3d(rr, (3, 5, 6, 7))
    assert width_in_direction(q, v) == 572


def test_screen_worked_example():
    report = screen(W)
    assert report.m == 572
    assert report.verdict == "nef_not_semiample"
    assert report.nef.bound == Fraction(105, 4)
    assert report.nef.degrees == (22, 26)
    assert set(report.vertex_values) == {6435, 6825, 6930, 7007}
    # slice: two lattice points one level above the minimum, primitive step
    sl = report.corollary.slice_config.points
    assert len(sl) == 2
    step = tuple(a - b for a, b in zip(sl[1], sl[0]))
    from math import gcd
    g = 0
    for x in step:
        g = gcd(g, x)
    assert g == 1


def test_screen_v_tilde_well_defined_mod_sign_and_weights():
    report = screen(W)
    diff_plus = tuple(a - b for a, b in zip(report.v_tilde, (3, 5, 6, 7)))
    diff_minus = tuple(a + b for a, b in zip(report.v_tilde, (3, 5, 6, 7)))
    def is_weight_multiple(d):
        for t in range(-5, 6):
            if d == tuple(t * x for x in W.weights):
                return True
        return False
    assert is_weight_multiple(diff_plus) or is_weight_multiple(diff_minus)


def test_screen_unit_weights_inconclusive():
    report = screen(WeightVector((1, 1, 1, 1)))
    assert report.verdict == "inconclusive"
    assert report.corollary.cond1 is False


def test_screen_three_binomial_row():
    report = screen(WeightVector((23, 27, 29, 30)))
    assert report.m == 1827
    assert report.verdict == "nef_not_semiample"


def test_screen_json_roundtrip():
    import json

    blob = screen(W).to_json()
    assert json.loads(json.dumps(blob)) == blob
    assert blob["m"] == 572
    assert blob["verdict"] == "nef_not_semiample"


def test_load_table_has_93_rows():
    rows = load_table()
    assert len(rows) == 93
    lookup = {row.weights: row.m for row in rows}
    assert lookup[(7, 11, 13, 15)] == 572
    assert lookup[(23, 27, 29, 30)] == 1827
    assert lookup[(13, 21, 28, 30)] == 80
    assert lookup[(17, 18, 20, 27)] == 162


def test_rows_by_hash_deterministic():
    rows = load_table()
    first = rows_by_hash(rows, 10)
    second = rows_by_hash(rows, 10)
    assert first == second
    assert len(first) == 10


def test_spot_rows():
    for weights, m in [((18, 19, 21, 28), 76), ((11, 16, 25, 28), 550)]:
        report = screen(WeightVector(weights))
        assert report.m == m
        assert report.verdict == "nef_not_semiample"


def test_saturate_generators_noop_when_saturated():
    from latticejets.wps import saturate_generators

    chosen, _ = lowest_degree_binomials(W, 2)
    extended = saturate_generators(W, chosen[0].u, chosen[1].u, list(chosen))
    assert extended == list(chosen)


def test_saturate_generators_extends_an_unsaturated_seed():
    # seed with doubled relation vectors: index 4, needs real binomials
    from latticejets.wps import saturate_generators

    chosen, _ = lowest_degree_binomials(W, 2)
    u1, u2 = chosen[0].u, chosen[1].u
    doubled = [BinomialGenerator(u=tuple(2 * x for x in u1), degree=44),
               BinomialGenerator(u=tuple(2 * x for x in u2), degree=52)]
    extended = saturate_generators(W, u1, u2, doubled)
    rows = [g.u for g in extended]
    assert linalg.lattice_is_saturated(linalg.integer_matrix(rows))
    assert len(extended) > 2
    # every added generator lies in the rational plane of u1 and u2
    for g in extended[2:]:
        assert linalg.rank(linalg.rational_matrix([u1, u2, g.u])) == 2


def test_saturate_generators_bounded_retries():
    from latticejets.wps import saturate_generators

    chosen, _ = lowest_degree_binomials(W, 2)
    u1, u2 = chosen[0].u, chosen[1].u
    doubled = [BinomialGenerator(u=tuple(2 * x for x in u1), degree=44),
               BinomialGenerator(u=tuple(2 * x for x in u2), degree=52)]
    with pytest.raises(BudgetExceededError):
        saturate_generators(W, u1, u2, doubled, max_extra=0)


def test_reproduce_table_parallel_matches_sequential():
    from latticejets.wps import reproduce_table

    seq = reproduce_table()
    par = reproduce_table(jobs=2)
    assert [(r.row, r.computed_m, r.verdict) for r in seq] == \
        [(r.row, r.computed_m, r.verdict) for r in par]


def test_scan_weights_small_range():
    from latticejets.wps import scan_weights

    reports = list(scan_weights(8))
    assert reports  # every gcd-1 well-formed quadruple in range gets screened
    for item in reports:
        assert isinstance(item, dict) or item.verdict in ("nef_not_semiample",
                                                          "inconclusive")


def test_width_invariant_under_v_tilde_shifts():
    # adding weight multiples to v~ or negating it never changes the width
    for row in load_table()[:5]:
        w = WeightVector(row.weights)
        chosen, _ = lowest_degree_binomials(w, 2)
        vt = width_direction(w, chosen[0].u, chosen[1].u)
        rr = rr_polytope(w)

        def rr_width(vec):
            values = [sum(a * b for a, b in zip(x, vec)) for x in rr.vertices]
            return max(values) - min(values)

        base = rr_width(vt)
        assert base == row.m
        for t in (-3, -1, 1, 4):
            shifted = tuple(a + t * b for a, b in zip(vt, w.weights))
            assert rr_width(shifted) == base
        assert rr_width(tuple(-a for a in vt)) == base
