"""Screening of weighted projective 3-spaces for nef-but-not-semiample classes.

Pipeline per weight vector w = (a1, a2, a3, a4):

1. the two lowest-degree independent binomial relations among the weighted
   monomials (exponent differences u1, u2, both orthogonal to w);
2. a vector v~ completing w to a Z-basis of the rank-2 lattice orthogonal
   to u1 and u2 (the tangent direction of the one-parameter subgroup);
3. m = the width of the Riemann-Roch simplex in direction v~;
4. projection of the simplex to a full-dimensional lattice polytope in Z^3
   with v~ mapped to (1,0,0), followed by the obstruction conditions;
5. the nefness certificate: generator degrees below lcm(w)/m plus
   saturation of the generated relation lattice.

The verdict is nef_not_semiample only when every predicate passes. Widths
of the Riemann-Roch simplex are not globally certified (the certification
box is astronomically large); v~ is the direction observed to realize the
width, and the published m values are reproduced exactly from it.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd, lcm
from typing import Optional, Sequence

from . import linalg
from .errors import BudgetExceededError, InputError, InvariantError, ToolkitError
from .polytope import Direction, LatticePolytope, point_key, primitive, width_in_direction
from .screen import CorollaryReport, NefReport, corollary_check, nef_check

DEGREE_BUDGET = 4000
MAX_EXTRA_GENERATORS = 5


@dataclass(frozen=True)
class WeightVector:
    """Weights of a weighted projective 3-space."""

    weights: tuple[int, int, int, int]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != 4 or any(x <= 0 for x in w):
            raise InputError("need four positive weights")
        g = 0
        for x in w:
            g = gcd(g, x)
        if g != 1:
            raise InputError("weights must have gcd 1")

    @property
    def lcm(self) -> int:
        return lcm(*self.weights)

    @property
    def well_formed(self) -> bool:
        """No weight lies in the numerical semigroup of the other three."""
        return not any(_in_semigroup(a, [b for j, b in enumerate(self.weights) if j != i])
                       for i, a in enumerate(self.weights))


def _in_semigroup(target: int, gens: Sequence[int]) -> bool:
    reachable = [False] * (target + 1)
    reachable[0] = True
    for value in range(1, target + 1):
        reachable[value] = any(value >= g and reachable[value - g] for g in gens)
    return reachable[target]


@dataclass(frozen=True)
class BinomialGenerator:
    """Binomial x^{u+} - x^{u-} of the weighted relation ideal."""

    u: tuple[int, int, int, int]
    degree: int

    @property
    def u_plus(self) -> tuple[int, ...]:
        return tuple(max(x, 0) for x in self.u)

    @property
    def u_minus(self) -> tuple[int, ...]:
        return tuple(max(-x, 0) for x in self.u)

    def text(self) -> str:
        return f"{_monomial_text(self.u_plus)} - {_monomial_text(self.u_minus)}"

    def to_json(self) -> dict:
        return {"u": list(self.u), "degree": self.degree, "binomial": self.text()}


def _monomial_text(e) -> str:
    parts = []
    for i, a in enumerate(e):
        if a == 1:
            parts.append(f"x{i + 1}")
        elif a > 1:
            parts.append(f"x{i + 1}^{a}")
    return "*".join(parts) if parts else "1"


def _monomials_of_weighted_degree(w: Sequence[int], d: int):
    w1, w2, w3, w4 = w
    for a1 in range(d // w1 + 1):
        r1 = d - a1 * w1
        for a2 in range(r1 // w2 + 1):
            r2 = r1 - a2 * w2
            for a3 in range(r2 // w3 + 1):
                r3 = r2 - a3 * w3
                if r3 % w4 == 0:
                    yield (a1, a2, a3, r3 // w4)


def _sign_normalized(u):
    for x in u:
        if x > 0:
            return tuple(u)
        if x < 0:
            return tuple(-y for y in u)
    raise InvariantError("zero exponent difference")


class _BinomialStream:
    """Binomial candidates by ascending weighted degree, canonically ordered.

    Within one degree, candidates are the primitive sign-normalized exponent
    differences of monomial pairs, ordered by graded-lex on u+; each is
    yielded once (non-primitive differences are skipped: their primitive
    version appeared at a lower degree).
    """

    def __init__(self, w: WeightVector, budget: int = DEGREE_BUDGET):
        self.w = w.weights
        self.budget = budget
        self.degree = 0
        self.seen: set = set()
        self.queue: list[BinomialGenerator] = []

    def __iter__(self):
        return self

    def __next__(self) -> BinomialGenerator:
        while not self.queue:
            self.degree += 1
            if self.degree > self.budget:
                raise BudgetExceededError(
                    f"no further binomials up to weighted degree {self.budget}",
                    diagnostics={"weights": self.w, "degree_budget": self.budget})
            mons = list(_monomials_of_weighted_degree(self.w, self.degree))
            if len(mons) < 2:
                continue
            found = {}
            for i in range(len(mons)):
                for j in range(i + 1, len(mons)):
                    u = _sign_normalized(tuple(a - b for a, b in zip(mons[i], mons[j])))
                    g = 0
                    for x in u:
                        g = gcd(g, x)
                    if g != 1 or u in self.seen:
                        continue
                    found[u] = BinomialGenerator(u=u, degree=self.degree)
            # ties within one degree: graded-lex-minimal u+ goes first
            ordered = sorted(found, key=lambda u: point_key(tuple(max(x, 0) for x in u)))
            for u in ordered:
                self.seen.add(u)
                self.queue.append(found[u])
        return self.queue.pop(0)


def lowest_degree_binomials(w: WeightVector, count: int = 2,
                            budget: int = DEGREE_BUDGET):
    """First ``count`` linearly independent lowest-degree binomials.

    Returns (chosen, alternatives): alternatives are same-degree primitive
    candidates that were valid but not selected (tie bookkeeping).
    """
    chosen: list[BinomialGenerator] = []
    alternatives: list[BinomialGenerator] = []
    rows: list[tuple[int, ...]] = []
    try:
        for cand in _BinomialStream(w, budget):
            if len(chosen) == count:
                if cand.degree == chosen[-1].degree:
                    alternatives.append(cand)  # a genuine tie at the last degree
                    continue
                break
            if linalg.rank(linalg.rational_matrix(rows + [cand.u])) == len(rows) + 1:
                rows.append(cand.u)
                chosen.append(cand)
            elif chosen and cand.degree == chosen[-1].degree:
                alternatives.append(cand)
    except BudgetExceededError:
        if len(chosen) < count:
            raise
    if len(chosen) < count:
        raise BudgetExceededError(
            f"found only {len(chosen)} independent binomials within the budget",
            diagnostics={"weights": w.weights, "budget": budget})
    return chosen, alternatives


def rr_polytope(w: WeightVector) -> LatticePolytope:
    """Riemann-Roch simplex {u >= 0 : u.w = lcm(w)} in Z^4."""
    big = w.lcm
    verts = []
    for i, a in enumerate(w.weights):
        v = [0, 0, 0, 0]
        v[i] = big // a
        verts.append(tuple(v))
    return LatticePolytope(verts, 4)


def width_direction(w: WeightVector, u1: Sequence[int], u2: Sequence[int]) -> tuple[int, ...]:
    """v~ completing w to a Z-basis of the lattice orthogonal to u1 and u2.

    Normalized modulo sign and modulo adding multiples of w: the first
    coordinate is reduced into [0, w1) and the lexicographically smaller of
    the two sign choices is returned.
    """
    for u in (u1, u2):
        if sum(a * b for a, b in zip(u, w.weights)) != 0:
            raise InputError(f"exponent vector {u} is not orthogonal to the weights")
    if linalg.rank(linalg.rational_matrix([u1, u2])) != 2:
        raise InputError("u-vectors must be linearly independent")
    kernel = linalg.integral_kernel(linalg.integer_matrix([tuple(u1), tuple(u2)]))
    if len(kernel) != 2:
        raise InvariantError("orthogonal lattice of two independent vectors must have rank 2")
    bt = linalg.rational_matrix(linalg.transpose(kernel))
    sol = linalg.solve(bt, [Fraction(x) for x in w.weights])
    if sol is None or any(c.denominator != 1 for c in sol):
        raise InvariantError("weights do not lie in the orthogonal lattice")
    alpha, beta = int(sol[0]), int(sol[1])
    if gcd(alpha, beta) != 1:
        raise InvariantError("weights are imprimitive in the orthogonal lattice")
    s, t = _bezout(alpha, beta)
    # det [[alpha, beta], [-t, s]] = alpha*s + beta*t = 1
    v = tuple(-t * b1 + s * b2 for b1, b2 in zip(kernel[0], kernel[1]))
    return _reduce_mod_weights(v, w.weights)


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _reduce_mod_weights(v, w):
    candidates = []
    for sign in (1, -1):
        vv = tuple(sign * x for x in v)
        q = vv[0] // w[0]
        candidates.append(tuple(x - q * y for x, y in zip(vv, w)))
    return min(candidates)


def project_to_3d(rr: LatticePolytope, v_tilde: Sequence[int],
                  w: WeightVector | None = None,
                  basis: linalg.IntMatrix | None = None):
    """Quotient the weight hyperplane to Z^3, sending v~ to (1, 0, 0).

    Returns (polytope, direction): the polytope is translated so the unique
    v~-minimizing vertex is the origin, and the level function is the first
    coordinate, so widths transfer unchanged.
    """
    if w is None:
        diffs = _vertex_differences(rr)
        normal_lattice = linalg.integral_kernel(linalg.integer_matrix(diffs))
        if len(normal_lattice) != 1:
            raise InputError("polytope does not lie in a hyperplane")
        wv = primitive(normal_lattice[0])
        if all(x < 0 for x in wv):
            wv = tuple(-x for x in wv)
        w = WeightVector(wv)
    if basis is None:
        basis = linalg.integral_kernel(linalg.integer_matrix([w.weights]))
    if len(basis) != 3:
        raise InputError("weight-orthogonal basis must have rank 3")
    values = [sum(a * b for a, b in zip(x, v_tilde)) for x in rr.vertices]
    lo = min(values)
    anchors = [x for x, val in zip(rr.vertices, values) if val == lo]
    anchor = min(anchors, key=point_key)
    bt = linalg.rational_matrix(linalg.transpose(basis))
    coords = []
    for x in rr.vertices:
        diff = [Fraction(a - b) for a, b in zip(x, anchor)]
        sol = linalg.solve(bt, diff)
        if sol is None or any(c.denominator != 1 for c in sol):
            raise InvariantError("vertex outside the weight-orthogonal lattice")
        coords.append(tuple(int(c) for c in sol))
    v_q = tuple(sum(a * b for a, b in zip(row, v_tilde)) for row in basis)
    if not any(v_q):
        raise InputError("direction is a multiple of the weights")
    g = 0
    for x in v_q:
        g = gcd(g, x)
    if g != 1:
        raise InvariantError(f"projected direction {v_q} is imprimitive")
    u = linalg.complete_to_unimodular(v_q)
    new_coords = [linalg.mat_vec(u, c) for c in coords]
    return LatticePolytope(new_coords, 3), Direction((1, 0, 0))


def _vertex_differences(p: LatticePolytope):
    base = p.vertices[0]
    return [tuple(a - b for a, b in zip(x, base)) for x in p.vertices[1:]]


def saturate_generators(w: WeightVector, u1, u2, generators,
                        budget: int = DEGREE_BUDGET,
                        max_extra: int = MAX_EXTRA_GENERATORS):
    """Extend the generators until they span a saturated lattice.

    Candidates come from the binomial stream, restricted to the rational
    plane of u1 and u2 (relations vanishing on the one-parameter subgroup);
    only candidates that strictly improve the lattice index are kept, and
    the number of extensions is bounded.
    """
    l_rows = [g.u for g in generators]
    extensions = 0
    stream_iter = None
    while not linalg.lattice_is_saturated(linalg.integer_matrix(l_rows)):
        if extensions >= max_extra:
            raise BudgetExceededError(
                "saturation not reached within the generator budget",
                diagnostics={"weights": w.weights, "generators": l_rows})
        if stream_iter is None:
            skip = {g.u for g in generators}
            stream_iter = (b for b in _BinomialStream(w, budget) if b.u not in skip)
        cand = next(stream_iter)
        if linalg.rank(linalg.rational_matrix([u1, u2, cand.u])) != 2:
            continue
        trial = l_rows + [cand.u]
        if linalg.elementary_divisors(linalg.integer_matrix(trial)) == \
           linalg.elementary_divisors(linalg.integer_matrix(l_rows)):
            continue  # no index improvement
        generators = generators + [cand]
        l_rows = trial
        extensions += 1
    return generators


# ---------------------------------------------------------------------------
# the full screen
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScreenReport:
    """Full audit record of one weight vector's screening."""

    weights: WeightVector
    lcm: int
    binomials: tuple[BinomialGenerator, ...]
    alternatives: tuple[BinomialGenerator, ...]
    v_tilde: tuple[int, int, int, int]
    m: int
    vertex_values: tuple[int, ...]
    projected: LatticePolytope
    direction: Direction
    corollary: CorollaryReport
    nef: NefReport
    verdict: str  # "nef_not_semiample" | "inconclusive"

    def to_json(self) -> dict:
        return {
            "weights": list(self.weights.weights),
            "well_formed": self.weights.well_formed,
            "lcm": self.lcm,
            "binomials": [b.to_json() for b in self.binomials],
            "alternatives": [b.to_json() for b in self.alternatives],
            "v_tilde": list(self.v_tilde),
            "vertex_values": list(self.vertex_values),
            "m": self.m,
            "projected_polytope": self.projected.to_json(),
            "direction": list(self.direction.coords),
            "corollary": self.corollary.to_json(),
            "nef": self.nef.to_json(),
            "verdict": self.verdict,
        }


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except BudgetExceededError:
        raise
    except ToolkitError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def screen(w: WeightVector | Sequence[int], budget: int = DEGREE_BUDGET) -> ScreenReport:
    """Run the whole pipeline on one weight vector."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    big = w.lcm
    chosen, alternatives = _stage("binomials", lowest_degree_binomials, w, 2, budget)
    u1, u2 = chosen[0], chosen[1]
    v_canonical = _stage("width_direction", width_direction, w, u1.u, u2.u)
    rr = _stage("rr_polytope", rr_polytope, w)
    # the obstruction conditions live on the min side of the direction and
    # v~ is only determined up to sign, so evaluate both orientations and
    # keep the passing one (canonical sign first)
    best = None
    for v_tilde in (v_canonical, tuple(-x for x in v_canonical)):
        values = tuple(sum(a * b for a, b in zip(x, v_tilde)) for x in rr.vertices)
        m = max(values) - min(values)
        projected, direction = _stage("projection", project_to_3d, rr, v_tilde, w)
        if width_in_direction(projected, direction) != m:
            raise InvariantError("projection changed the width")
        corollary = _stage("corollary", corollary_check, projected, direction)
        if best is None:
            best = (v_tilde, values, m, projected, direction, corollary)
        if corollary.all_conditions and corollary.verified:
            best = (v_tilde, values, m, projected, direction, corollary)
            break
    v_tilde, values, m, projected, direction, corollary = best

    generators = saturate_generators(w, u1.u, u2.u, list(chosen), budget=budget)
    l_rows = [g.u for g in generators]

    nef = _stage("nef", nef_check, [g.degree for g in generators], big, m,
                 linalg.integer_matrix(l_rows))
    ok = corollary.all_conditions and corollary.verified and nef.nef
    return ScreenReport(
        weights=w, lcm=big, binomials=tuple(generators),
        alternatives=tuple(alternatives), v_tilde=v_tilde, m=m,
        vertex_values=values, projected=projected, direction=direction,
        corollary=corollary, nef=nef,
        verdict="nef_not_semiample" if ok else "inconclusive")


# ---------------------------------------------------------------------------
# the published 93-row table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    weights: tuple[int, int, int, int]
    m: int


@dataclass(frozen=True)
class TableRowResult:
    row: TableRow
    computed_m: int
    verdict: str
    report: ScreenReport

    @property
    def passed(self) -> bool:
        return self.computed_m == self.row.m and self.verdict == "nef_not_semiample"


def load_table(path: Optional[str] = None) -> list[TableRow]:
    """The bundled 93-row fixture (or an alternative CSV of the same shape)."""
    if path is None:
        source = resources.files("latticejets.data").joinpath("nonmds_table.csv")
        text = source.read_text()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    rows = []
    for record in csv.DictReader(text.splitlines()):
        try:
            rows.append(TableRow(
                weights=(int(record["a1"]), int(record["a2"]),
                         int(record["a3"]), int(record["a4"])),
                m=int(record["m"])))
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad table row {record}: {exc}") from exc
    return rows


def _screen_row(row: TableRow) -> TableRowResult:
    report = screen(WeightVector(row.weights))
    return TableRowResult(row=row, computed_m=report.m,
                          verdict=report.verdict, report=report)


def reproduce_table(path: Optional[str] = None, jobs: int = 1) -> list[TableRowResult]:
    """Screen every table row; results in row order regardless of job count."""
    rows = load_table(path)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_screen_row, rows))
    return [_screen_row(row) for row in rows]


def rows_by_hash(rows: Sequence[TableRow], count: int) -> list[TableRow]:
    """Deterministic pseudo-random row sample: sort by sha256 of the weights."""
    def key(row: TableRow):
        text = ",".join(map(str, row.weights))
        return hashlib.sha256(text.encode()).hexdigest()

    return sorted(rows, key=key)[:count]


def scan_weights(max_weight: int, min_weight: int = 2, well_formed_only: bool = True,
                 limit: Optional[int] = None, budget: int = DEGREE_BUDGET):
    """Screen all ordered weight quadruples in a range; yield the reports.

    Exploratory mode beyond the published table: quadruples are strictly
    increasing with gcd 1. Stage errors and budget exhaustion on individual
    quadruples are recorded as skips, not fatal.
    """
    from itertools import combinations as _comb

    hits = 0
    for quad in _comb(range(min_weight, max_weight + 1), 4):
        g = 0
        for x in quad:
            g = gcd(g, x)
        if g != 1:
            continue
        w = WeightVector(quad)
        if well_formed_only and not w.well_formed:
            continue
        try:
            report = screen(w, budget=budget)
        except (BudgetExceededError, ToolkitError) as exc:
            yield {"weights": list(quad), "error": str(exc)}
            continue
        yield report
        if report.verdict == "nef_not_semiample":
            hits += 1
            if limit is not None and hits >= limit:
                return
