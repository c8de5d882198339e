"""Non-semiampleness and nefness screening over a polarized lattice polytope.

The obstruction test takes a width direction v and checks three exact
conditions: the extreme hyperplanes of v touch the polytope in single
vertices; the lattice points one level above the minimum affinely span a
subspace of codimension at least two; and the segment joining the extreme
vertices misses that span. When all three hold, every lattice point of the
polytope lies on an explicit degree-m hypersurface whose top form is the
m-th power of the level function: an affine paraboloid catches the three
extreme levels and one stacked hyperplane per remaining level.

The witness stays factored (paraboloid plus a level range); expanding a
degree-4275 polynomial in three variables is neither feasible nor useful.
Verification is slice-wise and never enumerates the full polytope; the
factored hyperplane levels vanish identically by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .errors import InputError, InvariantError, ToolkitError
from .poly import MultiPoly
from .polytope import (Direction, LatticePolytope, PointConfig, lattice_width,
                       point_key, slice_points)


@dataclass(frozen=True)
class CorollaryWitness:
    """Degree-m hypersurface through all lattice points, in factored form.

    Vanishing set: the paraboloid covers levels min, min+1 and max; the
    factors s - i (s the integer level form, i = 1 .. m-2) cover every level
    in between identically.
    """

    direction: Direction
    min_level: int
    max_level: int
    level_form: MultiPoly      # s = <x, v> - (min+1)
    f: MultiPoly               # vanishes on Lambda and at p_min
    g: MultiPoly               # s - f; vanishes on Lambda and at p_max
    paraboloid: MultiPoly      # (f+g)^2 - f(p_max) f - g(p_min) g

    @property
    def degree(self) -> int:
        return self.max_level - self.min_level

    def is_zero_at(self, point) -> bool:
        level = self.direction.pair(point)
        if self.min_level + 2 <= level <= self.max_level - 1:
            return True
        return self.paraboloid.evaluate(point) == 0

    def expanded(self, term_budget: int = 200_000) -> MultiPoly:
        """Full expansion (small widths only; raises past the budget)."""
        m = self.degree
        k = len(self.direction.coords)
        from math import comb
        if comb(m + k, k) > term_budget:
            raise ToolkitError(f"expansion of a degree-{m} witness exceeds the budget")
        out = self.paraboloid
        for i in range(1, m - 1):
            out = out * (self.level_form - MultiPoly.constant(k, i))
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "level_form": self.level_form.integer_normalized().text("x"),
            "paraboloid": self.paraboloid.integer_normalized().text("x"),
            "hyperplane_levels": [self.min_level + 2, self.max_level - 1],
            "f": self.f.text("x"),
            "g": self.g.text("x"),
        }


@dataclass(frozen=True)
class CorollaryReport:
    """Audit record of the three-condition obstruction test."""

    direction: Direction
    lw: int
    p_min: Optional[tuple]
    p_max: Optional[tuple]
    slice_config: PointConfig
    cond1: bool
    cond2: bool
    cond3: bool
    cond2_vacuous: bool
    witness: Optional[CorollaryWitness]
    verified: bool

    @property
    def all_conditions(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3

    def to_json(self) -> dict:
        return {
            "direction": list(self.direction.coords),
            "lw": self.lw,
            "p_min": list(self.p_min) if self.p_min else None,
            "p_max": list(self.p_max) if self.p_max else None,
            "slice_points": [list(p) for p in self.slice_config.points],
            "cond1_extreme_vertices_unique": self.cond1,
            "cond2_slice_span_codim_ge_2": self.cond2,
            "cond2_vacuous": self.cond2_vacuous,
            "cond3_line_misses_span": self.cond3,
            "witness": self.witness.to_json() if self.witness else None,
            "verified": self.verified,
        }


def corollary_check(p: LatticePolytope, v: Direction) -> CorollaryReport:
    """Evaluate the obstruction conditions for (P, v) and build the witness.

    The caller asserts that v realizes the lattice width; the report records
    lw_v(P) without re-certifying global minimality.
    """
    if not p.is_full_dim:
        raise InputError("obstruction test needs a full-dimensional polytope")
    values = [v.pair(x) for x in p.vertices]
    lo, hi = min(values), max(values)
    lw = hi - lo
    mins = [x for x, val in zip(p.vertices, values) if val == lo]
    maxs = [x for x, val in zip(p.vertices, values) if val == hi]
    cond1 = len(mins) == 1 and len(maxs) == 1
    p_min = min(mins, key=point_key)
    p_max = min(maxs, key=point_key)

    slice_cfg = slice_points(p, v, lo + 1)
    diffs = _difference_vectors(slice_cfg.points)
    span_rank = linalg.rank(linalg.rational_matrix(diffs)) if diffs else 0
    cond2_vacuous = len(slice_cfg) == 0
    cond2 = cond2_vacuous or (p.dim - span_rank >= 2)

    cond3 = _line_misses_span(p_min, p_max, slice_cfg.points)

    witness = None
    verified = False
    if cond1 and cond2 and cond3:
        witness = _build_witness(p, v, p_min, p_max, slice_cfg, lo, hi)
        verified = _verify_witness(p, v, witness, p_min, p_max, slice_cfg, lo, hi)
    return CorollaryReport(direction=v, lw=lw, p_min=p_min, p_max=p_max,
                           slice_config=slice_cfg, cond1=cond1, cond2=cond2,
                           cond3=cond3, cond2_vacuous=cond2_vacuous,
                           witness=witness, verified=verified)


def _difference_vectors(points):
    if len(points) < 2:
        return []
    base = points[0]
    return [tuple(a - b for a, b in zip(q, base)) for q in points[1:]]


def _line_misses_span(p_min, p_max, span_points) -> bool:
    """True iff the segment's line does not meet the affine span of the points."""
    if not span_points:
        return True
    k = len(p_min)
    dirs = _difference_vectors(span_points)
    seg = tuple(a - b for a, b in zip(p_max, p_min))
    # p_min + alpha*seg = q0 + sum beta_i d_i  <=>  solvable in (alpha, beta)
    cols = [seg] + [tuple(-x for x in d) for d in dirs]
    a = tuple(tuple(Fraction(col[i]) for col in cols) for i in range(k))
    b = [Fraction(q - pm) for q, pm in zip(span_points[0], p_min)]
    return linalg.solve(a, b) is None


def _build_witness(p, v, p_min, p_max, slice_cfg, lo, hi) -> CorollaryWitness:
    lw = hi - lo
    if lw < 2:
        raise InvariantError("witness construction needs width >= 2")
    k = p.dim
    # f affine with f|Lambda = 0, f(p_min) = 0, f(p_max) = lw - 1
    rows = []
    rhs = []
    for q in list(slice_cfg.points) + [p_min]:
        rows.append(tuple(Fraction(x) for x in q) + (Fraction(1),))
        rhs.append(Fraction(0))
    rows.append(tuple(Fraction(x) for x in p_max) + (Fraction(1),))
    rhs.append(Fraction(lw - 1))
    sol = linalg.solve(tuple(rows), rhs)
    if sol is None:
        raise InvariantError("witness linear forms are infeasible despite the conditions")
    f = MultiPoly.affine(sol[:k], sol[k])
    s = MultiPoly.affine(v.coords, -(lo + 1))
    g = s - f
    f_at_max = f.evaluate(p_max)
    g_at_min = g.evaluate(p_min)
    if f_at_max != lw - 1 or g_at_min != -1:
        raise InvariantError("witness normalization broke")
    paraboloid = s * s - f.scale(f_at_max) - g.scale(g_at_min)
    return CorollaryWitness(direction=v, min_level=lo, max_level=hi,
                            level_form=s, f=f, g=g, paraboloid=paraboloid)


def _verify_witness(p, v, witness, p_min, p_max, slice_cfg, lo, hi) -> bool:
    """Slice-wise verification: extreme levels and the min+1 slice.

    Levels min+2 .. max-1 vanish identically through the stacked factors, so
    no enumeration is needed there.
    """
    bottom = slice_points(p, v, lo)
    top = slice_points(p, v, hi)
    if bottom.points != (p_min,) or top.points != (p_max,):
        return False
    for q in list(slice_cfg.points) + [p_min, p_max]:
        if witness.paraboloid.evaluate(q) != 0:
            return False
    return True


def pseudonef_bound(p: LatticePolytope, budget: int | None = None) -> int:
    """Largest multiplicity m with the pulled-back class still pseudonef: lw(P)."""
    kwargs = {} if budget is None else {"budget": budget}
    return lattice_width(p, **kwargs).width


@dataclass(frozen=True)
class NefReport:
    """Nefness certificate: generator degrees under the width bound, plus
    the saturation certificate for the one-parameter subgroup."""

    degrees: tuple[int, ...]
    d: int
    lw: int
    bound: Fraction
    saturation_ok: bool
    nef: bool

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "d": self.d,
            "lw": self.lw,
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "saturation_ok": self.saturation_ok,
            "nef": self.nef,
        }


def nef_check(degrees: Sequence[int], d: int, lw: int,
              l_matrix: linalg.IntMatrix) -> NefReport:
    """Exact rational bound test deg < d/lw plus the subtorus certificate.

    The generator list may contain linearly dependent rows (the
    three-binomial cases); the certificate concerns the lattice they
    generate, so saturation is checked through the Smith normal form of the
    full matrix.
    """
    if lw < 1:
        raise InputError("width must be >= 1")
    if not degrees:
        raise InputError("no generator degrees given")
    bound = Fraction(d, lw)
    degrees = tuple(int(x) for x in degrees)
    saturation_ok = linalg.lattice_is_saturated(linalg.integer_matrix(l_matrix))
    nef = all(deg < bound for deg in degrees) and saturation_ok
    return NefReport(degrees=degrees, d=d, lw=lw, bound=bound,
                     saturation_ok=saturation_ok, nef=nef)
