"""Lattice polytopes and point configurations.

Everything is exact: vertices are integer tuples, facet inequalities are
primitive integer normals with integer offsets, memberships are integer
comparisons. Enumeration is a bounding-box scan with exact half-space tests
(adequate for k <= 3 and the small boxes this toolkit meets); slices are
enumerated inside the slice only, never through the full polytope, because
Riemann-Roch polytopes of weighted projective spaces are far too large to
enumerate.

Lattice-width certification follows a dual-box argument: any direction v
whose width beats the best seed W0 pairs with every edge vector e at a
vertex to |<v,e>| <= W0, so v lies in the image of the box [-W0,W0]^k under
the inverse edge matrix. If the box is within budget the enumeration is
exhaustive and the result is certified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd, ceil, floor
from typing import Iterable, NamedTuple, Optional, Sequence

from . import linalg
from .errors import BudgetExceededError, InputError, ToolkitError

Point = tuple[int, ...]

LATTICE_POINT_BUDGET = 2_000_000
WIDTH_BUDGET = 2_000_000


def point_key(p: Sequence[int]):
    """Graded-lex order on integer vectors: by coordinate sum, then lex."""
    return (sum(p), tuple(p))


def direction_key(v: Sequence[int]):
    """Graded-lex order for directions: by L1 norm, then lex."""
    return (sum(abs(x) for x in v), tuple(v))


def _as_point(p, k=None) -> Point:
    pt = tuple(int(x) for x in p)
    if k is not None and len(pt) != k:
        raise InputError(f"point {pt} has dimension {len(pt)}, expected {k}")
    return pt


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Point:
    g = vector_gcd(v)
    if g == 0:
        raise ToolkitError("zero vector has no primitive form")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class Direction:
    """Nonzero primitive integer vector in the dual lattice."""

    coords: Point

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        object.__setattr__(self, "coords", c)
        if not any(c):
            raise InputError("direction must be nonzero")
        if vector_gcd(c) != 1:
            raise InputError(f"direction {c} is not primitive")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def pair(self, p: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.coords, p))

    def negated(self) -> "Direction":
        return Direction(tuple(-x for x in self.coords))


@dataclass(frozen=True)
class PointConfig:
    """Ordered lattice point configuration S = {p_0, ..., p_n}."""

    dim: int
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(_as_point(p, self.dim) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise InputError("duplicate points in configuration")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def translate(self, t: Sequence[int]) -> "PointConfig":
        t = _as_point(t, self.dim)
        return PointConfig(self.dim, tuple(tuple(a + b for a, b in zip(p, t)) for p in self.points))

    def apply(self, u: linalg.IntMatrix, t: Sequence[int] | None = None) -> "PointConfig":
        t = _as_point(t, self.dim) if t is not None else (0,) * self.dim
        pts = tuple(tuple(x + y for x, y in zip(linalg.mat_vec(u, p), t)) for p in self.points)
        return PointConfig(self.dim, pts)

    def difference_lattice_rank(self) -> int:
        if len(self.points) < 2:
            return 0
        base = self.points[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in self.points[1:]]
        return linalg.rank(linalg.rational_matrix(diffs))

    @property
    def differences_generate(self) -> bool:
        """True iff pairwise differences generate all of Z^k (index one)."""
        if len(self.points) < 2:
            return self.dim == 0
        base = self.points[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in self.points[1:]]
        divisors = linalg.elementary_divisors(linalg.integer_matrix(diffs))
        return len(divisors) == self.dim and all(d == 1 for d in divisors)


class Facet(NamedTuple):
    """Half-space <normal, x> >= offset with primitive integer normal."""

    normal: Point
    offset: int


class LatticePolytope:
    """Convex hull of integer points; vertices are exactly the extreme points."""

    __slots__ = ("dim", "vertices", "_facets", "_lattice_points")

    def __init__(self, points: Iterable[Sequence[int]], dim: int | None = None):
        pts = [tuple(int(x) for x in p) for p in points]
        if not pts:
            raise InputError("polytope needs at least one point")
        k = dim if dim is not None else len(pts[0])
        for p in pts:
            if len(p) != k:
                raise InputError("inconsistent point dimensions")
        self.dim = k
        self.vertices = _extreme_points(sorted(set(pts), key=point_key), k)
        self._facets = None
        self._lattice_points = None

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return (isinstance(other, LatticePolytope)
                and self.dim == other.dim and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.dim, self.vertices))

    # -- basic geometry -----------------------------------------------------

    @property
    def affine_dim(self) -> int:
        return PointConfig(self.dim, self.vertices).difference_lattice_rank()

    @property
    def is_full_dim(self) -> bool:
        return self.affine_dim == self.dim

    def facets(self) -> tuple[Facet, ...]:
        if self._facets is None:
            if not self.is_full_dim:
                raise ToolkitError("facet description requires a full-dimensional polytope")
            self._facets = _facets_of(self.vertices, self.dim)
        return self._facets

    def contains(self, p: Sequence[int]) -> bool:
        p = _as_point(p, self.dim)
        return all(sum(a * b for a, b in zip(f.normal, p)) >= f.offset for f in self.facets())

    def bounding_box(self) -> list[tuple[int, int]]:
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
                for i in range(self.dim)]

    def translate(self, t: Sequence[int]) -> "LatticePolytope":
        t = _as_point(t, self.dim)
        return LatticePolytope([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.dim)

    def dilate(self, r: int) -> "LatticePolytope":
        if r < 1:
            raise InputError("dilation factor must be >= 1")
        return LatticePolytope([tuple(r * x for x in v) for v in self.vertices], self.dim)

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data) -> "LatticePolytope":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["vertices"], dim=int(data["dim"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad polytope JSON: {exc}") from exc


def config_to_json(cfg: PointConfig) -> dict:
    return {"dim": cfg.dim, "points": [list(p) for p in cfg.points]}


def config_from_json(data) -> PointConfig:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return PointConfig(int(data["dim"]), tuple(tuple(int(x) for x in p) for p in data["points"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad point-config JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# hull machinery (brute-force facet enumeration; fine for the small inputs
# this toolkit meets, and exact)
# ---------------------------------------------------------------------------

def _hyperplane_through(points: Sequence[Point], k: int):
    """Primitive normal and offset of the hyperplane through k points, or None."""
    base = points[0]
    if k == 1:
        return (1,), base[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    if k == 2:
        d = diffs[0]
        normal = primitive((-d[1], d[0]))
    elif k == 3:
        d1, d2 = diffs
        n = (d1[1] * d2[2] - d1[2] * d2[1],
             d1[2] * d2[0] - d1[0] * d2[2],
             d1[0] * d2[1] - d1[1] * d2[0])
        if not any(n):
            return None  # collinear triple
        normal = primitive(n)
    else:
        kernel = linalg.integral_kernel(linalg.integer_matrix(diffs))
        if len(kernel) != 1:
            return None  # points do not span a hyperplane
        normal = primitive(kernel[0])
    return normal, sum(a * b for a, b in zip(normal, base))


def _facets_of(points: Sequence[Point], k: int) -> tuple[Facet, ...]:
    facets = set()
    for subset in combinations(points, k):
        hp = _hyperplane_through(subset, k)
        if hp is None:
            continue
        normal, offset = hp
        values = [sum(a * b for a, b in zip(normal, p)) for p in points]
        if all(v >= offset for v in values):
            facets.add(Facet(normal, offset))
        elif all(v <= offset for v in values):
            facets.add(Facet(tuple(-x for x in normal), -offset))
    return tuple(sorted(facets))


def _extreme_points(points: Sequence[Point], k: int) -> tuple[Point, ...]:
    if len(points) == 1:
        return tuple(points)
    cfg_rank = PointConfig(k, tuple(points)).difference_lattice_rank()
    if cfg_rank < k:
        # lower-dimensional hull: map to coordinates on the affine span, recurse
        coords, _, _ = _affine_lattice_coordinates(points, cfg_rank)
        keep = _extreme_points(sorted(set(coords), key=point_key), cfg_rank) if cfg_rank else coords[:1]
        keep_set = set(keep)
        return tuple(p for p, c in zip(points, coords) if c in keep_set) if cfg_rank else (points[0],)
    facets = _facets_of(points, k)
    out = []
    for p in points:
        active = [f.normal for f in facets
                  if sum(a * b for a, b in zip(f.normal, p)) == f.offset]
        if active and linalg.rank(linalg.rational_matrix(active)) == k:
            out.append(p)
    return tuple(sorted(out, key=point_key))


def _affine_lattice_coordinates(points: Sequence[Point], r: int):
    """Coordinates of ``points`` in a basis of their saturated difference lattice.

    Returns (coords, basis B, base point); x = base + coords @ B for every
    input point, with B an r x k Z-basis in Hermite form.
    """
    base = points[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points]
    if r == 0:
        return [()] * len(points), (), base
    d_matrix = linalg.integer_matrix(diffs)
    ker = linalg.integral_kernel(d_matrix)  # directions orthogonal to the span
    if ker:
        basis = linalg.integral_kernel(ker)  # saturation of the row span
    else:
        basis = linalg.identity(len(base))
    coords = []
    bt = linalg.rational_matrix(linalg.transpose(basis))
    for d in diffs:
        sol = linalg.solve(bt, [Fraction(x) for x in d])
        if sol is None or any(c.denominator != 1 for c in sol):
            raise ToolkitError("point outside its own difference lattice")
        coords.append(tuple(int(c) for c in sol))
    return coords, basis, base


# ---------------------------------------------------------------------------
# lattice point enumeration
# ---------------------------------------------------------------------------

def lattice_points(p: LatticePolytope, budget: int = LATTICE_POINT_BUDGET) -> PointConfig:
    """All points of P cap Z^k in graded-lex order.

    Fiber enumeration: coordinates are fixed one at a time, with the range
    of each fiber taken from the exact rational section vertices, so the
    cost follows the point count (plus one section per fiber), not the
    bounding-box volume. The budget guards against polytopes that are too
    large to enumerate at all (Riemann-Roch simplices of weight vectors).
    """
    if p._lattice_points is not None:
        return PointConfig(p.dim, p._lattice_points)
    if not p.is_full_dim:
        raise ToolkitError("lattice-point enumeration requires a full-dimensional polytope")
    facets = p.facets()
    ineqs = [(f.normal, f.offset) for f in facets]
    pts: list[Point] = []
    counter = [0, budget]
    _enumerate_fibers(list(p.vertices), ineqs, (), pts, counter)
    pts.sort(key=point_key)
    p._lattice_points = tuple(pts)
    return PointConfig(p.dim, p._lattice_points)


def _fiber_interval(ineqs):
    """Exact integer range of a one-variable inequality system, or None.

    A bounded full-dimensional polytope always restricts to two-sided
    systems, so missing bounds mean an empty fiber appeared upstream.
    """
    lo, hi = None, None
    for (coeffs, b) in ineqs:
        n = coeffs[0]
        if n > 0:
            bound = -(-b // n)  # ceil(b / n)
            lo = bound if lo is None else max(lo, bound)
        elif n < 0:
            bound = b // n  # floor(b / n) for negative n
            hi = bound if hi is None else min(hi, bound)
        elif b > 0:
            return None
    if lo is None or hi is None:
        raise ToolkitError("unbounded fiber in lattice-point enumeration")
    return (lo, hi) if lo <= hi else None


def _enumerate_fibers(verts, ineqs, prefix, out, counter):
    """Emit all integer points of {x : ineqs}, fiber ranges from ``verts``.

    The last variable needs no section vertices: its restricted inequality
    system is one-dimensional and exact on its own.
    """
    if not verts:
        return
    counter[0] += 1
    if counter[0] > counter[1]:
        raise BudgetExceededError(
            f"lattice-point enumeration exceeded the budget {counter[1]}",
            diagnostics={"budget": counter[1]})
    if len(verts[0]) == 1:
        interval = _fiber_interval(ineqs)
        if interval is None:
            return
        lo, hi = interval
        counter[0] += hi - lo + 1
        if counter[0] > counter[1]:
            raise BudgetExceededError(
                f"lattice-point enumeration exceeded the budget {counter[1]}",
                diagnostics={"budget": counter[1]})
        out.extend(prefix + (c,) for c in range(lo, hi + 1))
        return
    lo = ceil(min(v[0] for v in verts))
    hi = floor(max(v[0] for v in verts))
    for c in range(lo, hi + 1):
        new_ineqs = []
        feasible = True
        for (coeffs, b) in ineqs:
            rest = coeffs[1:]
            nb = b - coeffs[0] * c
            if any(rest):
                new_ineqs.append((rest, nb))
            elif nb > 0:
                feasible = False
                break
        if not feasible:
            continue
        if len(verts[0]) == 2:
            interval = _fiber_interval(new_ineqs)
            if interval is None:
                continue
            y_lo, y_hi = interval
            counter[0] += y_hi - y_lo + 2
            if counter[0] > counter[1]:
                raise BudgetExceededError(
                    f"lattice-point enumeration exceeded the budget {counter[1]}",
                    diagnostics={"budget": counter[1]})
            out.extend(prefix + (c, y) for y in range(y_lo, y_hi + 1))
            continue
        section = []
        for v in verts:
            if v[0] == c:
                section.append(v[1:])
        for va, vb in combinations(verts, 2):
            if (va[0] < c < vb[0]) or (vb[0] < c < va[0]):
                t = Fraction(c - va[0], vb[0] - va[0])
                section.append(tuple(x + t * (y - x) for x, y in zip(va[1:], vb[1:])))
        if section:
            _enumerate_fibers(section, new_ineqs, prefix + (c,), out, counter)


def width_in_direction(p: LatticePolytope, v: Direction) -> int:
    """max - min of <x, v> over P, evaluated on vertices only."""
    values = [v.pair(x) for x in p.vertices]
    return max(values) - min(values)


def slice_points(p: LatticePolytope, v: Direction, level: int) -> PointConfig:
    """Lattice points of P on the hyperplane <x,v> = level.

    Enumerates only the slice: a (k-1)-dimensional box obtained from the
    section's vertices (edge-hyperplane crossings), with the remaining
    coordinate solved from the level equation.
    """
    values = [v.pair(x) for x in p.vertices]
    if level < min(values) or level > max(values):
        return PointConfig(p.dim, ())
    # section vertices lie on segments between polytope vertices
    section: list[tuple[Fraction, ...]] = []
    for a, fa in zip(p.vertices, values):
        if fa == level:
            section.append(tuple(Fraction(x) for x in a))
    for (a, fa), (b, fb) in combinations(zip(p.vertices, values), 2):
        if (fa < level < fb) or (fb < level < fa):
            t = Fraction(level - fa, fb - fa)
            section.append(tuple(Fraction(x) + t * (y - x) for x, y in zip(a, b)))
    if not section:
        return PointConfig(p.dim, ())
    facets = p.facets()
    coords = v.coords
    pivot = max(range(p.dim), key=lambda i: abs(coords[i]))
    box = []
    for i in range(p.dim):
        lo = min(pt[i] for pt in section)
        hi = max(pt[i] for pt in section)
        box.append((ceil(lo), floor(hi)))
    ranges = [range(box[i][0], box[i][1] + 1) for i in range(p.dim) if i != pivot]
    others = [i for i in range(p.dim) if i != pivot]
    pts = []
    for combo in product(*ranges):
        rest = level - sum(coords[i] * x for i, x in zip(others, combo))
        q, r = divmod(rest, coords[pivot])
        if r:
            continue
        if not (box[pivot][0] <= q <= box[pivot][1]):
            continue
        candidate = [0] * p.dim
        for i, x in zip(others, combo):
            candidate[i] = x
        candidate[pivot] = q
        candidate = tuple(candidate)
        if all(sum(a * b for a, b in zip(f.normal, candidate)) >= f.offset for f in facets):
            pts.append(candidate)
    pts.sort(key=point_key)
    return PointConfig(p.dim, tuple(pts))


def unimodular_image(p: LatticePolytope, u: linalg.IntMatrix,
                     t: Sequence[int] | None = None) -> LatticePolytope:
    """Image of P under x -> U x + t for unimodular U."""
    u = linalg.integer_matrix(u)
    if linalg.bareiss_det(u) not in (1, -1):
        raise InputError("transformation matrix is not unimodular")
    t = _as_point(t, p.dim) if t is not None else (0,) * p.dim
    verts = [tuple(x + y for x, y in zip(linalg.mat_vec(u, vtx), t)) for vtx in p.vertices]
    return LatticePolytope(verts, p.dim)


# ---------------------------------------------------------------------------
# lattice width
# ---------------------------------------------------------------------------

class WidthResult(NamedTuple):
    width: int
    direction: Optional[Direction]
    certified: bool


def _canonical_direction(v: Sequence[int]) -> Point:
    v = primitive(v)
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return tuple(-y for y in v)
    raise ToolkitError("zero direction")


def _edges_at_vertex(p: LatticePolytope, vertex: Point) -> list[Point]:
    facets = p.facets()
    active_at = {}
    for w in p.vertices:
        active_at[w] = [f.normal for f in facets
                        if sum(a * b for a, b in zip(f.normal, w)) == f.offset]
    k = p.dim
    edges = []
    for w in p.vertices:
        if w == vertex:
            continue
        shared = [n for n in active_at[vertex]
                  if n in active_at[w]]
        if k == 1 or (shared and linalg.rank(linalg.rational_matrix(shared)) == k - 1):
            edges.append(tuple(a - b for a, b in zip(w, vertex)))
    return sorted(edges, key=direction_key)


def lattice_width(p: LatticePolytope, budget: int = WIDTH_BUDGET) -> WidthResult:
    """Minimal lattice width, a minimizing direction, and a certification flag.

    Non-full-dimensional polytopes use the quotient definition: widths are
    measured in the lattice quotient by the orthogonal of the affine span,
    and the reported direction is a lift to the ambient dual lattice.
    """
    r = p.affine_dim
    if r == 0:
        return WidthResult(0, None, True)
    if r < p.dim:
        return _quotient_width(p, budget)

    k = p.dim
    seeds = {(_canonical_direction(f.normal)) for f in p.facets()}
    for i in range(k):
        e = [0] * k
        e[i] = 1
        seeds.add(tuple(e))
    best_w, best_v = None, None
    for v in sorted(seeds, key=direction_key):
        w = width_in_direction(p, Direction(v))
        if best_w is None or (w, direction_key(v)) < (best_w, direction_key(best_v)):
            best_w, best_v = w, v
    if best_w == 1:
        return WidthResult(1, Direction(best_v), True)

    vertex = min(p.vertices, key=point_key)
    edges = _edges_at_vertex(p, vertex)
    e_basis = []
    for e in edges:
        if linalg.rank(linalg.rational_matrix(e_basis + [e])) == len(e_basis) + 1:
            e_basis.append(e)
        if len(e_basis) == k:
            break
    if len(e_basis) < k:
        raise ToolkitError("vertex cone is not full-dimensional")
    w0 = best_w
    if (2 * w0 + 1) ** k > budget:
        return WidthResult(best_w, Direction(best_v), False)
    e_mat = linalg.integer_matrix(e_basis)
    det = linalg.bareiss_det(e_mat)
    inv = linalg.rref(linalg.rational_matrix(
        [list(row) + [1 if i == j else 0 for j in range(k)] for i, row in enumerate(e_mat)]))[0]
    adj = [[int(x * det) for x in row[k:]] for row in inv]  # det * E^{-1}, integral
    seen = set(seeds)
    for y in product(range(-w0, w0 + 1), repeat=k):
        num = [sum(a * b for a, b in zip(row, y)) for row in adj]
        if any(x % det for x in num):
            continue
        v = tuple(x // det for x in num)
        if not any(v):
            continue
        g = vector_gcd(v)
        if g != 1:
            continue  # the primitive multiple is also in the box and no wider
        v = _canonical_direction(v)
        if v in seen:
            continue
        seen.add(v)
        w = width_in_direction(p, Direction(v))
        if (w, direction_key(v)) < (best_w, direction_key(best_v)):
            best_w, best_v = w, v
            if best_w == 1:
                break
    return WidthResult(best_w, Direction(best_v), True)


def _quotient_width(p: LatticePolytope, budget: int) -> WidthResult:
    r = p.affine_dim
    coords, basis, _ = _affine_lattice_coordinates(p.vertices, r)
    inner = LatticePolytope(coords, r)
    res = lattice_width(inner, budget)
    if res.direction is None:
        return res
    u = res.direction.coords
    # lift: v in Z^k with B v = u, via the SNF completion of B
    uu, dd, vv = linalg.smith_normal_form(basis)
    if any(dd[i][i] != 1 for i in range(r)):
        raise ToolkitError("difference lattice basis is not saturated")
    uu_u = linalg.mat_vec(uu, u)
    padded = tuple(uu_u) + (0,) * (p.dim - r)
    lift = linalg.mat_vec(vv, padded)
    return WidthResult(res.width, Direction(lift), res.certified)
