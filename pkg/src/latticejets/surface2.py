"""Classification of special toric surfaces (k = m = 2 theory).

A full-dimensional lattice polygon with at least six lattice points whose
points lie on a conic falls, modulo affine unimodular equivalence, into one
of four normal forms: two parallel-line strips (a quadrilateral and a
triangle) and two crossing-line shapes distinguished by whether the crossing
point is a lattice point. The classifier is constructive and mirrors the
normalization by upper-triangular moves that fix the x-axis: it finds the
line carrying the most configuration points (a degree-2 curve through three
collinear points must contain their line), moves it onto the x-axis and
reads the type off the residual points.

The conic itself is never solved for: line detection from collinear point
subsets is the primary decomposition route (the 3x3 symmetric matrix route
would need rational square roots and adds nothing here); the jet-rank
machinery only decides whether a conic exists at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from . import linalg
from .base_locus import base_locus_k2
from .errors import InputError, InvariantError, ToolkitError
from .jets import build_jets
from .polytope import (LatticePolytope, PointConfig, lattice_points,
                       lattice_width, point_key, primitive)

TYPE_I, TYPE_II, TYPE_III, TYPE_IV, NOT_SPECIAL = "I", "II", "III", "IV", "NotSpecial"


@dataclass(frozen=True)
class PolygonClass:
    """Classification result with the normalizing affine unimodular map.

    ``transform`` sends the input polygon exactly onto the normal form:
    x -> U x + t. ``in_table_range`` records whether (a, b) meets the
    published parameter bounds (six-point boundary cases can fall outside
    them while still being special; see the ledger).
    """

    type: str
    a: Optional[int]
    b: Optional[int]
    transform_u: linalg.IntMatrix
    transform_t: tuple[int, int]
    in_table_range: bool = True

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "a": self.a,
            "b": self.b,
            "transform": {"U": [list(r) for r in self.transform_u],
                          "t": list(self.transform_t)},
            "in_table_range": self.in_table_range,
        }


def normal_form(kind: str, a: int, b: Optional[int] = None) -> LatticePolytope:
    """Normal-form polygon of the given type and parameters."""
    if kind == TYPE_I:
        return LatticePolytope([(0, 0), (0, 1), (a, 1), (b, 0)])
    if kind == TYPE_II:
        return LatticePolytope([(0, 0), (0, 1), (a, 0)])
    if kind == TYPE_III:
        return LatticePolytope([(a, 0), (0, 1), (-b, 0), (0, -1)])
    if kind == TYPE_IV:
        return LatticePolytope([(a, 0), (0, 1), (-b, 0), (-1, -1)])
    raise InputError(f"unknown polygon type {kind!r}")


def canonical_params(kind: str, a: int, b: Optional[int]) -> tuple[int, Optional[int]]:
    """Canonical (a, b) under the residual symmetries of each normal form."""
    if kind == TYPE_I:
        return (min(a, b), max(a, b))  # b >= a
    if kind == TYPE_II:
        return (a, None)
    if kind == TYPE_III:
        return (max(a, b), min(a, b))  # a >= b
    if kind == TYPE_IV:
        # (x,y) -> (-1-x,-y) identifies (a,b) with (b-1, a+1)
        reps = [(a, b), (b - 1, a + 1)]
        valid = [r for r in reps if r[0] >= 1 and r[1] >= 0]
        if not valid:
            raise InvariantError(f"type IV with no valid parameters: {(a, b)}")
        return min(valid)
    return (a, b)


def in_table_range(kind: str, a: int, b: Optional[int]) -> bool:
    if kind == TYPE_I:
        return 1 <= a <= b and a + b >= 4
    if kind == TYPE_II:
        return a >= 5
    if kind == TYPE_III:
        return a >= 1 and b >= 0 and a + b >= 4
    if kind == TYPE_IV:
        return a >= 1 and b >= 0 and a + b >= 3
    return True


def three_collinear(s: PointConfig):
    """A collinear triple of configuration points, if any exists."""
    if s.dim != 2:
        raise InputError("collinearity test is planar")
    for line_pts in _lines_through(s.points).values():
        if len(line_pts) >= 3:
            return True, tuple(sorted(line_pts, key=point_key)[:3])
    return False, None


def _lines_through(points):
    """Group points by the lines through pairs of them."""
    lines: dict[tuple, set] = {}
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            p, q = pts[i], pts[j]
            d = primitive((q[0] - p[0], q[1] - p[1]))
            normal = (-d[1], d[0])
            if normal < (0, 0) or (normal[0] == 0 and normal[1] < 0):
                normal = (-normal[0], -normal[1])
            key = (normal, normal[0] * p[0] + normal[1] * p[1])
            lines.setdefault(key, set()).update((p, q))
    return lines


class _Frame:
    """Point set plus the composed affine unimodular map that produced it."""

    def __init__(self, points):
        self.points = [tuple(p) for p in points]
        self.u = linalg.identity(2)
        self.t = (0, 0)

    def apply(self, u=None, t=(0, 0)):
        u = linalg.integer_matrix(u) if u is not None else linalg.identity(2)
        self.points = [tuple(x + y for x, y in zip(linalg.mat_vec(u, p), t))
                       for p in self.points]
        self.u = linalg.mat_mul(u, self.u)
        self.t = tuple(x + y for x, y in zip(linalg.mat_vec(u, self.t), t))


def classify(p: LatticePolytope) -> PolygonClass:
    """Four-type classification of a polygon with >= 6 lattice points."""
    if p.dim != 2:
        raise InputError("classification is for polygons")
    if not p.is_full_dim:
        raise InputError("polygon must be full-dimensional")
    pts = lattice_points(p)
    if len(pts) < 6:
        raise ToolkitError(f"hypothesis fails: {len(pts)} lattice points < 6")
    # a conic through the points exists iff the degree-2 leading-term matrix
    # is rank-deficient (full-dimensionality already rules out degree 1)
    if linalg.rank(build_jets(pts, 2).lt_matrix) == 6:
        return PolygonClass(NOT_SPECIAL, None, None, linalg.identity(2), (0, 0))

    lines = _lines_through(pts.points)
    best_key, best_pts = max(
        ((key, line_pts) for key, line_pts in lines.items() if len(line_pts) >= 3),
        key=lambda item: (len(item[1]), [-x for x in item[0][0]], -item[0][1]))
    axis_pts = set(best_pts)
    anchor = min(axis_pts, key=point_key)
    others = sorted(axis_pts - {anchor}, key=point_key)
    d = primitive((others[0][0] - anchor[0], others[0][1] - anchor[1]))
    bz_s, bz_t = _bezout(d[0], d[1])

    frame = _Frame(pts.points)
    frame.apply(t=(-anchor[0], -anchor[1]))
    frame.apply(u=((bz_s, bz_t), (-d[1], d[0])))

    residual = [q for q in frame.points if q[1] != 0]
    levels = sorted({q[1] for q in residual})
    if not residual:
        raise InvariantError("collinear configuration reached the classifier")

    if len(levels) == 1:
        h = levels[0]
        if h < 0:
            frame.apply(u=((1, 0), (0, -1)))
            h = -h
        if h != 1:
            raise InvariantError(f"parallel residual at level {h}, conic impossible")
        residual = [q for q in frame.points if q[1] == 1]
        if len(residual) == 1:
            kind = TYPE_II
            frame.apply(u=((1, -residual[0][0]), (0, 1)))
            axis = [q[0] for q in frame.points if q[1] == 0]
            frame.apply(t=(-min(axis), 0))
            a = max(q[0] for q in frame.points if q[1] == 0)
            b = None
        else:
            kind = TYPE_I
            axis = [q[0] for q in frame.points if q[1] == 0]
            frame.apply(t=(-min(axis), 0))
            top = [q[0] for q in frame.points if q[1] == 1]
            frame.apply(u=((1, -min(top)), (0, 1)))
            a = max(q[0] for q in frame.points if q[1] == 1)
            b = max(q[0] for q in frame.points if q[1] == 0)
            if a > b:  # y -> 1 - y swaps the two parallel lines
                frame.apply(u=((1, 0), (0, -1)), t=(0, 1))
                a, b = b, a
    else:
        if levels != [-1, 1] or len(residual) != 2:
            raise InvariantError(f"crossing residual {residual} out of shape")
        up = next(q for q in residual if q[1] == 1)
        dn = next(q for q in residual if q[1] == -1)
        frame.apply(u=((1, -up[0]), (0, 1)))
        c = up[0] + dn[0]  # x of the lower point after the shear
        if c % 2 == 0:
            kind = TYPE_III
            frame.apply(t=(-c // 2, 0))
            frame.apply(u=((1, c // 2), (0, 1)))
        else:
            kind = TYPE_IV
            shift = (-1 - c) // 2
            frame.apply(t=(shift, 0))
            frame.apply(u=((1, -shift), (0, 1)))
        axis = [q[0] for q in frame.points if q[1] == 0]
        a, b = max(axis), -min(axis)
        if kind == TYPE_III and b > a:
            frame.apply(u=((-1, 0), (0, 1)))
            a, b = b, a
        if kind == TYPE_IV:
            ca, cb = canonical_params(TYPE_IV, a, b)
            if (ca, cb) != (a, b):
                frame.apply(u=((-1, 0), (0, -1)), t=(-1, 0))
                a, b = ca, cb

    # the map is affine unimodular, so it sends vertices to vertices: the
    # transform check needs no hull recomputation
    expected = normal_form(kind, a, b if b is not None else None)
    got_vertices = tuple(sorted(
        (tuple(x + y for x, y in zip(linalg.mat_vec(frame.u, vtx), frame.t))
         for vtx in p.vertices), key=point_key))
    if got_vertices != expected.vertices:
        raise InvariantError(
            f"normalization mismatch: type {kind} (a={a}, b={b}) expected "
            f"{expected.vertices}, got {got_vertices}")
    return PolygonClass(kind, a, b, frame.u, frame.t,
                        in_table_range=in_table_range(kind, a, b))


def _bezout(a: int, b: int) -> tuple[int, int]:
    """s, t with s*a + t*b = gcd(a, b) = 1 for primitive (a, b)."""
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


# ---------------------------------------------------------------------------
# the k = m = 2 equivalence suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TeoDim2Record:
    """The three equivalent predicates for a polygon with >= 6 points."""

    width_is_one: bool        # (1) lw = 1
    base_point_exists: bool   # (3) the degree-2 form system has a base point
    base_curve_implied: bool  # (2), implied by (1); not computed independently
    equivalent: bool

    def to_json(self) -> dict:
        return {"lw_is_1": self.width_is_one,
                "base_point": self.base_point_exists,
                "base_curve_implied": self.base_curve_implied,
                "equivalent": self.equivalent}


def teo_dim2_suite(p: LatticePolytope) -> TeoDim2Record:
    pts = lattice_points(p)
    if len(pts) < 6:
        raise ToolkitError(f"hypothesis fails: {len(pts)} lattice points < 6")
    width = lattice_width(p)
    cond1 = width.width == 1
    locus = base_locus_k2(pts, 2)
    cond3 = locus.gcd_degree >= 1
    record = TeoDim2Record(width_is_one=cond1, base_point_exists=cond3,
                           base_curve_implied=cond1, equivalent=cond1 == cond3)
    if not record.equivalent:
        raise InvariantError(f"width/base-point equivalence failed: {record}")
    return record


# ---------------------------------------------------------------------------
# Pick's identity (test utility)
# ---------------------------------------------------------------------------

def polygon_ccw_vertices(p: LatticePolytope) -> list[tuple[int, int]]:
    """Hull vertices in counterclockwise cyclic order (monotone chain)."""
    pts = sorted(p.vertices)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper = []
    for q in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return lower[:-1] + upper[:-1]


def pick_data(p: LatticePolytope) -> dict:
    """Twice the area, boundary and interior lattice point counts."""
    cycle = polygon_ccw_vertices(p)
    twice_area = 0
    boundary = 0
    for i, v in enumerate(cycle):
        w = cycle[(i + 1) % len(cycle)]
        twice_area += v[0] * w[1] - v[1] * w[0]
        boundary += gcd(abs(w[0] - v[0]), abs(w[1] - v[1]))
    total = len(lattice_points(p))
    return {"twice_area": twice_area, "boundary": boundary,
            "interior": total - boundary}


def pick_identity_holds(p: LatticePolytope) -> bool:
    data = pick_data(p)
    return data["twice_area"] == 2 * data["interior"] + data["boundary"] - 2
