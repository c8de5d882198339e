"""Independent brute-force oracles.

These deliberately avoid the main code paths: rank by plain fraction
Gaussian elimination (the main rank is fraction-free Bareiss), kernels by a
reversed-column elimination compared as subspaces, widths by a full scan
over a box of primitive directions, binary-form gcds through sympy. The
CLI's --oracle flag runs them next to the main algorithms and diffs the
results; the test suite freezes their values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from . import linalg
from .errors import ToolkitError
from .polytope import Direction, LatticePolytope, direction_key


def rank_reference(m) -> int:
    """Rank over Q by textbook Gaussian elimination on Fractions."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a or not a[0]:
        raise ToolkitError("degenerate input: empty matrix")
    nrows, ncols = len(a), len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][col]:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def right_kernel_reference(m):
    """Right-kernel basis computed with reversed column order.

    Not canonical; compare with the main kernel through span equality
    (stack both and check the rank does not grow).
    """
    rev = tuple(tuple(reversed(row)) for row in m)
    basis = linalg.kernel_basis(linalg.rational_matrix(rev), "right")
    return tuple(tuple(reversed(v)) for v in basis.vectors)


def same_span(vectors_a, vectors_b) -> bool:
    if not vectors_a and not vectors_b:
        return True
    if bool(vectors_a) != bool(vectors_b) or len(vectors_a) != len(vectors_b):
        return False
    stacked = linalg.rational_matrix(list(vectors_a) + list(vectors_b))
    return linalg.rank(stacked) == len(vectors_a)


def primitive_directions(k: int, bound: int):
    """Primitive vectors in [-bound, bound]^k, one per +/- pair, sorted."""
    out = []
    for v in product(range(-bound, bound + 1), repeat=k):
        if not any(v):
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
        if g != 1:
            continue
        lead = next(x for x in v if x)
        if lead < 0:
            continue
        out.append(v)
    return sorted(out, key=direction_key)


def brute_force_width(p: LatticePolytope, bound: int = 10):
    """Exhaustive width scan over primitive directions in a coordinate box.

    Exact: the bulk of the scan runs in int64 via numpy when the products
    provably fit, otherwise in Python integers.
    """
    dirs = primitive_directions(p.dim, bound)
    max_coord = max((abs(x) for v in p.vertices for x in v), default=0)
    if max_coord * bound * p.dim < 2 ** 62:
        import numpy as np

        vmat = np.array(dirs, dtype=np.int64)
        xmat = np.array(p.vertices, dtype=np.int64).T
        values = vmat @ xmat
        widths = values.max(axis=1) - values.min(axis=1)
        best = int(widths.min())
        candidates = [dirs[i] for i in np.nonzero(widths == best)[0]]
    else:
        best, candidates = None, []
        for v in dirs:
            vals = [sum(a * b for a, b in zip(v, x)) for x in p.vertices]
            w = max(vals) - min(vals)
            if best is None or w < best:
                best, candidates = w, [v]
            elif w == best:
                candidates.append(v)
    direction = min(candidates, key=direction_key)
    return best, Direction(direction)


def binary_form_gcd_degree(forms) -> int:
    """Degree of the gcd of binary forms, via sympy (independent route)."""
    import sympy

    w1, w2 = sympy.symbols("w1 w2")
    exprs = []
    for poly in forms:
        expr = 0
        for e, c in poly.terms.items():
            expr += sympy.Rational(c.numerator, c.denominator) * w1 ** e[0] * w2 ** e[1]
        exprs.append(expr)
    g = 0
    for expr in exprs:
        g = sympy.gcd(g, expr)
    return int(sympy.Poly(g, w1, w2).total_degree())


def width_oracle_agrees(p: LatticePolytope, bound: int = 10) -> dict:
    """Diff record between certified width and the brute-force scan."""
    from .polytope import lattice_width

    main = lattice_width(p)
    scan_width, scan_dir = brute_force_width(p, bound)
    agree = (not main.certified) or main.width == scan_width
    return {
        "main_width": main.width,
        "main_certified": main.certified,
        "scan_width": scan_width,
        "scan_direction": list(scan_dir.coords),
        "agree": agree,
    }


def rank_oracle_agrees(matrix) -> dict:
    main = linalg.rank(linalg.rational_matrix(matrix))
    ref = rank_reference(matrix)
    return {"main_rank": main, "reference_rank": ref, "agree": main == ref}
