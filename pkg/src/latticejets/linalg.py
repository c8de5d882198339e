"""Exact integer and rational linear algebra.

Matrices are immutable tuples of tuples. Rational entries are
``fractions.Fraction`` (always in lowest terms with positive denominator),
integer entries are Python ``int`` (arbitrary precision). Everything here is
deterministic: identical inputs produce bit-identical outputs, which the
golden tests rely on.

The main rank routine is a fraction-free Bareiss elimination on a
denominator-cleared copy; kernels, solving and reduced row echelon forms run
over Fraction. An independent plain-Gauss rank lives in ``oracles`` so the
two routes never share code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ToolkitError

Matrix = tuple[tuple[Fraction, ...], ...]
IntMatrix = tuple[tuple[int, ...], ...]
Vector = tuple[Fraction, ...]


def _freeze(rows: Iterable[Sequence], cast) -> tuple:
    out = tuple(tuple(cast(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ToolkitError("ragged matrix")
    return out


def rational_matrix(rows: Iterable[Sequence]) -> Matrix:
    """Freeze ``rows`` into an immutable matrix of Fractions."""
    return _freeze(rows, Fraction)


def integer_matrix(rows: Iterable[Sequence]) -> IntMatrix:
    """Freeze ``rows`` into an immutable matrix of ints."""

    def as_int(x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ToolkitError(f"non-integer entry {x}")
            return int(x)
        if isinstance(x, int):
            return x
        raise ToolkitError(f"non-integer entry {x!r}")

    return _freeze(rows, as_int)


def shape(m: Matrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _nonempty(m) -> None:
    if not m or not m[0]:
        raise ToolkitError("degenerate input: empty matrix")


# ---------------------------------------------------------------------------
# rank (fraction-free Bareiss)
# ---------------------------------------------------------------------------

def _cleared_int_rows(m: Matrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    rows = []
    for row in m:
        mult = 1
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else 1
            mult = mult * d // gcd(mult, d)
        rows.append([int(x * mult) for x in row])
    return rows


def rank(m: Matrix) -> int:
    """Rank over Q, computed exactly by fraction-free elimination."""
    _nonempty(m)
    a = _cleared_int_rows(m)
    nrows, ncols = len(a), len(a[0])
    prev = 1
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(col + 1, ncols):
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) // prev
            a[i][col] = 0
        prev = a[r][col]
        r += 1
        if r == nrows:
            break
    return r


def bareiss_det(m) -> int:
    """Determinant of a square integer matrix, fraction-free."""
    _nonempty(m)
    n = len(m)
    if len(m[0]) != n:
        raise ToolkitError("determinant of non-square matrix")
    a = [list(row) for row in m]
    prev = 1
    sign = 1
    for col in range(n - 1):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                a[i][j] = (a[col][col] * a[i][j] - a[i][col] * a[col][j]) // prev
            a[i][col] = 0
        prev = a[col][col]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# RREF, kernels, solving
# ---------------------------------------------------------------------------

def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over Q and the pivot column indices."""
    _nonempty(m)
    a = [[Fraction(x) for x in row] for row in m]
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col]
        a[r] = [x / inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in a), tuple(pivots)


@dataclass(frozen=True)
class KernelBasis:
    """Canonical basis of a left or right kernel.

    ``vectors`` are the rows of the RREF of any spanning set of the kernel,
    so the basis is unique for the subspace (pivots equal to 1, zeros above
    and below each pivot).
    """

    side: str  # "left" | "right"
    dim_ambient: int
    vectors: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


def _right_kernel_vectors(m: Matrix) -> list[Vector]:
    red, pivots = rref(m)
    ncols = shape(m)[1]
    free = [c for c in range(ncols) if c not in pivots]
    vecs = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        vecs.append(tuple(v))
    return vecs


def kernel_basis(m: Matrix, side: str = "right") -> KernelBasis:
    """Canonical (RREF) basis of the right or left kernel of ``m``."""
    _nonempty(m)
    if side not in ("left", "right"):
        raise ToolkitError(f"unknown kernel side {side!r}")
    work = m if side == "right" else transpose(m)
    vecs = _right_kernel_vectors(work)
    ambient = shape(work)[1]
    if vecs:
        canon, _ = rref(tuple(vecs))
        vecs = [row for row in canon if any(row)]
    return KernelBasis(side=side, dim_ambient=ambient, vectors=tuple(vecs))


def solve(a: Matrix, b: Sequence[Fraction]):
    """One solution of ``a x = b`` over Q, or None if inconsistent.

    The canonical particular solution sets every free variable to zero, so
    among all solutions it has minimal support with respect to the caller's
    column order.
    """
    _nonempty(a)
    nrows, ncols = shape(a)
    if len(b) != nrows:
        raise ToolkitError("dimension mismatch in solve")
    aug = tuple(tuple(list(row) + [Fraction(v)]) for row, v in zip(a, b))
    red, pivots = rref(aug)
    if ncols in pivots:  # pivot in the augmented column
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return tuple(x)


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms
# ---------------------------------------------------------------------------

def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*m*V = D diagonal, U, V unimodular.

    Diagonal entries are nonnegative and satisfy d1 | d2 | ... ; pivot
    selection (smallest nonzero absolute value, then row-major position)
    makes the output deterministic.
    """
    _nonempty(m)
    nrows, ncols = len(m), len(m[0])
    a = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nrows, ncols):
        # smallest nonzero |entry| in the trailing block
        piv = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, nrows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                row_op(i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, ncols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                col_op(j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders became new, smaller pivot candidates
        # divisibility: fold any non-multiple into column t and redo
        bad = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, -1)
            continue
        t += 1

    for i in range(min(nrows, ncols)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return (
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in v),
    )


def elementary_divisors(m: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(min(len(d), len(d[0]))):
        if d[i][i]:
            out.append(d[i][i])
    return tuple(out)


def lattice_is_saturated(m: IntMatrix) -> bool:
    """True iff the lattice generated by the rows of ``m`` is saturated.

    Tolerates linearly dependent rows (the span is what is tested); used by
    the screening pipeline where generator lists may be redundant.
    """
    return all(d == 1 for d in elementary_divisors(m))


def is_saturated(m: IntMatrix) -> bool:
    """True iff the rows of ``m`` span a saturated lattice.

    Requires full row rank; raises on dependent generators.
    """
    _nonempty(m)
    if rank(rational_matrix(m)) != len(m):
        raise ToolkitError("dependent generators")
    return lattice_is_saturated(m)


def integral_kernel(m: IntMatrix) -> IntMatrix:
    """Z-basis (rows, in Hermite normal form) of {x : m x = 0} in Z^cols.

    The output lattice is saturated by construction (columns of the
    unimodular V from the Smith normal form).
    """
    if not m or not m[0]:
        # kernel of the empty map is everything
        n = len(m[0]) if m else 0
        return identity(n)
    _, d, v = smith_normal_form(m)
    nrows, ncols = len(m), len(m[0])
    r = sum(1 for i in range(min(nrows, ncols)) if d[i][i])
    cols = transpose(v)[r:]
    if not cols:
        return ()
    return hermite_normal_form(tuple(cols))


def hermite_normal_form(m: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form (canonical basis of the row lattice).

    Echelon shape with positive pivots; entries above each pivot are reduced
    into [0, pivot). Zero rows are dropped.
    """
    _nonempty(m)
    a = [list(row) for row in m]
    nrows, ncols = len(a), len(a[0])
    r = 0
    for col in range(ncols):
        # gcd-reduce the column below r
        while True:
            nz = [i for i in range(r, nrows) if a[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][col]), i))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, nrows):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if r < nrows and a[r][col]:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][col] // a[r][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == nrows:
                break
    return tuple(tuple(row) for row in a[:r])


def inverse_unimodular(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    det = bareiss_det(u)
    if det not in (1, -1):
        raise ToolkitError(f"matrix is not unimodular (det={det})")
    aug = rational_matrix([list(row) + [1 if i == j else 0 for j in range(n)]
                           for i, row in enumerate(u)])
    red, _ = rref(aug)
    return integer_matrix([row[n:] for row in red])


def complete_to_unimodular(v: Sequence[int]) -> IntMatrix:
    """Unimodular matrix whose first row is the primitive vector ``v``."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ToolkitError("vector is not primitive")
    n = len(v)
    _, _, vv = smith_normal_form((tuple(v),))
    w = tuple(sum(v[i] * vv[i][j] for i in range(n)) for j in range(n))
    if w[0] == -1:  # SNF may land on -e1; flip V's first column
        vv = tuple((-row[0],) + tuple(row[1:]) for row in vv)
        w = tuple(sum(v[i] * vv[i][j] for i in range(n)) for j in range(n))
    if w != tuple(1 if j == 0 else 0 for j in range(n)):
        raise ToolkitError("basis completion failed")
    # row * V = e1, so V^-1 has first row equal to v
    return inverse_unimodular(vv)
