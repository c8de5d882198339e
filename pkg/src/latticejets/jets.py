"""Jet matrices of monomial embeddings at the unit point.

``build_jets`` assembles the matrix whose rows are the partial derivatives
(in graded-lex order, degree ascending) of the Laurent monomials u^{p_i}
evaluated at u = 1, together with its leading-term counterpart whose entries
are plain monomial evaluations p_i^alpha. Row r of the derivative matrix for
the multi-index alpha holds the falling-factorial values

    P_alpha(p) = prod_j p_j (p_j - 1) ... (p_j - alpha_j + 1),

so both matrices are exact integer matrices and differ by a unitriangular
row operation; rank identities between them are a standing test invariant,
not an assumption.

Linear-system bookkeeping on top of the ranks: dimensions of the systems of
hyperplane sections with a point of high multiplicity, their expected
values, speciality, the minimal degree of an affine hypersurface through the
configuration, and the canonical basis of the degree-m form system cut out
on the exceptional direction space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import linalg
from .errors import InputError, ToolkitError
from .poly import MultiPoly, from_coefficients, monomials_of_degree, monomials_up_to_degree
from .polytope import PointConfig


def falling_factorial_value(x: int, a: int) -> int:
    out = 1
    for i in range(a):
        out *= x - i
    return out


def jet_row_indices(k: int, m: int) -> list[tuple[int, ...]]:
    """Multi-indices |alpha| = 0..m: degree ascending, grlex within a degree."""
    return monomials_up_to_degree(k, m)


@dataclass(frozen=True)
class JetSystem:
    """Derivative and leading-term matrices of one configuration, with ranks.

    ``j_matrix`` and ``lt_matrix`` have C(m+k, k) rows (multi-indices of
    degree <= m) and one column per configuration point; ``j_ranks[r]`` is
    the exactly computed rank of the order-r top block of ``j_matrix``.
    """

    config: PointConfig
    order: int
    row_index: tuple[tuple[int, ...], ...]
    j_matrix: linalg.Matrix
    lt_matrix: linalg.Matrix
    j_ranks: tuple[int, ...]

    def j_block(self, r: int) -> linalg.Matrix:
        """Rows of the derivative matrix up to order r."""
        rows = comb(r + self.config.dim, self.config.dim)
        return self.j_matrix[:rows]

    def lt_block(self, r: int) -> linalg.Matrix:
        rows = comb(r + self.config.dim, self.config.dim)
        return self.lt_matrix[:rows]

    def degree_block(self, r: int) -> linalg.Matrix:
        """Rows of the derivative matrix of order exactly r."""
        lo = comb(r - 1 + self.config.dim, self.config.dim) if r else 0
        hi = comb(r + self.config.dim, self.config.dim)
        return self.j_matrix[lo:hi]


def build_jets(s: PointConfig, m: int) -> JetSystem:
    if m < 0:
        raise InputError("jet order must be >= 0")
    if len(s) == 0:
        raise InputError("empty point configuration")
    k = s.dim
    rows = jet_row_indices(k, m)
    # integer entries are exact rationals; downstream eliminations convert
    # to Fraction exactly where they divide
    j_rows, lt_rows = [], []
    for alpha in rows:
        j_rows.append(tuple(
            _prod(falling_factorial_value(x, a) for x, a in zip(p, alpha))
            for p in s.points))
        lt_rows.append(tuple(
            _prod(x ** a for x, a in zip(p, alpha))
            for p in s.points))
    j = tuple(j_rows)
    lt = tuple(lt_rows)
    ranks = tuple(linalg.rank(j[:comb(r + k, k)]) for r in range(m + 1))
    return JetSystem(config=s, order=m, row_index=tuple(rows),
                     j_matrix=j, lt_matrix=lt, j_ranks=ranks)


def _prod(items) -> int:
    out = 1
    for x in items:
        out *= x
    return out


def rank_j(s: PointConfig, r: int) -> int:
    return build_jets(s, r).j_ranks[r]


def h0(s: PointConfig, m: int) -> int:
    """dim of hyperplane sections with multiplicity >= m at the unit point."""
    if m < 1:
        raise InputError("multiplicity order must be >= 1")
    return len(s) - rank_j(s, m - 1)


def expected_h0(n: int, k: int, m: int) -> int:
    """Conditions-counting dimension: max(0, n+1 - C(m-1+k, k))."""
    if m < 0:
        raise InputError("order must be >= 0")
    if m == 0:
        return n + 1
    return max(0, n + 1 - comb(m - 1 + k, k))


def is_special(s: PointConfig, m: int) -> bool:
    return h0(s, m) > expected_h0(len(s) - 1, s.dim, m)


def min_vanishing_degree(s: PointConfig) -> int:
    """Least degree of a nonzero polynomial vanishing on every point of S.

    Detected through rank deficiency of the leading-term matrix; terminates
    because the matrix eventually has more rows than columns (d <= |S|).
    """
    if len(s) < 2:
        raise InputError("need at least two points")
    k = s.dim
    d = 1
    while True:
        lt = build_jets(s, d).lt_matrix
        if linalg.rank(lt) < comb(d + k, k):
            return d
        if d > len(s):
            raise ToolkitError("vanishing-degree search failed to terminate")
        d += 1


@dataclass(frozen=True)
class FundamentalForm:
    """Canonical basis of the degree-m form system at the unit point.

    ``monomials`` fixes the coefficient order (grlex, x1^m first); ``basis``
    rows are the RREF of the generating forms, so equal spans compare equal.
    """

    k: int
    m: int
    monomials: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def polynomials(self) -> list[MultiPoly]:
        return [from_coefficients(self.k, self.monomials, row) for row in self.basis]

    def evaluate_all(self, v) -> list[Fraction]:
        return [p.evaluate(v) for p in self.polynomials()]

    def text(self) -> list[str]:
        return [p.integer_normalized().text("w") for p in self.polynomials()]


def fundamental_form(s: PointConfig, m: int) -> FundamentalForm:
    """Span of the degree-m forms cut out by sections of multiplicity m.

    Each right-kernel element c of the order-(m-1) jet matrix contributes the
    form sum_alpha w^alpha (m!/alpha!) (D_m c)_alpha; the multinomial factor
    is kept exactly, matching the classical jet expansion.
    """
    if m < 1:
        raise InputError("form order must be >= 1")
    k = s.dim
    system = build_jets(s, m)
    kernel = linalg.kernel_basis(system.j_block(m - 1), "right")
    mons = monomials_of_degree(k, m)
    d_m = system.degree_block(m)
    rows = []
    for c in kernel.vectors:
        coeffs = []
        for alpha, d_row in zip(mons, d_m):
            mult = Fraction(factorial(m))
            for a in alpha:
                mult /= factorial(a)
            coeffs.append(mult * linalg.dot(d_row, c))
        rows.append(tuple(coeffs))
    rows = [r for r in rows if any(r)]
    if rows:
        red, _ = linalg.rref(tuple(rows))
        rows = [r for r in red if any(r)]
    return FundamentalForm(k=k, m=m, monomials=tuple(mons), basis=tuple(rows))
