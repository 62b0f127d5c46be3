"""Exact rational arithmetic: fractions, univariate polynomials, Lagrange
interpolation and dense linear solving over Q.

Everything downstream computes with exact rationals; floats never appear.
Rationals are plain :class:`fractions.Fraction` values, which are always
stored in lowest terms with positive denominator -- that canonical form is
what makes golden-value comparisons meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

QQ = Fraction


def rat(x, y=None) -> Fraction:
    """Build a Fraction from ints, strings or another Fraction."""
    if y is None:
        return Fraction(x)
    return Fraction(x, y)


def format_rat(q) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rat(s: str) -> Fraction:
    """Inverse of :func:`format_rat`."""
    return Fraction(s)


def lcm_list(values: Iterable[int]) -> int:
    """Least common multiple of a list of positive integers (empty list -> 1)."""
    result = 1
    for v in values:
        if v < 1:
            raise ValueError("lcm_list requires positive entries, got %r" % (v,))
        result = math.lcm(result, v)
    return result


class UniPoly:
    """Univariate polynomial with Fraction coefficients, ascending degree.

    Canonical form: no trailing zero coefficients; the zero polynomial has
    an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "UniPoly":
        return UniPoly([Fraction(c) * a for a in self.coeffs])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(format_rat(c))
            elif i == 1:
                terms.append("%s*r" % format_rat(c))
            else:
                terms.append("%s*r^%d" % (format_rat(c), i))
        return "UniPoly(%s)" % " + ".join(terms)


def lagrange_interpolate(points: Sequence) -> UniPoly:
    """Exact Lagrange interpolation through ``points = [(x, y), ...]``.

    The x values must be pairwise distinct; the returned polynomial has
    degree < len(points) and passes through every point exactly.
    """
    if not points:
        raise ValueError("lagrange_interpolate needs at least one point")
    xs = [Fraction(p[0]) for p in points]
    ys = [Fraction(p[1]) for p in points]
    if len(set(xs)) != len(xs):
        raise ValueError("degenerate nodes")
    total = UniPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = UniPoly([1])
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * UniPoly([-xj, 1])
            den *= xi - xj
        total = total + num.scale(yi / den)
    return total


@dataclass(frozen=True)
class RatMatrix:
    """A dense matrix of rationals with consistent row/column counts."""

    rows: int
    cols: int
    entries: tuple

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RatMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        return RatMatrix(len(data), ncols, data)


@dataclass
class SolveReport:
    """Outcome of an exact linear solve.

    status is one of ``"unique"``, ``"non-unique"`` or ``"no-solution"``.
    ``solution`` is a particular solution when one exists; ``kernel`` is a
    basis of the homogeneous solution space.
    """

    status: str
    solution: tuple | None
    kernel: tuple

    @property
    def ok(self) -> bool:
        return self.status == "unique"


def solve_rational_system(A, b) -> SolveReport:
    """Solve ``A x = b`` exactly over Q by Gaussian elimination with pivoting.

    ``A`` may be a RatMatrix or a list of rows. Returns a :class:`SolveReport`
    distinguishing a unique solution, an inconsistent system, and an
    under-determined one (with a kernel basis in the latter case).
    """
    if isinstance(A, RatMatrix):
        rows = [list(r) for r in A.entries]
        ncols = A.cols
    else:
        rows = [[Fraction(x) for x in r] for r in A]
        ncols = len(rows[0]) if rows else 0
    rhs = [Fraction(x) for x in b]
    if len(rhs) != len(rows):
        raise ValueError("dimension mismatch between matrix and right-hand side")

    aug = [row + [v] for row, v in zip(rows, rhs)]
    nrows = len(aug)
    pivots = []  # (row, col)
    r = 0
    for c in range(ncols):
        # full column scan; pick the entry with largest magnitude for determinism
        pivot_row = None
        for rr in range(r, nrows):
            if aug[rr][c] != 0:
                if pivot_row is None or abs(aug[rr][c]) > abs(aug[pivot_row][c]):
                    pivot_row = rr
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for rr in range(nrows):
            if rr != r and aug[rr][c] != 0:
                factor = aug[rr][c]
                aug[rr] = [x - factor * y for x, y in zip(aug[rr], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break

    for rr in range(r, nrows):
        if aug[rr][ncols] != 0:
            return SolveReport("no-solution", None, ())

    pivot_cols = {c for (_, c) in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    solution = [Fraction(0)] * ncols
    for (rr, c) in pivots:
        solution[c] = aug[rr][ncols]

    kernel = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for (rr, c) in pivots:
            vec[c] = -aug[rr][fc]
        kernel.append(tuple(vec))

    if free_cols:
        return SolveReport("non-unique", tuple(solution), tuple(kernel))
    return SolveReport("unique", tuple(solution), ())


def matrix_rank(rows) -> int:
    """Rank of a rational matrix (list of rows)."""
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        pivot = None
        for rr in range(rank, len(rows)):
            if rows[rr][c] != 0:
                pivot = rr
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [x / pv for x in rows[rank]]
        for rr in range(len(rows)):
            if rr != rank and rows[rr][c] != 0:
                f = rows[rr][c]
                rows[rr] = [x - f * y for x, y in zip(rows[rr], rows[rank])]
        rank += 1
    return rank
