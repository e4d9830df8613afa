"""Exact rational Gaussian elimination.

Pivots are chosen among the candidate rows of a column by the smallest
numerator-times-denominator bit size, which keeps intermediate fractions
from blowing up without ever leaving exact arithmetic.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["solve_exact", "matrix_rank", "EliminationResult"]


def _bits(x):
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return abs(x).bit_length()


class EliminationResult:
    __slots__ = ("solution", "rank", "nullity", "consistent", "pivot_cols")

    def __init__(self, solution, rank, nullity, consistent, pivot_cols):
        self.solution = solution
        self.rank = rank
        self.nullity = nullity
        self.consistent = consistent
        self.pivot_cols = pivot_cols


def solve_exact(rows, rhs) -> EliminationResult:
    """Solve rows * x = rhs exactly.

    Returns a particular solution with free variables set to zero, the rank,
    the nullity, and whether the system is consistent.  Inputs are copied.
    """
    if not rows:
        return EliminationResult([], 0, 0, True, [])
    ncols = len(rows[0])
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    nrows = len(m)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        best = None
        best_bits = None
        for i in range(r, nrows):
            v = m[i][c]
            if v:
                b = _bits(v)
                if best is None or b < best_bits:
                    best, best_bits = i, b
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                row_r = m[r]
                m[i] = [x - f * y for x, y in zip(m[i], row_r)]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    rank = r
    consistent = all(m[i][ncols] == 0 for i in range(rank, nrows))
    solution = None
    if consistent:
        solution = [Fraction(0)] * ncols
        for i, c in enumerate(pivot_cols):
            solution[c] = m[i][ncols]
    return EliminationResult(solution, rank, ncols - rank, consistent, pivot_cols)


def matrix_rank(rows) -> int:
    if not rows:
        return 0
    return solve_exact(rows, [0] * len(rows)).rank
