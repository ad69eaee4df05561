"""Independent oracles used by the tests.

These deliberately avoid the code paths they check: rank by plain
fraction Gaussian elimination (vs fraction-free Bareiss), point counts by
direct evaluation over all base points (vs the vectorized fiber loop).
"""
from __future__ import annotations

from fractions import Fraction


def gauss_rank(rows) -> int:
    """Row-echelon rank with exact fractions."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        m[rank] = [x / pv for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def brute_h0_kernel(matrix_entries_eval, src_dims, tgt_dims):
    """Not needed: kernel checks reuse gauss_rank on the same section matrix."""
    raise NotImplementedError


def count_double_cover_f3(coeffs_mod3) -> int:
    """Brute-force count over F_3 with plain integer arithmetic mod 3.

    coeffs_mod3[i][j] multiplies x0^(4-i) x1^i y0^(4-j) y1^j.
    """
    pts = [(1, 0), (1, 1), (1, 2), (0, 1)]
    total = 0
    for x0, x1 in pts:
        for y0, y1 in pts:
            v = 0
            for i in range(5):
                for j in range(5):
                    c = coeffs_mod3[i][j]
                    if not c:
                        continue
                    v += (
                        c
                        * pow(x0, 4 - i, 3)
                        * pow(x1, i, 3)
                        * pow(y0, 4 - j, 3)
                        * pow(y1, j, 3)
                    )
            v %= 3
            if v == 0:
                total += 1
            elif v == 1:  # squares mod 3 are {1}
                total += 2
    return total
