"""Exact linear algebra.

Dense matrices as lists of row lists.  Two tiers:

* rational matrices (``fractions.Fraction`` entries) with inverse,
  solve, determinant;
* generic elimination that only uses ``-``, ``*``, ``/`` and a zero
  test, usable over any exact field (rationals, ``Scalar``, GF(p)
  wrappers).

Plus a unimodular completion of a primitive integer vector, used to
change coordinates so that a chosen lattice direction becomes the first
basis vector.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Callable, Sequence


def _frac_rows(rows: Sequence[Sequence]) -> list[list[Q]]:
    return [[Q(x) for x in row] for row in rows]


def identity(n: int) -> list[list[Q]]:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[Q]], b: Sequence[Sequence[Q]]) -> list[list[Q]]:
    rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
    assert all(len(r) == mid for r in a), "inner dimensions must agree"
    return [
        [sum((a[i][k] * b[k][j] for k in range(mid)), Q(0)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a: Sequence[Sequence[Q]], v: Sequence[Q]) -> list[Q]:
    return [sum((row[k] * v[k] for k in range(len(v))), Q(0)) for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def mat_det(a: Sequence[Sequence[Q]]) -> Q:
    """Determinant by fraction elimination."""
    n = len(a)
    m = _frac_rows(a)
    det = Q(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Q(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return det


def mat_inv(a: Sequence[Sequence[Q]]) -> list[list[Q]]:
    """Inverse of a square rational matrix; ValueError if singular."""
    n = len(a)
    m = _frac_rows(a)
    aug = [m[i] + identity(n)[i] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_solve(a: Sequence[Sequence[Q]], b: Sequence[Q]) -> list[Q]:
    """Solve a·x = b for square invertible a."""
    return mat_vec(mat_inv(a), list(b))


def is_integral(v: Sequence[Q]) -> bool:
    return all(Q(x).denominator == 1 for x in v)


# -- generic elimination ---------------------------------------------------


def row_echelon(
    rows: list[list], is_zero: Callable = lambda x: x == 0
) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field given by operator arithmetic.

    Returns (rref rows, pivot column indices).  Input is not mutated.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(m)) if not is_zero(m[r][col])), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        lead = m[row][col]
        m[row] = [x / lead for x in m[row]]
        for r in range(len(m)):
            if r != row and not is_zero(m[r][col]):
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m, pivots


def rank(rows: list[list], is_zero: Callable = lambda x: x == 0) -> int:
    return len(row_echelon(rows, is_zero)[1])


def nullspace(
    rows: list[list],
    zero,
    one,
    is_zero: Callable = lambda x: x == 0,
) -> list[list]:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = row_echelon(rows, is_zero)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for prow, pcol in zip(rref, pivots):
            vec[pcol] = zero - prow[f]
        basis.append(vec)
    return basis


def solve_general(
    rows: list[list],
    rhs: list,
    zero,
    is_zero: Callable = lambda x: x == 0,
) -> list | None:
    """One solution of rows·x = rhs, or None if inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_echelon(aug, is_zero)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for prow, pcol in zip(rref, pivots):
        x[pcol] = prow[-1]
    return x


# -- unimodular completion --------------------------------------------------


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with g = gcd(a, b) >= 0 and g = s*a + t*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def unimodular_completion(v: Sequence[int]) -> tuple[list[list[int]], list[list[int]]]:
    """For a primitive integer vector v return (U, V) with U unimodular,
    U·v = e1 and V = U^{-1} (so the first column of V is v)."""
    n = len(v)
    if n == 0 or all(x == 0 for x in v):
        raise ValueError("vector must be nonzero")
    w = [int(x) for x in v]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(1, n):
        if w[i] == 0:
            continue
        g, s, t = xgcd(w[0], w[i])
        a, b = w[0] // g, w[i] // g
        # rows of U: [[s, t], [-b, a]] acting on (row0, rowi); det = 1
        row0 = [s * x + t * y for x, y in zip(u[0], u[i])]
        rowi = [-b * x + a * y for x, y in zip(u[0], u[i])]
        u[0], u[i] = row0, rowi
        # columns of V pick up the inverse [[a, -t], [b, s]]
        for r in range(n):
            c0, ci = vinv[r][0], vinv[r][i]
            vinv[r][0] = a * c0 + b * ci
            vinv[r][i] = -t * c0 + s * ci
        w[0], w[i] = g, 0
    if w[0] == -1:
        u[0] = [-x for x in u[0]]
        for r in range(n):
            vinv[r][0] = -vinv[r][0]
        if n > 1:  # restore det +1 by negating a second row/column pair
            u[1] = [-x for x in u[1]]
            for r in range(n):
                vinv[r][1] = -vinv[r][1]
        w[0] = 1
    if w[0] != 1:
        raise ValueError(f"vector is not primitive (content {w[0]})")
    return u, vinv
