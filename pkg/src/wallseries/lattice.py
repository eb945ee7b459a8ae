"""Short-vector enumeration for integral positive definite quadratic forms.

The form is Q(m) = 1/2 m^T C m.  Enumeration is a breadth-first
Fincke-Pohst sweep in numpy: coordinates are fixed from the last one down,
and at each level the admissible interval for the next coordinate is read
off the exact rational LDL^T decomposition of C.  Floating point is only used
to size the intervals, with a slack that makes them wider than the exact
ones; every emitted vector is re-checked with integer arithmetic, so rounding
can add candidates but never lose one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

import numpy as np

CHUNK = 1 << 21


def rational_ldl(C) -> tuple[list[list[Fraction]], list[Fraction]]:
    """C = U^T diag(d) U with U unit upper triangular; raises unless C is positive definite.

    U is returned as a full matrix; d must be strictly positive.
    """
    n = len(C)
    A = [[Fraction(C[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric")
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = []
    for i in range(n):
        piv = A[i][i]
        if piv <= 0:
            raise ValueError("matrix is not positive definite")
        d.append(piv)
        for j in range(i + 1, n):
            U[i][j] = A[i][j] / piv
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                A[j][k] -= U[i][j] * piv * U[i][k]
    return U, d


def is_positive_definite(C) -> bool:
    try:
        rational_ldl(C)
    except ValueError:
        return False
    return True


def min_eigenvalue_lower_bound(C, iters: int = 40) -> Fraction:
    """A rational r > 0 with C - r*I positive definite, so r <= lambda_min(C).

    Bisection between 0 and the Gershgorin upper bound; each probe is decided
    exactly by the rational LDL pivots.
    """
    n = len(C)
    if not is_positive_definite(C):
        raise ValueError("matrix is not positive definite")
    lo = Fraction(0)
    hi = Fraction(max(C[i][i] + sum(abs(C[i][j]) for j in range(n) if j != i) for i in range(n)))
    for _ in range(iters):
        mid = (lo + hi) / 2
        shifted = [[C[i][j] - (mid if i == j else 0) for j in range(n)] for i in range(n)]
        if is_positive_definite(shifted):
            lo = mid
        else:
            hi = mid
    if lo == 0:
        raise ValueError("could not certify a positive eigenvalue bound")
    return lo


def _intervals(front, partial, level, U, d, two_b, slack):
    n = U.shape[0]
    if front.shape[1]:
        centre = -(front @ U[level, level + 1:n])
    else:
        centre = np.zeros(front.shape[0])
    room = np.maximum(two_b - partial, 0.0) / d[level]
    radius = np.sqrt(room) + slack
    lo = np.ceil(centre - radius).astype(np.int64)
    hi = np.floor(centre + radius).astype(np.int64)
    return centre, lo, np.maximum(hi - lo + 1, 0)


def _expand(front, partial, centre, lo, cnt, dl):
    total = int(cnt.sum())
    rows = np.repeat(np.arange(front.shape[0]), cnt)
    starts = np.repeat(np.cumsum(cnt) - cnt, cnt)
    vals = lo[rows] + (np.arange(total) - starts)
    new_front = np.empty((total, front.shape[1] + 1), dtype=np.int64)
    new_front[:, 0] = vals
    new_front[:, 1:] = front[rows]
    new_partial = partial[rows] + dl * (vals - centre[rows]) ** 2
    return new_front, new_partial


def short_vectors(C, bound: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Yield int64 arrays whose rows are all m in Z^n with 1/2 m^T C m <= bound.

    Every vector appears in exactly one yielded block; block order and the
    order inside a block are deterministic.
    """
    n = len(C)
    if bound < 0:
        return
    U_rat, d_rat = rational_ldl(C)
    U = np.array([[float(x) for x in row] for row in U_rat])
    d = np.array([float(x) for x in d_rat])
    Ci = np.array(C, dtype=np.int64)
    two_b = 2.0 * bound
    # generous absolute slack on each interval radius; the exact filter below
    # discards the extra candidates
    slack = 1e-6 * (1.0 + math.sqrt(two_b))

    stack = [(n - 1, np.zeros((1, 0), dtype=np.int64), np.zeros(1))]
    while stack:
        level, front, partial = stack.pop()
        centre, lo, cnt = _intervals(front, partial, level, U, d, two_b, slack)
        if len(cnt) > 1 and int(cnt.sum()) > chunk:
            # too many children: split the unexpanded frontier, keep order
            csum = np.cumsum(cnt)
            cuts = [0]
            while cuts[-1] < len(cnt):
                base = csum[cuts[-1] - 1] if cuts[-1] else 0
                nxt = int(np.searchsorted(csum, base + chunk, side="right"))
                cuts.append(max(nxt, cuts[-1] + 1))
            for lo_i, hi_i in reversed(list(zip(cuts, cuts[1:]))):
                stack.append((level, front[lo_i:hi_i], partial[lo_i:hi_i]))
            continue
        nf, np_ = _expand(front, partial, centre, lo, cnt, d[level])
        if level == 0:
            q2 = np.einsum("ij,jk,ik->i", nf, Ci, nf)
            keep = q2 <= 2 * bound
            if keep.any():
                yield nf[keep]
        else:
            stack.append((level - 1, nf, np_))


def quadratic_values(C, vecs: np.ndarray) -> np.ndarray:
    """Exact 1/2 m^T C m for each row (C must have even diagonal)."""
    Ci = np.array(C, dtype=np.int64)
    return np.einsum("ij,jk,ik->i", vecs, Ci, vecs) // 2
