"""Brute-force reference implementations, written without the package internals."""

from __future__ import annotations

import itertools
from collections import Counter


def partitions(k, maxpart=None):
    maxpart = k if maxpart is None else maxpart
    if k == 0:
        yield ()
        return
    for first in range(min(k, maxpart), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def partitions_upto(N):
    for k in range(N + 1):
        yield from partitions(k)


def cells(parts):
    return [(i, j) for i, h in enumerate(parts) for j in range(h)]


def addable(parts):
    out = []
    for i in range(len(parts) + 1):
        h = parts[i] if i < len(parts) else 0
        if i == 0 or parts[i - 1] > h:
            out.append((i, h))
    return out


def contains(big, small):
    return len(small) <= len(big) and all(a >= b for a, b in zip(big, small))


def label_a(n, i, j):
    return (i - j) % (n + 1)


def content_a(n, parts):
    c = Counter(label_a(n, i, j) for i, j in cells(parts))
    return tuple(c[k] for k in range(n + 1))


def zero_generated_a(n, parts):
    return all(label_a(n, i, j) == 0 for i, j in addable(parts))


def rim_hook_core(parts, length):
    """Remove border strips of the given length, always the first one found."""
    parts = list(parts)
    while True:
        for r in range(len(parts)):
            for c in range(parts[r]):
                new = _strip(parts, r, c, length)
                if new is not None:
                    parts = new
                    break
            else:
                continue
            break
        else:
            return tuple(parts)


def _strip(parts, r, c, length):
    # hook at (column r, row c) in column-height notation: arm = columns to the right
    heights = parts
    arm = sum(1 for x in range(r + 1, len(heights)) if heights[x] > c)
    leg = heights[r] - c - 1
    if arm + leg + 1 != length:
        return None
    # removing the border strip: column x in r..r+arm drops to the height of column x+1 (or c)
    new = list(heights)
    for x in range(r, r + arm + 1):
        nxt = heights[x + 1] if x + 1 < len(heights) else 0
        new[x] = max(c, nxt - 1) if x < r + arm else c
    return [h for h in new if h > 0]


# -- type D walls ------------------------------------------------------------------

def walls(n, N):
    """(height, orientation) column lists of total size <= N; orientation only on half tops."""
    res = []

    def rec(prev, rem, acc):
        res.append(tuple(acc))
        ph, po = prev
        for h in range(min(ph, rem), 0, -1):
            half = h % (n - 1) == 0
            if h == ph:
                if half and po is not None:
                    acc.append((h, po))
                    rec((h, po), rem - h, acc)
                    acc.pop()
            elif half:
                for o in (0, 1):
                    acc.append((h, o))
                    rec((h, o), rem - h, acc)
                    acc.pop()
            else:
                acc.append((h, None))
                rec((h, None), rem - h, acc)
                acc.pop()

    rec((N + 1, None), N, [])
    return res


def column_content_d(n, c, height, orient):
    """Label counts of the pieces of column c (1-based) stacked up to the given height."""
    P = 2 * n - 2
    labs = Counter()
    for y in range(1, height + 1):
        r = (y - 1) % P + 1
        t = (y - 1) // P
        top = y == height
        if r == 1:
            if t == 0:
                labs[0 if c % 2 == 1 else 1] += 1
            else:
                labs[0] += 1
                labs[1] += 1
        elif 2 <= r <= n - 2:
            labs[r] += 1
        elif r == n - 1:
            if top:
                labs[(n - 1) if orient == c % 2 else n] += 1
        elif r == n:
            labs[n - 1] += 1
            labs[n] += 1
        elif n + 1 <= r <= 2 * n - 3:
            labs[2 * n - 1 - r] += 1
        elif r == 2 * n - 2 and top:
            labs[0 if orient == c % 2 else 1] += 1
    return labs


def content_d(n, columns):
    tot = Counter()
    for c, (h, o) in enumerate(columns, 1):
        tot += column_content_d(n, c, h, o)
    return tuple(tot[i] for i in range(n + 1))


# -- lattices ---------------------------------------------------------------------------

def box_vectors(C, bound, R):
    """All m in [-R, R]^n with m^T C m / 2 <= bound."""
    n = len(C)
    out = []
    for m in itertools.product(range(-R, R + 1), repeat=n):
        q2 = sum(C[i][j] * m[i] * m[j] for i in range(n) for j in range(n))
        if q2 <= 2 * bound:
            out.append(m)
    return sorted(out)


# -- X(p, 1) diagrams ---------------------------------------------------------------------

def zero_generated_p(p, parts):
    return all((i + j) % p == 0 for i, j in addable(parts))


def wt0_p(p, parts):
    return sum(1 for i, j in cells(parts) if (i + j) % p == 0)


def fountains(p, k, cap):
    """Every p-fountain with bottom width k and at most cap coins, as frozensets of (row, pos)."""
    out = []

    def rec(rows):
        coins = sum(len(r) for r in rows)
        out.append(tuple(rows))
        below = set(rows[-1])
        cand = [i for i in sorted(below) if all(i + t in below for t in range(p + 1))]
        for size in range(1, len(cand) + 1):
            if coins + size > cap:
                break
            for pick in itertools.combinations(cand, size):
                rows.append(tuple(pick))
                rec(rows)
                rows.pop()

    if k == 0:
        return [()]
    if k <= cap:
        rec([tuple(range(k))])
    return out
