"""Coin fountains and the coarse series of the cyclic singularity X(p,1).

A p-fountain has a contiguous bottom row of k coins; a coin at position i of
the next row up needs coins at positions i..i+p of the row below.  It is
primitive when the second row is full (k - p coins).  Fountains with k < p are
never primitive.

Two-variable series live in variables (q, z) with z of weight 0, so they are
truncated in the q-degree only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .series import TruncatedSeries, euler_product_coeffs, single

QZ = ("q", "z")


class CapInstabilityError(RuntimeError):
    """Raising the size cap of the brute-force count changed the result."""


# -- fountains ---------------------------------------------------------------------

def _check_p(p: int):
    if p < 1:
        raise ValueError("p must be a positive integer")


def _supported(row: tuple[int, ...], p: int) -> list[int]:
    s = set(row)
    return [i for i in row if all(i + t in s for t in range(1, p + 1))]


def iter_fountains(p: int, k: int, max_coins: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every p-fountain with bottom row {0..k-1}, as a tuple of rows (bottom first)."""
    _check_p(p)
    if k == 0:
        yield ()
        return
    cap = math.inf if max_coins is None else max_coins

    def rec(rows, total):
        yield tuple(rows)
        sup = _supported(rows[-1], p)
        # nonempty subsets of the supported positions, in lexicographic order
        for mask in range(1, 1 << len(sup)):
            new = tuple(sup[j] for j in range(len(sup)) if mask >> j & 1)
            if total + len(new) <= cap:
                rows.append(new)
                yield from rec(rows, total + len(new))
                rows.pop()

    if k <= cap:
        yield from rec([tuple(range(k))], k)


def is_primitive(fountain, p: int) -> bool:
    if not fountain:
        return False
    k = len(fountain[0])
    if k < p:
        return False
    return len(fountain[1] if len(fountain) > 1 else ()) == k - p


def enumerate_fountains(p: int, n: int, k: int) -> tuple[int, int]:
    """(number of (n, k) p-fountains, number of primitive ones), by exhaustive search."""
    total = prim = 0
    for fz in iter_fountains(p, k, max_coins=n):
        if sum(map(len, fz)) == n:
            total += 1
            prim += is_primitive(fz, p)
    return total, prim


@lru_cache(maxsize=None)
def fountain_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Coefficients of sum_n f(n, k) q^n.

    Above the bottom row the supported positions are 0..k-p-1; each maximal run
    of occupied positions there is the bottom of an independent fountain.
    """
    _check_p(p)
    m = k - p
    # R[j]: configurations on j positions; S[j]: same with the last one empty
    R = [(1,)]
    for j in range(1, max(m, 0) + 1):
        acc = list(R[j - 1])
        for w in range(1, j + 1):
            before = R[j - w - 1] if j - w - 1 >= 0 else (1,)
            acc = _padd(acc, _pmul(fountain_polynomial(p, w), before))
        R.append(tuple(acc))
    above = R[m] if m >= 0 else (1,)
    return tuple([0] * k + list(above))


def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def f_count(p: int, n: int, k: int) -> int:
    poly = fountain_polynomial(p, k)
    return poly[n] if 0 <= n < len(poly) else 0


def g_count(p: int, n: int, k: int) -> int:
    """Primitive fountains: removing the full bottom row leaves an (n-k, k-p) fountain."""
    if k < p or n < k:
        return 0
    return f_count(p, n - k, k - p)


def h_count(p: int, n: int, k: int) -> int:
    return f_count(p, n, k) - g_count(p, n, k)


@dataclass(frozen=True)
class FountainTable:
    """f, g, h over 0 <= k <= n <= nmax, built by exhaustive search."""
    p: int
    nmax: int
    f: tuple[tuple[int, ...], ...]
    g: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, p: int, nmax: int) -> FountainTable:
        _check_p(p)
        f = [[0] * (nmax + 1) for _ in range(nmax + 1)]
        g = [[0] * (nmax + 1) for _ in range(nmax + 1)]
        for k in range(nmax + 1):
            for fz in iter_fountains(p, k, max_coins=nmax):
                n = sum(map(len, fz))
                f[n][k] += 1
                g[n][k] += is_primitive(fz, p)
        return cls(p, nmax, tuple(map(tuple, f)), tuple(map(tuple, g)))

    def h(self, n: int, k: int) -> int:
        return self.f[n][k] - self.g[n][k]

    def totals(self) -> list[int]:
        return [sum(row) for row in self.f]

    def check_removal_identity(self) -> bool:
        """g(n, k) = f(n - k, k - p) for n >= k >= p."""
        p = self.p
        return all(self.g[n][k] == self.f[n - k][k - p]
                   for n in range(self.nmax + 1) for k in range(p, n + 1))

    def check_boundary(self) -> bool:
        return all(self.f[j][j] == 1 and self.g[j][j] == 0 for j in range(min(self.p, self.nmax + 1)))

    def check_split(self) -> bool:
        """Non-primitive fountains split at the first gap r of the second row.

        h(n, k) = sum_{r=1}^{k-p} sum_m g(m+p-1, r+p-1) f(n-m, k-r) for k >= p; the
        two pieces share p - 1 bottom coins.
        """
        p, N = self.p, self.nmax
        for n in range(N + 1):
            for k in range(p, n + 1):
                tot = 0
                for r in range(1, k - p + 1):
                    for m in range(n - N, n + 1):
                        a = m + p - 1
                        if 0 <= a <= N:
                            tot += self.g[a][r + p - 1] * self.f[n - m][k - r]
                if tot != self.h(n, k):
                    return False
        return True


# -- two-variable series ---------------------------------------------------------

def _qz(terms, N) -> TruncatedSeries:
    return TruncatedSeries(QZ, N, terms, weights=(1, 0))


def fountain_series_F(p: int, N: int) -> TruncatedSeries:
    """F(q, z) = sum f(n, k) q^n z^k, from exhaustive enumeration."""
    t = FountainTable.build(p, N)
    return _qz({(n, k): t.f[n][k] for n in range(N + 1) for k in range(n + 1)}, N)


def substitute_qz(F: TruncatedSeries) -> TruncatedSeries:
    """F(q, qz)"""
    return F.map_exponents(lambda e: (e[0] + e[1], e[1]))


def g_from_removal(p: int, F: TruncatedSeries) -> TruncatedSeries:
    """G = (qz)^p F(q, qz)"""
    shift = _qz({(p, p): 1}, F.truncation)
    return shift * substitute_qz(F)


def _geometric_tail(x: TruncatedSeries, count: int) -> TruncatedSeries:
    # 1 + x + ... + x^{count-1}
    out = x.like({})
    term = x.like({(0, 0): 1})
    for _ in range(count):
        out = out + term
        term = term * x
    return out


def g_continued_fraction(p: int, N: int, depth: int) -> TruncatedSeries:
    """(qz)^p X_2 with X_j = (q^j z)^{p-1} / (1 - q^j z X_{j+1}) + (1 - (q^j z)^{p-1}) / (1 - q^j z).

    The expansion is cut by setting X_{depth+2} = 0.
    """
    one = _qz({(0, 0): 1}, N)
    X = one.like({})
    for j in range(depth + 1, 1, -1):
        y = _qz({(j, 1): 1}, N)
        X = y ** (p - 1) * (one - y * X).inverse() + _geometric_tail(y, p - 1)
    return _qz({(p, p): 1}, N) * X


def g_continued_fraction_auto(p: int, N: int, start: int = 2) -> tuple[TruncatedSeries, int]:
    """Deepen until two consecutive depths agree; returns (G, depth used)."""
    depth = start
    prev = g_continued_fraction(p, N, depth)
    while True:
        depth += 1
        cur = g_continued_fraction(p, N, depth)
        if cur == prev:
            return cur, depth
        prev = cur


def fountain_series(p: int, N: int) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """(F, G, H); raises if the two routes to G disagree."""
    F = fountain_series_F(p, N)
    G = g_from_removal(p, F)
    G2, _ = g_continued_fraction_auto(p, N)
    if G != G2:
        raise ArithmeticError("primitive fountain series: removal and continued fraction disagree")
    return F, G, F - G


def ramanujan_ratio(N: int) -> TruncatedSeries:
    """sum (-qz)^n q^{n^2}/(q)_n divided by sum (-z)^n q^{n^2}/(q)_n."""
    def side(extra):
        acc = _qz({}, N)
        inv = [1] + [0] * N  # 1 / (1-q)...(1-q^n), updated as n grows
        n = 0
        while n * n + n * extra <= N:
            if n:
                for d in range(n, N + 1):
                    inv[d] += inv[d - n]
            sign = -1 if n % 2 else 1
            shift = n * n + n * extra
            acc = acc + _qz({(shift + d, n): sign * c for d, c in enumerate(inv) if shift + d <= N}, N)
            n += 1
        return acc
    return side(1) * side(0).inverse()


def ramanujan_continued_fraction(N: int) -> TruncatedSeries:
    """1 / (1 - qz / (1 - q^2 z / (1 - ...)))"""
    one = _qz({(0, 0): 1}, N)
    X = one
    for j in range(N + 1, 0, -1):
        X = (one - _qz({(j, 1): 1}, N) * X).inverse()
    return X


# -- triangles and the Jacobi triple product ----------------------------------------------

def _laurent(N: int, terms) -> TruncatedSeries:
    return TruncatedSeries(QZ, N, terms, weights=(1, 0), laurent=1)


def _tri_exp(p: int, l: int) -> int:
    return p * l * (l + 1) // 2 + l + 1


def _l_range(p: int, N: int) -> range:
    # the exponent is a convex quadratic in l, at least |l| - 1 away from l = 0
    return range(-N - 3, N + 3)


def triangle_series(p: int, N: int) -> TruncatedSeries:
    """T(q, z) = sum over all integers l of q^{p l(l+1)/2 + l + 1} z^{lp + 1}."""
    _check_p(p)
    return _laurent(N, {(_tri_exp(p, l), l * p + 1): 1 for l in _l_range(p, N) if _tri_exp(p, l) <= N})


def triangle_product(p: int, N: int) -> TruncatedSeries:
    """(qz) prod_{n>=1} (1 + z^p q^{np+1})(1 + z^{-p} q^{(n-1)p-1})(1 - q^{np}).

    The n = 1 middle factor carries q^{-1}; it is multiplied into the prefactor qz first.
    """
    _check_p(p)
    out = _laurent(N, {(1, 1): 1, (0, 1 - p): 1})
    for n in range(1, N + 3):
        out = out * _laurent(N, {(0, 0): 1, (n * p + 1, p): 1})
        if n >= 2:
            out = out * _laurent(N, {(0, 0): 1, ((n - 1) * p - 1, -p): 1})
        out = out * _laurent(N, {(0, 0): 1, (n * p, 0): -1})
    return out


def jacobi_sum(N: int) -> TruncatedSeries:
    """sum_j z^j q^{j(j+1)/2}"""
    terms = {}
    j = 0
    while j * (j + 1) // 2 <= N:
        terms[(j * (j + 1) // 2, j)] = 1
        terms[(j * (j + 1) // 2, -j - 1)] = 1
        j += 1
    return _laurent(N, terms)


def jacobi_product(N: int) -> TruncatedSeries:
    """prod_{n>=1} (1 + z q^n)(1 + z^{-1} q^{n-1})(1 - q^n)"""
    out = _laurent(N, {(0, 0): 1})
    for n in range(1, N + 2):
        out = out * _laurent(N, {(0, 0): 1, (n, 1): 1})
        out = out * _laurent(N, {(0, 0): 1, (n - 1, -1): 1})
        out = out * _laurent(N, {(0, 0): 1, (n, 0): -1})
    return out


# -- coarse series of X(p, 1) -----------------------------------------------------

def _max_fountain(p: int, k: int) -> int:
    return len(fountain_polynomial(p, k)) - 1


def pairing_terms(p: int, N: int, negative: bool = False) -> dict[int, int]:
    """[z^0] of the pairing of T(q, z) with H(q^{-1}, z^{-1}), restricted to l >= 0 or l < 0.

    A term of T with z^{lp+1} meets h(n, lp+1) q^{-n}; only lp + 1 >= 0 pairs.
    """
    acc: dict[int, int] = {}
    if negative:
        ls = [l for l in range(-1, -N - 3, -1) if l * p + 1 >= 0]
    else:
        ls = []
        l = 0
        # a fountain with bottom lp+1 missing a coin in row two misses at least
        # one coin in each of the l rows above the bottom, so wt_0 >= l
        while l <= N + 1:
            ls.append(l)
            l += 1
    for l in ls:
        k = l * p + 1
        w = _tri_exp(p, l)
        for n in range(max(0, w - N), min(w, _max_fountain(p, k)) + 1):
            c = h_count(p, n, k)
            if c:
                acc[w - n] = acc.get(w - n, 0) + c
    return acc


def negative_l_contribution(p: int, N: int) -> TruncatedSeries:
    return single("q", N, [pairing_terms(p, N, negative=True).get(d, 0) for d in range(N + 1)])


def zero_generated_p1(p: int, N: int, cap: int) -> list[int]:
    """Counts by wt_0 <= N of diagrams of size <= cap all of whose addable cells (x, y) have x + y = 0 mod p.

    wt_0 counts the cells with x + y = 0 mod p (0-based coordinates).
    """
    _check_p(p)
    counts = [0] * (N + 1)

    def zeros_in_row(y, length):
        # x in [0, length) with x + y = 0 mod p
        first = (-y) % p
        return 0 if first >= length else (length - 1 - first) // p + 1

    def rec(y, prev, size, wt):
        # rows y, y+1, ... still to choose; prev = length of row y-1
        # stopping here leaves the addable cell (0, y)
        if y % p == 0:
            counts[wt] += 1
        for L in range(1, prev + 1):
            if size + L > cap:
                break
            # row y gets an addable cell at (L, y) unless it is as long as the row above
            if y > 0 and L == prev or (L + y) % p == 0:
                z = zeros_in_row(y, L)
                if wt + z <= N:
                    rec(y + 1, L, size + L, wt + z)

    rec(0, cap, 0, 0)
    return counts


def coarse_series_p1(p: int, N: int, method: str = "formula") -> TruncatedSeries:
    """Coarse series of X(p, 1) in q, by the fountain pairing or by direct enumeration."""
    _check_p(p)
    if method == "formula":
        pos = pairing_terms(p, N)
        neg = pairing_terms(p, N, negative=True)
        return single("q", N, [pos.get(d, 0) + neg.get(d, 0) for d in range(N + 1)])
    if method == "brute":
        B = (N + 2) * (2 * p + 2)
        first = zero_generated_p1(p, N, B)
        again = zero_generated_p1(p, N, math.ceil(1.25 * B))
        if first != again:
            raise CapInstabilityError(f"size cap {B} too small: {first} vs {again}")
        return single("q", N, first)
    raise ValueError(f"unknown method {method!r}")
