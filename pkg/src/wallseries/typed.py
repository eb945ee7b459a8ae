"""Type-D Young walls through their abacus.

A wall is a list of columns (height, orientation) with heights weakly
decreasing; columns whose height is a multiple of n - 1 end in a half block
and carry an orientation bit, and equal heights are only allowed for such
columns with equal bits.  The abacus has positions 1, 2, ... in rows of
width P = 2n - 2; position s lies on runner R_r with r = (s - 1) mod P + 1.
Each column of height h puts a bead at position h.  Positions on R_{n-1}
and R_{2n-2} ("colored" positions) hold any number of beads of one color,
the color being orientation XOR (number of full columns shorter than the
column) mod 2.  Other positions hold at most one uncolored bead.

Weights never come from the block pattern directly: the multiweight of a
wall is the multiweight of its core (a closed formula in the core's
coordinates z) plus one bar vector per removed bar.  The label-0 count is
also available from the column shapes; tests compare the two.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .series import (TruncatedSeries, eta_factor, is_integer_series,
                     substitute_root_of_unity, theta_series)

WHITE, BLACK = 0, 1


def _check_rank(n: int):
    if n < 4:
        raise ValueError("type D needs rank n >= 4")


def period(n: int) -> int:
    return 2 * n - 2


def cartan_d(n: int) -> list[list[int]]:
    """Nodes 1..n-2 form a chain; node n-2 is joined to n-1 and n (0-based n-3 to n-2, n-1)."""
    _check_rank(n)
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 3):
        C[i][i + 1] = C[i + 1][i] = -1
    for j in (n - 2, n - 1):
        C[n - 3][j] = C[j][n - 3] = -1
    return C


def marks_d(n: int) -> tuple[int, ...]:
    _check_rank(n)
    return (1, 1) + (2,) * (n - 3) + (1, 1)


def q_names(n: int) -> list[str]:
    return [f"q{i}" for i in range(n + 1)]


# -- walls and abaci ----------------------------------------------------------------

@dataclass(frozen=True)
class WallD:
    rank: int
    heights: tuple[int, ...]
    orientations: tuple  # bit per column, None for full columns

    def __post_init__(self):
        _check_rank(self.rank)
        h = tuple(int(x) for x in self.heights)
        o = tuple(None if x is None else int(x) for x in self.orientations)
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "orientations", o)
        if len(h) != len(o):
            raise ValueError("one orientation entry per column")
        for i, (hh, oo) in enumerate(zip(h, o)):
            if hh <= 0:
                raise ValueError("column heights must be positive")
            half = hh % (self.rank - 1) == 0
            if half != (oo is not None) or (oo is not None and oo not in (0, 1)):
                raise ValueError("orientation bits belong exactly to half-topped columns")
            if i and hh > h[i - 1]:
                raise ValueError("heights must be weakly decreasing")
            if i and hh == h[i - 1] and (not half or oo != o[i - 1]):
                raise ValueError("equal heights need half tops of one orientation")

    @classmethod
    def from_columns(cls, n: int, columns) -> WallD:
        cols = list(columns)
        return cls(n, tuple(c[0] for c in cols), tuple(c[1] for c in cols))

    @property
    def columns(self):
        return tuple(zip(self.heights, self.orientations))

    @property
    def size(self) -> int:
        return sum(self.heights)

    def to_record(self) -> dict:
        return {"n": self.rank, "heights": list(self.heights),
                "top_orientations": [o for o in self.orientations if o is not None]}

    @classmethod
    def from_record(cls, rec) -> WallD:
        n = rec["n"]
        bits = iter(rec["top_orientations"])
        return cls(n, tuple(rec["heights"]),
                   tuple(next(bits) if h % (n - 1) == 0 else None for h in rec["heights"]))


@dataclass(frozen=True)
class AbacusD:
    rank: int
    beads: tuple  # sorted (position, count, color or None)

    def __post_init__(self):
        _check_rank(self.rank)
        seen = set()
        clean = []
        for s, c, col in sorted(self.beads):
            if s <= 0 or c <= 0 or s in seen:
                raise ValueError("bad bead entry")
            seen.add(s)
            colored = s % (self.rank - 1) == 0
            if colored and col not in (WHITE, BLACK):
                raise ValueError(f"position {s} needs a color")
            if not colored and (col is not None or c != 1):
                raise ValueError(f"position {s} holds at most one uncolored bead")
            clean.append((s, c, col))
        object.__setattr__(self, "beads", tuple(clean))

    @classmethod
    def from_dict(cls, n: int, d: dict) -> AbacusD:
        return cls(n, tuple((s, c, col) for s, (c, col) in d.items()))

    def as_dict(self) -> dict:
        return {s: (c, col) for s, c, col in self.beads}

    @property
    def size(self) -> int:
        return sum(s * c for s, c, _ in self.beads)

    @property
    def total_beads(self) -> int:
        return sum(c for _, c, _ in self.beads)

    def to_record(self) -> dict:
        out = []
        for s, c, col in self.beads:
            e = {"position": s, "count": c}
            if col is not None:
                e["color"] = "white" if col == WHITE else "black"
            out.append(e)
        return {"n": self.rank, "beads": out}


def wall_to_abacus_d(Y: WallD) -> AbacusD:
    n = Y.rank
    full = [h for h, o in Y.columns if o is None]
    d: dict = {}
    for h, o in Y.columns:
        if o is None:
            d[h] = (1, None)
            continue
        col = o ^ (sum(1 for f in full if f < h) & 1)
        if h in d:
            d[h] = (d[h][0] + 1, col)
        else:
            d[h] = (1, col)
    return AbacusD.from_dict(n, d)


def abacus_to_wall_d(ab: AbacusD) -> WallD:
    full = [s for s, _, col in ab.beads if col is None]
    cols = []
    for s, c, col in sorted(ab.beads, reverse=True):
        if col is None:
            cols.append((s, None))
        else:
            cols += [(s, col ^ (sum(1 for f in full if f < s) & 1))] * c
    return WallD.from_columns(ab.rank, cols)


# -- bar removal -----------------------------------------------------------------

def bar_moves(ab: AbacusD) -> list[tuple[str, int]]:
    """All applicable (step, site) pairs, sorted: step name first, then position."""
    n = ab.rank
    P = period(n)
    d = ab.as_dict()
    out = []
    for s, (cnt, col) in d.items():
        if col is None:
            if s > P and (s - P) not in d:
                out.append(("B1", s))
            if 1 <= s <= n - 2 and (P - s) in d:
                out.append(("B2", s))
        else:
            if cnt >= 2:
                out.append(("B4", s))
            if _b3_ok(d, s, n):
                out.append(("B3", s))
    return sorted(out)


def _b3_ok(d: dict, s: int, n: int) -> bool:
    P, h = period(n), n - 1
    if s < P:
        return False
    cnt, col = d[s]
    mid = d.get(s - h, (0, None))[0]
    newcol = col ^ (mid & 1)
    dest = s - P
    dcol = WHITE if dest == 0 else (d[dest][1] if dest in d else newcol)
    return dcol == newcol


def bar_step(ab: AbacusD, kind: str, site: int) -> AbacusD:
    """Remove one bar with the given step at the given position.

    B1 moves an uncolored bead up one row; B2 removes an uncolored pair at
    s and P - s.  B3 moves one colored bead up a row: passing the colored
    position s - (n - 1) toggles the moving bead's color once per bead there,
    and flips that position's color.  B4 moves two beads from a colored
    position up by n - 1, adopting the destination's color.  Position 0 is a
    sink holding white beads.
    """
    if (kind, site) not in bar_moves(ab):
        raise ValueError(f"{kind} does not apply at position {site}")
    n = ab.rank
    P, h = period(n), n - 1
    d = {k: list(v) for k, v in ab.as_dict().items()}
    s = site
    if kind == "B1":
        del d[s]
        d[s - P] = [1, None]
    elif kind == "B2":
        del d[s]
        del d[P - s]
    elif kind == "B3":
        cnt, col = d[s]
        mid = d.get(s - h, [0, None])[0]
        newcol = col ^ (mid & 1)
        if cnt == 1:
            del d[s]
        else:
            d[s][0] -= 1
        if s - h in d:
            d[s - h][1] ^= 1
        dest = s - P
        if dest > 0:
            if dest in d:
                d[dest][0] += 1
            else:
                d[dest] = [1, newcol]
    else:
        cnt, col = d[s]
        if cnt == 2:
            del d[s]
        else:
            d[s][0] -= 2
        dest = s - h
        if dest > 0:
            if dest in d:
                d[dest][0] += 2
            else:
                d[dest] = [2, col]
    return AbacusD.from_dict(n, {k: tuple(v) for k, v in d.items()})


def core_d(obj, rng: random.Random | None = None) -> tuple[AbacusD, int]:
    """Apply bar steps until none applies; the first applicable move unless rng is given."""
    ab = wall_to_abacus_d(obj) if isinstance(obj, WallD) else obj
    bars = 0
    while True:
        moves = bar_moves(ab)
        if not moves:
            return ab, bars
        kind, site = rng.choice(moves) if rng is not None else moves[0]
        ab = bar_step(ab, kind, site)
        bars += 1


def is_core_d(ab: AbacusD) -> bool:
    return not bar_moves(ab)


# -- core coordinates -------------------------------------------------------------

def decompose(x: int) -> tuple[int, int]:
    """x = 2a - b with b in {0, 1}."""
    b = x % 2
    return (x + b) // 2, b


def _k_to_z(k: int) -> int:
    return k // 2 if k % 2 == 0 else -(k + 1) // 2


def _z_to_k(z: int) -> int:
    return 2 * z if z >= 0 else -2 * z - 1


def z_coords(core: AbacusD) -> tuple[int, ...]:
    """The integer vector of a core.

    z_s (s <= n - 2) is the bead count on R_s minus the count on R_{2n-2-s}.
    The colored beads of a core sit one per level j = position / (n - 1);
    with L beads and top level T, the pair (k1, k2) is (L, T - L) or its
    swap (the lowest bead decides which), and z_{n-1}, z_n are the 2-core
    coordinates of k1, k2.
    """
    n = core.rank
    if not is_core_d(core):
        raise ValueError("z coordinates are only defined on cores")
    P = period(n)
    z = [0] * n
    levels = []
    for s, c, col in core.beads:
        r = (s - 1) % P + 1
        if r <= n - 2:
            z[r - 1] += c
        elif n <= r <= P - 1:
            z[P - r - 1] -= c
        if col is not None:
            if c != 1:
                raise ValueError("core has a repeated colored position")
            levels.append((s // (n - 1), col))
    levels.sort(reverse=True)
    if levels:
        L, top = len(levels), levels[0][0]
        sm = top - L
        if sm == L:
            k1 = k2 = L
        elif levels[-1][1] == BLACK:
            k1, k2 = sm, L
        else:
            k1, k2 = L, sm
    else:
        k1 = k2 = 0
    z[n - 2], z[n - 1] = _k_to_z(k1), _k_to_z(k2)
    return tuple(z)


def core_from_z(n: int, z: Sequence[int]) -> AbacusD:
    _check_rank(n)
    if len(z) != n:
        raise ValueError(f"need {n} coordinates")
    P = period(n)
    d = {}
    for s in range(1, n - 1):
        zs = z[s - 1]
        r = s if zs > 0 else P - s
        for k in range(abs(zs)):
            d[r + k * P] = (1, None)
    k1, k2 = _z_to_k(z[n - 2]), _z_to_k(z[n - 1])
    L, sm = max(k1, k2), min(k1, k2)
    levels = list(range(1, L - sm + 1)) + list(range(L - sm + 2, L + sm + 1, 2))
    for idx, j in enumerate(levels):
        if k1 >= k2:
            col = (j - 1 - idx) % 2  # one flip per gap below
        else:
            col = (1 + idx) % 2  # alternating from a black bottom bead
        d[j * (n - 1)] = (1, col)
    return AbacusD.from_dict(n, d)


def core_size_d(n: int, z: Sequence[int]) -> int:
    """Total weight of the core with coordinates z, closed formula."""
    twice = sum((2 * n - 2) * z[i - 1] ** 2 - (2 * n - 2 * i - 2) * z[i - 1] for i in range(1, n - 1))
    return twice // 2 + (n - 1) * sum(2 * z[i] ** 2 + z[i] for i in (n - 2, n - 1))


def core_multiweight_d(n: int, z: Sequence[int]) -> tuple[int, ...]:
    """Exponent vector of the core's content, multiplying out the product formula factor by factor."""
    _check_rank(n)
    e = [0] * (n + 1)
    bar = marks_d(n)

    def mul(vec, k):
        for i, v in enumerate(vec):
            e[i] += v * k

    ab = [decompose(z[i]) for i in range(n - 2)]
    a = [x for x, _ in ab]
    b = [y for _, y in ab]
    aI, bI = decompose(sum(z[:n - 2]))
    cI = 2 * bI - 1
    # q_k^{-2(a_1 + ... + a_{k-1}) - (b_k + ... + b_{n-2})}
    for k in range(1, n - 1):
        e[k] += -2 * sum(a[:k - 1]) - sum(b[k - 1:])
    mul([1, -1] + [0] * (n - 3) + [1, 1], -sum(a))  # (q0 q1^-1 q_{n-1} q_n)^{-sum a_i}
    e[0] += aI  # (q0 q1^-1)^{a_I}
    e[1] -= aI
    twice_q = sum(z[i] ** 2 + b[i] for i in range(n - 2))
    mul(bar, twice_q // 2 + z[n - 2] ** 2 + z[n - 1] ** 2)
    for zj, last in ((z[n - 2], n - 1), (z[n - 1], n)):
        lin = [0] * (n + 1)
        for i in range(1, n - 1):
            lin[i] -= cI
        lin[last] -= cI
        mul([bI * m + l for m, l in zip(bar, lin)], zj)
    if any(x < 0 for x in e):
        raise ArithmeticError(f"negative exponent in core content {e}")
    return tuple(e)


def z_to_m(n: int, z: Sequence[int]) -> tuple[int, ...]:
    zs = list(z[:n - 2])

    def sub(lo, hi):  # decomposition of z_lo + ... + z_{hi-1}, 0-based
        return decompose(sum(zs[lo:hi]))

    A, B = sub(0, n - 2)
    C = 2 * B - 1
    zz = z[n - 2] + z[n - 1]
    m = [0] * n
    m[0] = -B - C * zz
    for i in range(2, n - 1):
        a1, b1 = sub(0, i - 1)
        _, b2 = sub(i - 1, n - 2)
        m[i - 1] = -2 * a1 + (2 * b1 - 1) * b2 - C * zz
    m[n - 2] = -A - C * z[n - 2]
    m[n - 1] = -A - C * z[n - 1]
    return tuple(m)


def theta_monomial_d(n: int, m: Sequence[int]) -> tuple[int, ...]:
    """Exponent vector of q_1^{m_1} ... q_n^{m_n} q^{m^T C m / 2}."""
    C = cartan_d(n)
    Q = sum(C[i][j] * m[i] * m[j] for i in range(n) for j in range(n)) // 2
    d = marks_d(n)
    return tuple([Q * d[0]] + [Q * d[i + 1] + m[i] for i in range(n)])


def multiweight_d(Y) -> tuple[int, ...]:
    core, bars = core_d(Y)
    n = core.rank
    base = core_multiweight_d(n, z_coords(core))
    return tuple(x + bars * d for x, d in zip(base, marks_d(n)))


# -- label-0 blocks ----------------------------------------------------------------

def column_zero_layers(n: int, c: int, h: int, o) -> int:
    """Label-0 layers above the bottom layer in column c (1-based) of height h."""
    P = period(n)
    return (h - 1) // P + (1 if h % P == 0 and o == c % 2 else 0)


def zero_blocks_d(Y: WallD) -> frozenset:
    """Label-0 sites as (column, layer); layer 0 is the bottom half block of odd columns."""
    n = Y.rank
    out = set()
    for c, (h, o) in enumerate(Y.columns, start=1):
        if c % 2 == 1:
            out.add((c, 0))
        for t in range(1, column_zero_layers(n, c, h, o) + 1):
            out.add((c, t))
    return frozenset(out)


def wt0_d(Y: WallD) -> int:
    return len(zero_blocks_d(Y))


# -- 0-generated conditions --------------------------------------------------------

def rows_of(ab: AbacusD) -> dict[int, dict[int, tuple]]:
    """row index (from 1) -> {runner: (count, color)}"""
    P = period(ab.rank)
    rows: dict = {}
    for s, c, col in ab.beads:
        rows.setdefault((s - 1) // P + 1, {})[(s - 1) % P + 1] = (c, col)
    return rows


def row_shape_conditions(n: int, row: dict) -> dict[str, bool]:
    """The conditions on a single row that only look at bead counts."""
    P = period(n)
    ok = {"D1": True, "D4": True, "D5": True, "D6": True}
    if not row:
        return ok
    tot = sum(v[0] for v in row.values())
    if max(row) != P:
        ok["D1"] = False
    else:
        lc = row[P][0]
        if not (lc == tot or lc % 2 == 1):
            ok["D1"] = False
    mid = [r for r in range(n, P) if r in row]
    if mid and mid != list(range(P - len(mid), P)):
        ok["D4"] = False
    low = [r for r in range(1, n) if r in row]
    if low and not (len(mid) == n - 2 and P in row):
        ok["D4"] = False
    lowb = [r for r in range(1, n - 1) if r in row]
    if lowb and (n - 1) in row:
        ok["D5"] = False
    if lowb and lowb != list(range(n - 1 - len(lowb), n - 1)):
        ok["D5"] = False
    s = sum(row[r][0] for r in range(1, n) if r in row)
    if s > n - 2 and lowb:
        ok["D6"] = False
    if s <= n - 2 and (n - 1) in row:
        ok["D6"] = False
    if (n - 1) in row and row[n - 1][0] < n:
        ok["D6"] = False
    return ok


def d_conditions(obj) -> dict[str, bool]:
    ab = wall_to_abacus_d(obj) if isinstance(obj, WallD) else obj
    n = ab.rank
    P = period(n)
    rows = rows_of(ab)
    ok = {f"D{i}": True for i in range(1, 7)}
    for i, row in rows.items():
        for key, val in row_shape_conditions(n, row).items():
            ok[key] = ok[key] and val
        if P in row:
            s = i * P
            k = 1 + sum(c for q, c, _ in ab.beads if q > s)
            nk = sum(1 for q, _, col in ab.beads if q < s and col is None)
            want = 1 if row[P][1] == WHITE else 0
            if (k + nk) % 2 != want:
                ok["D2"] = False
    first = rows.get(1, {})
    if ab.total_beads % 2 and sum(first[r][0] for r in range(1, n) if r in first) != n - 2:
        ok["D3"] = False
    return ok


def is_zero_generated_d(Y) -> bool:
    ok = d_conditions(Y)
    return all(ok[f"D{i}"] for i in range(1, 6))


def is_distinguished_d(Y) -> bool:
    return all(d_conditions(Y).values())


# -- (t, l) data ------------------------------------------------------------------

def tl_row_valid(n: int, t: int, l: int) -> bool:
    if not 0 <= l <= t:
        return False
    if t == 0:
        return True
    if l % 2 == 0:
        return l == t
    d = t - l
    return d <= 2 * n - 4 or d >= 2 * n - 2


def tl_sequence_valid(n: int, seq: Sequence[tuple[int, int]]) -> bool:
    if not all(tl_row_valid(n, t, l) for t, l in seq):
        return False
    total = sum(t for t, _ in seq)
    return total % 2 == 0 or (bool(seq) and seq[0][0] - seq[0][1] == 2 * n - 4)


def tl_encode(Y) -> tuple[tuple[int, int], ...]:
    ab = wall_to_abacus_d(Y) if isinstance(Y, WallD) else Y
    if not is_distinguished_d(ab):
        raise ValueError("encoding needs a distinguished 0-generated wall")
    P = period(ab.rank)
    rows = rows_of(ab)
    top = max(rows, default=0)
    return tuple((sum(v[0] for v in rows.get(i, {}).values()), rows.get(i, {}).get(P, (0,))[0])
                 for i in range(1, top + 1))


def _row_positions(n: int, i: int, t: int, l: int) -> dict[int, int]:
    """Bead counts in row i for row data (t, l) (colors left out)."""
    P = period(n)
    base = (i - 1) * P
    out = {}
    if t == 0:
        return out
    out[base + P] = l
    d = t - l
    if d >= 2 * n - 2:
        for r in range(n, P):
            out[base + r] = 1
        out[base + n - 1] = d - (n - 2)
        return out
    for r in list(range(P - 1, n - 1, -1)) + list(range(n - 2, 0, -1)):
        if d == 0:
            break
        out[base + r] = 1
        d -= 1
    return out


def tl_decode(n: int, seq: Sequence[tuple[int, int]]) -> list[WallD]:
    """All distinguished walls with the given row data (2^m of them)."""
    _check_rank(n)
    seq = [tuple(x) for x in seq]
    if not tl_sequence_valid(n, seq):
        raise ValueError(f"invalid row data {seq}")
    P = period(n)
    counts: dict[int, int] = {}
    for i, (t, l) in enumerate(seq, start=1):
        counts.update(_row_positions(n, i, t, l))
    free = sorted(s for s in counts if (s - 1) % P + 1 == n - 1)
    out = []
    for choice in itertools.product((WHITE, BLACK), repeat=len(free)):
        d = {}
        pick = dict(zip(free, choice))
        for s, c in counts.items():
            if s % (n - 1) != 0:
                d[s] = (1, None)
            elif s in pick:
                d[s] = (c, pick[s])
            else:
                k = 1 + sum(cc for q, cc in counts.items() if q > s)
                nk = sum(1 for q in counts if q < s and q % (n - 1) != 0)
                d[s] = (c, WHITE if (k + nk) % 2 == 1 else BLACK)
        out.append(abacus_to_wall_d(AbacusD.from_dict(n, d)))
    return out


def tl_multiplicity(n: int, seq: Sequence[tuple[int, int]]) -> int:
    return 2 ** sum(1 for t, l in seq if t and t - l >= 2 * n - 2)


def _tl_sequences(n: int, W: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Valid row data with the cheap lower bound sum_i (i-1) t_i + ceil(T/2) <= W."""
    def row_options(i, spare):
        opts = [(0, 0)]
        tmax = 2 * W + 2 if i == 1 else spare // (i - 1)
        for t in range(1, tmax + 1):
            for l in range(1, t + 1):
                if tl_row_valid(n, t, l):
                    opts.append((t, l))
        return opts

    def rec(i, seq, used, total):
        if seq and seq[-1] != (0, 0):
            if tl_sequence_valid(n, seq):
                yield tuple(seq)
        if i > W + 1:
            return
        for t, l in row_options(i, W - used):
            cost = used + (i - 1) * t
            if cost + (total + t + 1) // 2 > W:
                continue
            if t == 0 and i > W:
                continue
            seq.append((t, l))
            yield from rec(i + 1, seq, cost, total + t)
            seq.pop()

    yield ()
    seen = set()
    for s in rec(1, [], 0, 0):
        if s not in seen:
            seen.add(s)
            yield s


# -- 0-classes, p and fibers ---------------------------------------------------------

def _column_options(n: int, c: int, z: int):
    P = period(n)
    for h in range(max(1, z * P - 1), (z + 1) * P + 1):
        if h % (n - 1) == 0:
            for o in (0, 1):
                if column_zero_layers(n, c, h, o) == z:
                    yield h, o
        elif (h - 1) // P == z:
            yield h, None


def _walls_with_layers(n: int, zs: Sequence[int]) -> list[WallD]:
    res = []

    def rec(c, prev, acc):
        if c > len(zs):
            res.append(WallD.from_columns(n, acc))
            return
        for h, o in _column_options(n, c, zs[c - 1]):
            if prev is not None:
                ph, po = prev
                if h > ph or (h == ph and (o is None or o != po)):
                    continue
            acc.append((h, o))
            rec(c + 1, (h, o), acc)
            acc.pop()

    rec(1, None, [])
    return res


def _zero_key(Y: WallD) -> tuple:
    n = Y.rank
    zs = [column_zero_layers(n, c, h, o) for c, (h, o) in enumerate(Y.columns, start=1)]
    if zs and len(zs) % 2 == 0 and zs[-1] == 0:
        zs.pop()
    return tuple(zs)


def zero_class(Y: WallD) -> list[WallD]:
    """All walls with the same label-0 sites as Y."""
    return list(_zero_class_cached(Y.rank, _zero_key(Y)))


@lru_cache(maxsize=4096)
def _zero_class_cached(n: int, zs: tuple) -> tuple:
    out = _walls_with_layers(n, zs)
    if len(zs) % 2 == 1:
        out += _walls_with_layers(n, zs + (0,))
    return tuple(out)


@lru_cache(maxsize=4096)
def _distinguished_in_class(n: int, zs: tuple) -> tuple:
    out = []
    for W in _zero_class_cached(n, zs):
        wab = wall_to_abacus_d(W)
        if is_distinguished_d(wab):
            out.append((W, _side_colors(wab)))
    return tuple(out)


def _side_colors(ab: AbacusD) -> dict[int, int]:
    n = ab.rank
    P = period(n)
    return {s: col for s, _, col in ab.beads if (s - 1) % P + 1 == n - 1}


def p_map_d(Y: WallD) -> WallD:
    """The distinguished wall with Y's label-0 sites whose R_{n-1} colors Y shares."""
    ab = wall_to_abacus_d(Y)
    if is_distinguished_d(ab):
        return Y
    mine = _side_colors(ab)
    hits = [W for W, side in _distinguished_in_class(Y.rank, _zero_key(Y))
            if all(mine.get(s) == col for s, col in side.items())]
    if len(hits) != 1:
        raise RuntimeError(f"expected one distinguished image, found {len(hits)}")
    return hits[0]


def fiber_d(Y: WallD) -> list[WallD]:
    """p^{-1}(Y) for a distinguished wall Y."""
    ab = wall_to_abacus_d(Y)
    if not is_distinguished_d(ab):
        raise ValueError("fibers are taken over distinguished walls")
    group = _side_colors(ab)
    out = []
    for W in zero_class(Y):
        mine = _side_colors(wall_to_abacus_d(W))
        if all(mine.get(s) == col for s, col in group.items()):
            out.append(W)
    return out


def c_value(t: int, l: int, n: int, exceptional_first_row: bool = False) -> int:
    """Per-row exponent of the fiber sum.

    The middle band uses C(t - l - n + 3, 2); the first row of an odd wall
    (t - l = 2n - 4) has no movable bead at its end and gets 0.
    """
    if not tl_row_valid(n, t, l):
        raise ValueError(f"invalid row data ({t}, {l})")
    if t == 0 or exceptional_first_row:
        return 0
    c2 = lambda x: math.comb(x, 2) if x >= 2 else 0
    base = c2(n - 1) if l % 2 == 0 else c2(n)
    d = t - l
    if d <= n - 2:
        return base - c2(n - 1 - d)
    if d <= 2 * n - 4:
        return base - c2(d - n + 3)
    return base


def c_value_direct(n: int, row: dict, first_row_odd: bool = False) -> int:
    """Signed distance of the movable beads from R_{n-1} (beads on R_{n-1} count 0).

    The bead at the end of a row is movable when that row holds an odd
    number of them, except in the first row of an odd wall.
    """
    P = period(n)
    out = 0
    for r, (cnt, _) in row.items():
        if r == P:
            if cnt % 2 == 1 and not first_row_odd:
                out += n - 1
        else:
            out += cnt * (r - (n - 1))
    return out


def substituted_monomial_d(n: int, wt: Sequence[int]) -> tuple[int, int]:
    """(q-degree, xi exponent mod 2n-1) of q^wt under q_0 -> xi^2 q, q_i -> xi."""
    return wt[0], (2 * wt[0] + sum(wt[1:])) % (2 * n - 1)


def coarse_plan_d(n: int) -> list[tuple[int, int]]:
    return [(2, 1)] + [(1, 0)] * n


# -- enumeration ------------------------------------------------------------------

def abaci_upto(n: int, N: int) -> Iterator[AbacusD]:
    """Every abacus of total weight <= N: bead placements by position, then colors."""
    _check_rank(n)

    def rec(pos, budget, acc):
        if pos > budget:
            colored = [i for i, (s, _) in enumerate(acc) if s % (n - 1) == 0]
            for cols in itertools.product((WHITE, BLACK), repeat=len(colored)):
                it = iter(cols)
                yield AbacusD(n, tuple((s, c, next(it) if s % (n - 1) == 0 else None) for s, c in acc))
            return
        yield from rec(pos + 1, budget, acc)
        cmax = budget // pos if pos % (n - 1) == 0 else min(1, budget // pos)
        for c in range(1, cmax + 1):
            acc.append((pos, c))
            yield from rec(pos + 1, budget - c * pos, acc)
            acc.pop()

    yield from rec(1, N, [])


def walls_upto(n: int, N: int) -> Iterator[WallD]:
    for ab in abaci_upto(n, N):
        yield abacus_to_wall_d(ab)


def walls_by_wt0(n: int, W: int, row_filter: bool = False) -> Iterator[tuple[AbacusD, int]]:
    """Every wall with wt_0 <= W as (abacus, wt_0), built from the top row down.

    Orientation bits are chosen for R_{2n-2} groups and colors for R_{n-1}
    groups; colors of R_{2n-2} groups are fixed once the beads below are known.
    With row_filter, a finished row failing one of the count-only row
    conditions is abandoned, which only ever discards walls that are not
    0-generated.
    """
    _check_rank(n)
    P = period(n)

    def rec(pos, above, wt0, acc):
        # acc: list of (position, count, tag) with tag = orientation (R_{2n-2}),
        # color (R_{n-1}) or None
        if row_filter and pos % P == 0:
            row = {}
            for s, c, tag in acc:
                if pos < s <= pos + P:
                    row[(s - 1) % P + 1] = (c, tag)
            if not all(row_shape_conditions(n, row).values()):
                return
        if pos == 0:
            yield finish(acc), wt0
            return
        r = (pos - 1) % P + 1
        yield from rec(pos - 1, above, wt0, acc)
        if r == P or r == n - 1:
            cnt = 0
            while True:
                cnt += 1
                # the group occupies columns above + 1 .. above + cnt
                zs = {}
                for tag in (0, 1):
                    o = tag if r == P else None
                    zs[tag] = sum((col % 2) + column_zero_layers(n, col, pos, o)
                                  for col in range(above + 1, above + cnt + 1))
                if wt0 + min(zs.values()) > W:
                    break  # zeros only grow with cnt
                for tag in (0, 1):
                    if wt0 + zs[tag] <= W:
                        acc.append((pos, cnt, tag))
                        yield from rec(pos - 1, above + cnt, wt0 + zs[tag], acc)
                        acc.pop()
        else:
            col = above + 1
            z = (col % 2) + column_zero_layers(n, col, pos, None)
            if wt0 + z <= W:
                acc.append((pos, 1, None))
                yield from rec(pos - 1, above + 1, wt0 + z, acc)
                acc.pop()

    def finish(acc):
        d = {}
        for s, c, tag in acc:
            if s % (n - 1) != 0:
                d[s] = (1, None)
            elif (s - 1) % P + 1 == n - 1:
                d[s] = (c, tag)
            else:
                nk = sum(1 for q, _, t2 in acc if q < s and q % (n - 1) != 0)
                d[s] = (c, tag ^ (nk & 1))
        return AbacusD.from_dict(n, d)

    top = P * (W + 1)
    yield from rec(top, 0, 0, [])


# -- generating series -------------------------------------------------------------

def orbifold_series_d(n: int, N: int, method: str = "enumerate") -> TruncatedSeries:
    names = q_names(n)
    if method == "enumerate":
        acc: dict = {}
        for ab in abaci_upto(n, N):
            wt = multiweight_d(ab)
            acc[wt] = acc.get(wt, 0) + 1
        return TruncatedSeries(names, N, acc)
    if method == "closed_form":
        qmon = marks_d(n)
        th = theta_series(cartan_d(n), list(range(1, n + 1)), qmon, N, names)
        return th * eta_factor(qmon, -(n + 1), N, names)
    raise ValueError(f"unknown method {method!r}")


def coarse_series_d(n: int, N: int, method: str = "tl") -> TruncatedSeries:
    """Distinguished walls counted by wt_0 (tl, filter) or the root of unity substitution."""
    _check_rank(n)
    counts = [0] * (N + 1)
    if method in ("tl", "enumerate"):
        for seq in _tl_sequences(n, N):
            walls = tl_decode(n, seq)
            w0 = wt0_d(walls[0])
            if w0 <= N:
                counts[w0] += len(walls)
    elif method == "filter":
        for ab, w0 in walls_by_wt0(n, N, row_filter=True):
            if is_distinguished_d(ab):
                counts[w0] += 1
    elif method == "filter-full":
        for ab, w0 in walls_by_wt0(n, N, row_filter=False):
            if is_distinguished_d(ab):
                counts[w0] += 1
    elif method == "substitute":
        qmon = marks_d(n)
        names = q_names(n)
        weights = [1] + [0] * n
        th = theta_series(cartan_d(n), list(range(1, n + 1)), qmon, N, names, weights)
        full = th * eta_factor(qmon, -(n + 1), N, names, weights)
        sub = substitute_root_of_unity(full, 2 * n - 1, coarse_plan_d(n))
        ok, ints = is_integer_series(sub)
        if not ok:
            raise ArithmeticError("root of unity substitution left a non-integral coefficient")
        return ints
    else:
        raise ValueError(f"unknown method {method!r}")
    return TruncatedSeries(("q",), N, {(k,): c for k, c in enumerate(counts)})
