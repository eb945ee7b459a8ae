"""Diagonally labelled partitions and the type-A abacus.

Coordinates: block (i, j) sits in column i and row j; a partition
lambda = (l_1 >= l_2 >= ...) has l_k blocks in column k - 1, and block (i, j)
carries label (i - j + a) mod (n + 1) for the shift a.

Abacus: partition lambda places beads at l_k - k + 1 (k = 1, 2, ...).
Positions are laid out in rows of n + 1; position p sits on runner
((p - 1) mod (n + 1)) + 1 and in row floor((p - 1) / (n + 1)).  Runner
i + 1 carries the core coordinate a_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cyclotomic import CyclotomicInt
from .series import (TruncatedSeries, eta_factor, is_integer_series,
                     substitute_root_of_unity, theta_series, z0_pair)


def cartan_a(n: int) -> list[list[int]]:
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def q_names(n: int) -> list[str]:
    return [f"q{i}" for i in range(n + 1)]


@dataclass(frozen=True)
class LabelledPartition:
    parts: tuple[int, ...]
    rank: int
    shift: int = 0

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be weakly decreasing")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "shift", self.shift % (self.rank + 1))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def label(self, i: int, j: int) -> int:
        return (i - j + self.shift) % (self.rank + 1)

    def blocks(self) -> Iterator[tuple[int, int]]:
        for i, h in enumerate(self.parts):
            for j in range(h):
                yield i, j

    def contains(self, other: LabelledPartition) -> bool:
        if len(other.parts) > len(self.parts):
            return False
        return all(a >= b for a, b in zip(self.parts, other.parts))

    def addable_blocks(self) -> list[tuple[int, int]]:
        out = []
        prev = None
        for i, h in enumerate(self.parts):
            if prev is None or prev > h:
                out.append((i, h))
            prev = h
        out.append((len(self.parts), 0))
        return out


def multiweight_a(lam: LabelledPartition) -> tuple[int, ...]:
    wt = [0] * (lam.rank + 1)
    for i, j in lam.blocks():
        wt[lam.label(i, j)] += 1
    return tuple(wt)


def is_zero_generated_a(lam: LabelledPartition) -> bool:
    """All addable blocks carry label 0 (for the unshifted labelling)."""
    if lam.shift != 0:
        raise ValueError("0-generation is defined for the unshifted labelling")
    return all(lam.label(i, j) == 0 for i, j in lam.addable_blocks())


def is_zero_generated_by_cover(lam: LabelledPartition) -> bool:
    """Complement covered by quadrants based at 0-labelled complement blocks."""
    if lam.shift != 0:
        raise ValueError("0-generation is defined for the unshifted labelling")
    n1 = lam.rank + 1
    width = len(lam.parts) + n1
    height = (lam.parts[0] if lam.parts else 0) + n1
    heights = list(lam.parts) + [0] * (width - len(lam.parts))
    inside = lambda i, j: j < heights[i]
    corners = [(i, j) for i in range(width) for j in range(height)
               if not inside(i, j) and (i - j) % n1 == 0]
    for i in range(width):
        for j in range(height):
            if inside(i, j):
                continue
            if not any(a <= i and b <= j for a, b in corners):
                return False
    return True


# -- partitions enumeration ------------------------------------------------------

def partitions_of(k: int, maxpart: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of k in lexicographically decreasing order."""
    if maxpart is None:
        maxpart = k
    if k == 0:
        yield ()
        return
    for first in range(min(k, maxpart), 0, -1):
        for rest in partitions_of(k - first, first):
            yield (first,) + rest


def partitions_upto(N: int) -> Iterator[tuple[int, ...]]:
    for k in range(N + 1):
        yield from partitions_of(k)


# -- abacus ----------------------------------------------------------------------

@dataclass(frozen=True)
class AbacusA:
    rank: int
    positive_occupied: tuple[int, ...]
    nonpositive_vacant: tuple[int, ...]

    def __post_init__(self):
        if len(self.positive_occupied) != len(self.nonpositive_vacant):
            raise ValueError("unbalanced abacus configuration")
        if any(p <= 0 for p in self.positive_occupied) or any(p > 0 for p in self.nonpositive_vacant):
            raise ValueError("bad abacus position sets")
        object.__setattr__(self, "positive_occupied", tuple(sorted(set(self.positive_occupied))))
        object.__setattr__(self, "nonpositive_vacant", tuple(sorted(set(self.nonpositive_vacant))))
        if len(self.positive_occupied) != len(self.nonpositive_vacant):
            raise ValueError("repeated abacus positions")

    def occupied(self, p: int) -> bool:
        if p > 0:
            return p in self.positive_occupied
        return p not in self.nonpositive_vacant

    def beads_above(self, floor: int) -> list[int]:
        """Occupied positions > floor, descending (floor must be <= min vacant - 1)."""
        out = [p for p in self.positive_occupied]
        out += [p for p in range(0, floor, -1) if p not in self.nonpositive_vacant]
        return sorted(out, reverse=True)

    def to_record(self) -> dict:
        return {"positive_occupied": list(self.positive_occupied),
                "nonpositive_vacant": list(self.nonpositive_vacant)}


def to_abacus_a(lam: LabelledPartition) -> AbacusA:
    beads = {p - k + 1 for k, p in enumerate(lam.parts, start=1)}
    pos = [b for b in beads if b > 0]
    vac = [p for p in range(0, -len(lam.parts), -1) if p not in beads]
    return AbacusA(lam.rank, tuple(pos), tuple(vac))


def from_abacus_a(ab: AbacusA, shift: int = 0) -> LabelledPartition:
    k = len(ab.positive_occupied)
    lowest = min(ab.nonpositive_vacant, default=1)
    floor = min(lowest - 1, 0)
    beads = ab.beads_above(floor)  # descending; beads below floor are all present
    parts = [b + i - 1 for i, b in enumerate(beads, start=1)]
    parts = [p for p in parts if p > 0]
    if len(parts) > len(beads):
        raise ValueError("unbalanced abacus configuration")
    del k
    return LabelledPartition(tuple(parts), ab.rank, shift)


def profile_partition(ab: AbacusA) -> tuple[int, ...]:
    """Read the partition off the profile: a bead is a down-step, a gap a right-step."""
    lo = min(ab.nonpositive_vacant, default=1) - 1
    hi = max(ab.positive_occupied, default=0)
    # walk from the top-left: positions from hi down to lo; each bead closes a column
    parts = []
    width = 0
    for p in range(lo + 1, hi + 1):
        if ab.occupied(p):
            parts.append(width)
        else:
            width += 1
    parts = sorted((x for x in parts if x > 0), reverse=True)
    return tuple(parts)


# -- cores and quotients -----------------------------------------------------------

@dataclass(frozen=True)
class CoreQuotientA:
    a_vector: tuple[int, ...]
    quotients: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if sum(self.a_vector) != 0:
            raise ValueError("core coordinates must sum to zero")
        if len(self.quotients) != len(self.a_vector):
            raise ValueError("one quotient per runner")


def _runner_beads(ab: AbacusA, n: int, floor: int) -> list[list[int]]:
    n1 = n + 1
    runners: list[list[int]] = [[] for _ in range(n1)]
    for p in ab.beads_above(floor):
        r = (p - 1) % n1
        runners[r].append((p - 1 - r) // n1)  # level t with p = r + 1 + n1 * t
    return runners


def core_quotient_a(lam: LabelledPartition) -> CoreQuotientA:
    n = lam.rank
    n1 = n + 1
    ab = to_abacus_a(lam)
    lowest = min(ab.nonpositive_vacant, default=1)
    floor = min(lowest - 1, 0) - n1  # everything at or below floor is occupied
    runners = _runner_beads(ab, n, floor)
    a_vec, quots = [], []
    for r in range(n1):
        levels = sorted(runners[r], reverse=True)
        # levels <= tmin on this runner lie at or below floor and are all
        # occupied; the vacuum fills levels <= -1
        tmin = (floor - r - 1) // n1
        charge = len(levels) - (-1 - tmin)
        a_vec.append(charge)
        mu = [b - (charge - j) for j, b in enumerate(levels, start=1)]
        quots.append(tuple(x for x in mu if x > 0))
    return CoreQuotientA(tuple(a_vec), tuple(quots))


def from_core_quotient_a(cq: CoreQuotientA, n: int) -> LabelledPartition:
    n1 = n + 1
    if len(cq.a_vector) != n1:
        raise ValueError("need n + 1 runner coordinates")
    # below level T every runner is full
    T = min(a - len(mu) - 1 for a, mu in zip(cq.a_vector, cq.quotients))
    beads = set()
    for r, (a, mu) in enumerate(zip(cq.a_vector, cq.quotients)):
        j = 1
        while True:
            t = (mu[j - 1] if j <= len(mu) else 0) + a - j
            if t < T:
                break
            beads.add(r + 1 + n1 * t)
            j += 1
    pos = sorted(p for p in beads if p > 0)
    vac = [p for p in range(0, n1 * T, -1) if p not in beads]
    return from_abacus_a(AbacusA(n, tuple(pos), tuple(vac)))


def core_a(lam: LabelledPartition) -> LabelledPartition:
    cq = core_quotient_a(lam)
    return from_core_quotient_a(CoreQuotientA(cq.a_vector, tuple(() for _ in cq.quotients)), lam.rank)


def core_weight_monomial(a_vector: Sequence[int]) -> tuple[int, ...]:
    """Multiweight of the core with runner coordinates a.

    The exponent of q_i is Q(m)/2 + m_i with m_i = a_{n+1-i} + ... + a_n.
    """
    n = len(a_vector) - 1
    m = [sum(a_vector[n + 1 - i:]) for i in range(1, n + 1)]
    C = cartan_a(n)
    Q = sum(C[i][j] * m[i] * m[j] for i in range(n) for j in range(n)) // 2
    return tuple([Q] + [Q + m[i] for i in range(n)])


def remove_rim_hook(parts: Sequence[int], r: int, c: int) -> tuple[int, ...]:
    """Remove the rim hook through cell (row r, column c) of the row-shape `parts`."""
    parts = list(parts)
    conj_len = sum(1 for p in parts if p > c)
    last = conj_len - 1
    new = parts[:r]
    for k in range(r, last):
        new.append(parts[k + 1] - 1)
    new.append(c)
    new += parts[last + 1:]
    return tuple(p for p in new if p > 0)


def hook_cells(parts: Sequence[int], length: int) -> list[tuple[int, int]]:
    conj = [sum(1 for p in parts if p > c) for c in range(parts[0] if parts else 0)]
    return [(r, c) for r, p in enumerate(parts) for c in range(p)
            if (p - c - 1) + (conj[c] - r - 1) + 1 == length]


# -- the map p -----------------------------------------------------------------

def p_map_a(lam: LabelledPartition) -> LabelledPartition:
    """Push every bead as far right as possible within its abacus row."""
    if lam.shift != 0:
        raise ValueError("p is defined for the unshifted labelling")
    n1 = lam.rank + 1
    ab = to_abacus_a(lam)
    lowest = min(ab.nonpositive_vacant, default=1)
    floor = ((min(lowest, 1) - 1) // n1) * n1  # a row boundary below every gap
    top = max(ab.positive_occupied, default=0)
    beads = set(ab.beads_above(floor))
    new = set()
    for row_start in range(floor + 1, top + 1, n1):
        k = sum(1 for p in range(row_start, row_start + n1) if p in beads)
        new.update(range(row_start + n1 - k, row_start + n1))
    pos = tuple(p for p in new if p > 0)
    vac = tuple(p for p in range(0, floor, -1) if p not in new)
    return from_abacus_a(AbacusA(lam.rank, pos, vac))


def row_counts_a(lam: LabelledPartition) -> dict[int, int]:
    """Beads per abacus row (rows below the lowest gap are full and omitted)."""
    n1 = lam.rank + 1
    ab = to_abacus_a(lam)
    lowest = min(ab.nonpositive_vacant, default=1)
    floor = ((min(lowest, 1) - 1) // n1) * n1
    counts: dict[int, int] = {}
    for p in ab.beads_above(floor):
        row = (p - 1) // n1
        counts[row] = counts.get(row, 0) + 1
    return counts


def fiber_a(lam0: LabelledPartition) -> list[LabelledPartition]:
    """All mu with p(mu) = lam0: every placement with lam0's per-row bead counts."""
    if not is_zero_generated_a(lam0):
        raise ValueError("fibers are taken over 0-generated partitions")
    n1 = lam0.rank + 1
    ab = to_abacus_a(lam0)
    lowest = min(ab.nonpositive_vacant, default=1)
    floor = ((min(lowest, 1) - 1) // n1) * n1
    top = max(ab.positive_occupied, default=0)
    rows = []
    for row_start in range(floor + 1, top + 1, n1):
        k = sum(1 for p in range(row_start, row_start + n1) if ab.occupied(p))
        rows.append([set(c) for c in itertools.combinations(range(row_start, row_start + n1), k)])
    out = []
    for choice in itertools.product(*rows):
        beads = set().union(*choice) if choice else set()
        pos = tuple(p for p in beads if p > 0)
        vac = tuple(p for p in range(0, floor, -1) if p not in beads)
        if len(pos) != len(vac):
            continue
        out.append(from_abacus_a(AbacusA(lam0.rank, pos, vac)))
    return out


def coarse_plan_a(n: int) -> list[tuple[int, int]]:
    """q_0 -> xi^{-n} q, q_i -> xi, xi of order n + 2."""
    return [(-n, 1)] + [(1, 0)] * n


def substituted_monomial_a(wt: Sequence[int], n: int) -> tuple[int, int]:
    """(q-degree, xi exponent mod n+2) of q^wt after the coarse substitution."""
    m = n + 2
    return wt[0], (-n * wt[0] + sum(wt[1:])) % m


# -- generating series -------------------------------------------------------------

def _enumerate_multiweights(n: int, N: int, shift: int = 0):
    for parts in partitions_upto(N):
        yield multiweight_a(LabelledPartition(parts, n, shift))


def orbifold_series_a(n: int, N: int, method: str = "enumerate", grading: str = "total") -> TruncatedSeries:
    """Sum of q^wt over all partitions.

    grading "total" truncates by |lambda|; grading "zero" truncates by wt_0,
    which is what the coarse substitution needs (closed form only).
    """
    names = q_names(n)
    if grading == "total":
        weights = [1] * (n + 1)
    elif grading == "zero":
        weights = [1] + [0] * n
    else:
        raise ValueError(f"unknown grading {grading!r}")
    if method == "enumerate":
        if grading != "total":
            raise ValueError("enumeration is graded by size")
        acc: dict = {}
        for wt in _enumerate_multiweights(n, N):
            acc[wt] = acc.get(wt, 0) + 1
        return TruncatedSeries(names, N, acc, weights=weights)
    if method == "closed_form":
        qmon = (1,) * (n + 1)
        th = theta_series(cartan_a(n), list(range(1, n + 1)), qmon, N, names, weights)
        return th * eta_factor(qmon, -(n + 1), N, names, weights)
    raise ValueError(f"unknown method {method!r}")


def zero_generated_upto(n: int, N: int) -> Iterator[LabelledPartition]:
    """All 0-generated partitions with wt_0 <= N.

    Columns are chosen left to right; a column strictly shorter than its left
    neighbour (or the first column) exposes an addable block that must be
    labelled 0, and the diagram may only stop after a multiple of n + 1
    columns (the addable block on the floor).
    """
    n1 = n + 1

    def zeros_in_column(i: int, h: int) -> int:
        # j in [0, h) with j = i mod n1
        first = i % n1
        return 0 if first >= h else (h - 1 - first) // n1 + 1

    def rec(cols: list[int], budget: int):
        i = len(cols)
        if i % n1 == 0:
            yield LabelledPartition(tuple(cols), n)
        prev = cols[-1] if cols else None
        hmax = prev if prev is not None else None
        h = 1
        while True:
            if hmax is not None and h > hmax:
                break
            z = zeros_in_column(i, h)
            if z > budget:
                break
            if (prev is None or h < prev) and (i - h) % n1 != 0:
                h += 1
                continue
            cols.append(h)
            yield from rec(cols, budget - z)
            cols.pop()
            h += 1

    yield from rec([], N)


def coarse_series_a(n: int, N: int, method: str = "enumerate") -> TruncatedSeries:
    if method == "enumerate":
        counts = [0] * (N + 1)
        for lam in zero_generated_upto(n, N):
            counts[multiweight_a(lam)[0]] += 1
        return TruncatedSeries(("q",), N, {(k,): c for k, c in enumerate(counts)})
    if method == "substitute":
        full = orbifold_series_a(n, N, "closed_form", grading="zero")
        sub = substitute_root_of_unity(full, n + 2, coarse_plan_a(n))
        ok, ints = is_integer_series(sub)
        if not ok:
            raise ArithmeticError("root of unity substitution left a non-integral coefficient")
        return ints
    raise ValueError(f"unknown method {method!r}")


# -- Frobenius route ---------------------------------------------------------------

@dataclass(frozen=True)
class ColoredFPartition:
    top: tuple[tuple[int, ...], ...]
    bottom: tuple[tuple[int, ...], ...]

    def weight(self) -> tuple[int, ...]:
        k = len(self.top[0]) if self.top else 0
        return tuple(sum(v[c] for v in self.top + self.bottom) for c in range(k))


def frobenius_coordinates(lam: LabelledPartition) -> ColoredFPartition:
    """Row t from the diagonal rightwards (top) and column t strictly above it (bottom)."""
    n1 = lam.rank + 1
    heights = list(lam.parts)
    d = sum(1 for t, h in enumerate(heights) if h > t)
    top, bottom = [], []
    for t in range(d):
        f = [0] * n1
        x = t
        while x < len(heights) and heights[x] > t:
            f[lam.label(x, t)] += 1
            x += 1
        g = [0] * n1
        for y in range(t + 1, heights[t]):
            g[lam.label(t, y)] += 1
        top.append(tuple(f))
        bottom.append(tuple(g))
    return ColoredFPartition(tuple(top), tuple(bottom))


def frobenius_factors(n: int, N: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """The two row products over (q_0..q_n, z), truncated at total degree N."""
    names = q_names(n) + ["z"]
    weights = [1] * (n + 1) + [0]
    kw = dict(weights=weights, laurent=n + 1)
    one = TruncatedSeries.one(names, N, **kw)
    upper, lower = one, one
    for k in range(N + 1):
        for i in range(n + 1):
            e = [k] * (n + 1) + [1]
            for c in range(i + 1):
                e[c] += 1
            if sum(e[:-1]) <= N:
                upper = upper * (one + TruncatedSeries.monomial(names, N, e, **kw))
            f = [k] * (n + 1) + [-1]
            for c in range(i + 1, n + 1):
                f[c] += 1
            if sum(f[:-1]) <= N:
                lower = lower * (one + TruncatedSeries.monomial(names, N, f, **kw))
    return upper, lower


def frobenius_series_a(n: int, N: int) -> TruncatedSeries:
    upper, lower = frobenius_factors(n, N)
    return z0_pair(upper, lower, z_spread=1)


# -- higher rank -----------------------------------------------------------------

def rotate_labels(s: TruncatedSeries, a: int) -> TruncatedSeries:
    """q_i -> q_{i+a}: the weight of label c moves to label c + a."""
    n1 = len(s.variables)
    return s.map_exponents(lambda e: tuple(e[(c - a) % n1] for c in range(n1)))


def shifted_series_a(n: int, a: int, N: int, method: str = "closed_form") -> TruncatedSeries:
    if method == "closed_form":
        return rotate_labels(orbifold_series_a(n, N, "closed_form"), a)
    if method == "enumerate":
        acc: dict = {}
        for wt in _enumerate_multiweights(n, N, a):
            acc[wt] = acc.get(wt, 0) + 1
        return TruncatedSeries(q_names(n), N, acc)
    raise ValueError(f"unknown method {method!r}")


def higher_rank_series_a(n: int, shifts: Sequence[int], N: int, method: str = "closed_form") -> TruncatedSeries:
    names = q_names(n)
    if method == "closed_form":
        out = TruncatedSeries.one(names, N)
        for a in shifts:
            out = out * shifted_series_a(n, a, N)
        return out
    if method == "enumerate":
        # l-tuples of a_m-labelled partitions with total size <= N
        acc: dict = {}

        def rec(idx: int, budget: int, wt: list[int]):
            if idx == len(shifts):
                key = tuple(wt)
                acc[key] = acc.get(key, 0) + 1
                return
            for parts in partitions_upto(budget):
                w = multiweight_a(LabelledPartition(parts, n, shifts[idx]))
                rec(idx + 1, budget - sum(parts), [x + y for x, y in zip(wt, w)])

        rec(0, N, [0] * (n + 1))
        return TruncatedSeries(names, N, acc)
    raise ValueError(f"unknown method {method!r}")
