"""Exact arithmetic in Z[zeta_m], zeta_m a primitive m-th root of unity.

Elements are stored as integer vectors of length phi(m), the coefficients of
the unique polynomial of degree < phi(m) congruent to the value modulo the
m-th cyclotomic polynomial.  Equal values therefore have equal vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials (low degree first), den monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dn]
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("polynomial division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    # row k = reduced coefficients of x^k for 0 <= k < m
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def reduce_poly(coeffs, m: int) -> tuple[int, ...]:
    """Reduce an arbitrary integer polynomial in zeta (low degree first)."""
    table = _power_table(m)
    out = [0] * euler_phi(m)
    for k, c in enumerate(coeffs):
        if c:
            row = table[k % m]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return tuple(out)


@dataclass(frozen=True)
class CyclotomicInt:
    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("cyclotomic order must be positive")
        if len(self.coeffs) != euler_phi(self.order):
            raise ValueError(f"need {euler_phi(self.order)} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_int(cls, k: int, m: int) -> CyclotomicInt:
        c = [0] * euler_phi(m)
        c[0] = k
        return cls(m, tuple(c))

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> CyclotomicInt:
        return cls(m, _power_table(m)[power % m])

    @classmethod
    def from_power_counts(cls, counts, m: int) -> CyclotomicInt:
        """sum_k counts[k] * zeta^k, with k taken mod m."""
        return cls(m, reduce_poly(counts, m))

    def _coerce(self, other) -> CyclotomicInt:
        if isinstance(other, CyclotomicInt):
            if other.order != self.order:
                raise ValueError(f"mixed cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, int):
            return CyclotomicInt.from_int(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicInt(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.order, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicInt(self.order, reduce_poly(prod, self.order))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are only defined for powers of zeta")
        result = CyclotomicInt.from_int(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_integer() and self.coeffs[0] == other
        if isinstance(other, CyclotomicInt):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("zeta" if k == 1 else f"zeta^{k}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    __repr__ = __str__
