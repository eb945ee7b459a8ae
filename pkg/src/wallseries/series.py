"""Truncated multivariate power series with exact coefficients.

A series lives in a ring fixed by its variable names, their degree weights,
the coefficient kind (plain integers, or Z[zeta_m] for one fixed m) and an
optional Laurent variable.  Terms of weighted degree above the truncation are
never stored.  The Laurent variable (used for the two-variable (q, z) series)
may carry negative exponents; it normally has weight 0, so truncation is in
the remaining variables only.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cyclotomic import CyclotomicInt, euler_phi, reduce_poly
from .lattice import min_eigenvalue_lower_bound, quadratic_values, short_vectors

Exp = tuple[int, ...]


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class TruncatedSeries:
    __slots__ = ("variables", "weights", "truncation", "terms", "order", "laurent")

    def __init__(self, variables: Sequence[str], truncation: int,
                 terms: Mapping[Exp, object] | None = None, *,
                 weights: Sequence[int] | None = None, order: int | None = None,
                 laurent: int | None = None):
        variables = tuple(variables)
        weights = tuple(weights) if weights is not None else (1,) * len(variables)
        if len(weights) != len(variables):
            raise ValueError("one degree weight per variable")
        if any(w < 0 for w in weights):
            raise ValueError("degree weights must be nonnegative")
        if truncation < 0:
            raise ValueError("truncation must be nonnegative")
        if laurent is not None and not 0 <= laurent < len(variables):
            raise ValueError("laurent index out of range")
        if order is not None and order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.variables = variables
        self.weights = weights
        self.truncation = truncation
        self.order = order
        self.laurent = laurent
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} has wrong length")
            for i, x in enumerate(e):
                if x < 0 and i != laurent:
                    raise ValueError(f"negative exponent in {e}")
            c = self._coerce_coeff(c)
            if c and self.degree(e) <= truncation:
                clean[e] = c
        self.terms = clean

    # -- construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, like: TruncatedSeries, truncation: int, terms: dict) -> TruncatedSeries:
        s = object.__new__(cls)
        s.variables, s.weights, s.order, s.laurent = like.variables, like.weights, like.order, like.laurent
        s.truncation = truncation
        s.terms = terms
        return s

    def like(self, terms: Mapping[Exp, object], truncation: int | None = None) -> TruncatedSeries:
        return TruncatedSeries(self.variables, self.truncation if truncation is None else truncation,
                               terms, weights=self.weights, order=self.order, laurent=self.laurent)

    @classmethod
    def one(cls, variables, truncation, **kw) -> TruncatedSeries:
        n = len(tuple(variables))
        order = kw.get("order")
        c = 1 if order is None else CyclotomicInt.from_int(1, order)
        return cls(variables, truncation, {(0,) * n: c}, **kw)

    @classmethod
    def monomial(cls, variables, truncation, exps, coeff=1, **kw) -> TruncatedSeries:
        return cls(variables, truncation, {tuple(exps): coeff}, **kw)

    def _coerce_coeff(self, c):
        if self.order is None:
            if isinstance(c, CyclotomicInt):
                raise TypeError("cyclotomic coefficient in an integer series")
            return int(c)
        if isinstance(c, CyclotomicInt):
            if c.order != self.order:
                raise ValueError(f"mixed cyclotomic orders {c.order} and {self.order}")
            return c
        return CyclotomicInt.from_int(int(c), self.order)

    # -- basic queries ----------------------------------------------------------
    def degree(self, e: Exp) -> int:
        return sum(w * x for w, x in zip(self.weights, e))

    def coefficient(self, e: Exp):
        e = tuple(e)
        if self.degree(e) > self.truncation:
            raise ValueError(f"{e} lies beyond the truncation")
        zero = 0 if self.order is None else CyclotomicInt.from_int(0, self.order)
        return self.terms.get(e, zero)

    def ring(self):
        return (self.variables, self.weights, self.order, self.laurent)

    def _check_ring(self, other: TruncatedSeries):
        if self.variables != other.variables or self.weights != other.weights:
            raise ValueError(f"variable mismatch: {self.variables}/{self.weights} vs "
                             f"{other.variables}/{other.weights}")
        if self.laurent != other.laurent:
            raise ValueError("laurent variable mismatch")
        if self.order != other.order:
            raise ValueError(f"coefficient ring mismatch: {self.order} vs {other.order}")

    def truncate(self, N: int) -> TruncatedSeries:
        if N > self.truncation:
            raise ValueError("cannot raise the truncation of a series")
        return TruncatedSeries._raw(self, N, {e: c for e, c in self.terms.items() if self.degree(e) <= N})

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring() == other.ring() and self.truncation == other.truncation
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring(), self.truncation, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.one(self.variables, self.truncation, weights=self.weights,
                                        order=self.order, laurent=self.laurent) * other
        self._check_ring(other)
        N = min(self.truncation, other.truncation)
        out = {e: c for e, c in self.terms.items() if self.degree(e) <= N}
        for e, c in other.terms.items():
            if self.degree(e) > N:
                continue
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return TruncatedSeries._raw(self, N, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self, self.truncation, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> TruncatedSeries:
        k = self._coerce_coeff(k) if isinstance(k, CyclotomicInt) else k
        out = {}
        for e, c in self.terms.items():
            v = c * k
            if v:
                out[e] = v
        return TruncatedSeries._raw(self, self.truncation, out)

    def __mul__(self, other):
        if isinstance(other, (int, CyclotomicInt)):
            return self.scale(other)
        self._check_ring(other)
        N = min(self.truncation, other.truncation)
        deg = self.degree
        b_items = sorted(((deg(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        b_degs = [t[0] for t in b_items]
        out: dict = {}
        for ea, ca in self.terms.items():
            da = deg(ea)
            if da > N:
                continue
            stop = bisect_right(b_degs, N - da)
            for _, eb, cb in b_items[:stop]:
                e = _add_exp(ea, eb)
                v = out.get(e)
                p = ca * cb
                out[e] = p if v is None else v + p
        return TruncatedSeries._raw(self, N, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def constant_part(self) -> TruncatedSeries:
        return TruncatedSeries._raw(self, self.truncation,
                                    {e: c for e, c in self.terms.items() if self.degree(e) == 0})

    def inverse(self) -> TruncatedSeries:
        """Formal inverse; the degree-0 part must be the constant +1 or -1."""
        zero_exp = (0,) * len(self.variables)
        const = self.constant_part()
        c0 = const.terms.get(zero_exp)
        unit = c0 is not None and len(const.terms) == 1 and (c0 == 1 or c0 == -1)
        if not unit:
            raise ValueError("constant term is not a unit")
        sign = 1 if c0 == 1 else -1
        # a = sign*(1 - r) with r of positive degree; 1/a = sign * sum r^k
        r = 1 - self.scale(sign)
        result = TruncatedSeries.one(self.variables, self.truncation, weights=self.weights,
                                     order=self.order, laurent=self.laurent)
        power = result
        min_deg = min((self.degree(e) for e in r.terms), default=None)
        if min_deg is not None:
            for _ in range(self.truncation // min_deg):
                power = power * r
                if not power.terms:
                    break
                result = result + power
        return result.scale(sign)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.one(self.variables, self.truncation, weights=self.weights,
                                     order=self.order, laurent=self.laurent)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_exponents(self, fn, variables=None, weights=None, truncation=None, laurent=None):
        """Re-index terms through fn(exp) -> new exp (colliding terms are summed)."""
        target = TruncatedSeries(variables or self.variables,
                                 self.truncation if truncation is None else truncation,
                                 None, weights=weights if weights is not None else self.weights,
                                 order=self.order, laurent=laurent)
        out: dict = {}
        for e, c in self.terms.items():
            f = tuple(fn(e))
            if target.degree(f) > target.truncation:
                continue
            v = out.get(f)
            out[f] = c if v is None else v + c
        return TruncatedSeries(target.variables, target.truncation, {e: c for e, c in out.items() if c},
                               weights=target.weights, order=self.order, laurent=laurent)

    # -- single variable convenience ------------------------------------------
    def coefficient_list(self) -> list:
        """Coefficients of q^0..q^N for a one-variable series."""
        if len(self.variables) != 1:
            raise ValueError("coefficient_list needs a one-variable series")
        zero = 0 if self.order is None else CyclotomicInt.from_int(0, self.order)
        w = self.weights[0]
        top = self.truncation // w if w else 0
        return [self.terms.get((k,), zero) for k in range(top + 1)]

    # -- text / records -------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items())

    def _mono(self, e: Exp) -> str:
        parts = []
        for name, x in zip(self.variables, e):
            if x == 1:
                parts.append(name)
            elif x:
                parts.append(f"{name}^{x}")
        return "*".join(parts)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.sorted_terms():
            mono = self._mono(e)
            if self.order is None:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
            else:
                sign = "+"
                if c.is_integer():
                    v = c.to_int()
                    sign = "-" if v < 0 else "+"
                    a = abs(v)
                    body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
                else:
                    body = f"({c})" + (f"*{mono}" if mono else "")
            chunks.append((sign, body))
        head = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
        return head + "".join(f" {s} {b}" for s, b in chunks[1:])

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TruncatedSeries<{','.join(self.variables)}; N={self.truncation}>({self.to_text()})"

    def to_record(self) -> dict:
        terms = []
        for e, c in self.sorted_terms():
            coeff = c if self.order is None else {"order": c.order, "coeffs": list(c.coeffs)}
            terms.append({"exp": list(e), "coeff": coeff})
        rec = {"variables": list(self.variables), "weights": list(self.weights),
               "truncation": self.truncation, "terms": terms}
        if self.order is not None:
            rec["order"] = self.order
        if self.laurent is not None:
            rec["laurent"] = self.laurent
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> TruncatedSeries:
        order = rec.get("order")
        terms = {}
        for t in rec["terms"]:
            c = t["coeff"]
            if isinstance(c, dict):
                c = CyclotomicInt(c["order"], tuple(c["coeffs"]))
            terms[tuple(t["exp"])] = c
        return cls(rec["variables"], rec["truncation"], terms, weights=rec.get("weights"),
                   order=order, laurent=rec.get("laurent"))

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> TruncatedSeries:
        return cls.from_record(json.loads(text))


def single(name: str = "q", truncation: int = 0, coeffs: Iterable[int] = (), order=None) -> TruncatedSeries:
    """One-variable series from a coefficient list."""
    return TruncatedSeries((name,), truncation, {(k,): c for k, c in enumerate(coeffs)}, order=order)


# -- eta products --------------------------------------------------------------

def euler_product_coeffs(power: int, K: int) -> list[int]:
    """Coefficients of prod_{m>=1} (1 - t^m)^power up to t^K."""
    c = [0] * (K + 1)
    c[0] = 1
    if power < 0:
        for _ in range(-power):
            for m in range(1, K + 1):
                for j in range(m, K + 1):
                    c[j] += c[j - m]
    else:
        for _ in range(power):
            for m in range(1, K + 1):
                for j in range(K, m - 1, -1):
                    c[j] -= c[j - m]
    return c


def eta_factor(monomial: Exp, power: int, truncation: int, variables: Sequence[str],
               weights: Sequence[int] | None = None, laurent: int | None = None) -> TruncatedSeries:
    """prod_{m>=1} (1 - M^m)^power for the monomial M, truncated."""
    shell = TruncatedSeries(variables, truncation, None, weights=weights, laurent=laurent)
    d = shell.degree(tuple(monomial))
    if d <= 0:
        raise ValueError("eta_factor needs a monomial of positive degree")
    K = truncation // d
    coeffs = euler_product_coeffs(power, K)
    terms = {tuple(j * x for x in monomial): c for j, c in enumerate(coeffs) if c}
    return TruncatedSeries(variables, truncation, terms, weights=weights, laurent=laurent)


# -- theta sums -----------------------------------------------------------------

def theta_query_bound(C, coupling: Sequence[int], qdeg: int, N: int) -> int:
    """Largest Q = 1/2 m^T C m that can still give a term of degree <= N.

    A term has degree qdeg*Q + <coupling, m>.  With r <= lambda_min(C) we have
    |m|^2 <= 2Q/r, so |<coupling, m>| <= |coupling| sqrt(2Q/r) = a sqrt(Q), and
    qdeg*Q - a*sqrt(Q) <= N forces sqrt(Q) <= (a + sqrt(a^2 + 4 qdeg N)) / (2 qdeg).
    The float evaluation is followed by +1, which keeps the bound conservative.
    """
    r = min_eigenvalue_lower_bound(C)
    a2 = Fraction(sum(x * x for x in coupling)) * 2 / r
    a = math.sqrt(float(a2))
    x = (a + math.sqrt(float(a2) + 4 * qdeg * N)) / (2 * qdeg)
    return int(math.floor(x * x)) + 1


def theta_series(C, var_index: Sequence[int], q_monomial: Exp, truncation: int,
                 variables: Sequence[str], weights: Sequence[int] | None = None,
                 query_bound: int | None = None) -> TruncatedSeries:
    """sum over m in Z^n of prod_i x_{var_index[i]}^{m_i} * M^{m^T C m / 2}, truncated.

    C must be symmetric positive definite with even diagonal.
    """
    n = len(C)
    for i in range(n):
        if C[i][i] % 2:
            raise ValueError("theta_series needs an even diagonal")
    if len(var_index) != n:
        raise ValueError("one variable per lattice coordinate")
    shell = TruncatedSeries(variables, truncation, None, weights=weights)
    qdeg = shell.degree(tuple(q_monomial))
    if qdeg <= 0:
        raise ValueError("theta_series needs a monomial of positive degree")
    coupling = [shell.weights[v] for v in var_index]
    bound = theta_query_bound(C, coupling, qdeg, truncation) if query_bound is None else query_bound
    nv = len(variables)
    qm = np.array(q_monomial, dtype=np.int64)
    w = np.array(shell.weights, dtype=np.int64)
    scatter = np.zeros((n, nv), dtype=np.int64)
    for i, v in enumerate(var_index):
        scatter[i, v] = 1
    acc: dict = defaultdict(int)
    for block in short_vectors(C, bound):
        Q = quadratic_values(C, block)
        exps = Q[:, None] * qm[None, :] + block @ scatter
        keep = exps @ w <= truncation
        exps = exps[keep]
        if not len(exps):
            continue
        if (exps < 0).any():
            raise ValueError("theta term with a negative exponent")
        uniq, counts = np.unique(exps, axis=0, return_counts=True)
        for e, c in zip(map(tuple, uniq.tolist()), counts.tolist()):
            acc[e] += c
    return TruncatedSeries(variables, truncation, acc, weights=weights)


# -- root of unity substitution ---------------------------------------------------

def substitute_root_of_unity(s: TruncatedSeries, m: int, plan: Sequence[tuple[int, int]],
                             truncation: int | None = None, name: str = "q") -> TruncatedSeries:
    """Send x_i to zeta^{a_i} q^{b_i} (zeta primitive of order m).

    Without an explicit truncation the q-truncation is derived: if every
    variable of positive weight has b_i > 0, a q-degree D term can only come
    from terms of weighted degree <= D * max(w_i / b_i), which are all present
    for D <= N / max(w_i / b_i).
    """
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    if s.order is not None:
        raise ValueError("substitution expects integer coefficients")
    if len(plan) != len(s.variables):
        raise ValueError("one (root exponent, q exponent) pair per variable")
    if any(b < 0 for _, b in plan) or not any(b > 0 for _, b in plan):
        raise ValueError("q exponents must be nonnegative and not all zero")
    ratios = []
    for (a, b), w in zip(plan, s.weights):
        if w > 0 and b == 0:
            ratios = None
            break
        if b > 0:
            ratios.append(Fraction(w, b))
    if ratios is None:
        if truncation is None:
            raise ValueError("q-truncation cannot be derived; pass truncation=")
        Nq = truncation
    else:
        r = max(ratios)
        derived = s.truncation if r == 0 else math.floor(Fraction(s.truncation) / r)
        Nq = derived if truncation is None else min(truncation, derived)
    acc: dict[int, list[int]] = {}
    for e, c in s.terms.items():
        qd = sum(b * x for (_, b), x in zip(plan, e))
        if qd > Nq:
            continue
        zp = sum(a * x for (a, _), x in zip(plan, e)) % m
        row = acc.get(qd)
        if row is None:
            row = acc[qd] = [0] * m
        row[zp] += c
    terms = {(d,): CyclotomicInt(m, reduce_poly(row, m)) for d, row in acc.items()}
    return TruncatedSeries((name,), Nq, terms, order=m)


def is_integer_series(s: TruncatedSeries) -> tuple[bool, TruncatedSeries | None]:
    """Whether every cyclotomic coefficient is a rational integer; if so, the integer series."""
    if s.order is None:
        return True, s
    if not all(c.is_integer() for c in s.terms.values()):
        return False, None
    return True, TruncatedSeries(s.variables, s.truncation, {e: c.to_int() for e, c in s.terms.items()},
                                 weights=s.weights, laurent=s.laurent)


# -- constant term pairing --------------------------------------------------------

def z0_pair(a: TruncatedSeries, b: TruncatedSeries, z_spread: int = 0) -> TruncatedSeries:
    """Coefficient of z^0 in a*b, as a series in the remaining variables.

    Both operands are Laurent in the same variable.  Every term must satisfy
    |z exponent| <= degree + z_spread; outside that band the stored terms need
    not be complete, so the pairing would be wrong and an error is raised.
    """
    a._check_ring(b)
    zi = a.laurent
    if zi is None:
        raise ValueError("z0_pair needs Laurent series")
    for s in (a, b):
        for e in s.terms:
            if abs(e[zi]) > s.degree(e) + z_spread:
                raise ValueError(f"unbounded z-spread: term {e} outside the admissible band")
    N = min(a.truncation, b.truncation)
    by_z = defaultdict(list)
    for e, c in b.terms.items():
        by_z[e[zi]].append((b.degree(e), e, c))
    for lst in by_z.values():
        lst.sort(key=lambda t: t[0])
    keep = [i for i in range(len(a.variables)) if i != zi]
    out: dict = {}
    for ea, ca in a.terms.items():
        da = a.degree(ea)
        for db, eb, cb in by_z.get(-ea[zi], ()):
            if da + db > N:
                break
            e = tuple(ea[i] + eb[i] for i in keep)
            v = out.get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return TruncatedSeries([a.variables[i] for i in keep], N, {e: c for e, c in out.items() if c},
                           weights=[a.weights[i] for i in keep], order=a.order)
