"""Simply laced root systems and the type-generic closed-form series.

Kinds are strings "A<n>" (n >= 1), "D<n>" (n >= 4), "E6", "E7", "E8".  The
E-type tables use Bourbaki node order (1-3-4-5-6-7-8 chain, node 2 attached to
node 4); marks are not trusted to transcription, every table passes the affine
kernel check before it is returned.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from .cyclotomic import CyclotomicInt
from .lattice import is_positive_definite, quadratic_values, short_vectors
from .series import (TruncatedSeries, eta_factor, euler_product_coeffs, is_integer_series, single,
                     substitute_root_of_unity, theta_series)


class IntegralityError(ArithmeticError):
    """A substitution that is proven to be integral came out non-integral."""


class ConjecturalIntegralityError(ArithmeticError):
    """A substitution expected (but not proven) to be integral came out non-integral."""


@dataclass(frozen=True)
class RootSystemData:
    kind: str
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    marks: tuple[int, ...]  # d_0, d_1, ..., d_n
    coxeter: int

    @property
    def conjectural(self) -> bool:
        return self.family == "E"

    @property
    def q_names(self) -> list[str]:
        return [f"q{i}" for i in range(self.rank + 1)]

    def affine_cartan(self) -> list[list[int]]:
        """Extended Cartan matrix, node 0 first; row/column 0 read off the marks."""
        n = self.rank
        link = [sum(self.cartan[i][j] * self.marks[j + 1] for j in range(n)) for i in range(n)]
        A = [[2] + [-x for x in link]]
        for i in range(n):
            A.append([-link[i]] + list(self.cartan[i]))
        return A


def parse_kind(kind: str) -> tuple[str, int]:
    m = re.fullmatch(r"([ADE])(\d+)", kind.strip())
    if not m:
        raise ValueError(f"unknown root system kind {kind!r}")
    fam, n = m.group(1), int(m.group(2))
    if fam == "A" and n < 1 or fam == "D" and n < 4 or fam == "E" and n not in (6, 7, 8):
        raise ValueError(f"invalid rank for type {fam}: {n}")
    return fam, n


def _chain(n: int) -> list[list[int]]:
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
        if i + 1 < n:
            C[i][i + 1] = C[i + 1][i] = -1
    return C


def _from_edges(n: int, edges) -> list[list[int]]:
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        C[a][b] = C[b][a] = -1
    return C


def _tables(fam: str, n: int):
    if fam == "A":
        return _chain(n), (1,) * (n + 1), n + 1
    if fam == "D":
        edges = [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
        marks = (1, 1) + (2,) * (n - 3) + (1, 1)
        return _from_edges(n, edges), marks, 2 * n - 2
    # Bourbaki labels 1..n, stored 0-based
    edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
    marks = {6: (1, 1, 2, 2, 3, 2, 1),
             7: (1, 2, 2, 3, 4, 3, 2, 1),
             8: (1, 2, 3, 4, 6, 5, 4, 3, 2)}[n]
    return _from_edges(n, edges), marks, {6: 12, 7: 18, 8: 30}[n]


def validate(data: RootSystemData) -> None:
    C = data.cartan
    n = data.rank
    for i in range(n):
        if C[i][i] != 2:
            raise ValueError("Cartan diagonal must be 2")
        for j in range(n):
            if C[i][j] != C[j][i] or (i != j and C[i][j] not in (0, -1)):
                raise ValueError("Cartan matrix must be symmetric with entries 0/-1 off the diagonal")
    if not is_positive_definite(C):
        raise ValueError("Cartan matrix is not positive definite")
    if len(data.marks) != n + 1 or data.marks[0] != 1 or min(data.marks) < 1:
        raise ValueError("marks must be positive with d_0 = 1")
    A = data.affine_cartan()
    if any(v not in (0, 1, 2) for v in (-x for x in A[0][1:])):
        raise ValueError("affine node pairing out of range")
    if any(sum(row[j] * data.marks[j] for j in range(n + 1)) for row in A):
        raise ValueError("marks are not in the kernel of the affine Cartan matrix")
    if sum(data.marks) != data.coxeter:
        raise ValueError("marks do not sum to the Coxeter number")


@lru_cache(maxsize=None)
def root_system(kind: str) -> RootSystemData:
    fam, n = parse_kind(kind)
    C, marks, h = _tables(fam, n)
    data = RootSystemData(f"{fam}{n}", fam, n, tuple(map(tuple, C)), tuple(marks), h)
    validate(data)
    return data


def coarse_plan(data: RootSystemData) -> list[tuple[int, int]]:
    """x_0 -> zeta^2 q and x_i -> zeta for zeta of order h + 1.

    The q_0 root exponent is -(h - 1) = 2 mod h + 1 because the nonzero marks sum to h - 1.
    """
    return [(2 % (data.coxeter + 1), 1)] + [(1, 0)] * data.rank


def orbifold_closed_form(kind: str, N: int, weights: Sequence[int] | None = None) -> TruncatedSeries:
    data = root_system(kind)
    n = data.rank
    names = data.q_names
    C = [list(r) for r in data.cartan]
    th = theta_series(C, list(range(1, n + 1)), data.marks, N, names, weights)
    return th * eta_factor(data.marks, -(n + 1), N, names, weights)


def _coarse_via_series(data: RootSystemData, N: int) -> TruncatedSeries:
    weights = [1] + [0] * data.rank
    full = orbifold_closed_form(data.kind, N, weights)
    return substitute_root_of_unity(full, data.coxeter + 1, coarse_plan(data))


def _coarse_streamed(data: RootSystemData, N: int) -> TruncatedSeries:
    # The bar monomial prod q_i^{d_i} goes to q * zeta^{h+1} = q, so the series is
    # prod (1-q^k)^{-(n+1)} times sum_m q^{Q(m)} zeta^{sum m_i}; the theta
    # part is accumulated straight into (Q, zeta power) bins.
    m = data.coxeter + 1
    bins = np.zeros((N + 1, m), dtype=object)
    C = [list(r) for r in data.cartan]
    for block in short_vectors(C, N):
        Q = quadratic_values(C, block)
        z = block.sum(axis=1) % m
        flat = np.bincount(Q * m + z, minlength=(N + 1) * m).reshape(N + 1, m)
        bins += flat.astype(object)
    theta = {(k,): CyclotomicInt.from_power_counts([int(x) for x in bins[k]], m) for k in range(N + 1)}
    th = TruncatedSeries(("q",), N, theta, order=m)
    eta = single("q", N, euler_product_coeffs(-(data.rank + 1), N), order=m)
    return th * eta


def coarse_substitution(kind: str, N: int, route: str = "auto") -> TruncatedSeries:
    """The root of unity specialisation of the orbifold series, as an integer series in q.

    route "series" substitutes into the full multivariable series; "stream"
    bins lattice vectors directly; "auto" streams for type E only.
    """
    data = root_system(kind)
    if route == "auto":
        route = "stream" if data.family == "E" else "series"
    if route == "series":
        sub = _coarse_via_series(data, N)
    elif route == "stream":
        sub = _coarse_streamed(data, N)
    else:
        raise ValueError(f"unknown route {route!r}")
    ok, ints = is_integer_series(sub)
    if not ok:
        bad = min(e[0] for e, c in sub.terms.items() if not c.is_integer())
        err = ConjecturalIntegralityError if data.conjectural else IntegralityError
        raise err(f"{kind}: coefficient of q^{bad} is {sub.terms[(bad,)]}")
    return ints


def golden_e_series(kind: str) -> list[int] | None:
    """Recorded coefficients of the type-E substitution, or None if absent."""
    try:
        text = resources.files("wallseries").joinpath(f"data/coarse_{kind}.json").read_text()
    except FileNotFoundError:
        return None
    return json.loads(text)["coefficients"]


def local_series(local: str, N: int) -> TruncatedSeries:
    """Coarse series of one singularity: a root system kind, or "P<p>" for the cyclic X(p,1)."""
    s = local.strip()
    if s.startswith("P"):
        from .cyclic import coarse_series_p1
        if not s[1:].isdigit() or int(s[1:]) < 1:
            raise ValueError(f"bad cyclic singularity {local!r}")
        return coarse_series_p1(int(s[1:]), N, "formula")
    return coarse_substitution(s, N)


def global_series(chi_s0: int, locals_: Sequence[str], N: int) -> TruncatedSeries:
    """prod (1-q^m)^{-chi} times the local coarse series."""
    out = single("q", N, euler_product_coeffs(-chi_s0, N))
    for loc in locals_:
        out = out * local_series(loc, N)
    return out
