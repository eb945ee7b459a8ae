"""Command line interface.

    wallseries series {orbifold|coarse|higher-rank|cyclic|global} ...
    wallseries verify <identity> ...
    wallseries enumerate {partitions|walls|fountains} ...

Exit codes: 0 success, 1 a verification failed, 2 bad arguments, 3 a proven
integrality (or another internal consistency check) failed, 4 an expected but
unproven integrality failed.  --jobs shards the fountain enumeration by bottom
width; output does not depend on it.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import cyclic, lie, typea, typed
from .series import TruncatedSeries, single

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTEGRALITY, EXIT_CONJECTURE = 0, 1, 2, 3, 4

SERIES_METHODS = {
    "orbifold": {"A": ("closed_form", "enumerate"), "D": ("closed_form", "enumerate"), "E": ("closed_form",)},
    "coarse": {"A": ("substitute", "enumerate"), "D": ("substitute", "tl", "filter"), "E": ("substitute",)},
    "higher-rank": {"A": ("closed_form", "enumerate")},
    "cyclic": {"P": ("formula", "brute")},
    "global": {"": ("product",)},
}


class UsageError(ValueError):
    pass


@dataclass
class CommandSpec:
    command: str
    target: str
    kind: str | None = None
    p: int | None = None
    trunc: int = 10
    method: str | None = None
    json: bool = False
    jobs: int = 1
    shifts: tuple[int, ...] = ()
    chi: int = 0
    sing: tuple[str, ...] = ()
    n: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trunc < 0:
            raise UsageError("--trunc must be nonnegative")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.p is not None and self.p < 1:
            raise UsageError("--p must be positive")


def _kind(spec: CommandSpec) -> tuple[str, int]:
    if spec.kind is None:
        if spec.n is not None:
            raise UsageError("use --kind to name the root system")
        raise UsageError("--kind is required")
    try:
        return lie.parse_kind(spec.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _method(spec: CommandSpec, family: str) -> str:
    allowed = SERIES_METHODS[spec.target].get(family)
    if allowed is None:
        raise UsageError(f"series {spec.target} is not available for {spec.kind or family}")
    if spec.method is None:
        return allowed[0]
    if spec.method not in allowed:
        raise UsageError(f"--method must be one of {', '.join(allowed)}")
    return spec.method


# -- series ------------------------------------------------------------------------

def compute_series(spec: CommandSpec) -> tuple[TruncatedSeries, str]:
    """(series, status) where status is "proven" or "conjectural"."""
    N = spec.trunc
    t = spec.target
    if t in ("orbifold", "coarse"):
        fam, n = _kind(spec)
        m = _method(spec, fam)
        if t == "orbifold":
            if fam == "A":
                return typea.orbifold_series_a(n, N, m), "proven"
            if fam == "D":
                return typed.orbifold_series_d(n, N, m), "proven"
            return lie.orbifold_closed_form(spec.kind, N), "proven"
        if m == "substitute":
            s = lie.coarse_substitution(f"{fam}{n}", N)
            return s, "conjectural" if fam == "E" else "proven"
        if fam == "A":
            return typea.coarse_series_a(n, N, m), "proven"
        return typed.coarse_series_d(n, N, m), "proven"
    if t == "higher-rank":
        fam, n = _kind(spec)
        m = _method(spec, fam)
        if not spec.shifts:
            raise UsageError("--shifts is required")
        return typea.higher_rank_series_a(n, spec.shifts, N, m), "proven"
    if t == "cyclic":
        if spec.p is None:
            raise UsageError("--p is required")
        m = _method(spec, "P")
        return cyclic.coarse_series_p1(spec.p, N, m), "proven"
    if t == "global":
        _method(spec, "")
        for s in spec.sing:
            _check_local(s)
        status = "conjectural" if any(s.startswith("E") for s in spec.sing) else "proven"
        return lie.global_series(spec.chi, spec.sing, N), status
    raise UsageError(f"unknown series {t!r}")


def _check_local(s: str):
    if s.startswith("P"):
        if not s[1:].isdigit() or int(s[1:]) < 1:
            raise UsageError(f"bad cyclic singularity {s!r}")
        return
    try:
        lie.parse_kind(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_series(spec: CommandSpec, out) -> int:
    s, status = compute_series(spec)
    if spec.json:
        rec = s.to_record()
        rec["status"] = status
        out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(s.to_text() + "\n")
        if status == "conjectural":
            out.write("status: conjectural (integrality observed, not proven)\n")
    return EXIT_OK


# -- verify ------------------------------------------------------------------------

@dataclass
class Check:
    label: str
    lhs: object
    rhs: object

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def first_difference(self):
        a, b = self.lhs, self.rhs
        if isinstance(a, TruncatedSeries) and isinstance(b, TruncatedSeries):
            keys = sorted(set(a.terms) | set(b.terms))
            for e in keys:
                if a.terms.get(e, 0) != b.terms.get(e, 0):
                    return {"exp": list(e), "lhs": str(a.terms.get(e, 0)), "rhs": str(b.terms.get(e, 0))}
            return None
        return None if a == b else {"lhs": _show(a), "rhs": _show(b)}


def _show(x):
    if isinstance(x, TruncatedSeries):
        if len(x.variables) == 1 and x.order is None:
            return x.coefficient_list()
        return x.to_text()
    return x


def _need(spec: CommandSpec, name: str):
    v = getattr(spec, name)
    if v is None:
        raise UsageError(f"--{name} is required for verify {spec.target}")
    return v


def _rank(spec: CommandSpec, family: str) -> int:
    if spec.n is not None:
        return spec.n
    fam, n = _kind(spec)
    if fam != family:
        raise UsageError(f"verify {spec.target} needs a type {family} root system")
    return n


def _v_jacobi(spec):
    N = spec.trunc
    return [Check("triple product: sum = product", cyclic.jacobi_sum(N), cyclic.jacobi_product(N))]


def _v_triangle(spec):
    p, N = _need(spec, "p"), spec.trunc
    return [Check(f"triangle series p={p}: sum = product", cyclic.triangle_series(p, N),
                  cyclic.triangle_product(p, N))]


def _v_ramanujan(spec):
    N = spec.trunc
    F = cyclic.fountain_series_F(1, N)
    return [Check("p=1 fountains: enumeration = ratio of q-series", F, cyclic.ramanujan_ratio(N)),
            Check("p=1 fountains: enumeration = continued fraction", F, cyclic.ramanujan_continued_fraction(N))]


def _v_fountains(spec):
    p, N = _need(spec, "p"), spec.trunc
    t = cyclic.FountainTable.build(p, N)
    F = cyclic.fountain_series_F(p, N)
    dp = all(t.f[n][k] == cyclic.f_count(p, n, k) for n in range(N + 1) for k in range(n + 1))
    G_cf, _ = cyclic.g_continued_fraction_auto(p, N)
    return [Check("removal identity g(n,k) = f(n-k,k-p)", t.check_removal_identity(), True),
            Check("boundary values", t.check_boundary(), True),
            Check("split at the first gap", t.check_split(), True),
            Check("run decomposition = exhaustive search", dp, True),
            Check("primitive series: removal = continued fraction", cyclic.g_from_removal(p, F), G_cf)]


def _v_orbifold_a(spec):
    n, N = _rank(spec, "A"), spec.trunc
    return [Check(f"A{n} orbifold: enumeration = closed form", typea.orbifold_series_a(n, N, "enumerate"),
                  typea.orbifold_series_a(n, N, "closed_form"))]


def _v_coarse_a(spec):
    n, N = _rank(spec, "A"), spec.trunc
    return [Check(f"A{n} coarse: 0-generated count = substitution", typea.coarse_series_a(n, N, "enumerate"),
                  typea.coarse_series_a(n, N, "substitute"))]


def _v_frobenius(spec):
    n, N = _rank(spec, "A"), spec.trunc
    return [Check(f"A{n} orbifold: constant term of row products = enumeration",
                  typea.frobenius_series_a(n, N), typea.orbifold_series_a(n, N, "enumerate"))]


def _v_higher_rank(spec):
    n, N = _rank(spec, "A"), spec.trunc
    if not spec.shifts:
        raise UsageError("--shifts is required")
    return [Check(f"A{n} shifts {list(spec.shifts)}: tuples = product of closed forms",
                  typea.higher_rank_series_a(n, spec.shifts, N, "enumerate"),
                  typea.higher_rank_series_a(n, spec.shifts, N, "closed_form"))]


def _v_orbifold_d(spec):
    n, N = _rank(spec, "D"), spec.trunc
    return [Check(f"D{n} orbifold: abacus enumeration = closed form", typed.orbifold_series_d(n, N, "enumerate"),
                  typed.orbifold_series_d(n, N, "closed_form"))]


def _v_coarse_d(spec):
    n, N = _rank(spec, "D"), spec.trunc
    tl = typed.coarse_series_d(n, N, "tl")
    return [Check(f"D{n} coarse: row data route = wall filter route", tl, typed.coarse_series_d(n, N, "filter")),
            Check(f"D{n} coarse: distinguished count = substitution", tl, typed.coarse_series_d(n, N, "substitute"))]


def _v_cyclic(spec):
    p, N = _need(spec, "p"), spec.trunc
    form = cyclic.coarse_series_p1(p, N, "formula")
    checks = [Check(f"X({p},1): fountain pairing = brute force", form, cyclic.coarse_series_p1(p, N, "brute")),
              Check(f"X({p},1): negative l terms vanish", cyclic.negative_l_contribution(p, N), single("q", N))]
    if p == 1:
        checks.append(Check("X(1,1) = partitions", form, lie.global_series(1, [], N)))
    if p == 2:
        checks.append(Check("X(2,1) = A1 coarse series", form, lie.coarse_substitution("A1", N)))
    return checks


def _v_conjectural_e(spec):
    fam, n = _kind(spec)
    s = lie.coarse_substitution(spec.kind, spec.trunc)
    coeffs = s.coefficient_list()
    checks = [Check(f"{spec.kind}: substitution integral", True, True),
              Check(f"{spec.kind}: coefficients nonnegative", all(c >= 0 for c in coeffs), True)]
    gold = lie.golden_e_series(spec.kind) if fam == "E" else None
    if gold is not None:
        k = min(len(gold), len(coeffs))
        checks.append(Check(f"{spec.kind}: recorded coefficients", coeffs[:k], gold[:k]))
    return checks


def _v_global(spec):
    N = spec.trunc
    for s in spec.sing:
        _check_local(s)
    # the smooth part is the partition series, counted here as X(1,1) diagrams
    smooth = cyclic.coarse_series_p1(1, N, "brute")
    factors = smooth ** spec.chi if spec.chi >= 0 else smooth.inverse() ** (-spec.chi)
    for s in spec.sing:
        if s.startswith("P"):
            factors = factors * cyclic.coarse_series_p1(int(s[1:]), N, "brute")
        elif s.startswith("A"):
            factors = factors * typea.coarse_series_a(int(s[1:]), N, "enumerate")
        elif s.startswith("D"):
            factors = factors * typed.coarse_series_d(int(s[1:]), N, "substitute")
        else:
            factors = factors * lie.coarse_substitution(s, N, "series")
    return [Check(f"global chi={spec.chi} {list(spec.sing)}: assembled = factor product",
                  lie.global_series(spec.chi, spec.sing, N), factors)]


IDENTITIES: dict[str, Callable[[CommandSpec], list[Check]]] = {
    "jacobi": _v_jacobi,
    "triangle": _v_triangle,
    "ramanujan": _v_ramanujan,
    "fountains": _v_fountains,
    "orbifold-a": _v_orbifold_a,
    "coarse-a": _v_coarse_a,
    "frobenius": _v_frobenius,
    "higher-rank": _v_higher_rank,
    "orbifold-d": _v_orbifold_d,
    "coarse-d": _v_coarse_d,
    "cyclic": _v_cyclic,
    "conjectural-e": _v_conjectural_e,
    "global": _v_global,
}


def _run_identity(spec: CommandSpec) -> list[Check]:
    return IDENTITIES[spec.target](spec)


def cmd_verify(spec: CommandSpec, out) -> int:
    if spec.target not in IDENTITIES:
        raise UsageError(f"unknown identity {spec.target!r}; known: {', '.join(IDENTITIES)}")
    checks = _run_identity(spec)
    conj = spec.target == "conjectural-e" or (spec.target == "global" and any(s.startswith("E") for s in spec.sing))
    report = []
    for c in checks:
        row = {"check": c.label, "ok": c.ok}
        if not c.ok:
            row["first_difference"] = c.first_difference()
        for side, val in (("lhs", c.lhs), ("rhs", c.rhs)):
            if isinstance(val, TruncatedSeries) and len(val.variables) == 1:
                row[side] = _show(val)
        report.append(row)
    if spec.json:
        out.write(json.dumps({"identity": spec.target, "conjectural": conj, "checks": report},
                             sort_keys=True) + "\n")
    else:
        for row in report:
            out.write(f"{'pass' if row['ok'] else 'FAIL'}  {row['check']}\n")
            for side in ("lhs", "rhs"):
                if side in row:
                    out.write(f"      {side}: {' '.join(map(str, row[side]))}\n")
            if not row["ok"]:
                out.write(f"      first difference: {json.dumps(row['first_difference'], sort_keys=True)}\n")
        if conj:
            out.write("status: conjectural\n")
    return EXIT_OK if all(r["ok"] for r in report) else EXIT_FAIL


# -- enumerate -----------------------------------------------------------------------

def _fountain_row(args):
    p, k, N = args
    counts = [0] * (N + 1)
    prim = [0] * (N + 1)
    for fz in cyclic.iter_fountains(p, k, max_coins=N):
        n = sum(map(len, fz))
        counts[n] += 1
        prim[n] += cyclic.is_primitive(fz, p)
    return counts, prim


def _pmap(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def cmd_enumerate(spec: CommandSpec, out) -> int:
    N = spec.trunc
    rows = []
    if spec.target == "partitions":
        fam, n = _kind(spec)
        if fam != "A":
            raise UsageError("enumerate partitions needs --kind A<n>")
        for parts in typea.partitions_upto(N):
            lam = typea.LabelledPartition(parts, n)
            rows.append({"parts": list(parts), "weight": list(typea.multiweight_a(lam)),
                         "zero_generated": typea.is_zero_generated_a(lam)})
        rows.sort(key=lambda r: (sum(r["parts"]), r["parts"]))
    elif spec.target == "walls":
        fam, n = _kind(spec)
        if fam != "D":
            raise UsageError("enumerate walls needs --kind D<n>")
        for Y in typed.walls_upto(n, N):
            rows.append({"wall": Y.to_record(), "size": Y.size, "weight": list(typed.multiweight_d(Y)),
                         "distinguished": typed.is_distinguished_d(Y)})
        rows.sort(key=lambda r: (r["size"], json.dumps(r["wall"], sort_keys=True)))
    elif spec.target == "fountains":
        p = _need(spec, "p")
        shards = _pmap(_fountain_row, [(p, k, N) for k in range(N + 1)], spec.jobs)
        for k, (counts, prim) in enumerate(shards):
            for n in range(N + 1):
                if counts[n]:
                    rows.append({"n": n, "k": k, "f": counts[n], "g": prim[n], "h": counts[n] - prim[n]})
        rows.sort(key=lambda r: (r["n"], r["k"]))
    else:
        raise UsageError(f"unknown enumeration {spec.target!r}")
    if spec.json:
        out.write(json.dumps(rows, sort_keys=True) + "\n")
    else:
        for r in rows:
            out.write(" ".join(f"{k}={json.dumps(v, sort_keys=True, separators=(',', ':'))}"
                               for k, v in r.items()) + "\n")
        out.write(f"total {len(rows)}\n")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kind")
    common.add_argument("--p", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--trunc", type=int, default=10)
    common.add_argument("--method")
    common.add_argument("--json", action="store_true")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--shifts", default="")
    common.add_argument("--chi", type=int, default=0)
    common.add_argument("--sing", nargs="*", default=[])

    parser = _Parser(prog="wallseries", description="Exact generating series of labelled partitions, "
                                                     "type D Young walls and coin fountains.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("series", parents=[common]).add_argument("target", choices=sorted(SERIES_METHODS))
    sub.add_parser("verify", parents=[common]).add_argument("target", choices=sorted(IDENTITIES))
    sub.add_parser("enumerate", parents=[common]).add_argument("target",
                                                               choices=["fountains", "partitions", "walls"])
    return parser


def parse_spec(argv: Sequence[str]) -> CommandSpec:
    ns = build_parser().parse_args(list(argv))
    try:
        shifts = tuple(int(x) for x in ns.shifts.split(",") if x.strip())
    except ValueError:
        raise UsageError("--shifts must be a comma separated list of integers") from None
    return CommandSpec(ns.command, ns.target, kind=ns.kind, p=ns.p, trunc=ns.trunc, method=ns.method,
                       json=ns.json, jobs=ns.jobs, shifts=shifts, chi=ns.chi, sing=tuple(ns.sing), n=ns.n)


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        spec = parse_spec(argv)
        handler = {"series": cmd_series, "verify": cmd_verify, "enumerate": cmd_enumerate}[spec.command]
        return handler(spec, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except lie.ConjecturalIntegralityError as exc:
        err.write(f"conjectural integrality failed: {exc}\n")
        return EXIT_CONJECTURE
    except (lie.IntegralityError, ArithmeticError) as exc:
        err.write(f"integrality failed: {exc}\n")
        return EXIT_INTEGRALITY
    except cyclic.CapInstabilityError as exc:
        err.write(f"brute force not stable: {exc}\n")
        return EXIT_INTEGRALITY


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))
