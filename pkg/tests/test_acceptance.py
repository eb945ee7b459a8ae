"""Acceptance criteria 1-14, one pass/fail line each.

Run directly (python3 tests/test_acceptance.py) for the report; under pytest each
criterion is a test and the report is printed in the terminal summary.
"""

import itertools
import os
import random
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from wallseries import cyclic, lie, typea, typed  # noqa: E402
from wallseries.cyclotomic import CyclotomicInt  # noqa: E402
from wallseries.series import single  # noqa: E402

# criterion -> (title, runtime limit in seconds or None)
CRITERIA = {
    1: ("type A orbifold identity, n = 1..3, total degree 12", 60),
    2: ("type A coarse identity, n = 1..3, q-degree 10", 60),
    3: ("constant term of row products, n = 1, 2, degree 8", 30),
    4: ("higher rank n = 2, shifts (0, 1), degree 8", 30),
    5: ("type D orbifold identity, D4 to 12 and D5 to 10", 300),
    6: ("type D coarse identity, D4 to q-degree 10", 300),
    7: ("core invariance under random removal orders", None),
    8: ("type D core formulas on z in [-2, 2]^n, n = 4, 5", 60),
    9: ("fiber sums collapse (A: wt_0 <= 6, D4: wt_0 <= 5)", 300),
    10: ("X(p, 1) fountain pairing, p = 1, 2, 3, q-degree 12", 120),
    11: ("E6, E7, E8 substitution integral to q-degree 25", 600),
    12: ("triple product to 30, p = 1 fountains to 10", 30),
    13: ("global assembly chi = 2 with A1, D4, P3 to degree 8", 60),
    14: ("CLI output byte-identical across runs and --jobs", None),
}


def _c1():
    return [(f"A{n}", typea.orbifold_series_a(n, 12, "enumerate") == typea.orbifold_series_a(n, 12, "closed_form"))
            for n in (1, 2, 3)]


def _c2():
    out = []
    for n in (1, 2, 3):
        brute = typea.coarse_series_a(n, 10, "enumerate")
        sub = typea.coarse_series_a(n, 10, "substitute")
        out.append((f"A{n} count = substitution", brute == sub))
        out.append((f"A{n} nonnegative", all(c >= 0 for c in sub.coefficient_list())))
        if n == 1:
            out.append(("A1 prefix 1,1,3,5", sub.coefficient_list()[:4] == [1, 1, 3, 5]))
    return out


def _c3():
    return [(f"A{n}", typea.frobenius_series_a(n, 8) == typea.orbifold_series_a(n, 8, "enumerate"))
            for n in (1, 2)]


def _c4():
    return [("A2 (0,1)", typea.higher_rank_series_a(2, (0, 1), 8, "enumerate")
             == typea.higher_rank_series_a(2, (0, 1), 8, "closed_form"))]


def _c5():
    return [(f"D{n}", typed.orbifold_series_d(n, N, "enumerate") == typed.orbifold_series_d(n, N, "closed_form"))
            for n, N in ((4, 12), (5, 10))]


def _c6():
    tl = typed.coarse_series_d(4, 10, "tl")
    filt = typed.coarse_series_d(4, 10, "filter")
    sub = typed.coarse_series_d(4, 10, "substitute")
    out = [("row data route = filter route", tl == filt),
           ("substitution nonnegative", all(c >= 0 for c in sub.coefficient_list())),
           ("distinguished count = substitution", tl == sub)]
    if tl != sub:
        out[-1] += (f"count {tl.coefficient_list()} vs substitution {sub.coefficient_list()}",)
    return out


def _c7():
    rng = random.Random(20240607)
    bad_a = bad_d = 0
    for _ in range(200):
        n = rng.randint(1, 4)
        parts = tuple(sorted((rng.randint(1, 12) for _ in range(rng.randint(0, 10))), reverse=True))
        lam = typea.LabelledPartition(parts, n)
        cores = []
        for _ in range(2):
            cur = parts
            while hooks := typea.hook_cells(cur, n + 1):
                cur = typea.remove_rim_hook(cur, *rng.choice(hooks))
            cores.append(cur)
        core = typea.core_a(lam)
        strips = sum(map(sum, typea.core_quotient_a(lam).quotients))
        bad_a += not (cores[0] == cores[1] == core.parts and lam.size == core.size + (n + 1) * strips)
    pools = {n: list(typed.walls_upto(n, 16)) for n in (4, 5)}
    for _ in range(200):
        n = rng.choice((4, 5))
        Y = rng.choice(pools[n])
        (c1, b1), (c2, b2) = (typed.core_d(Y, random.Random(rng.random())) for _ in range(2))
        bad_d += not (c1 == c2 and b1 == b2 and Y.size == c1.size + (2 * n - 2) * b1)
    return [("type A partitions", bad_a == 0), ("type D walls", bad_d == 0)]


def _c8():
    ok = True
    for n in (4, 5):
        for z in itertools.product(range(-2, 3), repeat=n):
            core = typed.core_from_z(n, z)
            content = oracles.content_d(n, typed.abacus_to_wall_d(core).columns)
            ok &= (typed.is_core_d(core) and typed.z_coords(core) == z and typed.core_size_d(n, z) == core.size
                   and typed.core_multiweight_d(n, z) == content
                   and typed.theta_monomial_d(n, typed.z_to_m(n, z)) == content)
    worked = (typed.core_multiweight_d(4, (1, 0, 0, 0)) == (1, 0, 0, 0, 0)
              and typed.z_to_m(4, (1, 0, 0, 0)) == (-1, -2, -1, -1))
    return [("exhaustive", ok), ("z = (1,0,0,0)", worked)]


def _collapsed(monomials, m):
    by_deg = {}
    for d, z in monomials:
        by_deg.setdefault(d, [0] * m)[z] += 1
    vals = {d: CyclotomicInt.from_power_counts(r, m) for d, r in by_deg.items()}
    return {d: v for d, v in vals.items() if v}


def _c9():
    out = []
    for n in (1, 2):
        ok = count = 0
        for lam0 in typea.zero_generated_upto(n, 6):
            mons = [typea.substituted_monomial_a(typea.multiweight_a(mu), n) for mu in typea.fiber_a(lam0)]
            ok += _collapsed(mons, n + 2) == {typea.multiweight_a(lam0)[0]: CyclotomicInt.from_int(1, n + 2)}
            count += 1
        out.append((f"A{n} fibers ({count})", ok == count))
    n, M = 4, 7
    ok = count = 0
    for ab, w0 in typed.walls_by_wt0(n, 5, row_filter=True):
        if not typed.is_distinguished_d(ab):
            continue
        Y = typed.abacus_to_wall_d(ab)
        mons = [typed.substituted_monomial_d(n, typed.multiweight_d(W)) for W in typed.fiber_d(Y)]
        odd = ab.total_beads % 2 == 1
        rows = sum(typed.c_value(t, l, n, i == 0 and odd) for i, (t, l) in enumerate(typed.tl_encode(ab)))
        _, own = typed.substituted_monomial_d(n, typed.multiweight_d(Y))
        ok += _collapsed(mons, M) == {w0: CyclotomicInt.from_int(1, M)} and (own - rows) % M == 0
        count += 1
    out.append((f"D4 fibers ({count})", ok == count))
    return out


def _c10():
    out = []
    part = [sum(1 for _ in oracles.partitions(k)) for k in range(13)]
    for p in (1, 2, 3):
        form = cyclic.coarse_series_p1(p, 12, "formula")
        out.append((f"p={p} formula = brute force", form == cyclic.coarse_series_p1(p, 12, "brute")))
        t = cyclic.FountainTable.build(p, 12)
        out.append((f"p={p} fountain recursions", t.check_removal_identity() and t.check_boundary()
                    and t.check_split()))
        F = cyclic.fountain_series_F(p, 12)
        out.append((f"p={p} continued fraction", cyclic.g_from_removal(p, F)
                    == cyclic.g_continued_fraction_auto(p, 12)[0]))
        if p == 1:
            out.append(("p=1 partition numbers", form.coefficient_list() == part))
        if p == 2:
            out.append(("p=2 = A1 coarse", form == typea.coarse_series_a(1, 12, "enumerate")))
    for p in (1, 2, 3):
        neg = cyclic.negative_l_contribution(p, 12)
        row = (f"p={p} negative l terms vanish", not neg.terms)
        if neg.terms:
            row += (f"leftover {neg.to_text()}",)
        out.append(row)
    return out


def _c11():
    out = []
    for kind in ("E6", "E7", "E8"):
        try:
            s = lie.coarse_substitution(kind, 25)
        except lie.ConjecturalIntegralityError as exc:
            out.append((f"{kind} integral", False, str(exc)))
            continue
        c = s.coefficient_list()
        out.append((f"{kind} integral, nonnegative", all(x >= 0 for x in c)))
        out.append((f"{kind} = recorded coefficients", c == lie.golden_e_series(kind)))
    return out


def _c12():
    F = cyclic.fountain_series_F(1, 10)
    return [("triple product", cyclic.jacobi_sum(30) == cyclic.jacobi_product(30)),
            ("p=1 fountains", F == cyclic.ramanujan_ratio(10) == cyclic.ramanujan_continued_fraction(10))]


def _c13():
    N = 8
    smooth = single("q", N, [sum(1 for _ in oracles.partitions(k)) for k in range(N + 1)])
    factors = (smooth ** 2 * typea.coarse_series_a(1, N, "enumerate") * typed.coarse_series_d(4, N, "tl")
               * cyclic.coarse_series_p1(3, N, "brute"))
    return [("assembled = factor product", lie.global_series(2, ["A1", "D4", "P3"], N) == factors)]


DETERMINISM_COMMANDS = [
    ["series", "orbifold", "--kind", "A2", "--trunc", "5"],
    ["series", "orbifold", "--kind", "D4", "--trunc", "6", "--method", "enumerate", "--json"],
    ["series", "orbifold", "--kind", "E6", "--trunc", "3"],
    ["series", "coarse", "--kind", "A1", "--trunc", "8", "--method", "enumerate"],
    ["series", "coarse", "--kind", "D4", "--trunc", "8", "--method", "filter"],
    ["series", "coarse", "--kind", "E8", "--trunc", "10", "--json"],
    ["series", "higher-rank", "--kind", "A2", "--shifts", "0,1", "--trunc", "5"],
    ["series", "cyclic", "--p", "3", "--trunc", "8", "--method", "brute"],
    ["series", "global", "--chi", "2", "--sing", "A1", "D4", "P3", "--trunc", "6"],
    ["verify", "jacobi", "--trunc", "20"],
    ["verify", "triangle", "--p", "2", "--trunc", "10"],
    ["verify", "ramanujan", "--trunc", "8"],
    ["verify", "fountains", "--p", "2", "--trunc", "8", "--json"],
    ["verify", "orbifold-a", "--kind", "A1", "--trunc", "6"],
    ["verify", "coarse-a", "--kind", "A2", "--trunc", "6"],
    ["verify", "frobenius", "--kind", "A1", "--trunc", "6"],
    ["verify", "higher-rank", "--kind", "A1", "--shifts", "0,1", "--trunc", "5"],
    ["verify", "orbifold-d", "--kind", "D4", "--trunc", "6"],
    ["verify", "coarse-d", "--kind", "D4", "--trunc", "6"],
    ["verify", "cyclic", "--p", "2", "--trunc", "8"],
    ["verify", "conjectural-e", "--kind", "E7", "--trunc", "8"],
    ["verify", "global", "--chi", "1", "--sing", "A1", "P2", "--trunc", "6"],
    ["enumerate", "partitions", "--kind", "A2", "--trunc", "5"],
    ["enumerate", "walls", "--kind", "D4", "--trunc", "5", "--json"],
]
JOBS_COMMANDS = [["enumerate", "fountains", "--p", p, "--trunc", "12"] for p in ("1", "2", "3")]


def _cli(argv):
    r = subprocess.run([sys.executable, "-m", "wallseries", *argv], capture_output=True, check=False)
    return r.returncode, r.stdout, r.stderr


def _c14():
    runs = [c for c in DETERMINISM_COMMANDS for _ in range(2)]
    runs += [c + ["--jobs", j] for c in JOBS_COMMANDS for j in ("1", "1", "2", "4")]
    with ThreadPoolExecutor(max_workers=os.cpu_count() or 2) as ex:
        res = list(ex.map(_cli, runs))
    repeat = all(res[2 * i] == res[2 * i + 1] for i in range(len(DETERMINISM_COMMANDS)))
    base = 2 * len(DETERMINISM_COMMANDS)
    jobs = all(len(set(res[base + 4 * i: base + 4 * i + 4])) == 1 for i in range(len(JOBS_COMMANDS)))
    clean = all(code in (0, 1) and out for code, out, _ in res)
    return [("repeated runs", repeat), ("--jobs 1, 2, 4", jobs), ("commands ran", clean)]


CHECKS = {1: _c1, 2: _c2, 3: _c3, 4: _c4, 5: _c5, 6: _c6, 7: _c7, 8: _c8, 9: _c9, 10: _c10, 11: _c11,
          12: _c12, 13: _c13, 14: _c14}

# parts that fail when implemented as stated; see the decision log
KNOWN_FAILURES = {6: {"distinguished count = substitution"}, 10: {"p=1 negative l terms vanish"}}


@lru_cache(maxsize=None)
def evaluate(k):
    t0 = time.perf_counter()
    parts = CHECKS[k]()
    elapsed = time.perf_counter() - t0
    limit = CRITERIA[k][1]
    if limit is not None:
        parts = parts + [(f"runtime under {limit} s", elapsed < limit)]
    _DONE.add(k)
    return parts, elapsed


_DONE = set()


def report_line(k):
    parts, elapsed = evaluate(k)
    failed = [p for p in parts if not p[1]]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {k:2d}: {status}  {CRITERIA[k][0]}  [{elapsed:.1f} s]"
    for p in failed:
        line += f"\n               failed: {p[0]}" + (f" ({p[2]})" if len(p) > 2 else "")
    return line


def _params():
    for k in CHECKS:
        marks = []
        if k in KNOWN_FAILURES:
            marks.append(pytest.mark.xfail(strict=True, reason="; ".join(sorted(KNOWN_FAILURES[k]))))
        yield pytest.param(k, marks=marks, id=f"criterion{k}")


@pytest.mark.parametrize("k", list(_params()))
def test_criterion(k):
    parts, _ = evaluate(k)
    assert [p[0] for p in parts if not p[1]] == []


@pytest.mark.parametrize("k", sorted(KNOWN_FAILURES))
def test_criterion_other_parts(k):
    parts, _ = evaluate(k)
    assert [p[0] for p in parts if not p[1] and p[0] not in KNOWN_FAILURES[k]] == []
    assert {p[0] for p in parts if not p[1]} == KNOWN_FAILURES[k]


if __name__ == "__main__":
    for k in CHECKS:
        print(report_line(k), flush=True)
