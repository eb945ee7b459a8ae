import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from wallseries.cyclotomic import CyclotomicInt
from wallseries.typea import (LabelledPartition, core_a, core_quotient_a, core_weight_monomial, fiber_a,
                              from_abacus_a, from_core_quotient_a, frobenius_coordinates, frobenius_series_a,
                              hook_cells, higher_rank_series_a, is_zero_generated_a,
                              is_zero_generated_by_cover, multiweight_a, orbifold_series_a, p_map_a,
                              remove_rim_hook, substituted_monomial_a, to_abacus_a, zero_generated_upto,
                              coarse_series_a)

import oracles

L = LabelledPartition
partition_st = st.lists(st.integers(1, 9), max_size=7).map(lambda x: tuple(sorted(x, reverse=True)))


@settings(max_examples=150)
@given(partition_st, st.integers(1, 4))
def test_abacus_and_core_quotient_round_trip(parts, n):
    lam = L(parts, n)
    assert from_abacus_a(to_abacus_a(lam)) == lam
    cq = core_quotient_a(lam)
    assert from_core_quotient_a(cq, n) == lam
    assert sum(cq.a_vector) == 0
    # size bookkeeping: every quotient box is one border strip of length n + 1
    assert lam.size == core_a(lam).size + (n + 1) * sum(sum(q) for q in cq.quotients)


@settings(max_examples=150)
@given(partition_st, st.integers(1, 4))
def test_core_matches_rim_hook_oracle(parts, n):
    lam = L(parts, n)
    assert core_a(lam).parts == oracles.rim_hook_core(parts, n + 1)


@settings(max_examples=100)
@given(partition_st, st.integers(1, 3), st.integers(0, 2 ** 31))
def test_core_independent_of_removal_order(parts, n, seed):
    rng = random.Random(seed)
    cur = parts
    while True:
        hooks = hook_cells(cur, n + 1)
        if not hooks:
            break
        cur = remove_rim_hook(cur, *rng.choice(hooks))
    assert cur == core_a(L(parts, n)).parts


@pytest.mark.parametrize("n", [1, 2, 3])
def test_core_content_formula(n):
    for parts in oracles.partitions_upto(10):
        lam = L(parts, n)
        assert core_weight_monomial(core_quotient_a(lam).a_vector) == oracles.content_a(n, core_a(lam).parts)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_content_and_zero_generation_against_oracle(n):
    for parts in oracles.partitions_upto(10):
        lam = L(parts, n)
        assert multiweight_a(lam) == oracles.content_a(n, parts)
        z = oracles.zero_generated_a(n, parts)
        assert is_zero_generated_a(lam) == z == is_zero_generated_by_cover(lam)


def _zero_generated_pool(n, S):
    return [p for p in oracles.partitions_upto(S) if oracles.zero_generated_a(n, p)]


@pytest.mark.parametrize("n", [1, 2])
def test_p_is_the_minimal_zero_generated_superset(n):
    pool = _zero_generated_pool(n, 24)
    for parts in oracles.partitions_upto(8):
        ups = [q for q in pool if oracles.contains(q, parts)]
        least = [q for q in ups if all(oracles.contains(r, q) for r in ups)]
        assert len(least) == 1
        got = p_map_a(L(parts, n))
        assert got.parts == least[0]
        assert sum(least[0]) < 24  # the pool was big enough to see it


@pytest.mark.parametrize("n", [1, 2])
def test_fibers_are_finite_and_match_brute_force(n):
    for lam0 in zero_generated_upto(n, 4):
        brute = []
        for k in range(lam0.size + 1):
            for mu in oracles.partitions(k):
                if oracles.contains(lam0.parts, mu) and p_map_a(L(mu, n)) == lam0:
                    brute.append(mu)
        assert sorted(m.parts for m in fiber_a(lam0)) == sorted(brute)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fiber_sums_collapse(n):
    m = n + 2
    for lam0 in zero_generated_upto(n, 4):
        bins = Counter()
        for mu in fiber_a(lam0):
            bins[substituted_monomial_a(multiweight_a(mu), n)] += 1
        by_deg = {}
        for (d, z), c in bins.items():
            by_deg.setdefault(d, [0] * m)[z] += c
        vals = {d: CyclotomicInt.from_power_counts(r, m) for d, r in by_deg.items()}
        vals = {d: v for d, v in vals.items() if v}
        assert vals == {multiweight_a(lam0)[0]: CyclotomicInt.from_int(1, m)}


@pytest.mark.parametrize("n,N", [(1, 6), (2, 5), (3, 4)])
def test_zero_generated_search_matches_filter(n, N):
    got = Counter(lam.parts for lam in zero_generated_upto(n, N))
    # scan a margin beyond the largest hit: nothing new may show up there
    S = max(sum(p) for p in got) + 6
    want = Counter()
    for parts in oracles.partitions_upto(S):
        if oracles.zero_generated_a(n, parts) and oracles.content_a(n, parts)[0] <= N:
            want[parts] += 1
    assert got == want


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbifold_routes(n):
    assert orbifold_series_a(n, 9, "enumerate") == orbifold_series_a(n, 9, "closed_form")


def test_coarse_a1_prefix():
    assert coarse_series_a(1, 3, "enumerate").coefficient_list() == [1, 1, 3, 5]
    assert coarse_series_a(1, 8, "substitute") == coarse_series_a(1, 8, "enumerate")


@settings(max_examples=80)
@given(partition_st, st.integers(1, 3))
def test_frobenius_rows_cover_the_diagram(parts, n):
    fp = frobenius_coordinates(L(parts, n))
    assert fp.weight() == (multiweight_a(L(parts, n)) if parts else ())


@pytest.mark.parametrize("n", [1, 2])
def test_frobenius_route(n):
    assert frobenius_series_a(n, 6) == orbifold_series_a(n, 6, "enumerate")


def test_higher_rank_routes():
    assert higher_rank_series_a(1, (0, 1), 6, "enumerate") == higher_rank_series_a(1, (0, 1), 6)
    assert higher_rank_series_a(2, (0, 0, 2), 4, "enumerate") == higher_rank_series_a(2, (0, 0, 2), 4)


def test_labelled_partition_validation():
    with pytest.raises(ValueError):
        L((1, 2), 1)
    with pytest.raises(ValueError):
        L((0,), 1)
    assert L((3, 1), 2, shift=4).shift == 1
