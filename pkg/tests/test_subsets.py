import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpcover.errors import EmptySubsetError, InputError, PreconditionError
from gpcover.rng import SplitMix64, derive_seed
from gpcover.subsets import (Subset, ball, conjugate_subset, find_generating_translate, generated_closure,
                             generates, inverse_set, power, product, random_subset, translate)

from conftest import group, naive_product

A5 = group("alt", n=5)
S3 = group("sym", n=3)

ids60 = st.sets(st.integers(0, 59), min_size=1, max_size=30)


def by_cycles(G, *cycles):
    want = [list(c) for c in cycles]
    return next(g for g in range(G.order) if G.cycles(g) == want)


@settings(max_examples=60, deadline=None)
@given(ids60, ids60)
def test_product_matches_naive(a, b):
    A, B = Subset.from_ids(60, a), Subset.from_ids(60, b)
    assert set(product(A5, A, B).ids.tolist()) == naive_product(A5, a, b)


@settings(max_examples=60, deadline=None)
@given(ids60, st.integers(0, 59))
def test_conjugate_and_translate(s, g):
    S = Subset.from_ids(60, s)
    conj = conjugate_subset(A5, S, g)
    assert conj.size == S.size
    assert set(conj.ids.tolist()) == {int(A5.conj(x, g)) for x in s}
    assert set(translate(A5, S, g).ids.tolist()) == naive_product(A5, s, [g])
    assert inverse_set(A5, inverse_set(A5, S)) == S


def test_product_examples():
    B = Subset.from_ids(6, [1, 4, 5])
    assert product(S3, Subset.from_ids(6, [0]), B) == B
    assert product(S3, Subset.full(6), B).is_full()
    t = by_cycles(S3, (1, 2))
    H = Subset.from_ids(6, [0, t])
    assert product(S3, H, H) == H


def test_conjugate_examples():
    S = random_subset(60, 10, 5)
    assert conjugate_subset(A5, S, 0) == S
    C = Subset.from_ids(60, A5.conjugacy_class_of(7))
    for g in range(60):
        assert conjugate_subset(A5, C, g) == C
    assert conjugate_subset(A5, Subset.from_ids(60, [7]), 9).ids.tolist() == [int(A5.conj(7, 9))]


def test_power_and_inverse_examples():
    e = Subset.from_ids(60, [0])
    assert power(A5, e, 5) == e
    inv_class = Subset.from_ids(60, A5.conjugacy_class_of(by_cycles(A5, (1, 2), (3, 4))))
    assert inverse_set(A5, inv_class) == inv_class
    S = Subset.from_ids(60, [by_cycles(A5, (1, 2, 3, 4, 5)), by_cycles(A5, (1, 2, 3))])
    assert power(A5, S, 3).size > S.size


def test_generation_examples():
    e = Subset.from_ids(60, [0])
    assert generated_closure(A5, e) == e and not generates(A5, e)
    assert generates(A5, Subset.full(60))
    S = Subset.from_ids(60, [by_cycles(A5, (1, 2, 3, 4, 5)), by_cycles(A5, (1, 2, 3))])
    assert generates(A5, S)
    assert find_generating_translate(A5, S) == 0


def test_translate_out_of_subgroup():
    a = by_cycles(A5, (1, 2, 3))
    S = Subset.from_ids(60, [0, a])  # inside <(1 2 3)>
    x = find_generating_translate(A5, S)
    assert x != 0
    assert generates(A5, translate(A5, S, x))
    assert all(not generates(A5, translate(A5, S, y)) for y in range(x))


def test_translate_in_sym3_reported():
    c = by_cycles(S3, (1, 2, 3))
    S = Subset.from_ids(6, [0, c])
    try:
        x = find_generating_translate(S3, S)
    except PreconditionError as exc:
        assert exc.witness is not None
    else:
        assert generates(S3, translate(S3, S, x))


def test_empty_and_bad_inputs():
    empty = Subset.from_ids(60, [])
    with pytest.raises(EmptySubsetError):
        product(A5, empty, Subset.full(60))
    with pytest.raises(InputError):
        random_subset(60, 61, 0)
    with pytest.raises(PreconditionError):
        find_generating_translate(A5, Subset.from_ids(60, [3]))


def test_ball():
    gens = [by_cycles(A5, (1, 2, 3, 4, 5)), by_cycles(A5, (1, 2, 3))]
    assert ball(A5, gens, 0).ids.tolist() == [0]
    sizes = [ball(A5, gens, r).size for r in range(16)]
    assert sizes == sorted(sizes) and sizes[-1] == 60


def test_splitmix_reference_values():
    # first outputs for seed 0 from the published SplitMix64 reference
    r = SplitMix64(0)
    assert [r.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 200), st.data())
def test_sample_properties(seed, n, data):
    k = data.draw(st.integers(0, n))
    s = SplitMix64(seed).sample(n, k)
    assert len(s) == k == len(set(s)) and s == sorted(s) and all(0 <= x < n for x in s)
    assert s == SplitMix64(seed).sample(n, k)


def test_random_subset_deterministic_and_seed_sensitive():
    assert random_subset(168, 20, 7) == random_subset(168, 20, 7)
    assert random_subset(168, 20, 7) != random_subset(168, 20, 8)
    assert derive_seed(1, 2) != derive_seed(1, 3) != derive_seed(2, 2)


def test_below_is_roughly_uniform():
    r = SplitMix64(123)
    counts = np.bincount([r.below(6) for _ in range(6000)], minlength=6)
    assert counts.min() > 850 and counts.max() < 1150
