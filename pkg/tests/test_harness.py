from fractions import Fraction
from math import log

import pytest

from gpcover.errors import InputError, PreconditionError
from gpcover.harness import (PetridisWitness, check_32_generation, check_class_sum_identity,
                             check_petridis_consequence, check_translate_generates, check_triple_inequality,
                             check_twosets_trichotomy, class_sum_sides, eta_pair, measure_tripling,
                             petridis_exponents, petridis_witness, run_suite, three_halves_witnesses, triple_sides)
from gpcover.subsets import Subset, power, random_subset

from conftest import group, naive_product

A5 = group("alt", n=5)

FLEET = [("cyclic", {"n": 8}), ("dihedral", {"n": 6}), ("sym", {"n": 3}), ("sym", {"n": 4}), ("sym", {"n": 5}),
         ("alt", {"n": 4}), ("alt", {"n": 5}), ("alt", {"n": 6}), ("psl2", {"q": 4}), ("psl2", {"q": 7}),
         ("psl2", {"q": 8}), ("psl2", {"q": 9}), ("sl2", {"q": 3}), ("sl2", {"q": 5})]


def test_triple_examples():
    e = Subset.from_ids(60, [0])
    assert triple_sides(A5, e, e) == (1, 1)
    full = Subset.full(60)
    assert triple_sides(A5, full, full) == (3600, 3600)


def test_triple_against_naive():
    for s in range(10):
        A, B = random_subset(60, 4 + s, s), random_subset(60, 9, 100 + s)
        ab = naive_product(A5, A.ids, B.ids)
        ainv = [int(A5.inv[a]) for a in A.ids]
        binv = [int(A5.inv[b]) for b in B.ids]
        inter = naive_product(A5, ainv, A.ids) & naive_product(A5, B.ids, binv)
        assert triple_sides(A5, A, B) == (len(ab) * len(inter), A.size * B.size)


def test_class_sum_examples():
    C = Subset.from_ids(60, A5.conjugacy_class_of(5))
    A = random_subset(60, 20, 4)
    lhs, rhs, orbit = class_sum_sides(A5, A, C)
    assert lhs == rhs == (A & C).size and orbit == 1
    e = Subset.from_ids(60, [0])
    B = random_subset(60, 7, 9)
    lhs, rhs, orbit = class_sum_sides(A5, e, B)
    conjugates = {tuple(sorted(int(A5.conj(b, g)) for b in B.ids)) for g in range(60)}
    assert rhs == Fraction(sum(0 in c for c in conjugates), len(conjugates)) == lhs
    assert orbit == len(conjugates)


@pytest.mark.parametrize("family,params", FLEET)
def test_exact_identities_on_fleet(family, params):
    G = group(family, **params)
    for s in range(15):
        A = random_subset(G.order, 1 + s % G.order, 3 * s)
        B = random_subset(G.order, 1 + (7 * s) % G.order, 3 * s + 1)
        assert check_triple_inequality(G, A, B)
        assert check_class_sum_identity(G, A, B)
        if B.size >= 2:
            for h in (2, 3):
                assert check_petridis_consequence(G, A, B, h)


def test_petridis_exponents():
    assert petridis_exponents(3) == (15, 2, 7)
    assert petridis_exponents(2) == (7, 1, 3)
    with pytest.raises(InputError):
        petridis_exponents(1)


def test_petridis_witness_values():
    A, B = random_subset(60, 10, 1), random_subset(60, 5, 2)
    w = petridis_witness(A5, A, B, 3)
    assert isinstance(w, PetridisWitness)
    B0 = Subset.from_ids(60, w.b0)
    assert w.alpha == Fraction(len(naive_product(A5, A.ids, B0.ids)), 10)
    assert w.gamma == Fraction(10, 5)
    assert w.alpha >= 1 and w.beta >= 1
    best = max(len(naive_product(A5, A.ids, [int(A5.conj(x, A5.inv[b])) for x in B0.ids])) for b in B0.ids)
    assert w.beta == Fraction(best, 10)
    assert power(A5, B0, 3).size <= w.bound(10)


def test_generation_facts():
    assert check_32_generation(A5)
    assert len(three_halves_witnesses(A5)) == 59
    assert check_32_generation(group("psl2", q=7))
    with pytest.raises(PreconditionError):
        check_32_generation(group("sym", n=4))
    assert check_translate_generates(A5, random_subset(60, 2, 5))
    report = run_suite("gen32", group("sym", n=4), 0)
    assert report.skipped == "skipped: not simple" and report.passed


def test_tripling_examples():
    assert measure_tripling(A5, Subset.full(60))["tripled"]
    S = Subset.from_ids(60, [1, 2])
    m = measure_tripling(A5, S)
    assert not m["tripled"] and m["eta"] == pytest.approx(log(m["size3"]) / log(2) - 1) and m["eta"] > 0


def test_trichotomy_examples():
    big_b = random_subset(60, 55, 1)
    r = check_twosets_trichotomy(A5, Subset.full(60), big_b, 0.01, 23 / 24)
    assert r["lemma_two_sets_2"]["B_large"] and r["holds_2"]
    A, B = random_subset(60, 30, 2), random_subset(60, 5, 3)
    r = check_twosets_trichotomy(A5, A, B, 1.0, 23 / 24)
    assert r["lemma_two_sets"]["A_large"]
    with pytest.raises(InputError):
        check_twosets_trichotomy(A5, B, A, 0.01, 0.5)
    assert eta_pair(23 / 24, 0.01) == pytest.approx(min((1 / 24) / (26 * 23 / 24), 0.01))


def test_suites_report_and_are_deterministic():
    for suite in ("triple", "classsum", "petridis", "translate", "tripling", "trichotomy", "gowers", "small"):
        a = run_suite(suite, A5, 20, seed=7, threads=1)
        b = run_suite(suite, A5, 20, seed=7, threads=4)
        assert a.passed and a.to_dict() == b.to_dict() and a.rows == b.rows
    bounds = run_suite("bounds", group("psl2", q=11), 0)
    assert bounds.passed and len(bounds.rows) == 4
    with pytest.raises(InputError):
        run_suite("nope", A5, 1)


def test_suites_differ_by_seed():
    assert run_suite("triple", A5, 10, seed=1).rows != run_suite("triple", A5, 10, seed=2).rows
