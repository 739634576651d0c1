import itertools
from fractions import Fraction
from math import log

import pytest

from gpcover.classes import conjugacy_classes, mindeg
from gpcover.errors import CoverError, InputError, ResourceCapError
from gpcover.normal import normal_product_cover, rs_exponent_search
from gpcover.rng import SplitMix64, derive_seed
from gpcover.solver import (CoverCertificate, NoExactConjugator, PipelineConfig, at_least_power,
                            best_conjugator, exhaustive_oracle, gowers_cover, pipeline, small_phase_find_g,
                            verify_certificate)
from gpcover.subsets import Subset, conjugate_subset, generates, product, product_many, random_subset

from conftest import group

A5 = group("alt", n=5)
P7 = group("psl2", q=7)


def test_at_least_power():
    assert at_least_power(51, 60, Fraction(23, 24))
    assert not at_least_power(50, 60, Fraction(23, 24))
    assert at_least_power(8, 4, Fraction(3, 2))


def test_small_phase_examples():
    one, two = Subset.from_ids(60, [5]), Subset.from_ids(60, [9])
    assert small_phase_find_g(A5, one, two) == 0
    with pytest.raises(NoExactConjugator) as err:
        small_phase_find_g(A5, Subset.full(60), Subset.full(60))
    assert err.value.size == 60


def test_small_phase_psl2_13_exhaustive_oracle():
    G = group("psl2", q=13)
    for seed in range(5):
        A, B = random_subset(G.order, 3, seed), random_subset(G.order, 3, seed + 100)
        g = small_phase_find_g(G, A, B)
        assert product(G, A, conjugate_subset(G, B, g)).size == 9
        # smallest such g, by direct scan
        first = next(x for x in range(G.order) if product(G, A, conjugate_subset(G, B, x)).size == 9)
        assert g == first


def test_best_conjugator_examples():
    C = Subset.from_ids(60, A5.conjugacy_class_of(3))
    A = random_subset(60, 7, 1)
    assert best_conjugator(A5, A, C)[0] == 0
    assert best_conjugator(A5, Subset.full(60), random_subset(60, 4, 2)) == (0, 60)
    G = group("psl2", q=13)
    A, B = random_subset(G.order, 3, 8), random_subset(G.order, 2, 9)
    g, size = best_conjugator(G, A, B, threshold=6)
    assert size == 6 and g == small_phase_find_g(G, A, B)


def test_best_conjugator_left_side():
    A, B = random_subset(60, 5, 3), random_subset(60, 9, 4)
    g, size = best_conjugator(A5, A, B, side="left")
    assert size == product(A5, conjugate_subset(A5, A, g), B).size
    assert size == max(product(A5, conjugate_subset(A5, A, x), B).size for x in range(60))


def test_gowers_examples():
    k = mindeg(A5)
    full = Subset.full(60)
    assert gowers_cover(A5, full, full, full, k)["verified"]
    sets = [random_subset(60, 45, s) for s in (1, 2, 3)]
    r = gowers_cover(A5, *sets, k)
    assert r["criterion"] and r["verified"]
    small = [random_subset(60, 10, s) for s in (1, 2, 3)]
    r = gowers_cover(A5, *small, k)
    assert not r["criterion"] and r["verified"] is None


def _trace_monotone(cert: CoverCertificate, sets) -> None:
    seen: list[tuple[int, int, int]] = []
    for step in cert.trace:
        i, j = step.range
        parts = [s for (a, b, s) in seen if i <= a and b <= j and (a, b) != (i, j)]
        parts += [sets[t].size for t in range(i, j + 1)]
        assert step.size >= max(parts)
        seen.append((i, j, step.size))


def test_pipeline_single_full_set():
    cert = pipeline(A5, [Subset.full(60)])
    assert cert.conjugators == [0] and verify_certificate(A5, [Subset.full(60)], cert).ok


def test_pipeline_copies_of_generating_pair():
    S = Subset.from_ids(60, [1, 2])
    assert generates(A5, S)
    sets = [S] * 12
    cert = pipeline(A5, sets, PipelineConfig(seed=1))
    assert verify_certificate(A5, sets, cert).ok
    _trace_monotone(cert, sets)


def test_trimmed_alt5_agrees_with_oracle():
    cfg = PipelineConfig(c_work=Fraction(1), seed=5)
    for seed in range(6):
        rng = SplitMix64(derive_seed(17, seed))
        sets = [random_subset(60, rng.randint(3, 8), rng.next()) for _ in range(3)]
        found = exhaustive_oracle(A5, sets)
        try:
            cert = pipeline(A5, sets, cfg)
        except CoverError:
            continue
        assert verify_certificate(A5, sets, cert).ok and found is not None


def test_pipeline_mixed_sizes_exercises_small_and_parity():
    sizes = [2, 2, 40, 40, 40, 40, 3]
    sets = [random_subset(168, s, 50 + i) for i, s in enumerate(sizes)]
    # zeta = 1/4 puts the small-set threshold at 168^(1/4) ~ 3.6
    cert = pipeline(P7, sets, PipelineConfig(seed=2, zeta=Fraction(1, 4)))
    assert verify_certificate(P7, sets, cert).ok
    phases = {t.phase for t in cert.trace}
    assert "small" in phases and "passthrough" in phases
    _trace_monotone(cert, sets)


def test_pipeline_rejects_below_mass():
    sets = [random_subset(60, 2, s) for s in range(3)]
    with pytest.raises(CoverError) as err:
        pipeline(A5, sets)
    assert err.value.phase == "mass"


def test_pipeline_requires_simple():
    G = group("sym", n=4)
    sets = [Subset.full(24)] * 2
    with pytest.raises(CoverError) as err:
        pipeline(G, [random_subset(24, 20, s) for s in range(5)])
    assert err.value.phase == "simple"
    assert pipeline(G, sets, PipelineConfig(require_simple=False)).covered


def test_pipeline_deterministic_across_threads():
    rng = SplitMix64(derive_seed(99, 1))
    sets = [random_subset(168, rng.randint(2, 30), rng.next()) for _ in range(10)]
    a = pipeline(P7, sets, PipelineConfig(seed=4), threads=1)
    b = pipeline(P7, sets, PipelineConfig(seed=4), threads=8)
    assert a.to_dict() == b.to_dict()


def test_verify_certificate_tamper_and_errors():
    sets = [random_subset(60, 6, 30 + i) for i in range(3)]
    found = exhaustive_oracle(A5, sets)
    assert found is not None
    cert = CoverCertificate(found, [], True, 60)
    assert verify_certificate(A5, sets, cert).ok
    rejected = 0
    for g in range(60):
        conj = [found[0], g, found[2]]
        rep = verify_certificate(A5, sets, CoverCertificate(conj, [], True, 60))
        covers = product_many(A5, [conjugate_subset(A5, s, x) for s, x in zip(sets, conj)]).is_full()
        assert rep.ok == covers
        rejected += not rep.ok
    assert rejected > 0
    big = [random_subset(60, 30, s) for s in range(6)]
    real = pipeline(A5, big, PipelineConfig(seed=3))
    step = real.trace[0]
    forged = CoverCertificate(real.conjugators, [type(step)(step.phase, step.range, step.size - 1)], True, 60)
    assert not verify_certificate(A5, big, forged).ok
    assert not verify_certificate(A5, sets, CoverCertificate([0] * 5, [], True, 60)).ok
    with pytest.raises(InputError):
        verify_certificate(A5, [], cert)


def test_certificate_roundtrip():
    sets = [random_subset(60, 30, s) for s in range(6)]
    cert = pipeline(A5, sets, PipelineConfig(seed=3))
    again = CoverCertificate.from_dict(cert.to_dict())
    assert again.to_dict() == cert.to_dict()


def test_oracle_examples():
    assert exhaustive_oracle(A5, [Subset.full(60)]) == [0]
    tiny = [random_subset(60, 2, s) for s in range(3)]  # 8 < 60
    assert exhaustive_oracle(A5, tiny) is None
    with pytest.raises(ResourceCapError):
        exhaustive_oracle(A5, [random_subset(60, 2, s) for s in range(8)], cap=3)


def test_oracle_solution_replays():
    G = group("alt", n=4)
    sets = [random_subset(12, s, 10 + s) for s in (3, 2, 3)]
    sol = exhaustive_oracle(G, sets)
    if sol is not None:
        assert product_many(G, [conjugate_subset(G, s, g) for s, g in zip(sets, sol)]).is_full()


def test_config_roundtrip_and_validation():
    cfg = PipelineConfig(rank=2, eta=0.1)
    assert cfg.zeta == Fraction(1, 64) and cfg.delta == 1 - Fraction(1, 96)
    assert PipelineConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
    with pytest.raises(InputError):
        PipelineConfig(zeta=Fraction(1, 2), delta=Fraction(1, 3))
    with pytest.raises(InputError):
        PipelineConfig.from_dict({"bogus": 1})


# -- normal sets ---------------------------------------------------------------------------


def test_single_class_never_covers():
    for c in conjugacy_classes(A5).classes:
        assert not normal_product_cover(A5, [c.members])


def test_two_five_cycle_classes():
    spec = conjugacy_classes(A5)
    c1, c2 = [c.members for c in spec.classes if c.size == 12]
    direct = {int(A5.mul(a, b)) for a in c1.ids for b in c2.ids}
    assert normal_product_cover(A5, [c1, c2]) == (len(direct) == 60)


def brute_c_star(G, K):
    spec = conjugacy_classes(G)
    nontrivial = [c for c in spec.classes if c.rep != 0]
    best = None
    for k in range(1, K + 1):
        for tup in itertools.combinations_with_replacement(nontrivial, k):
            if not product_many(G, [c.members for c in tup]).is_full():
                m = sum(log(c.size) for c in tup) / log(G.order)
                best = m if best is None else max(best, m)
    return best


@pytest.mark.parametrize("family,params,K", [("alt", {"n": 5}, 3), ("psl2", {"q": 7}, 3), ("sl2", {"q": 5}, 4)])
def test_rs_matches_brute_force(family, params, K):
    G = group(family, **params)
    assert rs_exponent_search(G, K).c_star == pytest.approx(brute_c_star(G, K), abs=1e-12)


def test_rs_limits():
    with pytest.raises(InputError):
        rs_exponent_search(A5, 33)
    with pytest.raises(ResourceCapError):
        rs_exponent_search(group("sl2", q=5), 8, memo_cap=3)
