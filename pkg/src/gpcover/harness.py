"""Property suites checking the supporting identities and inequalities by
direct computation.

Each suite draws its trials from per-trial SplitMix64 seeds derived from one
base seed, evaluates them independently (optionally on a thread pool) and
collects violations with full witnesses. Identities are compared in exact
rational arithmetic; only the empirical exponents (tripling, trichotomy
margins) are reported as floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, exp, log

import numpy as np

from .classes import ClassSpectrum, check_landseitz, check_rank_bounds, mindeg_of, spectrum_of
from .errors import EmptySubsetError, InputError, MetadataError, PreconditionError
from .groups import GroupTable
from .rng import SplitMix64, derive_seed
from .search import ordered_map, product_sizes, resolve_threads, scan_conjugators
from .solver import NoExactConjugator, gowers_cover, small_phase_find_g
from .subsets import (Subset, find_generating_translate, inverse_set, power, product, random_subset,
                      translate)

SUITES = ("triple", "classsum", "petridis", "gen32", "translate", "tripling", "trichotomy", "gowers",
          "bounds", "small")
DEFAULT_SEED = 0x5EED


@dataclass
class TrialReport:
    suite: str
    group: str
    seed: int
    trials: int
    violations: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    skipped: str | None = None
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "group": self.group,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "skipped": self.skipped,
            "violations": self.violations,
            "summary": self.summary,
        }


def _nonempty(*sets: Subset) -> None:
    for s in sets:
        if s.size == 0:
            raise EmptySubsetError("check requires nonempty subsets")


def _frac(x: Fraction) -> str:
    return str(x)


# -- single checks --------------------------------------------------------------------------


def triple_sides(G: GroupTable, A: Subset, B: Subset) -> tuple[int, int]:
    """``(|AB| |A^-1 A ∩ B B^-1|, |A||B|)``."""
    _nonempty(A, B)
    ab = product(G, A, B).size
    left = product(G, inverse_set(G, A), A)
    right = product(G, B, inverse_set(G, B))
    return ab * (left & right).size, A.size * B.size


def check_triple_inequality(G: GroupTable, A: Subset, B: Subset) -> bool:
    lhs, rhs = triple_sides(G, A, B)
    return lhs >= rhs


def class_sum_sides(G: GroupTable, A: Subset, B: Subset,
                    spectrum: ClassSpectrum | None = None) -> tuple[Fraction, Fraction, int]:
    """Both sides of the class-sum identity and the number of distinct conjugates of B.

    The left side sums ``|A∩C||B∩C|/|C|`` over classes; the right side
    averages ``|A∩B'|`` over the distinct conjugates B' of B.
    """
    _nonempty(A, B)
    spectrum = spectrum or spectrum_of(G)
    cls_a = np.bincount(spectrum.class_of[A.ids], minlength=len(spectrum.classes))
    cls_b = np.bincount(spectrum.class_of[B.ids], minlength=len(spectrum.classes))
    lhs = sum((Fraction(int(a) * int(b), c.size) for a, b, c in zip(cls_a, cls_b, spectrum.classes) if a and b),
              Fraction(0))
    conj = np.asarray(G.conj(B.ids[None, :], np.arange(G.order)[:, None]))
    masks = np.zeros((G.order, G.order), dtype=bool)
    np.put_along_axis(masks, conj.astype(np.intp), True, axis=1)
    distinct = np.unique(np.packbits(masks, axis=1), axis=0)
    hits = np.unpackbits(distinct, axis=1, count=G.order)[:, A.ids].sum(axis=1)
    rhs = Fraction(int(hits.sum()), len(distinct))
    return lhs, rhs, len(distinct)


def check_class_sum_identity(G: GroupTable, A: Subset, B: Subset,
                             spectrum: ClassSpectrum | None = None) -> bool:
    lhs, rhs, _ = class_sum_sides(G, A, B, spectrum)
    return lhs == rhs


def petridis_exponents(h: int) -> tuple[int, int, int]:
    if h < 2:
        raise InputError("Petridis power h must be >= 2")
    return 8 * h - 9, h - 1, 4 * h - 5


@dataclass(frozen=True)
class PetridisWitness:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    h: int
    b0: tuple[int, ...]
    translate: int | None

    def bound(self, a_size: int) -> Fraction:
        ea, eb, eg = petridis_exponents(self.h)
        return self.alpha**ea * self.beta**eb * self.gamma**eg * a_size

    def to_dict(self) -> dict:
        return {"alpha": _frac(self.alpha), "beta": _frac(self.beta), "gamma": _frac(self.gamma),
                "h": self.h, "b0": list(self.b0), "translate": self.translate}


def petridis_witness(G: GroupTable, A: Subset, B: Subset, h: int) -> PetridisWitness:
    """Ratios for A and a generating translate B0 = B x of B.

    When no translate generates (non-simple G) B itself is used; the
    inequality holds for any pair, only the generation property is lost.
    """
    _nonempty(A, B)
    petridis_exponents(h)
    try:
        x = find_generating_translate(G, B)
        B0 = translate(G, B, x)
    except PreconditionError:
        x, B0 = None, B
    alpha = Fraction(product(G, A, B0).size, A.size)
    # beta uses the conjugator b^-1 for b in B0: A * B0^(b^-1)
    inv = G.inv[B0.ids]
    sizes = product_sizes(G, A, B0, np.asarray(inv, dtype=np.int64), "right")
    beta = Fraction(int(sizes.max()), A.size)
    gamma = Fraction(A.size, B0.size)
    return PetridisWitness(alpha, beta, gamma, h, tuple(int(i) for i in B0.ids), x)


def check_petridis_consequence(G: GroupTable, A: Subset, B: Subset, h: int) -> bool:
    w = petridis_witness(G, A, B, h)
    B0 = Subset.from_ids(G.order, w.b0)
    return power(G, B0, h).size <= w.bound(A.size)


def three_halves_witnesses(G: GroupTable) -> dict[int, int | None]:
    """For each nontrivial g the smallest h with <g, h> = G (None if none)."""
    out: dict[int, int | None] = {}
    for g in range(1, G.order):
        out[g] = next((h for h in range(G.order) if G.generated([g, h]).all()), None)
    return out


def check_32_generation(G: GroupTable, spectrum: ClassSpectrum | None = None) -> bool:
    spectrum = spectrum or spectrum_of(G)
    if not spectrum.simple:
        raise PreconditionError(f"{G.meta.name} is not simple", witness=G.meta.name)
    return all(h is not None for h in three_halves_witnesses(G).values())


def check_translate_generates(G: GroupTable, S: Subset) -> bool:
    try:
        find_generating_translate(G, S)
    except PreconditionError:
        return False
    return True


def measure_tripling(G: GroupTable, S: Subset) -> dict:
    """``{"tripled": bool, "eta": log|S^3|/log|S| - 1 or None, "size3": |S^3|}``."""
    _nonempty(S)
    if S.size < 2:
        raise InputError("tripling needs |S| >= 2")
    s3 = power(G, S, 3)
    if s3.is_full():
        return {"tripled": True, "eta": None, "size3": s3.size}
    return {"tripled": False, "eta": log(s3.size) / log(S.size) - 1, "size3": s3.size}


def eta_pair(delta: float, epsilon: float) -> float:
    """The pair-lemma constant min((1 - delta)/(26 delta), epsilon)."""
    return min((1 - delta) / (26 * delta), epsilon)


def check_twosets_trichotomy(G: GroupTable, A: Subset, B: Subset, epsilon: float, delta: float,
                             eta: float | None = None, *, threads: int = 1) -> dict:
    """Which options of the two pair lemmas hold for (A, B).

    The first lemma is tested at ``epsilon``, the second at ``eta``
    (default: ``eta_pair(delta, epsilon)``). ``eps_star``/``eta_star`` are
    the largest constants for which each disjunction still holds (None when
    an option independent of the constant holds).
    """
    _nonempty(A, B)
    if not 2 <= B.size <= A.size:
        raise InputError(f"need 2 <= |B| <= |A|, got |A|={A.size}, |B|={B.size}")
    eta = eta_pair(delta, epsilon) if eta is None else eta
    n, a, b = G.order, A.size, B.size
    gr, right = scan_conjugators(G, A, B, "right", threads=threads)
    gl, left = scan_conjugators(G, B, A, "left", threads=threads)
    lb = log(b)
    lem1 = {
        "A_large": log(a) >= (1 + epsilon) * lb,
        "right_growth": log(right) >= log(a) + epsilon * lb,
        "A_vs_G": log(a) >= log(n) / 26 + 25 * lb / 26,
        "right_vs_G": log(right) >= log(n) / 25 + 24 * log(a) / 25,
    }
    lem2 = {
        "A_large": log(a) >= (1 + eta) * lb,
        "both_sides_growth": min(log(right), log(left)) >= log(a) + eta * lb,
        "B_large": lb >= delta * log(n),
    }
    base = max(log(a) / lb - 1, log(right / a) / lb)
    eps_star = None if (lem1["A_vs_G"] or lem1["right_vs_G"]) else base
    eta_star = None if lem2["B_large"] else max(log(a) / lb - 1, log(min(right, left) / a) / lb)
    return {
        "sizes": [a, b],
        "epsilon": epsilon,
        "delta": delta,
        "eta_pair": eta,
        "right": {"g": gr, "size": right},
        "left": {"h": gl, "size": left},
        "lemma_two_sets": lem1,
        "lemma_two_sets_2": lem2,
        "holds_1": any(lem1.values()),
        "holds_2": any(lem2.values()),
        "eps_star": eps_star,
        "eta_star": eta_star,
    }


# -- suites ---------------------------------------------------------------------------------


def _log_uniform(rng: SplitMix64, lo: int, hi: int) -> int:
    if hi <= lo:
        return lo
    return min(hi, max(lo, int(round(exp(log(lo) + rng.random() * (log(hi) - log(lo)))))))


def _random_set(G: GroupTable, rng: SplitMix64, lo: int = 1, hi: int | None = None) -> Subset:
    size = _log_uniform(rng, lo, G.order if hi is None else hi)
    return random_subset(G.order, size, rng.next())


def _ids(S: Subset) -> list[int]:
    return [int(i) for i in S.ids]


def _run_trials(suite: str, G: GroupTable, trials: int, seed: int, threads: int | None, fn) -> TrialReport:
    threads = resolve_threads(threads)
    results = ordered_map(lambda t: fn(SplitMix64(derive_seed(seed, t)), t), list(range(trials)), threads)
    report = TrialReport(suite, G.meta.name, seed, trials)
    for t, (row, violation) in enumerate(results):
        row = {"trial": t, **row}
        report.rows.append(row)
        if violation is not None:
            report.violations.append({"trial": t, **violation})
    return report


def suite_triple(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    def one(rng: SplitMix64, t: int):
        A, B = _random_set(G, rng), _random_set(G, rng)
        lhs, rhs = triple_sides(G, A, B)
        bad = None if lhs >= rhs else {"A": _ids(A), "B": _ids(B), "lhs": lhs, "rhs": rhs}
        return {"a": A.size, "b": B.size, "lhs": lhs, "rhs": rhs}, bad

    report = _run_trials("triple", G, trials, seed, threads, one)
    ratios = [Fraction(r["lhs"], r["rhs"]) for r in report.rows]
    report.summary = {"min_ratio": _frac(min(ratios)) if ratios else None,
                      "equality_cases": sum(r == 1 for r in ratios)}
    return report


def suite_classsum(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    spectrum = spectrum_of(G)

    def one(rng: SplitMix64, t: int):
        A, B = _random_set(G, rng), _random_set(G, rng)
        lhs, rhs, orbit = class_sum_sides(G, A, B, spectrum)
        bad = None if lhs == rhs else {"A": _ids(A), "B": _ids(B), "lhs": _frac(lhs), "rhs": _frac(rhs)}
        return {"a": A.size, "b": B.size, "value": _frac(lhs), "conjugates": orbit}, bad

    report = _run_trials("classsum", G, trials, seed, threads, one)
    report.summary = {"exact": True, "max_conjugates": max((r["conjugates"] for r in report.rows), default=0)}
    return report


def suite_petridis(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None,
                   powers: tuple[int, ...] = (2, 3)) -> TrialReport:
    def one(rng: SplitMix64, t: int):
        A, B = _random_set(G, rng), _random_set(G, rng, lo=2)
        row: dict = {"a": A.size, "b": B.size}
        bad = None
        for h in powers:
            w = petridis_witness(G, A, B, h)
            lhs = power(G, Subset.from_ids(G.order, w.b0), h).size
            rhs = w.bound(A.size)
            row[f"h{h}_lhs"] = lhs
            row[f"h{h}_log_slack"] = log(rhs) - log(lhs)
            if lhs > rhs and bad is None:
                bad = {"A": _ids(A), "B": _ids(B), "h": h, "lhs": lhs, "rhs": _frac(rhs), **w.to_dict()}
        row["generating_translate"] = w.translate is not None
        return row, bad

    report = _run_trials("petridis", G, trials, seed, threads, one)
    report.summary = {
        "exponents": {h: list(petridis_exponents(h)) for h in powers},
        "min_log_slack": {h: min((r[f"h{h}_log_slack"] for r in report.rows), default=None) for h in powers},
        "non_generating_b0": sum(not r["generating_translate"] for r in report.rows),
    }
    return report


def _simple_gate(suite: str, G: GroupTable, seed: int) -> TrialReport | None:
    if spectrum_of(G).simple:
        return None
    return TrialReport(suite, G.meta.name, seed, 0, skipped="skipped: not simple")


def suite_gen32(G: GroupTable, trials: int = 0, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    """Exhaustive: every nontrivial g has a partner h generating G with it."""
    skip = _simple_gate("gen32", G, seed)
    if skip:
        return skip
    wit = three_halves_witnesses(G)
    report = TrialReport("gen32", G.meta.name, seed, len(wit))
    report.rows = [{"g": g, "h": h} for g, h in wit.items()]
    report.violations = [{"g": g} for g, h in wit.items() if h is None]
    report.summary = {"checked": len(wit), "max_partner": max((h for h in wit.values() if h is not None), default=None)}
    return report


def suite_translate(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    skip = _simple_gate("translate", G, seed)
    if skip:
        return skip

    def one(rng: SplitMix64, t: int):
        S = _random_set(G, rng, lo=2)
        try:
            x = find_generating_translate(G, S)
        except PreconditionError:
            return {"size": S.size, "x": None}, {"S": _ids(S)}
        return {"size": S.size, "x": x}, None

    report = _run_trials("translate", G, trials, seed, threads, one)
    report.summary = {"identity_translate": sum(r["x"] == 0 for r in report.rows)}
    return report


def suite_tripling(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    """Empirical tripling exponent over generating translates of random sets."""
    skip = _simple_gate("tripling", G, seed)
    if skip:
        return skip

    def one(rng: SplitMix64, t: int):
        S = _random_set(G, rng, lo=2)
        S = translate(G, S, find_generating_translate(G, S))
        m = measure_tripling(G, S)
        bad = None
        if not m["tripled"] and m["eta"] <= 0:
            bad = {"S": _ids(S), "size3": m["size3"]}
        return {"size": S.size, **m}, bad

    report = _run_trials("tripling", G, trials, seed, threads, one)
    etas = [r["eta"] for r in report.rows if not r["tripled"]]
    report.summary = {"eta_pt_emp": min(etas) if etas else None,
                      "tripled": sum(r["tripled"] for r in report.rows),
                      "measured": len(etas)}
    return report


def suite_trichotomy(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None,
                     epsilon: float = 0.01, delta: float = 23 / 24) -> TrialReport:
    skip = _simple_gate("trichotomy", G, seed)
    if skip:
        return skip

    def one(rng: SplitMix64, t: int):
        X, Y = _random_set(G, rng, lo=2), _random_set(G, rng, lo=2)
        A, B = (X, Y) if X.size >= Y.size else (Y, X)
        r = check_twosets_trichotomy(G, A, B, epsilon, delta)
        bad = None
        if not (r["holds_1"] and r["holds_2"]):
            bad = {"A": _ids(A), "B": _ids(B), **r}
        row = {"a": A.size, "b": B.size, "right": r["right"]["size"], "left": r["left"]["size"],
               "eps_star": r["eps_star"], "eta_star": r["eta_star"]}
        return row, bad

    report = _run_trials("trichotomy", G, trials, seed, threads, one)
    eps = [r["eps_star"] for r in report.rows if r["eps_star"] is not None]
    etas = [r["eta_star"] for r in report.rows if r["eta_star"] is not None]
    report.summary = {"epsilon": epsilon, "delta": delta, "eta_pair": eta_pair(delta, epsilon),
                      "min_eps_star": min(eps) if eps else None, "min_eta_star": min(etas) if etas else None}
    return report


def suite_gowers(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    """Triples sampled inside the mindeg criterion must multiply to G."""
    info = mindeg_of(G)
    n, k = G.order, info.value
    lo = max(1, ceil(n / k))

    def one(rng: SplitMix64, t: int):
        a, b = rng.randint(lo, n), rng.randint(lo, n)
        c = rng.randint(min(n, max(1, -(-n**3 // (k * a * b)))), n)
        A, B, C = (random_subset(n, s, rng.next()) for s in (a, b, c))
        r = gowers_cover(G, A, B, C, info)
        bad = None
        if r["criterion"] and not r["verified"]:
            bad = {"A": _ids(A), "B": _ids(B), "C": _ids(C), **r}
        return {"a": a, "b": b, "c": c, **r}, bad

    report = _run_trials("gowers", G, trials, seed, threads, one)
    report.summary = {"mindeg": info.to_dict(),
                      "in_criterion": sum(bool(r["criterion"]) for r in report.rows),
                      "verified": sum(bool(r["verified"]) for r in report.rows)}
    if info.kind != "exact":
        report.summary["note"] = "mindeg is a lower bound; criterion evaluated with the bound"
    return report


def suite_bounds(G: GroupTable, trials: int = 0, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    try:
        checks = [check_rank_bounds(G), check_landseitz(G)]
    except MetadataError as exc:
        return TrialReport("bounds", G.meta.name, seed, 0, skipped=f"skipped: {exc}")
    except PreconditionError as exc:
        return TrialReport("bounds", G.meta.name, seed, 0, skipped=f"skipped: {exc}")
    report = TrialReport("bounds", G.meta.name, seed, len(checks))
    report.rows = [{"check": c["check"], "name": i["name"], "holds": i["holds"], "exact": i["exact"]}
                   for c in checks for i in c["inequalities"]]
    report.violations = [c for c in checks if not c["holds"]]
    report.summary = {"checks": checks}
    return report


def suite_small(G: GroupTable, trials: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> TrialReport:
    """Pairs below minclass^(1/4) must admit an exact conjugator."""
    spectrum = spectrum_of(G)
    if not spectrum.simple:
        return TrialReport("small", G.meta.name, seed, 0, skipped="skipped: not simple")
    top = max(s for s in range(1, G.order + 1) if s**4 < spectrum.minclass) if spectrum.minclass > 1 else 0
    if top < 1:
        return TrialReport("small", G.meta.name, seed, 0, skipped="skipped: minclass^(1/4) <= 1")

    def one(rng: SplitMix64, t: int):
        A = random_subset(G.order, rng.randint(1, top), rng.next())
        B = random_subset(G.order, rng.randint(1, top), rng.next())
        try:
            g = small_phase_find_g(G, A, B, spectrum=spectrum)
        except (AssertionError, NoExactConjugator) as exc:
            return {"a": A.size, "b": B.size, "g": None}, {"A": _ids(A), "B": _ids(B), "error": str(exc)}
        return {"a": A.size, "b": B.size, "g": g}, None

    report = _run_trials("small", G, trials, seed, threads, one)
    report.summary = {"minclass": spectrum.minclass, "max_size": top}
    return report


SUITE_FUNCS = {
    "triple": suite_triple,
    "classsum": suite_classsum,
    "petridis": suite_petridis,
    "gen32": suite_gen32,
    "translate": suite_translate,
    "tripling": suite_tripling,
    "trichotomy": suite_trichotomy,
    "gowers": suite_gowers,
    "bounds": suite_bounds,
    "small": suite_small,
}


def run_suite(name: str, G: GroupTable, trials: int, seed: int = DEFAULT_SEED,
              threads: int | None = None) -> TrialReport:
    try:
        fn = SUITE_FUNCS[name]
    except KeyError:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    if trials < 0:
        raise InputError("trials must be >= 0")
    return fn(G, trials, seed, threads)
