"""Covering G by a product of conjugates of given subsets.

The pipeline works in four passes over an ordered list of blocks, each
block being a run of consecutive input sets already multiplied together
under their current conjugators:

1. small   - adjacent sets both below |G|^zeta are merged with a conjugator
             making the product exact (|A B^g| = |A| |B|);
2. pairing - parity-dependent pairing so every block reaches |G|^zeta;
3. growth  - rounds of pairwise merges, larger set absorbing the smaller
             under the conjugator maximising the product, until every block
             reaches |G|^delta;
4. gowers  - the last three blocks are multiplied and checked against G,
             with the mindeg criterion recorded.

Conjugating a block by x multiplies every constituent's conjugator by x on
the right, so the input order is never disturbed and the final list
replays directly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log

import numpy as np

from .classes import ClassSpectrum, MindegInfo, mindeg_of, spectrum_of
from .errors import CoverError, EmptySubsetError, GpcoverError, InputError, MindegUnavailable, ResourceCapError
from .groups import GroupTable
from .search import candidate_ids, distinct_conjugators, scan_conjugators
from .subsets import Subset, conjugate_subset, product

PHASES = ("small", "growth", "gowers", "passthrough")


class NoExactConjugator(GpcoverError):
    """No g gives ``|A B^g| = |A||B|``; ``g`` and ``size`` hold the best found."""

    def __init__(self, g: int, size: int, target: int):
        super().__init__(f"no exact conjugator: best |A*B^g| = {size} < {target} at g={g}")
        self.g = g
        self.size = size
        self.target = target


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**6)


def at_least_power(size: int, n: int, exponent: Fraction) -> bool:
    """``size >= n**exponent`` in exact integers."""
    e = _as_fraction(exponent)
    return size ** e.denominator >= n ** e.numerator if e >= 0 else True


@dataclass
class PipelineConfig:
    """Proof constants plus search limits.

    ``zeta``, ``delta`` and ``c_work`` are exact fractions; ``eta`` and
    ``epsilon`` are empirical floats. ``c0`` defaults to the medium-set
    constant 3^(I+1) and is reported, not enforced; the pipeline gates on
    ``c_work`` instead.
    """

    rank: int = 1
    zeta: Fraction | None = None
    delta: Fraction | None = None
    eta: float = 0.05
    epsilon: float | None = None
    c0: float | None = None
    c_work: Fraction | None = None
    max_candidates: int = 4096
    time_budget_s: float | None = None
    require_simple: bool = True
    seed: int = 0
    safety_rounds: int = 4

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InputError(f"rank must be a positive integer, got {self.rank!r}")
        r = self.rank
        self.zeta = Fraction(1, 32 * r) if self.zeta is None else _as_fraction(self.zeta)
        self.delta = 1 - Fraction(1, 24 * r * r) if self.delta is None else _as_fraction(self.delta)
        if not 0 < self.zeta < self.delta < 1:
            raise InputError(f"need 0 < zeta < delta < 1, got zeta={self.zeta}, delta={self.delta}")
        if not self.eta > 0:
            raise InputError("eta must be positive")
        if self.epsilon is None:
            self.epsilon = self.eta / 25
        if self.c0 is None:
            self.c0 = 3.0 ** (self.iteration_bound + 1)
        self.c_work = 3 + self.zeta if self.c_work is None else _as_fraction(self.c_work)
        if self.max_candidates is not None and self.max_candidates < 1:
            raise InputError("max_candidates must be positive")

    @property
    def iteration_bound(self) -> float:
        """Rounds after which zeta (1+eta)^i >= delta."""
        return max(0.0, (log(self.delta) - log(self.zeta)) / log(1 + self.eta))

    @property
    def c_total(self) -> float:
        return 2 * self.c0 + float(self.zeta)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "zeta": str(self.zeta),
            "delta": str(self.delta),
            "eta": self.eta,
            "epsilon": self.epsilon,
            "c0": self.c0,
            "c_work": str(self.c_work),
            "c_total": self.c_total,
            "iteration_bound": self.iteration_bound,
            "max_candidates": self.max_candidates,
            "time_budget_s": self.time_budget_s,
            "require_simple": self.require_simple,
            "seed": self.seed,
            "safety_rounds": self.safety_rounds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {"rank", "zeta", "delta", "eta", "epsilon", "c0", "c_work", "max_candidates",
                 "time_budget_s", "require_simple", "seed", "safety_rounds"}
        unknown = set(d) - known - {"c_total", "iteration_bound"}
        if unknown:
            raise InputError(f"unknown pipeline config keys: {sorted(unknown)}")
        kw = {k: v for k, v in d.items() if k in known}
        for k in ("zeta", "delta", "c_work"):
            if isinstance(kw.get(k), str):
                try:
                    kw[k] = Fraction(kw[k])
                except ValueError:
                    raise InputError(f"{k} must be a fraction, got {kw[k]!r}") from None
        return cls(**kw)


@dataclass
class TraceStep:
    phase: str
    range: tuple[int, int]
    size: int
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"phase": self.phase, "range": list(self.range), "size": self.size, **self.info}

    @classmethod
    def from_dict(cls, d: dict) -> "TraceStep":
        rest = {k: v for k, v in d.items() if k not in ("phase", "range", "size")}
        return cls(d["phase"], tuple(d["range"]), int(d["size"]), rest)


@dataclass
class CoverCertificate:
    conjugators: list[int]
    trace: list[TraceStep]
    covered: bool
    final_size: int
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "conjugators": list(self.conjugators),
            "trace": [t.to_dict() for t in self.trace],
            "covered": self.covered,
            "final_size": self.final_size,
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoverCertificate":
        try:
            return cls(
                conjugators=[int(g) for g in d["conjugators"]],
                trace=[TraceStep.from_dict(t) for t in d.get("trace", [])],
                covered=bool(d.get("covered", True)),
                final_size=int(d.get("final_size", 0)),
                summary=d.get("summary", {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from None


# -- single-merge primitives ---------------------------------------------------------------


def _nonempty(*sets: Subset) -> None:
    for s in sets:
        if s.size == 0:
            raise EmptySubsetError("operation requires nonempty subsets")


def small_phase_find_g(G: GroupTable, A: Subset, B: Subset, *, threads: int = 1,
                       spectrum: ClassSpectrum | None = None) -> int:
    """Smallest g with ``|A * B^g| = |A| |B|``.

    Raises ``NoExactConjugator`` when none exists. If G is simple and both
    sets are smaller than minclass(G)^(1/4) a solution is guaranteed, and a
    miss raises ``AssertionError``.
    """
    _nonempty(A, B)
    target = A.size * B.size
    g, size = scan_conjugators(G, A, B, "right", threshold=target, threads=threads)
    if size >= target:
        return g
    spectrum = spectrum or spectrum_of(G)
    if spectrum.simple and A.size**4 < spectrum.minclass and B.size**4 < spectrum.minclass:
        raise AssertionError(f"exact conjugator guaranteed but not found (|A|={A.size}, |B|={B.size})")
    raise NoExactConjugator(g, size, target)


def best_conjugator(G: GroupTable, A: Subset, B: Subset, threshold: float | None = None,
                    side: str = "right", *, max_candidates: int | None = None, seed: int = 0,
                    threads: int = 1) -> tuple[int, int]:
    """Conjugator maximising ``|A * B^g|`` (right) or ``|A^g * B|`` (left).

    Stops at the first candidate reaching ``threshold``. Candidates are all
    of G in id order, or a seeded sample when |G| exceeds ``max_candidates``.
    """
    _nonempty(A, B)
    if side not in ("left", "right"):
        raise InputError(f"side must be 'left' or 'right', got {side!r}")
    cands = candidate_ids(G.order, max_candidates, seed)
    return scan_conjugators(G, A, B, side, threshold=threshold, candidates=cands, threads=threads)


def gowers_cover(G: GroupTable, A: Subset, B: Subset, C: Subset, k: MindegInfo | int) -> dict:
    """Evaluate ``|A||B||C| k >= |G|^3``; when it holds, check ABC = G directly.

    Returns ``{"criterion": bool, "verified": bool | None, "size": |ABC| or None}``.
    A verified-false result under the criterion with an exact k is a bug.
    """
    _nonempty(A, B, C)
    kval = k.value if isinstance(k, MindegInfo) else int(k)
    n = G.order
    crit = A.size * B.size * C.size * kval >= n**3
    out = {"criterion": crit, "verified": None, "size": None, "k": kval}
    if crit:
        abc = product(G, product(G, A, B), C)
        out["verified"] = abc.is_full()
        out["size"] = abc.size
    return out


# -- pipeline ------------------------------------------------------------------------------


@dataclass
class _Block:
    lo: int
    hi: int
    subset: Subset


class _Run:
    def __init__(self, G: GroupTable, sets: list[Subset], cfg: PipelineConfig, threads: int):
        self.G = G
        self.sets = sets
        self.cfg = cfg
        self.threads = threads
        self.g = [0] * len(sets)
        self.trace: list[TraceStep] = []
        self.start = time.monotonic()
        self.n = G.order

    def tick(self) -> None:
        budget = self.cfg.time_budget_s
        if budget is not None and time.monotonic() - self.start > budget:
            raise ResourceCapError(f"time budget of {budget}s exceeded")

    def conjugate(self, b: _Block, x: int) -> _Block:
        if x == 0:
            return b
        for i in range(b.lo, b.hi + 1):
            self.g[i] = int(self.G.mul(self.g[i], x))
        return _Block(b.lo, b.hi, conjugate_subset(self.G, b.subset, x))

    def best(self, L: _Block, R: _Block, threshold: float | None, side: str) -> tuple[int, int]:
        return best_conjugator(self.G, L.subset, R.subset, threshold, side,
                               max_candidates=self.cfg.max_candidates, seed=self.cfg.seed,
                               threads=self.threads)

    def merge(self, L: _Block, R: _Block, x: int, side: str, phase: str, **info) -> _Block:
        if side == "right":
            R = self.conjugate(R, x)
        else:
            L = self.conjugate(L, x)
        merged = _Block(L.lo, R.hi, product(self.G, L.subset, R.subset))
        self.trace.append(TraceStep(phase, (L.lo, R.hi), merged.subset.size,
                                    {"conjugator": int(x), "side": side, **info}))
        self.tick()
        return merged

    def merge_best(self, L: _Block, R: _Block, phase: str, threshold: float | None = None,
                   side: str = "right", **info) -> _Block:
        if threshold is None:
            threshold = min(self.n, L.subset.size * R.subset.size)
        x, _ = self.best(L, R, threshold, side)
        return self.merge(L, R, x, side, phase, threshold=float(threshold), **info)

    # zeta / delta comparisons in exact arithmetic
    def big(self, b: _Block, exponent: Fraction) -> bool:
        return at_least_power(b.subset.size, self.n, exponent)


def _mass_ok(sizes: list[int], n: int, c: Fraction) -> bool:
    prod = 1
    for s in sizes:
        prod *= s
    return at_least_power(prod, n, c)


def pipeline(G: GroupTable, sets: list[Subset], config: PipelineConfig | None = None, *,
             threads: int = 1) -> CoverCertificate:
    """Find conjugators g_1..g_k with ``S_1^{g_1} ... S_k^{g_k} = G``.

    Raises ``CoverError`` tagged with the failing phase; the certificate
    returned on success always replays (see ``verify_certificate``).
    """
    cfg = config or PipelineConfig()
    sets = list(sets)
    if not sets:
        raise InputError("pipeline needs at least one set")
    n = G.order
    for i, s in enumerate(sets):
        if s.n != n:
            raise InputError(f"set {i} belongs to a group of order {s.n}, not {n}")
        if s.size == 0:
            raise EmptySubsetError(f"set {i} is empty")
        if s.size < 2 and n > 1:
            raise InputError(f"set {i} has fewer than two elements")
    k = len(sets)
    sizes = [s.size for s in sets]
    log_mass = sum(log(s) for s in sizes)
    summary = {
        "k": k,
        "mass_exponent": log_mass / log(n) if n > 1 else 0.0,
        "c_work": str(cfg.c_work),
        "c_total": cfg.c_total,
        "regime": None,
    }
    if cfg.require_simple and not spectrum_of(G).simple:
        raise CoverError("simple", f"{G.meta.name} is not simple")
    if n > 1 and not _mass_ok(sizes, n, cfg.c_work):
        # below the working threshold only an already-covering plain product is accepted
        plain = sets[0]
        for s in sets[1:]:
            plain = product(G, plain, s)
        if plain.is_full():
            summary["regime"] = "trivial"
            trace = [TraceStep("passthrough", (0, k - 1), n, {"conjugator": 0, "step": "plain"})]
            return CoverCertificate([0] * k, trace, True, n, summary)
        raise CoverError("mass", f"insufficient mass: prod |S_i| = |G|^{summary['mass_exponent']:.4f} "
                                 f"< |G|^{float(cfg.c_work):.4f}")
    summary["regime"] = "proven" if summary["mass_exponent"] >= cfg.c_total else "working"

    run = _Run(G, sets, cfg, threads)
    blocks = [_Block(i, i, s) for i, s in enumerate(sets)]
    growth_log: list[dict] = []

    # 1. small sets: merge adjacent pairs below |G|^zeta exactly
    changed = True
    while changed and len(blocks) > 1:
        changed = False
        for i in range(len(blocks) - 1):
            L, R = blocks[i], blocks[i + 1]
            if not run.big(L, cfg.zeta) and not run.big(R, cfg.zeta):
                exact = True
                try:
                    x = small_phase_find_g(G, L.subset, R.subset, threads=threads)
                except NoExactConjugator as exc:
                    x, exact = exc.g, False
                blocks[i:i + 2] = [run.merge(L, R, x, "right", "small", exact=exact)]
                changed = True
                break

    # 2. parity pairing so that every block reaches |G|^zeta
    t = len(blocks)
    if t > 1:
        paired: list[_Block] = []
        if t % 2 == 0:
            stop, tail = t, []
        elif run.big(blocks[-1], cfg.zeta):
            stop, tail = t - 1, [blocks[-1]]
        else:
            stop, tail = t - 3, []
        for i in range(0, stop, 2):
            paired.append(run.merge_best(blocks[i], blocks[i + 1], "passthrough", step="pair"))
        if t % 2 == 1 and not tail:
            m = run.merge_best(blocks[t - 3], blocks[t - 2], "passthrough", step="triple")
            paired.append(run.merge_best(m, blocks[t - 1], "passthrough", step="triple"))
        blocks = paired + tail

    # 3. growth rounds
    rounds = 0
    limit = ceil(cfg.iteration_bound) + cfg.safety_rounds
    while len(blocks) > 3 and not all(run.big(b, cfg.delta) for b in blocks) and rounds <= limit:
        rounds += 1
        before = min(b.subset.size for b in blocks)
        if len(blocks) >= 6:
            nxt = []
            for i in range(0, len(blocks) - 1, 2):
                nxt.append(_grow_pair(run, blocks[i], blocks[i + 1], rounds))
            if len(blocks) % 2:
                nxt[-1] = run.merge_best(nxt[-1], blocks[-1], "growth", round=rounds, step="leftover")
            blocks = nxt
        else:
            while len(blocks) > 3:
                i = int(np.argmin([b.subset.size for b in blocks]))
                if i == 0 or (i < len(blocks) - 1 and blocks[i + 1].subset.size <= blocks[i - 1].subset.size):
                    j = i
                else:
                    j = i - 1
                blocks[j:j + 2] = [_grow_pair(run, blocks[j], blocks[j + 1], rounds)]
        growth_log.append({"round": rounds, "min_before": before, "min_after": min(b.subset.size for b in blocks),
                    "blocks": len(blocks)})
    reached_delta = all(run.big(b, cfg.delta) for b in blocks)
    summary["growth_rounds"] = rounds
    summary["reached_delta"] = reached_delta

    # 4. finish: three blocks (or fewer) multiplied and checked
    while len(blocks) > 3:
        i = int(np.argmin([blocks[j].subset.size + blocks[j + 1].subset.size for j in range(len(blocks) - 1)]))
        blocks[i:i + 2] = [run.merge_best(blocks[i], blocks[i + 1], "passthrough", step="assemble")]
    covered = _finish(run, blocks, summary)
    if not covered:
        sizes_now = [b.subset.size for b in blocks]
        if not reached_delta:
            raise CoverError("growth", f"growth stalled below |G|^delta: block sizes {sizes_now}", growth_log)
        raise CoverError("gowers", f"final product does not cover G: block sizes {sizes_now}", growth_log)
    summary["growth_log"] = growth_log
    return CoverCertificate(run.g, run.trace, True, n, summary)


def _grow_pair(run: _Run, L: _Block, R: _Block, rnd: int) -> _Block:
    a, b = L.subset.size, R.subset.size
    big, small = max(a, b), min(a, b)
    target = min(run.n, big * small**run.cfg.eta)
    side = "right" if a >= b else "left"
    x, size = run.best(L, R, target, side)
    return run.merge(L, R, x, side, "growth", round=rnd, threshold=float(target), met=bool(size >= target))


def _finish(run: _Run, blocks: list[_Block], summary: dict) -> bool:
    G, n = run.G, run.n
    lo, hi = blocks[0].lo, blocks[-1].hi
    if len(blocks) == 3:
        try:
            k = mindeg_of(G)
            crit = gowers_cover(G, *(b.subset for b in blocks), k)
        except MindegUnavailable:
            crit = {"criterion": None, "verified": None, "k": None}
        summary["gowers"] = {"criterion": crit["criterion"], "k": crit["k"]}
        direct = product(G, product(G, blocks[0].subset, blocks[1].subset), blocks[2].subset)
        if direct.is_full():
            run.trace.append(TraceStep("gowers", (lo, hi), n, {"criterion": crit["criterion"], "fallback": False}))
            return True
        if crit["criterion"] and crit["k"] is not None and mindeg_of(G).kind == "exact":
            raise AssertionError("mindeg criterion held with exact k but ABC != G")
    # direct fold with best conjugators
    acc = blocks[0]
    for b in blocks[1:]:
        x, _ = run.best(acc, b, n, "right")
        b = run.conjugate(b, x)
        acc = _Block(acc.lo, b.hi, product(G, acc.subset, b.subset))
        run.tick()
    if acc.subset.is_full():
        run.trace.append(TraceStep("gowers", (lo, hi), n, {"criterion": summary.get("gowers", {}).get("criterion"),
                                                           "fallback": True}))
        return True
    return False


# -- certificate replay ----------------------------------------------------------------------


@dataclass
class Replay:
    ok: bool
    divergence: str | None = None
    final_size: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(G: GroupTable, sets: list[Subset], cert: CoverCertificate) -> Replay:
    """Recompute ``S_1^{g_1} ... S_k^{g_k}`` and every traced block size."""
    sets = list(sets)
    if not sets:
        raise InputError("verify_certificate needs at least one set")
    if len(cert.conjugators) != len(sets):
        return Replay(False, f"{len(cert.conjugators)} conjugators for {len(sets)} sets")
    if any(not 0 <= g < G.order for g in cert.conjugators):
        return Replay(False, "conjugator id out of range")
    conj = [conjugate_subset(G, s, g) for s, g in zip(sets, cert.conjugators)]
    cache: dict[tuple[int, int], Subset] = {}

    def block(i: int, j: int) -> Subset:
        if (i, j) not in cache:
            cache[(i, j)] = conj[i] if i == j else product(G, block(i, j - 1), conj[j])
        return cache[(i, j)]

    for step_no, step in enumerate(cert.trace):
        i, j = step.range
        if not 0 <= i <= j < len(sets):
            return Replay(False, f"trace step {step_no}: range {step.range} out of bounds")
        got = block(i, j).size
        if got != step.size:
            return Replay(False, f"trace step {step_no} ({step.phase} {list(step.range)}): "
                                 f"recorded size {step.size}, replayed {got}")
    final = block(0, len(sets) - 1)
    if not final.is_full():
        return Replay(False, f"final product has {final.size} of {G.order} elements", final.size)
    return Replay(True, None, final.size)


# -- ground truth ------------------------------------------------------------------------------


def exhaustive_oracle(G: GroupTable, sets: list[Subset], cap: int = 10**8) -> list[int] | None:
    """Lexicographically first conjugator tuple covering G, or None.

    Depth-first over distinct conjugate masks per set (smallest g for each),
    with g_1 = e fixed (a simultaneous conjugation preserves any cover),
    pruning by the counting bound and memoising failed partial products.
    ``cap`` bounds the number of partial products evaluated.
    """
    sets = list(sets)
    if not sets:
        raise InputError("exhaustive_oracle needs at least one set")
    _nonempty(*sets)
    n = G.order
    options = [np.array([0])]
    for s in sets[1:]:
        options.append(distinct_conjugators(G, s, np.arange(n)))
    conj = [{int(g): conjugate_subset(G, s, int(g)) for g in opts} for s, opts in zip(sets, options)]
    tail = [1] * (len(sets) + 1)
    for i in range(len(sets) - 1, -1, -1):
        tail[i] = tail[i + 1] * sets[i].size
    failed: set = set()
    chosen: list[int] = []
    visited = 0

    def dfs(i: int, P: Subset | None) -> bool:
        nonlocal visited
        if P is not None and P.is_full():
            chosen.extend([0] * (len(sets) - i))
            return True
        if i == len(sets):
            return False
        if P is not None and P.size * tail[i] < n:
            return False
        key = (i, P.key if P is not None else b"")
        if key in failed:
            return False
        for g in options[i]:
            g = int(g)
            visited += 1
            if visited > cap:
                raise ResourceCapError(f"exhaustive search exceeded {cap} partial products")
            nxt = conj[i][g] if P is None else product(G, P, conj[i][g])
            chosen.append(g)
            if dfs(i + 1, nxt):
                return True
            chosen.pop()
        failed.add(key)
        return False

    return list(chosen) if dfs(0, None) else None
