"""Deterministic scans over candidate conjugators.

Candidates are visited in increasing id order and split into chunks; a
thread pool evaluates one wave of chunks at a time and the results are
reduced in candidate order, so the answer (best size, ties to the smallest
id; or the first id reaching a threshold) never depends on the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .groups import GroupTable
from .rng import SplitMix64
from .subsets import Subset

WORK_CHUNK = 1 << 20


def resolve_threads(threads: int | None = None) -> int:
    if threads:
        return max(1, int(threads))
    env = os.environ.get("GPCOVER_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def ordered_map(fn, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def candidate_ids(n: int, max_candidates: int | None, seed: int = 0) -> np.ndarray:
    """All of G in id order, or a seeded sorted sample (always holding e)."""
    if not max_candidates or n <= max_candidates:
        return np.arange(n)
    picks = SplitMix64(seed).sample(n - 1, max_candidates - 1)
    return np.array([0] + [p + 1 for p in picks])


def distinct_conjugators(G: GroupTable, S: Subset, gs: np.ndarray, seen: set | None = None) -> np.ndarray:
    """Filter ``gs`` (in order) down to the first g giving each distinct mask S^g."""
    seen = set() if seen is None else seen
    keep = []
    step = max(1, WORK_CHUNK // max(1, G.order))
    for lo in range(0, len(gs), step):
        block = gs[lo:lo + step]
        ids = np.asarray(G.conj(S.ids[None, :], block[:, None]))
        masks = np.zeros((len(block), G.order), dtype=bool)
        np.put_along_axis(masks, ids.astype(np.intp), True, axis=1)
        packed = np.packbits(masks, axis=1)
        for g, row in zip(block, packed):
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                keep.append(int(g))
    return np.array(keep, dtype=np.int64)


def product_sizes(G: GroupTable, L: Subset, R: Subset, gs: np.ndarray, side: str) -> np.ndarray:
    """``|L * R^g|`` (side="right") or ``|L^g * R|`` (side="left") for each g."""
    n = G.order
    out = np.empty(len(gs), dtype=np.int64)
    per = max(1, L.size * R.size)
    step = max(1, WORK_CHUNK // per)
    for lo in range(0, len(gs), step):
        block = np.asarray(gs[lo:lo + step])
        if side == "right":
            conj = np.asarray(G.conj(R.ids[None, :], block[:, None]))
            prods = np.asarray(G.mul(L.ids[None, :, None], conj[:, None, :]))
        else:
            conj = np.asarray(G.conj(L.ids[None, :], block[:, None]))
            prods = np.asarray(G.mul(conj[:, :, None], R.ids[None, None, :]))
        flat = prods.reshape(len(block), -1).astype(np.int64) + (np.arange(len(block)) * n)[:, None]
        hit = np.zeros(len(block) * n, dtype=bool)
        hit[flat.ravel()] = True
        out[lo:lo + len(block)] = hit.reshape(len(block), n).sum(axis=1)
    return out


def scan_conjugators(G: GroupTable, L: Subset, R: Subset, side: str = "right", *,
                     threshold: float | None = None, candidates: np.ndarray | None = None,
                     threads: int = 1, chunk: int = 64) -> tuple[int, int]:
    """Best conjugator for the product ``L * R`` on the given side.

    Returns the first candidate whose product size reaches ``threshold``,
    otherwise the argmax (ties broken by smallest id).
    """
    moving = R if side == "right" else L
    gs = np.arange(G.order) if candidates is None else np.asarray(candidates, dtype=np.int64)
    seen: set = set()
    best_g, best_size = -1, -1
    wave = chunk * max(1, threads)
    for lo in range(0, len(gs), wave):
        reps = distinct_conjugators(G, moving, gs[lo:lo + wave], seen)
        pieces = [reps[i:i + chunk] for i in range(0, len(reps), chunk)]
        sizes = ordered_map(lambda b: product_sizes(G, L, R, b, side), pieces, threads)
        for block, sz in zip(pieces, sizes):
            for g, s in zip(block, sz):
                if s > best_size:
                    best_g, best_size = int(g), int(s)
                if threshold is not None and s >= threshold:
                    return int(g), int(s)
        if best_size == G.order:
            break
    return best_g, best_size
