"""Products of conjugacy classes and the empirical covering exponent.

A normal subset is a union of classes, so it is stored as a bitmask over
class indices. Class products are normal and commute, which makes the
reachable normal product sets a small state space: the search below walks
it level by level (tuple length) and keeps, for every reachable set, the
heaviest tuple reaching it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log

import numpy as np

from .classes import ClassSpectrum, spectrum_of
from .errors import InputError, ResourceCapError
from .groups import GroupTable
from .subsets import Subset, product_many

MAX_TUPLE_LEN = 32
DEFAULT_MEMO_CAP = 10**5


def normal_product_cover(G: GroupTable, classes: list[Subset]) -> bool:
    """Whether the product of the given class subsets is all of G."""
    if not classes:
        raise InputError("need at least one class")
    return product_many(G, classes).is_full()


def class_product_table(G: GroupTable, spec: ClassSpectrum) -> list[list[int]]:
    """``table[i][j]`` = bitmask of the classes making up ``C_i C_j``.

    ``C_i C_j`` is normal and ``(x c)^g`` ranges over it as x is fixed, so
    the classes met by ``rep_i * C_j`` are all of them.
    """
    r = len(spec.classes)
    table = [[0] * r for _ in range(r)]
    for i, ci in enumerate(spec.classes):
        for j, cj in enumerate(spec.classes):
            met = np.unique(spec.class_of[np.asarray(G.mul(ci.rep, cj.members.ids))])
            table[i][j] = sum(1 << int(c) for c in met)
    return table


@dataclass
class RSReport:
    group: str
    max_len: int
    c_star: float
    witness: list[int]
    per_length: list[dict] = field(default_factory=list)
    states: int = 0
    min_cover_mass: float | None = None
    min_cover_witness: list[int] | None = None

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "max_len": self.max_len,
            "c_star": self.c_star,
            "witness_classes": self.witness,
            "per_length": self.per_length,
            "states": self.states,
            "min_cover_mass": self.min_cover_mass,
            "min_cover_witness": self.min_cover_witness,
            "consistent_with_12": self.c_star <= 12,
        }


def rs_exponent_search(G: GroupTable, max_len: int = 8, *, memo_cap: int = DEFAULT_MEMO_CAP,
                       spectrum: ClassSpectrum | None = None) -> RSReport:
    """Largest normalised mass sum(log|C_i|)/log|G| of a non-covering class
    tuple of length <= ``max_len``.

    Any tuple of length <= max_len with mass strictly above the returned
    ``c_star`` covers G. Witnesses are class indices into the spectrum's
    sorted class list.
    """
    if not 1 <= max_len <= MAX_TUPLE_LEN:
        raise InputError(f"max length must lie in 1..{MAX_TUPLE_LEN}, got {max_len}")
    if G.order < 2:
        raise InputError("trivial group has no nontrivial classes")
    spec = spectrum or spectrum_of(G)
    table = class_product_table(G, spec)
    r = len(spec.classes)
    full = (1 << r) - 1
    logn = log(G.order)
    nontrivial = [j for j, c in enumerate(spec.classes) if c.rep != 0]
    weight = {j: log(spec.classes[j].size) for j in nontrivial}

    def times(state: int, j: int) -> int:
        out = 0
        i = 0
        while state:
            if state & 1:
                out |= table[i][j]
            state >>= 1
            i += 1
        return out

    # level: state -> (mass, witness); ties go to the lexicographically smaller witness
    level: dict[int, tuple[float, tuple[int, ...]]] = {}
    for j in nontrivial:
        _offer(level, 1 << j, weight[j], (j,))
    best = (-1.0, ())
    cover_best: tuple[float, tuple[int, ...]] | None = None
    per_length = []
    seen: set[int] = set()
    for length in range(1, max_len + 1):
        if length > 1:
            nxt: dict[int, tuple[float, tuple[int, ...]]] = {}
            for state, (mass, wit) in level.items():
                if state == full:
                    continue
                for j in nontrivial:
                    _offer(nxt, times(state, j), mass + weight[j], wit + (j,))
            level = nxt
        seen.update(level)
        if len(seen) > memo_cap:
            raise ResourceCapError(f"more than {memo_cap} distinct normal sets reached")
        lvl_best = (-1.0, ())
        for state, (mass, wit) in level.items():
            if state == full:
                if cover_best is None or mass < cover_best[0] or (mass == cover_best[0] and wit < cover_best[1]):
                    cover_best = (mass, wit)
            elif mass > lvl_best[0] or (mass == lvl_best[0] and wit < lvl_best[1]):
                lvl_best = (mass, wit)
        if lvl_best[0] > best[0] or (lvl_best[0] == best[0] and lvl_best[1] < best[1]):
            best = lvl_best
        per_length.append({
            "length": length,
            "states": len(level),
            "c_star": best[0] / logn if best[0] >= 0 else None,
            "level_max_noncover": lvl_best[0] / logn if lvl_best[0] >= 0 else None,
        })
        if not level:
            break
    return RSReport(
        group=G.meta.name,
        max_len=max_len,
        c_star=best[0] / logn if best[0] >= 0 else 0.0,
        witness=list(best[1]),
        per_length=per_length,
        states=len(seen),
        min_cover_mass=cover_best[0] / logn if cover_best else None,
        min_cover_witness=list(cover_best[1]) if cover_best else None,
    )


def _offer(level: dict, state: int, mass: float, wit: tuple[int, ...]) -> None:
    cur = level.get(state)
    if cur is None or mass > cur[0] or (mass == cur[0] and wit < cur[1]):
        level[state] = (mass, wit)
