"""Subsets of an enumerated group as boolean masks, and the set algebra on them.

A ``Subset`` is an immutable mask over element ids with its cardinality and
sorted id list cached. Operations take the group first and return fresh
subsets; empty inputs are rejected at the operation, not at construction,
so specs and files can still round-trip empty sets.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySubsetError, InputError, PreconditionError
from .groups import GroupTable
from .rng import SplitMix64

SCATTER_CHUNK = 1 << 21


class Subset:
    __slots__ = ("mask", "ids", "size", "_key")

    def __init__(self, mask: np.ndarray):
        mask = np.array(mask, dtype=bool, copy=True).ravel()
        mask.flags.writeable = False
        ids = np.flatnonzero(mask)
        ids.flags.writeable = False
        self.mask = mask
        self.ids = ids
        self.size = len(ids)
        self._key = None

    @classmethod
    def from_ids(cls, n: int, ids) -> "Subset":
        ids = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64).ravel()
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise InputError(f"element ids must lie in 0..{n - 1}")
        mask = np.zeros(n, dtype=bool)
        mask[ids] = True
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls(np.ones(n, dtype=bool))

    @property
    def n(self) -> int:
        return len(self.mask)

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    def is_full(self) -> bool:
        return self.size == len(self.mask)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x) -> bool:
        return 0 <= x < len(self.mask) and bool(self.mask[x])

    def __iter__(self):
        return iter(int(i) for i in self.ids)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subset) and self.n == other.n and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.mask | other.mask)

    def __repr__(self) -> str:
        head = ", ".join(str(int(i)) for i in self.ids[:8])
        more = ", ..." if self.size > 8 else ""
        return f"Subset(size={self.size}, ids=[{head}{more}])"


def _require(*sets: Subset) -> None:
    for s in sets:
        if s.size == 0:
            raise EmptySubsetError("operation requires nonempty subsets")


def scatter(n: int, elements: np.ndarray) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(elements).ravel()] = True
    return mask


def product_mask(G: GroupTable, a_ids: np.ndarray, b_ids: np.ndarray) -> np.ndarray:
    """Mask of {a*b}; scatters row blocks of the multiplication table."""
    out = np.zeros(G.order, dtype=bool)
    step = max(1, SCATTER_CHUNK // max(1, len(b_ids)))
    for lo in range(0, len(a_ids), step):
        out[G.mul(a_ids[lo:lo + step, None], b_ids[None, :]).ravel()] = True
    return out


def product(G: GroupTable, A: Subset, B: Subset) -> Subset:
    _require(A, B)
    if A.is_full() or B.is_full():
        return Subset.full(G.order)
    return Subset(product_mask(G, A.ids, B.ids))


def product_many(G: GroupTable, sets) -> Subset:
    sets = list(sets)
    if not sets:
        raise InputError("product of an empty list of subsets")
    out = sets[0]
    _require(out)
    for s in sets[1:]:
        out = product(G, out, s)
    return out


def conjugate_subset(G: GroupTable, S: Subset, g: int) -> Subset:
    _require(S)
    return Subset(scatter(G.order, G.conj(S.ids, g)))


def translate(G: GroupTable, S: Subset, g: int) -> Subset:
    """Right translate ``S*g``."""
    _require(S)
    return Subset(scatter(G.order, G.mul(S.ids, g)))


def left_translate(G: GroupTable, g: int, S: Subset) -> Subset:
    _require(S)
    return Subset(scatter(G.order, G.mul(g, S.ids)))


def inverse_set(G: GroupTable, S: Subset) -> Subset:
    _require(S)
    return Subset(scatter(G.order, G.inv[S.ids]))


def power(G: GroupTable, S: Subset, h: int) -> Subset:
    """``S^h``: the product of h copies of S."""
    _require(S)
    if h < 1:
        raise InputError("power needs h >= 1")
    out = S
    for _ in range(h - 1):
        out = product(G, out, S)
    return out


def generated_closure(G: GroupTable, S: Subset) -> Subset:
    """The subgroup generated by S (closure under product; contains e)."""
    _require(S)
    return Subset(G.generated(S.ids))


def generates(G: GroupTable, S: Subset) -> bool:
    return generated_closure(G, S).is_full()


def find_generating_translate(G: GroupTable, S: Subset) -> int:
    """Smallest x such that ``S*x`` generates G.

    Always exists when G is simple and |S| >= 2; otherwise failure is reported
    as a precondition error whose witness is ``(|S|, group name)``.
    """
    _require(S)
    if S.size < 2:
        raise PreconditionError("find_generating_translate needs |S| >= 2", witness=(S.size, G.meta.name))
    for x in range(G.order):
        ids = G.mul(S.ids, x)
        if G.generated(ids).all():
            return x
    raise PreconditionError(
        f"no translate of S generates {G.meta.name}; the group is not simple or |S| < 2",
        witness=(S.size, G.meta.name),
    )


def random_subset(n: int, size: int, seed: int) -> Subset:
    """``size`` ids drawn without replacement from a SplitMix64 stream."""
    if not 0 <= size <= n:
        raise InputError(f"random subset size {size} outside 0..{n}")
    return Subset.from_ids(n, SplitMix64(seed).sample(n, size))


def ball(G: GroupTable, gens, radius: int) -> Subset:
    """Words of length <= radius in ``gens`` (the identity included)."""
    if radius < 0:
        raise InputError("ball radius must be >= 0")
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size and (gens.min() < 0 or gens.max() >= G.order):
        raise InputError("ball generators out of range")
    frontier = np.array([0])
    for _ in range(radius):
        if not gens.size or not frontier.size:
            break
        prods = np.asarray(G.mul(frontier[:, None], gens[None, :])).ravel()
        frontier = np.unique(prods[~mask[prods]])
        mask[frontier] = True
    return Subset(mask)
