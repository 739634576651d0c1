"""Fully enumerated finite groups with canonical element indexing.

Every group is held as a faithful permutation representation: one row of
point images per element, rows ordered by breadth-first closure from the
generators (identity = 0; each element multiplied by the generators in
listed order, new products appended as discovered). Products compose left
to right, so ``(i*j)(x) = j(i(x))`` and conjugation ``a^g = g^-1 a g`` is a
right action.

Groups up to ``TABLE_LIMIT`` elements also store the full multiplication
and conjugation tables; larger ones multiply through the representation.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import GroupTooLarge, InputError, ValidationError
from .fields import field as galois_field
from .fields import prime_power
from .rng import SplitMix64

TABLE_LIMIT = 1 << 12
DEFAULT_CAP = 2_000_000
MAX_FAMILY_Q = 64
FAMILIES = ("sym", "alt", "psl2", "sl2", "dihedral", "cyclic")


@dataclass(frozen=True)
class GroupMeta:
    family: str = "custom"
    name: str = "G"
    rank: int | None = None
    q: int | None = None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"family": self.family, "name": self.name, "rank": self.rank, "q": self.q, "params": self.params}


def _int_dtype(bound: int):
    if bound <= 1 << 8:
        return np.uint8
    if bound <= 1 << 16:
        return np.uint16
    return np.int32


class GroupTable:
    """An immutable enumerated group. Element ids are ints in ``range(order)``."""

    def __init__(self, perms: np.ndarray, generators: list[int], meta: GroupMeta | None = None,
                 table: np.ndarray | None = None, table_limit: int = TABLE_LIMIT):
        self.perms = np.ascontiguousarray(perms)
        self.perms.flags.writeable = False
        self.order = self.perms.shape[0]
        self.degree = self.perms.shape[1]
        self.generators = list(generators)
        self.meta = meta or GroupMeta()
        self._build_lookup()
        self.table = None
        self.conj_table = None
        if table is None and self.order <= table_limit:
            table = self._compose_all()
        if table is not None:
            self.table = np.ascontiguousarray(table, dtype=np.int32)
            self.table.flags.writeable = False
        self.inv = self._inverses()
        self.inv.flags.writeable = False
        if self.table is not None:
            g = np.arange(self.order)
            ct = self.table[self.table[self.inv[:, None], g[None, :]], g[:, None]]
            self.conj_table = np.ascontiguousarray(ct)
            self.conj_table.flags.writeable = False

    # -- lookup from representation to index ---------------------------------

    def _build_lookup(self) -> None:
        n, d = self.order, self.degree
        keys = np.zeros(n, dtype=np.int64)
        base: list[int] = []
        radix = max(d, 2)
        distinct = 1
        for pt in range(d):
            if distinct == n or radix ** (len(base) + 1) >= 1 << 62:
                break
            trial = keys * radix + self.perms[:, pt]
            cnt = len(np.unique(trial))
            if cnt > distinct:
                keys, distinct = trial, cnt
                base.append(pt)
        if distinct == n:
            self._base = np.array(base, dtype=np.intp)
            self._radix = radix
            order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[order]
            self._key_order = order
            self._bytes_index = None
        else:
            self._base = None
            self._bytes_index = {row.tobytes(): i for i, row in enumerate(self.perms)}

    def lookup(self, reps: np.ndarray) -> np.ndarray:
        """Indices of permutation rows ``reps`` (shape ``(..., degree)``)."""
        reps = np.asarray(reps)
        shape = reps.shape[:-1]
        flat = reps.reshape(-1, self.degree)
        if self._base is not None:
            keys = np.zeros(len(flat), dtype=np.int64)
            for pt in self._base:
                keys = keys * self._radix + flat[:, pt]
            pos = np.searchsorted(self._sorted_keys, keys)
            pos = np.minimum(pos, self.order - 1)
            idx = self._key_order[pos]
            bad = (self._sorted_keys[pos] != keys) | np.any(self.perms[idx] != flat, axis=1)
            if bad.any():
                raise InputError("permutation is not an element of the group")
        else:
            rows = flat.astype(self.perms.dtype)
            try:
                idx = np.array([self._bytes_index[r.tobytes()] for r in rows], dtype=np.int64)
            except KeyError:
                raise InputError("permutation is not an element of the group") from None
        return idx.reshape(shape)

    def _compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        pa = self.perms[a].astype(np.intp)
        pb = self.perms[b]
        return np.take_along_axis(pb, pa, axis=-1)

    def _compose_all(self) -> np.ndarray:
        n = self.order
        out = np.empty((n, n), dtype=np.int32)
        step = max(1, (1 << 21) // max(1, n * self.degree))
        cols = np.arange(n)
        for lo in range(0, n, step):
            rows = np.arange(lo, min(n, lo + step))
            a, b = np.broadcast_arrays(rows[:, None], cols[None, :])
            out[lo:lo + len(rows)] = self.lookup(self._compose(a, b))
        return out

    def _inverses(self) -> np.ndarray:
        inv_perms = np.empty_like(self.perms)
        rows = np.arange(self.order)[:, None]
        inv_perms[rows, self.perms] = np.arange(self.degree, dtype=self.perms.dtype)[None, :]
        return self.lookup(inv_perms).astype(np.int64)

    # -- arithmetic -----------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.meta.name}, order={self.order})"

    def mul(self, a, b):
        """Broadcasting product ``a*b`` over ids or id arrays."""
        if self.table is not None:
            return self.table[a, b]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return self.lookup(self._compose(a, b))

    def conj(self, a, g):
        """``a^g = g^-1 a g``, broadcasting."""
        if self.conj_table is not None:
            return self.conj_table[g, a]
        return self.mul(self.mul(self.inv[np.asarray(g)], a), g)

    def product_of(self, word) -> int:
        x = 0
        for w in word:
            x = int(self.mul(x, w))
        return x

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = int(self.mul(x, a))
            k += 1
        return k

    def exponent(self) -> int:
        e = 1
        for a in range(self.order):
            o = self.element_order(a)
            e = e * o // gcd(e, o)
        return e

    def cycles(self, a: int) -> list[list[int]]:
        """Element ``a`` in 1-based cycle notation, fixed points omitted."""
        perm = self.perms[a]
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or perm[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = int(perm[start])
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = int(perm[x])
            out.append([p + 1 for p in cyc])
        return out

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        data = self.table if self.table is not None else self.perms
        h.update(np.ascontiguousarray(data).astype(np.int64).tobytes())
        return h.hexdigest()[:16]

    # -- structure --------------------------------------------------------------

    def generated(self, ids) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``ids``."""
        gens = np.unique(np.asarray(ids, dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size and gens.size:
            prods = np.asarray(self.mul(frontier[:, None], gens[None, :])).ravel()
            new = np.unique(prods[~mask[prods]])
            mask[new] = True
            frontier = new
        return mask

    def conjugacy_class_of(self, a: int) -> np.ndarray:
        if self.conj_table is not None:
            return np.unique(self.conj_table[:, a])
        return np.unique(np.asarray(self.conj(a, np.arange(self.order))))


# -- construction --------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """``"(1,2,3)(4 5)"`` -> ``[[1, 2, 3], [4, 5]]``; ``"()"`` is the identity."""
    text = text.strip()
    if not re.fullmatch(r"(\([^()]*\)\s*)*", text):
        raise InputError(f"malformed cycle notation: {text!r}")
    out = []
    for body in _CYCLE_RE.findall(text):
        pts = [p for p in re.split(r"[\s,]+", body.strip()) if p]
        try:
            out.append([int(p) for p in pts])
        except ValueError:
            raise InputError(f"malformed cycle notation: {text!r}") from None
    return [c for c in out if c]


def cycles_to_perm(degree: int, cycles) -> np.ndarray:
    if isinstance(cycles, str):
        cycles = parse_cycles(cycles)
    perm = np.arange(degree, dtype=np.int64)
    used = set()
    for cyc in cycles:
        if not isinstance(cyc, (list, tuple)) or not all(isinstance(p, int) and not isinstance(p, bool) for p in cyc):
            raise InputError(f"malformed cycle: {cyc!r}")
        for p in cyc:
            if not 1 <= p <= degree:
                raise InputError(f"point {p} outside 1..{degree}")
            if p in used:
                raise InputError(f"point {p} repeated in generator {cycles!r}")
            used.add(p)
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            perm[x - 1] = y - 1
    return perm


def _closure(degree: int, gens: list[np.ndarray], cap: int) -> np.ndarray:
    dtype = _int_dtype(degree)
    ident = np.arange(degree, dtype=dtype)
    elems = [ident]
    seen = {ident.tobytes()}
    if not gens:
        return ident[None, :]
    gen_arr = np.stack([np.asarray(g, dtype=dtype) for g in gens])
    frontier = ident[None, :]
    while len(frontier):
        # row (x, s) is x*s, i.e. s applied after x
        prods = np.transpose(gen_arr[:, frontier.astype(np.intp)], (1, 0, 2)).reshape(-1, degree)
        fresh = []
        for row in prods:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        if len(elems) + len(fresh) > cap:
            raise GroupTooLarge(f"group too large: more than {cap} elements")
        elems.extend(fresh)
        frontier = np.array(fresh, dtype=dtype).reshape(-1, degree)
    return np.stack(elems)


def _from_perm_list(degree: int, perms: list[np.ndarray], meta: GroupMeta, cap: int,
                    table_limit: int = TABLE_LIMIT) -> GroupTable:
    elems = _closure(degree, perms, cap)
    g = GroupTable(elems, [], meta, table_limit=table_limit)
    gens = [int(i) for i in g.lookup(np.stack(perms).astype(elems.dtype))] if perms else []
    g.generators = gens
    return g


def build_from_permutations(degree: int, generators, *, cap: int = DEFAULT_CAP,
                            meta: GroupMeta | None = None, table_limit: int = TABLE_LIMIT) -> GroupTable:
    """Close ``generators`` (lists of 1-based cycles, or cycle strings) under product."""
    if not isinstance(degree, int) or degree < 0:
        raise InputError(f"degree must be a non-negative integer, got {degree!r}")
    perms = [cycles_to_perm(degree, g) for g in generators]
    meta = meta or GroupMeta("custom", f"<{len(perms)} gens on {degree} pts>")
    if degree == 0:
        degree, perms = 1, []
    return _from_perm_list(degree, perms, meta, cap, table_limit)


def build_from_cayley_table(table, *, seed: int = 0) -> GroupTable:
    """Validate an index table and wrap it; input indexing is kept as given.

    Associativity is checked exhaustively up to 512 elements, on 10**6
    seeded random triples above that.
    """
    try:
        t = np.asarray(table, dtype=np.int64)
    except (ValueError, TypeError):
        raise ValidationError("table is not a rectangular integer array") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise ValidationError(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise ValidationError(f"entries must lie in 0..{n - 1}")
    ar = np.arange(n)
    for i in range(n):
        if t[0, i] != i or t[i, 0] != i:
            raise ValidationError(f"0 is not a two-sided identity at {i}", witness=(0, i))
    for i in range(n):
        if len(np.unique(t[i])) != n:
            j = int(np.flatnonzero(np.bincount(t[i], minlength=n) == 0)[0])
            raise ValidationError(f"row {i} is not a permutation (misses {j})", witness=(i,))
        if len(np.unique(t[:, i])) != n:
            raise ValidationError(f"column {i} is not a permutation", witness=(i,))
    if n <= 512:
        for i in range(n):
            lhs = t[t[i]]          # (i*j)*k over (j, k)
            rhs = t[i][t]          # i*(j*k)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                j, k = (int(x) for x in bad[0])
                raise ValidationError(f"associativity fails at ({i}, {j}, {k})", witness=(i, j, k))
    else:
        rng = SplitMix64(seed)
        for _ in range(10**6 // 4096):
            tr = np.array([[rng.below(n) for _ in range(3)] for _ in range(4096)])
            i, j, k = tr.T
            bad = np.flatnonzero(t[t[i, j], k] != t[i, t[j, k]])
            if len(bad):
                w = tuple(int(x) for x in tr[bad[0]])
                raise ValidationError(f"associativity fails at {w}", witness=w)
    perms = t.T.copy()  # right regular representation: element i sends x to x*i
    meta = GroupMeta("custom", f"cayley({n})")
    g = GroupTable(perms.astype(_int_dtype(n)), [], meta, table=t)
    gens: list[int] = []
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    for x in ar:
        if not mask[x]:
            gens.append(int(x))
            mask = g.generated(gens)
    g.generators = gens
    return g


def _n_cycle(pts: list[int]) -> list[list[int]]:
    return [pts] if len(pts) > 1 else []


def _sl2_generators(q: int) -> list[tuple[int, int, int, int]]:
    f = galois_field(q)
    one, w = 1, f.primitive
    minus_one = f.neg[one]
    return [
        (one, one, 0, one),                 # upper unitriangular
        (w, 0, 0, f.inv[w]),                # split torus
        (0, minus_one, one, 0),             # Weyl element
    ]


def _sl2_on_vectors(q: int) -> list[np.ndarray]:
    f = galois_field(q)
    perms = []
    for a, b, c, d in _sl2_generators(q):
        perm = np.empty(q * q, dtype=np.int64)
        for x in range(q):
            for y in range(q):
                # row vector (x, y) times [[a, b], [c, d]]
                nx = f.add[f.mul[x][a]][f.mul[y][c]]
                ny = f.add[f.mul[x][b]][f.mul[y][d]]
                perm[x * q + y] = nx * q + ny
        perms.append(perm)
    return perms


def _psl2_on_line(q: int) -> list[np.ndarray]:
    f = galois_field(q)
    inf = q
    perms = []
    for a, b, c, d in _sl2_generators(q):
        perm = np.empty(q + 1, dtype=np.int64)
        for x in range(q + 1):
            # [x : 1] or [1 : 0] times the matrix, renormalised
            nx, ny = (f.add[f.mul[x][a]][c], f.add[f.mul[x][b]][d]) if x != inf else (a, b)
            perm[x] = inf if ny == 0 else f.mul[nx][f.inv[ny]]
        perms.append(perm)
    return perms


def build_family(family: str, *, cap: int = DEFAULT_CAP, max_q: int = MAX_FAMILY_Q,
                 table_limit: int = TABLE_LIMIT, **params) -> GroupTable:
    """Builtin groups: ``sym``/``alt`` (n), ``dihedral`` (n vertices, order 2n),
    ``cyclic`` (n), ``psl2``/``sl2`` (q a prime power)."""
    if family in ("psl2", "sl2"):
        q = params.get("q")
        if not isinstance(q, int) or prime_power(q) is None:
            raise InputError(f"{family} needs q a prime power, got {q!r}")
        if q > max_q:
            raise InputError(f"q={q} exceeds the configured maximum {max_q}")
        if family == "psl2":
            perms = _psl2_on_line(q)
            degree = q + 1
            meta = GroupMeta("psl2", f"PSL(2,{q})", rank=1, q=q, params={"q": q})
        else:
            perms = _sl2_on_vectors(q)
            degree = q * q
            meta = GroupMeta("sl2", f"SL(2,{q})", rank=1, q=q, params={"q": q})
        return _from_perm_list(degree, perms, meta, cap, table_limit)
    if family not in FAMILIES:
        raise InputError(f"unsupported family {family!r}; expected one of {', '.join(FAMILIES)}")
    n = params.get("n")
    if not isinstance(n, int) or n < 1:
        raise InputError(f"{family} needs a positive integer n, got {n!r}")
    pts = list(range(1, n + 1))
    if family == "cyclic":
        gens = [_n_cycle(pts)]
        meta = GroupMeta("cyclic", f"C{n}", params={"n": n})
    elif family == "sym":
        gens = [_n_cycle(pts), _n_cycle(pts[:2])] if n > 2 else [_n_cycle(pts)]
        meta = GroupMeta("sym", f"Sym({n})", params={"n": n})
    elif family == "alt":
        if n < 3:
            gens = []
        elif n % 2:
            gens = [_n_cycle(pts), [[1, 2, 3]]] if n > 3 else [[[1, 2, 3]]]
        else:
            gens = [_n_cycle(pts[1:]), [[1, 2, 3]]]
        meta = GroupMeta("alt", f"Alt({n})", params={"n": n})
    else:
        if n < 3:
            raise InputError("dihedral needs n >= 3 vertices")
        reflection = [[i, n + 2 - i] for i in range(2, n // 2 + 2) if i < n + 2 - i]
        gens = [_n_cycle(pts), reflection]
        meta = GroupMeta("dihedral", f"D{2 * n}", params={"n": n})
    gens = [g for g in gens if g]
    return build_from_permutations(n, gens, cap=cap, meta=meta, table_limit=table_limit)


def psl2_order(q: int) -> int:
    return q * (q * q - 1) // gcd(2, q - 1)


def is_simple(G: GroupTable) -> bool:
    """True iff the normal closure of every nontrivial element is all of G."""
    if G.order < 2:
        return False
    remaining = np.ones(G.order, dtype=bool)
    remaining[0] = False
    while remaining.any():
        a = int(np.flatnonzero(remaining)[0])
        cls = G.conjugacy_class_of(a)
        remaining[cls] = False
        if not G.generated(cls).all():
            return False
    return True
