"""Conjugacy classes, character degrees, and the rank/field bound checks.

Character degrees come from the Burnside-Dixon method: the class
multiplication coefficient matrices are simultaneously diagonalised over a
prime field F_p with p = 1 mod exp(G) and p > 2 sqrt|G|, and each common
eigenvector yields one degree through the orthogonality relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt, log

import numpy as np

from .errors import MetadataError, MindegUnavailable, PreconditionError
from .groups import GroupTable, is_simple
from .subsets import Subset

MAX_DIXON_CLASSES = 64
DEFAULT_MINDEG_LIMIT = 10**5


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: Subset

    @property
    def size(self) -> int:
        return self.members.size


@dataclass
class ClassSpectrum:
    order: int
    classes: list[ConjugacyClass]
    class_of: np.ndarray
    minclass: int
    minclass_central: bool
    center_size: int
    simple: bool

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "class_sizes": self.sizes,
            "class_reps": [c.rep for c in self.classes],
            "minclass": self.minclass,
            "minclass_central": self.minclass_central,
            "center_size": self.center_size,
            "simple": self.simple,
        }


def conjugacy_classes(G: GroupTable) -> ClassSpectrum:
    """Orbits of the conjugation action, sorted by (size, smallest member)."""
    n = G.order
    class_of = np.full(n, -1, dtype=np.int64)
    found: list[np.ndarray] = []
    for a in range(n):
        if class_of[a] >= 0:
            continue
        members = G.conjugacy_class_of(a)
        class_of[members] = len(found)
        found.append(members)
    found.sort(key=lambda m: (len(m), int(m[0])))
    classes = []
    for i, members in enumerate(found):
        class_of[members] = i
        classes.append(ConjugacyClass(int(members[0]), Subset.from_ids(n, members)))
    nontrivial = [c for c in classes if c.rep != 0]
    minclass = min((c.size for c in nontrivial), default=0)
    center = sum(1 for c in classes if c.size == 1)
    class_of.flags.writeable = False
    return ClassSpectrum(
        order=n,
        classes=classes,
        class_of=class_of,
        minclass=minclass,
        minclass_central=minclass == 1,
        center_size=center,
        simple=is_simple(G) if n >= 2 else False,
    )


def spectrum_of(G: GroupTable) -> ClassSpectrum:
    """Cached ``conjugacy_classes(G)``."""
    cache = G.__dict__.setdefault("_derived", {})
    if "spectrum" not in cache:
        cache["spectrum"] = conjugacy_classes(G)
    return cache["spectrum"]


# -- linear algebra over F_p ------------------------------------------------------


def _rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not nz.size:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - col[:, None] * A[r][None, :]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0} over F_p."""
    R, pivots = _rref_mod(A, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-R[i, f]) % p
    return basis


def charpoly_mod(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial of A over F_p, lowest degree first.

    Reduces to upper Hessenberg form, then runs the Hessenberg determinant
    recurrence; division-free apart from pivot inverses.
    """
    H = np.array(A, dtype=np.int64) % p
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if not nz.size:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        inv = pow(int(H[m, m - 1]), -1, p)
        for i in range(m + 1, n):
            u = int(H[i, m - 1]) * inv % p
            if u:
                H[i] = (H[i] - u * H[m]) % p
                H[:, m] = (H[:, m] + u * H[:, i]) % p
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        # (x - h_mm) * P_{m-1}
        prev = polys[m - 1]
        cur = [0] * (m + 1)
        for d, c in enumerate(prev):
            cur[d + 1] = (cur[d + 1] + c) % p
            cur[d] = (cur[d] - int(H[m - 1, m - 1]) * c) % p
        t = 1
        for i in range(1, m):
            t = t * int(H[m - i, m - i - 1]) % p
            coef = t * int(H[m - i - 1, m - 1]) % p
            if coef:
                for d, c in enumerate(polys[m - i - 1]):
                    cur[d] = (cur[d] - coef * c) % p
        polys.append(cur)
    return polys[n]


def roots_mod(poly: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


# -- Burnside-Dixon -------------------------------------------------------------------


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    i = 2
    while i * i <= m:
        if m % i == 0:
            return False
        i += 1
    return True


def dixon_prime(order: int, exponent: int) -> int:
    """Least prime p = 1 (mod exponent) with p > 2*sqrt(order)."""
    p = exponent + 1
    while not (_is_prime(p) and p * p > 4 * order):
        p += exponent
    return p


def class_coefficients(G: GroupTable, spec: ClassSpectrum) -> np.ndarray:
    """``a[j, k, l] = #{x in C_j : x^-1 z_l in C_k}`` for fixed z_l in C_l."""
    r = len(spec.classes)
    reps = np.array([c.rep for c in spec.classes], dtype=np.int64)
    a = np.zeros((r, r, r), dtype=np.int64)
    for j, cls in enumerate(spec.classes):
        y = np.asarray(G.mul(G.inv[cls.members.ids][:, None], reps[None, :]))
        k = spec.class_of[y]
        flat = k * r + np.arange(r)[None, :]
        a[j] = np.bincount(flat.ravel(), minlength=r * r).reshape(r, r)
    return a


def character_degrees(G: GroupTable, spec: ClassSpectrum | None = None) -> list[int]:
    """Sorted degrees of the complex irreducible characters of G.

    Raises ``ArithmeticError`` if the cross-checks (one degree per class,
    sum of squares = |G|, each degree divides |G|) fail.
    """
    spec = spec or conjugacy_classes(G)
    n = G.order
    r = len(spec.classes)
    p = dixon_prime(n, G.exponent())
    coeff = class_coefficients(G, spec) % p
    sizes = np.array(spec.sizes, dtype=np.int64)
    inverse_class = spec.class_of[G.inv[[c.rep for c in spec.classes]]]

    spaces = [np.eye(r, dtype=np.int64)]
    for j in range(1, r):
        if all(s.shape[1] == 1 for s in spaces):
            break
        M = coeff[j]
        lams = roots_mod(charpoly_mod(M, p), p)
        split = []
        for B in spaces:
            if B.shape[1] == 1:
                split.append(B)
                continue
            pieces = []
            for lam in lams:
                shifted = (M - lam * np.eye(r, dtype=np.int64)) % p
                Y = nullspace_mod(shifted @ B % p, p)
                if Y.shape[1]:
                    pieces.append(B @ Y % p)
            if sum(b.shape[1] for b in pieces) != B.shape[1]:
                raise ArithmeticError("class algebra not split over F_p")
            split.extend(pieces)
        spaces = split
    if any(s.shape[1] != 1 for s in spaces):
        raise ArithmeticError("common eigenspaces did not separate")

    degrees = []
    inv_sizes = np.array([pow(int(s), -1, p) for s in sizes], dtype=np.int64)
    for B in spaces:
        w = B[:, 0] % p
        w = w * pow(int(w[0]), -1, p) % p
        norm = int(np.sum(w * w[inverse_class] % p * inv_sizes % p) % p)
        d2 = n * pow(norm, -1, p) % p
        d = next(d for d in range(1, isqrt(n) + 1) if d * d % p == d2)
        degrees.append(d)
    degrees.sort()
    if len(degrees) != r or sum(d * d for d in degrees) != n or any(n % d for d in degrees):
        raise ArithmeticError(f"degree cross-checks failed for {G.meta.name}: {degrees}")
    return degrees


@dataclass(frozen=True)
class MindegInfo:
    """Smallest degree of a nontrivial irreducible character.

    ``value`` is 1 whenever G has a nontrivial linear character; then
    ``no_nontrivial_bound`` is set. ``min_nonlinear`` is the smallest degree
    above 1 when degrees are known.
    """

    value: int
    kind: str  # "exact" | "lower_bound"
    source: str  # "oracle" | "family_table"
    degrees: tuple[int, ...] = ()
    min_nonlinear: int | None = None
    no_nontrivial_bound: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind,
            "source": self.source,
            "degrees": list(self.degrees),
            "min_nonlinear": self.min_nonlinear,
            "no_nontrivial_bound": self.no_nontrivial_bound,
        }


def family_mindeg_bound(G: GroupTable) -> int | None:
    if G.meta.family == "psl2" and G.meta.q:
        q = G.meta.q
        return (q - 1) // gcd(2, q - 1)
    return None


def mindeg(G: GroupTable, limit: int = DEFAULT_MINDEG_LIMIT, spec: ClassSpectrum | None = None) -> MindegInfo:
    if G.order <= limit:
        spec = spec or conjugacy_classes(G)
        if len(spec.classes) <= MAX_DIXON_CLASSES:
            degrees = character_degrees(G, spec)
            linear = degrees.count(1)
            nonlinear = [d for d in degrees if d > 1]
            min_nonlinear = min(nonlinear) if nonlinear else None
            if linear > 1 or min_nonlinear is None:
                value, flag = 1, True
            else:
                value, flag = min_nonlinear, False
            return MindegInfo(value, "exact", "oracle", tuple(degrees), min_nonlinear, flag)
    bound = family_mindeg_bound(G)
    if bound is not None:
        return MindegInfo(bound, "lower_bound", "family_table", no_nontrivial_bound=bound <= 1)
    raise MindegUnavailable(f"mindeg unavailable for {G.meta.name}: too large for the oracle and no family table")


def mindeg_of(G: GroupTable) -> MindegInfo:
    """Cached ``mindeg(G)`` with default limits."""
    cache = G.__dict__.setdefault("_derived", {})
    if "mindeg" not in cache:
        cache["mindeg"] = mindeg(G, spec=spectrum_of(G))
    return cache["mindeg"]


# -- bound checks -----------------------------------------------------------------------


def _lie_params(G: GroupTable) -> tuple[int, int]:
    if G.meta.rank is None or G.meta.q is None:
        raise MetadataError(f"no (r,q) metadata for {G.meta.name}")
    return G.meta.rank, G.meta.q


def _ineq(name: str, lhs, rhs, holds: bool, exact: str) -> dict:
    return {"name": name, "lhs": lhs, "rhs": rhs, "holds": bool(holds), "margin": rhs - lhs, "exact": exact}


def check_rank_bounds(G: GroupTable, spec: ClassSpectrum | None = None) -> dict:
    """q^(r/2) <= minclass(G) < |G| <= q^(8 r^2), in exact integers."""
    r, q = _lie_params(G)
    spec = spec or conjugacy_classes(G)
    if not spec.simple:
        raise PreconditionError(f"{G.meta.name} is not simple", witness=G.meta.name)
    n, mc = G.order, spec.minclass
    top = q ** (8 * r * r)
    ineqs = [
        _ineq("q^(r/2) <= minclass", q ** (r / 2), mc, q**r <= mc * mc, f"q^r={q**r} <= minclass^2={mc * mc}"),
        _ineq("minclass < |G|", mc, n, mc < n, f"{mc} < {n}"),
        _ineq("|G| <= q^(8r^2)", n, top, n <= top, f"{n} <= {q}^{8 * r * r}"),
    ]
    return {"check": "rank_bounds", "group": G.meta.name, "r": r, "q": q, "inequalities": ineqs,
            "holds": all(i["holds"] for i in ineqs)}


def check_landseitz(G: GroupTable, info: MindegInfo | None = None) -> dict:
    """|G| < k^(8 r^2) with k = mindeg(G)."""
    r, q = _lie_params(G)
    info = info or mindeg(G)
    k = info.value
    top = k ** (8 * r * r)
    ineq = _ineq("|G| < k^(8r^2)", G.order, top, G.order < top, f"{G.order} < {k}^{8 * r * r}")
    ineq["log_margin"] = 8 * r * r * log(k) - log(G.order) if k > 1 else -log(G.order)
    return {"check": "landseitz", "group": G.meta.name, "r": r, "q": q, "mindeg": info.to_dict(),
            "inequalities": [ineq], "holds": ineq["holds"]}
