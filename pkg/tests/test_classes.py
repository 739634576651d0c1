import numpy as np
import pytest
from sympy import Matrix, Poly, symbols
from sympy.combinatorics import Permutation, PermutationGroup

from gpcover.classes import (character_degrees, charpoly_mod, check_landseitz, check_rank_bounds,
                             conjugacy_classes, dixon_prime, mindeg, nullspace_mod, roots_mod)
from gpcover.errors import MetadataError, PreconditionError
from gpcover.groups import build_from_permutations

from conftest import group

FLEET = [("alt", {"n": 5}), ("psl2", {"q": 7}), ("sl2", {"q": 5}), ("sym", {"n": 4}), ("sym", {"n": 3}),
         ("dihedral", {"n": 5}), ("alt", {"n": 4}), ("psl2", {"q": 8}), ("cyclic", {"n": 7})]


def commuting_class_count(G) -> int:
    t = G.table
    return int((t == t.T).sum()) // G.order


def derived_index(G) -> int:
    comm = {int(G.mul(G.mul(G.inv[a], G.inv[b]), G.mul(a, b))) for a in range(G.order) for b in range(G.order)}
    return G.order // int(G.generated(sorted(comm)).sum())


@pytest.mark.parametrize("family,params", FLEET)
def test_class_sizes_match_sympy(family, params):
    G = group(family, **params)
    P = PermutationGroup([Permutation(list(map(int, G.perms[g]))) for g in G.generators]) if G.generators else None
    spec = conjugacy_classes(G)
    assert sum(spec.sizes) == G.order
    assert len(spec.classes) == commuting_class_count(G)
    if P is not None:
        assert sorted(spec.sizes) == sorted(len(c) for c in P.conjugacy_classes())


@pytest.mark.parametrize("family,params", FLEET)
def test_degrees_consistent(family, params):
    G = group(family, **params)
    d = character_degrees(G)
    assert len(d) == len(conjugacy_classes(G).classes)
    assert sum(x * x for x in d) == G.order
    assert d.count(1) == derived_index(G)
    assert all(G.order % x == 0 for x in d)


@pytest.mark.parametrize("family,params,expected", [
    ("alt", {"n": 5}, [1, 3, 3, 4, 5]),
    ("psl2", {"q": 7}, [1, 3, 3, 6, 7, 8]),
    ("sl2", {"q": 5}, [1, 2, 2, 3, 3, 4, 4, 5, 6]),
    ("sym", {"n": 4}, [1, 1, 2, 3, 3]),
    ("sym", {"n": 3}, [1, 1, 2]),
])
def test_known_degrees(family, params, expected):
    assert sorted(character_degrees(group(family, **params))) == expected


def test_spectrum_examples():
    T = build_from_permutations(3, [])
    assert len(conjugacy_classes(T).classes) == 1
    A5 = conjugacy_classes(group("alt", n=5))
    assert sorted(A5.sizes) == [1, 12, 12, 15, 20] and A5.minclass == 12 and A5.simple
    P = conjugacy_classes(group("psl2", q=7))
    assert P.minclass == 21 and P.minclass**2 >= 7
    S = conjugacy_classes(group("sl2", q=5))
    assert S.minclass == 1 and S.minclass_central and S.center_size == 2


def test_mindeg_examples():
    c = mindeg(group("cyclic", n=6))
    assert c.value == 1 and c.no_nontrivial_bound
    s3 = mindeg(group("sym", n=3))
    # the sign character is a nontrivial 1-dimensional representation
    assert s3.value == 1 and s3.no_nontrivial_bound and s3.min_nonlinear == 2
    a5 = mindeg(group("alt", n=5))
    assert a5.value == 3 and a5.kind == "exact" and a5.source == "oracle"
    assert sum(d * d for d in a5.degrees) == 60


def test_mindeg_family_fallback():
    info = mindeg(group("psl2", q=13), limit=100)
    assert info.kind == "lower_bound" and info.value == 6
    assert mindeg(group("psl2", q=13)).value == 7


def test_charpoly_against_sympy():
    rng = np.random.default_rng(5)
    p = 101
    x = symbols("x")
    for n in (1, 3, 5, 7):
        A = rng.integers(0, p, size=(n, n))
        ours = charpoly_mod(A, p)
        ref = Poly(Matrix(A.tolist()).charpoly(x).as_expr(), x, modulus=p)
        assert [c % p for c in ours[::-1]] == [int(c) % p for c in ref.all_coeffs()]


def test_mod_p_helpers():
    p = 13
    A = np.array([[1, 2], [2, 4]])
    ns = nullspace_mod(A, p)
    assert ns.shape == (2, 1) and not ((A @ ns) % p).any()
    # (x - 2)(x - 5) = x^2 - 7x + 10
    assert sorted(roots_mod([10, -7 % p, 1], p)) == [2, 5]
    q = dixon_prime(60, 30)
    assert q % 30 == 1 and q * q > 4 * 60


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_bounds_pass(q):
    G = group("psl2", q=q)
    r = check_rank_bounds(G)
    assert r["holds"] and r["check"] == "rank_bounds" and len(r["inequalities"]) == 3
    ls = check_landseitz(G)
    assert ls["holds"]


def test_bounds_examples():
    r = check_landseitz(group("psl2", q=5))
    assert r["inequalities"][0]["rhs"] == 3**8
    with pytest.raises(MetadataError):
        check_rank_bounds(build_from_permutations(5, ["(1 2 3 4 5)", "(1 2 3)"]))
    with pytest.raises(PreconditionError):
        check_rank_bounds(group("sl2", q=5))
