import functools

import numpy as np
import pytest

from gpcover.groups import build_family

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def group(family: str, **params):
    return build_family(family, **params)


@pytest.fixture(scope="session")
def alt5():
    return group("alt", n=5)


@pytest.fixture(scope="session")
def sym3():
    return group("sym", n=3)


@pytest.fixture(scope="session")
def psl27():
    return group("psl2", q=7)


def naive_mul(G, a: int, b: int) -> int:
    """Product through the permutation images, independent of the table."""
    comp = G.perms[b][G.perms[a]]
    index = {row.tobytes(): i for i, row in enumerate(G.perms)}
    return index[np.ascontiguousarray(comp).tobytes()]


def naive_product(G, A, B) -> set[int]:
    perms = G.perms
    index = {row.tobytes(): i for i, row in enumerate(perms)}
    return {index[np.ascontiguousarray(perms[b][perms[a]]).tobytes()] for a in A for b in B}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {msg}")
