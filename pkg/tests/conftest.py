import functools
import itertools

import pytest

from sbp.corpus import case_diagram, chain_extension, group_base_example, two_point_seed
from sbp.monoid import FiniteMonoid, enumerate_monoids
from sbp.pseudoaction import enumerate_pseudo_actions
from sbp.search import build_from_relation
from sbp.semibiproduct import biproduct


def z2(name="Z2"):
    return FiniteMonoid(["0", "g"], [[0, 1], [1, 0]], 0, name)


def chain2(name="C2"):
    return FiniteMonoid(["0", "t"], [[0, 1], [1, 1]], 0, name)


@functools.lru_cache(maxsize=None)
def monoids_of_order(n):
    return tuple(enumerate_monoids(n))


def monoids_up_to(n):
    return [M for k in range(1, n + 1) for M in monoids_of_order(k)]


@functools.lru_cache(maxsize=None)
def pseudo_actions(nx, nb):
    """Every pseudo-action over every pair of labelled monoids of the given orders."""
    return tuple(pa for X in monoids_of_order(nx) for B in monoids_of_order(nb)
                 for pa in enumerate_pseudo_actions(X, B))


def small_pseudo_actions():
    sizes = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2), (2, 3)]
    return [pa for nx, nb in sizes for pa in pseudo_actions(nx, nb)]


@functools.lru_cache(maxsize=None)
def corpus_diagrams():
    """Verified diagrams from the worked examples."""
    ds = [case_diagram(i) for i in range(5, 9)]
    ds += [chain_extension(), group_base_example()]
    ds += [c.diagram for idem in (True, False)
           for c in build_from_relation(two_point_seed(idem)).accepted]
    from sbp.corpus import chain
    ds.append(biproduct(chain("X", "0ab"), chain("B", "0c"), "XxB"))
    return tuple(ds)


def naive_is_monoid(table, e):
    n = len(table)
    if any(table[e][i] != i or table[i][e] != i for i in range(n)):
        return False
    return all(table[table[a][b]][c] == table[a][table[b][c]]
               for a, b, c in itertools.product(range(n), repeat=3))


@pytest.fixture
def chain3():
    return FiniteMonoid(["0", "a", "b"], [[0, 1, 2], [1, 1, 2], [2, 2, 2]], 0, "X")


def canonical_table(M):
    """Least relabelled table over permutations fixing the identity at 0."""
    n = M.size
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        inv = {v: k for k, v in enumerate(p)}
        t = tuple(tuple(inv[M.table[p[i]][p[j]]] for j in range(n)) for i in range(n))
        best = t if best is None or t < best else best
    return best


@functools.lru_cache(maxsize=None)
def iso_representatives(n):
    seen, out = set(), []
    for M in monoids_of_order(n):
        c = canonical_table(M)
        if c not in seen:
            seen.add(c)
            out.append(M)
    return tuple(out)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
