import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sbp.corpus import chain, chain_extension
from sbp.equivalence import extract
from sbp.errors import StructuralError
from sbp.monoid import Homomorphism, identity_map, product
from sbp.pseudoaction import (LAWS, PaMorphism, PseudoAction, candidate_pseudo_actions,
                             check_derived_identities, correction_is_trivial,
                             enumerate_pseudo_actions, pa_morphisms, trivial_action,
                             verify_pa_morphism, verify_pseudo_action)

from conftest import chain2, monoids_of_order, monoids_up_to, small_pseudo_actions, z2


def naive_major(pa):
    """The major condition by six nested loops, without the cached array."""
    X, B = pa.X, pa.B
    r, ph, g = pa.rho, pa.phi, pa.gamma

    def W(x, b, x2, b2):
        return r[X.sum(x, ph[b][x2], g[b][b2])][B.op(b, b2)]

    xs, bs = range(X.size), range(B.size)
    for x, b, x2, b2, x3, b3 in itertools.product(xs, bs, xs, bs, xs, bs):
        lhs = W(x, b, W(x2, b2, x3, b3), B.op(b2, b3))
        rhs = W(W(x, b, x2, b2), B.op(b, b2), x3, b3)
        if lhs != rhs:
            return False
    return True


def test_trivial_action_gives_product():
    X, B = chain2("X"), z2("B")
    pa = trivial_action(X, B)
    assert verify_pseudo_action(pa).ok and correction_is_trivial(pa)
    P = product(X, B)
    W = pa.combined
    for (x, b), (x2, b2) in itertools.product(itertools.product(range(2), range(2)), repeat=2):
        assert P.op(x * 2 + b, x2 * 2 + b2) == W[x, b, x2, b2] * 2 + B.op(b, b2)


def test_dimension_checks():
    X, B = chain2(), z2()
    with pytest.raises(StructuralError):
        PseudoAction(X, B, [[0, 0]], [[0, 1], [0, 1]], [[0, 0], [0, 0]])
    with pytest.raises(StructuralError):
        PseudoAction(X, B, [[0, 0], [1, 1]], [[0, 1], [0, 2]], [[0, 0], [0, 0]])


@pytest.mark.parametrize("law, table, i, j, v", [
    ("correction-unit", "rho", 1, 0, 0),
    ("pre-action-unit", "phi", 1, 0, 1),
    ("factor-unit", "gamma", 0, 1, 1),
])
def test_unit_law_witnesses(law, table, i, j, v):
    pa = trivial_action(chain2("X"), chain2("B"))
    tables = {t: [list(r) for r in getattr(pa, t)] for t in ("rho", "phi", "gamma")}
    tables[table][i][j] = v
    report = verify_pseudo_action(PseudoAction(pa.X, pa.B, **tables))
    assert law in report.failed_laws


def test_chain_extension_pseudo_action():
    pa = extract(chain_extension())
    one, a = 0, 1
    b = 1
    assert pa.rho[a][b] == one and pa.phi[b][a] == one and pa.gamma[b][b] == one
    assert not correction_is_trivial(pa)


@pytest.mark.parametrize("X", monoids_up_to(2), ids=lambda M: M.name)
@pytest.mark.parametrize("B", monoids_up_to(2), ids=lambda M: M.name)
def test_major_condition_matches_naive_loops(X, B):
    for pa in candidate_pseudo_actions(X, B):
        report = verify_pseudo_action(pa)
        assert (not report.laws["major"]) == naive_major(pa)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_major_condition_random_tables(data):
    X = data.draw(st.sampled_from(monoids_of_order(3)))
    B = data.draw(st.sampled_from(monoids_up_to(2)))
    val = st.integers(0, X.size - 1)
    rho = [[data.draw(val) for _ in range(B.size)] for _ in range(X.size)]
    phi = [[data.draw(val) for _ in range(X.size)] for _ in range(B.size)]
    gamma = [[data.draw(val) for _ in range(B.size)] for _ in range(B.size)]
    pa = PseudoAction(X, B, rho, phi, gamma)
    report = verify_pseudo_action(pa, exhaustive=True)
    assert (not report.laws["major"]) == naive_major(pa)
    assert list(report.laws) == list(LAWS)


@pytest.mark.parametrize("nx, nb", [(2, 2), (3, 2), (2, 3)])
def test_pruned_enumeration_matches_filter(nx, nb):
    for X in monoids_of_order(nx):
        for B in monoids_of_order(nb):
            slow = [pa for pa in candidate_pseudo_actions(X, B) if verify_pseudo_action(pa).ok]
            assert list(enumerate_pseudo_actions(X, B)) == slow


def test_pseudo_action_counts():
    # frozen from the filter above
    counts = {(nx, nb): sum(1 for X in monoids_of_order(nx) for B in monoids_of_order(nb)
                            for _ in enumerate_pseudo_actions(X, B))
              for nx, nb in [(2, 2), (3, 2), (2, 3)]}
    assert counts == {(2, 2): 14, (3, 2): 279, (2, 3): 330}


def test_derived_identities_hold():
    for pa in small_pseudo_actions():
        report = check_derived_identities(pa)
        assert report.ok, report.summary()


def test_derived_identities_catch_a_broken_table():
    # a^t = b and b^t = 0, so the correction is not idempotent
    X, B = chain("X", "0ab"), chain2("B")
    pa = PseudoAction(X, B, [[0, 0], [1, 2], [2, 0]], [[0, 1, 2]] * 2, [[0, 0], [0, 0]])
    assert verify_pseudo_action(pa).failed_laws == ["major", "pre-action-compat"]
    f = check_derived_identities(pa).first("idempotent-correction")
    assert (f.witness, f.lhs, f.rhs) == (("a", "t"), "0", "b")


def test_group_base_with_cancellative_kernel_has_trivial_correction():
    checked = 0
    for pa in small_pseudo_actions():
        if pa.X.is_right_cancellable() and pa.B.is_group():
            assert correction_is_trivial(pa)
            checked += 1
    assert checked > 0


def test_correction_nontrivial_without_cancellation():
    # a non-cancellative kernel over a group base admits a nontrivial correction
    assert any(not correction_is_trivial(pa) for pa in small_pseudo_actions()
               if pa.B.is_group() and not pa.X.is_right_cancellable())


def test_morphisms():
    pa = extract(chain_extension())
    ident = PaMorphism(pa, pa, identity_map(pa.X), identity_map(pa.B))
    assert verify_pa_morphism(ident).ok
    assert any(m.f.mapping == (0, 1) for m in pa_morphisms(pa, pa))
    # collapsing X to 0 cannot preserve a^b = 1 != 0... unless the correction is onto 0
    zero = Homomorphism(pa.X, pa.X, (0, 0))
    assert verify_pa_morphism(PaMorphism(pa, pa, zero, identity_map(pa.B))).ok
    with pytest.raises(StructuralError):
        PaMorphism(pa, pa, identity_map(pa.B), identity_map(pa.B))


def test_morphism_failure_witness():
    X, B = chain2("X"), chain2("B")
    trivial = trivial_action(X, B)
    pa = extract(chain_extension())
    f = Homomorphism(trivial.X, pa.X, (0, 1))
    g = Homomorphism(trivial.B, pa.B, (0, 1))
    report = verify_pa_morphism(PaMorphism(trivial, pa, f, g))
    assert report.first("correction").witness == ("t", "t")
