"""Pseudo-actions of a monoid ``B`` on a monoid ``X``.

A pseudo-action is three tables over ``X`` and ``B``:

* ``rho[x][b]``  the correction ``x^b``,
* ``phi[b][x]``  the pre-action ``b.x``,
* ``gamma[b][b']`` the factor ``b x b'``.

``X`` is written additively and ``B`` multiplicatively throughout.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import StructuralError
from .monoid import FiniteMonoid, Homomorphism, enumerate_homs
from .report import Failure, LawReport

LAWS = ("correction-unit", "pre-action-unit", "factor-unit", "major",
        "pre-action-compat", "factor-compat")


def _table(rows, n_rows, n_cols, n_values, label):
    rows = tuple(tuple(int(v) for v in row) for row in rows)
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise StructuralError(f"{label} must be {n_rows}x{n_cols}")
    if any(not 0 <= v < n_values for r in rows for v in r):
        raise StructuralError(f"{label} has out-of-range entries")
    return rows


@dataclass(frozen=True)
class PseudoAction:
    X: FiniteMonoid
    B: FiniteMonoid
    rho: tuple[tuple[int, ...], ...]
    phi: tuple[tuple[int, ...], ...]
    gamma: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        nx, nb = self.X.size, self.B.size
        object.__setattr__(self, "rho", _table(self.rho, nx, nb, nx, "rho"))
        object.__setattr__(self, "phi", _table(self.phi, nb, nx, nx, "phi"))
        object.__setattr__(self, "gamma", _table(self.gamma, nb, nb, nx, "gamma"))

    def corr(self, x: int, b: int) -> int:
        return self.rho[x][b]

    def act(self, b: int, x: int) -> int:
        return self.phi[b][x]

    def factor(self, b: int, b2: int) -> int:
        return self.gamma[b][b2]

    @cached_property
    def combined(self) -> np.ndarray:
        """``W[x, b, x', b'] = (x + b.x' + b x b')^(bb')``.

        First component of the synthetic operation on ``X x B``; the major
        condition is associativity of that operation.
        """
        TX, TB = self.X.array, self.B.array
        phi, gamma, rho = (np.array(t, dtype=np.int64) for t in (self.phi, self.gamma, self.rho))
        nx, nb = self.X.size, self.B.size
        x = np.arange(nx)[:, None, None, None]
        b = np.arange(nb)[None, :, None, None]
        x2 = np.arange(nx)[None, None, :, None]
        b2 = np.arange(nb)[None, None, None, :]
        inner = TX[TX[x, phi[b, x2]], gamma[b, b2]]
        return rho[inner, TB[b, b2]]

    def names(self, x=(), b=()):
        return tuple(self.X.elements[i] for i in x) + tuple(self.B.elements[i] for i in b)


def trivial_action(X: FiniteMonoid, B: FiniteMonoid) -> PseudoAction:
    """``x^b = x``, ``b.x = x`` and ``b x b' = 0``; its synthetic monoid is ``X x B``."""
    return PseudoAction(
        X, B,
        [[x] * B.size for x in range(X.size)],
        [list(range(X.size)) for _ in range(B.size)],
        [[X.identity] * B.size for _ in range(B.size)],
    )


def verify_pseudo_action(pa: PseudoAction, exhaustive: bool = False) -> LawReport:
    """Check unit laws, the major condition over all triples of ``X x B``, and
    both compatibility conditions. First witness per law unless ``exhaustive``.
    """
    X, B = pa.X, pa.B
    nx, nb = X.size, B.size
    zero, one = X.identity, B.identity
    report = LawReport({law: [] for law in LAWS})
    xe, be = X.elements, B.elements

    def fail(law, witness, lhs, rhs):
        if exhaustive or not report.laws[law]:
            report.add(law, Failure(law, witness, xe[lhs], xe[rhs]))

    for x in range(nx):
        if pa.rho[x][one] != x:
            fail("correction-unit", (xe[x], be[one]), pa.rho[x][one], x)
    for b in range(nb):
        if pa.rho[zero][b] != zero:
            fail("correction-unit", (xe[zero], be[b]), pa.rho[zero][b], zero)
    for x in range(nx):
        if pa.phi[one][x] != x:
            fail("pre-action-unit", (be[one], xe[x]), pa.phi[one][x], x)
    for b in range(nb):
        if pa.phi[b][zero] != zero:
            fail("pre-action-unit", (be[b], xe[zero]), pa.phi[b][zero], zero)
    for b in range(nb):
        if pa.gamma[one][b] != zero:
            fail("factor-unit", (be[one], be[b]), pa.gamma[one][b], zero)
        if pa.gamma[b][one] != zero:
            fail("factor-unit", (be[b], be[one]), pa.gamma[b][one], zero)

    # right-nested vs left-nested sum of (x,b) (x',b') (x'',b'') on X x B
    W, TB = pa.combined, B.array
    x0, b0, x1, b1, x2, b2 = (
        np.arange(size).reshape([size if k == axis else 1 for k in range(6)])
        for axis, size in enumerate((nx, nb, nx, nb, nx, nb)))
    lhs = W[x0, b0, W[x1, b1, x2, b2], TB[b1, b2]]
    rhs = W[W[x0, b0, x1, b1], TB[b0, b1], x2, b2]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    bad = np.argwhere(lhs != rhs)
    for idx in (bad if exhaustive else bad[:1]):
        x, b, x2, b2, x3, b3 = (int(i) for i in idx)
        report.add("major", Failure(
            "major", (xe[x], be[b], xe[x2], be[b2], xe[x3], be[b3]),
            xe[lhs[tuple(idx)]], xe[rhs[tuple(idx)]]))

    for b in range(nb):
        for x in range(nx):
            bx = pa.phi[b][x]
            if pa.rho[bx][b] != bx:
                fail("pre-action-compat", (be[b], xe[x]), pa.rho[bx][b], bx)
    for b, b2 in itertools.product(range(nb), repeat=2):
        g = pa.gamma[b][b2]
        bb = B.table[b][b2]
        if pa.rho[g][bb] != g:
            fail("factor-compat", (be[b], be[b2]), pa.rho[g][bb], g)
    return report


def is_pseudo_action(pa: PseudoAction) -> bool:
    return verify_pseudo_action(pa).ok


def check_derived_identities(pa: PseudoAction) -> LawReport:
    """Re-derive the special cases of the major condition by direct evaluation.

    Every law here follows from :func:`verify_pseudo_action`; a failure on a
    verified pseudo-action means the checker itself is wrong. Kept free of
    :attr:`PseudoAction.combined` so it stays an independent cross-check.
    """
    X, B = pa.X, pa.B
    add, mul = X.table, B.table
    r, ph, g = pa.rho, pa.phi, pa.gamma
    xs, bs = range(X.size), range(B.size)
    report = LawReport()

    def check(law, witness, lhs, rhs):
        report.add(law)
        if lhs != rhs and not report.laws[law]:
            report.add(law, Failure(law, witness, X.elements[lhs], X.elements[rhs]))

    for x, b in itertools.product(xs, bs):
        check("idempotent-correction", pa.names((x,), (b,)), r[r[x][b]][b], r[x][b])

    for b, x, y in itertools.product(bs, xs, xs):
        w = pa.names((x, y), (b,))
        # (b.(x+y))^b = (b.x + b.y)^b
        check("correction-of-action-sum", w, r[ph[b][add[x][y]]][b], r[add[ph[b][x]][ph[b][y]]][b])
        # (x+y)^b = (x + y^b)^b
        check("correction-absorbs-right", w, r[add[x][y]][b], r[add[x][r[y][b]]][b])
        # (x^b + b.y)^b = (x + (b.y)^b)^b
        check("correction-mixed", w, r[add[r[x][b]][ph[b][y]]][b], r[add[x][r[ph[b][y]][b]]][b])
        # (b.(x+y))^b = ((b.x)^b + b.y)^b
        check("action-of-sum", w, r[ph[b][add[x][y]]][b], r[add[r[ph[b][x]][b]][ph[b][y]]][b])

    for b, b2, b3 in itertools.product(bs, repeat=3):
        bb2, b2b3 = mul[b][b2], mul[b2][b3]
        bbb = mul[bb2][b3]
        lhs = r[add[ph[b][r[g[b2][b3]][b2b3]]][g[b][b2b3]]][bbb]
        rhs = r[add[r[g[b][b2]][bb2]][g[bb2][b3]]][bbb]
        check("factor-cocycle", pa.names((), (b, b2, b3)), lhs, rhs)

    for x, b, b2 in itertools.product(xs, bs, bs):
        bb2 = mul[b][b2]
        w = pa.names((x,), (b, b2))
        # (x^b + b x b')^(bb') = (x + b x b')^(bb')
        check("correction-vs-factor", w, r[add[r[x][b]][g[b][b2]]][bb2], r[add[x][g[b][b2]]][bb2])
        # (b.(b'.x)^b' + b x b')^(bb') = ((b x b')^(bb') + bb'.x)^(bb')
        lhs = r[add[ph[b][r[ph[b2][x]][b2]]][g[b][b2]]][bb2]
        rhs = r[add[r[g[b][b2]][bb2]][ph[bb2][x]]][bb2]
        check("factor-conjugation", w, lhs, rhs)
    return report


def correction_is_trivial(pa: PseudoAction) -> bool:
    return all(pa.rho[x][b] == x for x in range(pa.X.size) for b in range(pa.B.size))


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PaMorphism:
    source: PseudoAction
    target: PseudoAction
    f: Homomorphism
    g: Homomorphism

    def __post_init__(self):
        for label, m, dom, cod in (("f", self.f, self.source.X, self.target.X),
                                   ("g", self.g, self.source.B, self.target.B)):
            if not isinstance(m, Homomorphism):
                raise StructuralError(f"{label} must be a homomorphism")
            if m.domain != dom or m.codomain != cod:
                raise StructuralError(f"{label} has the wrong domain or codomain")


def verify_pa_morphism(m: PaMorphism) -> LawReport:
    """Check that ``(f, g)`` preserves correction, pre-action and factor system.

    The derived preservation of the synthetic operation is also checked and
    must hold whenever the other three do.
    """
    S, T = m.source, m.target
    f, g = m.f.mapping, m.g.mapping
    xe = T.X.elements
    report = LawReport({"correction": [], "pre-action": [], "factor": [], "operation": []})

    def check(law, witness, lhs, rhs):
        if lhs != rhs and not report.laws[law]:
            report.add(law, Failure(law, witness, xe[lhs], xe[rhs]))

    xs, bs = range(S.X.size), range(S.B.size)
    for x, b in itertools.product(xs, bs):
        check("correction", S.names((x,), (b,)), f[S.rho[x][b]], T.rho[f[x]][g[b]])
        check("pre-action", S.names((x,), (b,)), f[S.phi[b][x]], T.phi[g[b]][f[x]])
    for b, b2 in itertools.product(bs, bs):
        check("factor", S.names((), (b, b2)), f[S.gamma[b][b2]], T.gamma[g[b]][g[b2]])
    WS, WT = S.combined, T.combined
    for x, b, x2, b2 in itertools.product(xs, bs, xs, bs):
        check("operation", S.names((x, x2), (b, b2)),
              f[WS[x, b, x2, b2]], WT[f[x], g[b], f[x2], g[b2]])
    if not any(report.laws[law] for law in ("correction", "pre-action", "factor")):
        assert not report.laws["operation"], "operation preservation must follow"
    return report


def pa_morphisms(src: PseudoAction, tgt: PseudoAction) -> Iterator[PaMorphism]:
    for f in enumerate_homs(src.X, tgt.X):
        for g in enumerate_homs(src.B, tgt.B):
            m = PaMorphism(src, tgt, f, g)
            if verify_pa_morphism(m).ok:
                yield m


def candidate_pseudo_actions(X: FiniteMonoid, B: FiniteMonoid) -> Iterator[PseudoAction]:
    """Every triple of tables satisfying the unit laws (not yet the major condition)."""
    zero, one = X.identity, B.identity
    rho_free = [(x, b) for x in range(X.size) for b in range(B.size) if x != zero and b != one]
    phi_free = [(b, x) for b in range(B.size) for x in range(X.size) if x != zero and b != one]
    gam_free = [(b, c) for b in range(B.size) for c in range(B.size) if one not in (b, c)]
    values = range(X.size)
    for rv in itertools.product(values, repeat=len(rho_free)):
        rho = [[x] * B.size for x in range(X.size)]
        for b in range(B.size):
            rho[zero][b] = zero
        for (x, b), v in zip(rho_free, rv):
            rho[x][b] = v
        for pv in itertools.product(values, repeat=len(phi_free)):
            phi = [list(range(X.size)) for _ in range(B.size)]
            for b in range(B.size):
                phi[b][zero] = zero
            for (b, x), v in zip(phi_free, pv):
                phi[b][x] = v
            for gv in itertools.product(values, repeat=len(gam_free)):
                gamma = [[zero] * B.size for _ in range(B.size)]
                for (b, c), v in zip(gam_free, gv):
                    gamma[b][c] = v
                yield PseudoAction(X, B, rho, phi, gamma)


def _rho_ok(X: FiniteMonoid, B: FiniteMonoid, rho) -> bool:
    # necessary: (x^b)^b = x^b and (x+y)^b = (x+y^b)^b
    add = X.table
    return all(rho[rho[x][b]][b] == rho[x][b] for x in range(X.size) for b in range(B.size)) \
        and all(rho[add[x][y]][b] == rho[add[x][rho[y][b]]][b]
                for x in range(X.size) for y in range(X.size) for b in range(B.size))


def _phi_ok(X: FiniteMonoid, B: FiniteMonoid, rho, phi) -> bool:
    # necessary: (b.x)^b = b.x and (b.(x+y))^b = (b.x + b.y)^b
    add = X.table
    return all(rho[phi[b][x]][b] == phi[b][x] for b in range(B.size) for x in range(X.size)) \
        and all(rho[phi[b][add[x][y]]][b] == rho[add[phi[b][x]][phi[b][y]]][b]
                for b in range(B.size) for x in range(X.size) for y in range(X.size))


def enumerate_pseudo_actions(X: FiniteMonoid, B: FiniteMonoid) -> Iterator[PseudoAction]:
    """All pseudo-actions of ``B`` on ``X``, in the order of :func:`candidate_pseudo_actions`.

    Correction and pre-action tables are discarded early when they break a
    consequence of the laws; survivors get the full check.
    """
    zero, one = X.identity, B.identity
    rho_free = [(x, b) for x in range(X.size) for b in range(B.size) if x != zero and b != one]
    phi_free = [(b, x) for b in range(B.size) for x in range(X.size) if x != zero and b != one]
    gam_free = [(b, c) for b in range(B.size) for c in range(B.size) if one not in (b, c)]
    values = range(X.size)
    TB = B.table
    for rv in itertools.product(values, repeat=len(rho_free)):
        rho = [[x] * B.size for x in range(X.size)]
        for (x, b), v in zip(rho_free, rv):
            rho[x][b] = v
        if not _rho_ok(X, B, rho):
            continue
        for pv in itertools.product(values, repeat=len(phi_free)):
            phi = [list(range(X.size)) for _ in range(B.size)]
            for b in range(B.size):
                phi[b][zero] = zero
            for (b, x), v in zip(phi_free, pv):
                phi[b][x] = v
            if not _phi_ok(X, B, rho, phi):
                continue
            options = [[v for v in values if rho[v][TB[b][c]] == v] for b, c in gam_free]
            for gv in itertools.product(*options):
                gamma = [[zero] * B.size for _ in range(B.size)]
                for (b, c), v in zip(gam_free, gv):
                    gamma[b][c] = v
                pa = PseudoAction(X, B, rho, phi, gamma)
                if verify_pseudo_action(pa).ok:
                    yield pa
