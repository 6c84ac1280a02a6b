"""Semi-biproduct diagrams ``X --k--> A --p--> B`` with pointed maps
``q: A -> X`` and ``s: B -> A``, their verification, the embedding of ``A``
into ``X x B``, morphisms, and the kernel / cokernel / pullback facts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import ContractError, StructuralError
from .monoid import (FiniteMonoid, Homomorphism, PointedMap, compose, congruence_closure,
                     enumerate_homs, identity_map, is_injective, is_surjective, kernel_pair)
from .report import Failure, LawReport

AXIOMS = ("ps=1", "qk=1", "pk=0", "qs=0", "kq+sp=1")


@dataclass(frozen=True)
class SemiBiproduct:
    """A candidate diagram; construction only checks that the pieces fit.

    Whether the five identities hold is a question for :func:`verify`.
    """

    X: FiniteMonoid
    A: FiniteMonoid
    B: FiniteMonoid
    p: Homomorphism
    k: Homomorphism
    q: PointedMap
    s: PointedMap

    def __post_init__(self):
        for label, m in (("p", self.p), ("k", self.k)):
            if not isinstance(m, Homomorphism):
                raise StructuralError(f"{label} must be a homomorphism")
        shape = {"p": (self.A, self.B), "k": (self.X, self.A),
                 "q": (self.A, self.X), "s": (self.B, self.A)}
        for label, (dom, cod) in shape.items():
            m = getattr(self, label)
            if m.domain != dom or m.codomain != cod:
                raise StructuralError(
                    f"{label} goes {m.domain.name}->{m.codomain.name}, "
                    f"expected {dom.name}->{cod.name}")

    @cached_property
    def report(self) -> LawReport:
        return verify(self)

    @property
    def verified(self) -> bool:
        return self.report.ok

    def require_verified(self) -> None:
        if not self.verified:
            raise ContractError(f"diagram on {self.A.name} is not a semi-biproduct: "
                                f"{self.report.summary()}")


def verify(d: SemiBiproduct, exhaustive: bool = False) -> LawReport:
    """Check the five identities elementwise; report the first witness of each."""
    X, A, B, p, k, q, s = d.X, d.A, d.B, d.p.mapping, d.k.mapping, d.q.mapping, d.s.mapping
    report = LawReport({axiom: [] for axiom in AXIOMS})

    def check(axiom, M, elem, lhs, rhs, target):
        if lhs != rhs and (exhaustive or not report.laws[axiom]):
            report.add(axiom, Failure(axiom, (M.elements[elem],),
                                      target.elements[lhs], target.elements[rhs]))

    for b in range(B.size):
        check("ps=1", B, b, p[s[b]], b, B)
    for x in range(X.size):
        check("qk=1", X, x, q[k[x]], x, X)
    for x in range(X.size):
        check("pk=0", X, x, p[k[x]], B.identity, B)
    for b in range(B.size):
        check("qs=0", B, b, q[s[b]], X.identity, X)
    for a in range(A.size):
        check("kq+sp=1", A, a, A.table[k[q[a]]][s[p[a]]], a, A)
    return report


def beta(d: SemiBiproduct, a: int) -> tuple[int, int]:
    d.require_verified()
    return d.q.mapping[a], d.p.mapping[a]


def alpha(d: SemiBiproduct, x: int, b: int) -> int:
    d.require_verified()
    return d.A.table[d.k.mapping[x]][d.s.mapping[b]]


def correction(d: SemiBiproduct, x: int, b: int) -> int:
    """``q(k(x) + s(b))``."""
    return d.q.mapping[d.A.table[d.k.mapping[x]][d.s.mapping[b]]]


def image_of_beta(d: SemiBiproduct) -> frozenset[tuple[int, int]]:
    d.require_verified()
    image = frozenset(beta(d, a) for a in range(d.A.size))
    corrected = frozenset((correction(d, x, b), b)
                          for x in range(d.X.size) for b in range(d.B.size))
    assert image == corrected, "image of beta differs from the corrected pairs"
    assert len(image) == d.A.size, "beta is not injective"
    return image


def is_schreier(d: SemiBiproduct) -> bool:
    """True iff the correction system is trivial."""
    d.require_verified()
    trivial = all(correction(d, x, b) == x for x in range(d.X.size) for b in range(d.B.size))
    by_count = d.A.size == d.X.size * d.B.size
    by_image = len(image_of_beta(d)) == d.X.size * d.B.size
    assert trivial == by_count == by_image
    return trivial


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SbpMorphism:
    source: SemiBiproduct
    target: SemiBiproduct
    f1: Homomorphism
    f2: Homomorphism
    f3: Homomorphism

    def __post_init__(self):
        S, T = self.source, self.target
        for label, m, dom, cod in (("f1", self.f1, S.X, T.X), ("f2", self.f2, S.A, T.A),
                                   ("f3", self.f3, S.B, T.B)):
            if not isinstance(m, Homomorphism):
                raise StructuralError(f"{label} must be a homomorphism")
            if m.domain != dom or m.codomain != cod:
                raise StructuralError(f"{label} has the wrong domain or codomain")


def verify_morphism(m: SbpMorphism) -> LawReport:
    """Check the four commuting squares elementwise."""
    S, T = m.source, m.target
    f1, f2, f3 = m.f1.mapping, m.f2.mapping, m.f3.mapping
    squares = {
        "f2k=k'f1": (S.X, lambda x: f2[S.k.mapping[x]], lambda x: T.k.mapping[f1[x]], T.A),
        "p'f2=f3p": (S.A, lambda a: T.p.mapping[f2[a]], lambda a: f3[S.p.mapping[a]], T.B),
        "f2s=s'f3": (S.B, lambda b: f2[S.s.mapping[b]], lambda b: T.s.mapping[f3[b]], T.A),
        "q'f2=f1q": (S.A, lambda a: T.q.mapping[f2[a]], lambda a: f1[S.q.mapping[a]], T.X),
    }
    report = LawReport()
    for law, (dom, lhs, rhs, cod) in squares.items():
        report.add(law)
        for e in range(dom.size):
            left, right = lhs(e), rhs(e)
            if left != right:
                report.add(law, Failure(law, (dom.elements[e],),
                                        cod.elements[left], cod.elements[right]))
                break
    return report


def identity_morphism(d: SemiBiproduct) -> SbpMorphism:
    return SbpMorphism(d, d, identity_map(d.X), identity_map(d.A), identity_map(d.B))


def compose_morphisms(g: SbpMorphism, f: SbpMorphism) -> SbpMorphism:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise StructuralError("morphisms are not composable")
    return SbpMorphism(f.source, g.target, compose(g.f1, f.f1), compose(g.f2, f.f2),
                       compose(g.f3, f.f3))


def sbp_morphisms(src: SemiBiproduct, tgt: SemiBiproduct) -> Iterator[SbpMorphism]:
    """Every morphism between two diagrams.

    The middle map determines the outer ones (``f1 = q'f2k`` and
    ``f3 = p'f2s``), so only homomorphisms ``A -> A'`` are enumerated.
    """
    for f2 in enumerate_homs(src.A, tgt.A):
        f1 = tuple(tgt.q.mapping[f2.mapping[src.k.mapping[x]]] for x in range(src.X.size))
        f3 = tuple(tgt.p.mapping[f2.mapping[src.s.mapping[b]]] for b in range(src.B.size))
        try:
            m = SbpMorphism(src, tgt, Homomorphism(src.X, tgt.X, f1), f2,
                            Homomorphism(src.B, tgt.B, f3))
        except StructuralError:
            continue
        if verify_morphism(m).ok:
            yield m


# ---------------------------------------------------------------------------
# kernel, cokernel, pullback
# ---------------------------------------------------------------------------

def check_kernel(d: SemiBiproduct) -> bool:
    """``k`` is injective with image exactly ``p^-1(identity)``."""
    fibre = {a for a in range(d.A.size) if d.p.mapping[a] == d.B.identity}
    return is_injective(d.k) and set(d.k.mapping) == fibre


def check_cokernel(d: SemiBiproduct) -> bool:
    """``p`` is surjective and identifies exactly what the image of ``k`` forces.

    Only ``p`` and ``k`` are used, so the diagram need not verify.
    """
    theta = congruence_closure(d.A, [(kx, d.A.identity) for kx in d.k.mapping])
    return is_surjective(d.p) and kernel_pair(d.p) == theta


def pullback(d: SemiBiproduct, h: Homomorphism) -> SemiBiproduct:
    """Pull ``d`` back along ``h: C -> B``.

    The carrier is ``{(a, c) : p(a) = h(c)}`` in lexicographic order.
    """
    d.require_verified()
    if h.codomain != d.B:
        raise StructuralError("h must land in the base of the diagram")
    A, C = d.A, h.domain
    pairs = [(a, c) for a in range(A.size) for c in range(C.size)
             if d.p.mapping[a] == h.mapping[c]]
    pos = {pr: i for i, pr in enumerate(pairs)}
    rows = [[pos[(A.table[a][a2], C.table[c][c2])] for (a2, c2) in pairs] for (a, c) in pairs]
    P = FiniteMonoid([f"({A.elements[a]},{C.elements[c]})" for a, c in pairs], rows,
                     pos[(A.identity, C.identity)], f"{A.name}x_{d.B.name}{C.name}")
    p2 = Homomorphism(P, C, tuple(c for _, c in pairs))
    k2 = Homomorphism(d.X, P, tuple(pos[(d.k.mapping[x], C.identity)] for x in range(d.X.size)))
    q2 = PointedMap(P, d.X, tuple(d.q.mapping[a] for a, _ in pairs))
    s2 = PointedMap(C, P, tuple(pos[(d.s.mapping[h.mapping[c]], c)] for c in range(C.size)))
    result = SemiBiproduct(d.X, P, C, p2, k2, q2, s2)
    assert result.verified, f"pullback failed to verify: {result.report.summary()}"
    return result


def pullback_morphism(d: SemiBiproduct, h: Homomorphism, pb: SemiBiproduct) -> SbpMorphism:
    """The square ``(1_X, first projection, h)`` from the pullback down to ``d``."""
    # same carrier order as pullback()
    first = tuple(a for a in range(d.A.size) for c in range(h.domain.size)
                  if d.p.mapping[a] == h.mapping[c])
    return SbpMorphism(pb, d, identity_map(d.X), Homomorphism(pb.A, d.A, first), h)


def biproduct(X: FiniteMonoid, B: FiniteMonoid, name: str = "") -> SemiBiproduct:
    """The product diagram on ``X x B`` with its projections and injections."""
    pairs = list(itertools.product(range(X.size), range(B.size)))
    pos = {pr: i for i, pr in enumerate(pairs)}
    rows = [[pos[(X.table[x][x2], B.table[b][b2])] for (x2, b2) in pairs] for (x, b) in pairs]
    A = FiniteMonoid([f"({X.elements[x]},{B.elements[b]})" for x, b in pairs], rows,
                     pos[(X.identity, B.identity)], name or f"{X.name}x{B.name}")
    return SemiBiproduct(
        X, A, B,
        Homomorphism(A, B, tuple(b for _, b in pairs)),
        Homomorphism(X, A, tuple(pos[(x, B.identity)] for x in range(X.size))),
        PointedMap(A, X, tuple(x for x, _ in pairs)),
        PointedMap(B, A, tuple(pos[(X.identity, b)] for b in range(B.size))),
    )
