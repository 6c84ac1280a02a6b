"""Passing between semi-biproducts and pseudo-actions.

``extract`` reads a pseudo-action off a verified diagram; ``synthesize``
builds the diagram on ``{(x, b) : x^b = x}`` from a pseudo-action. Both act
on morphisms too, and the round trips are certified explicitly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ContractError, StructuralError
from .monoid import FiniteMonoid, Homomorphism, PointedMap, compose, identity_map
from .pseudoaction import PaMorphism, PseudoAction, verify_pa_morphism, verify_pseudo_action
from .report import Failure, LawReport
from .semibiproduct import SbpMorphism, SemiBiproduct, verify_morphism


def extract(d: SemiBiproduct) -> PseudoAction:
    """``x^b = q(kx + sb)``, ``b.x = q(sb + kx)``, ``b x b' = q(sb + sb')``."""
    d.require_verified()
    A, q, k, s = d.A, d.q.mapping, d.k.mapping, d.s.mapping
    xs, bs = range(d.X.size), range(d.B.size)
    pa = PseudoAction(
        d.X, d.B,
        [[q[A.table[k[x]][s[b]]] for b in bs] for x in xs],
        [[q[A.table[s[b]][k[x]]] for x in xs] for b in bs],
        [[q[A.table[s[b]][s[b2]]] for b2 in bs] for b in bs],
    )
    report = verify_pseudo_action(pa)
    assert report.ok, f"extracted pseudo-action fails: {report.summary()}"
    return pa


@dataclass(frozen=True)
class SyntheticCarrier:
    pa: PseudoAction
    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, pa: PseudoAction) -> SyntheticCarrier:
        pairs = tuple((x, b) for x in range(pa.X.size) for b in range(pa.B.size)
                      if pa.rho[x][b] == x)
        return cls(pa, pairs)

    def index(self) -> dict[tuple[int, int], int]:
        return {pr: i for i, pr in enumerate(self.pairs)}

    def names(self) -> list[str]:
        X, B = self.pa.X, self.pa.B
        return [f"({X.elements[x]},{B.elements[b]})" for x, b in self.pairs]


def synthetic_monoid(pa: PseudoAction, name: str = "") -> tuple[FiniteMonoid, SyntheticCarrier]:
    """The carrier with ``(x,b)+(x',b') = ((x + b.x' + b x b')^(bb'), bb')``.

    Raises :class:`StructuralError` when the operation leaves the carrier or
    is not associative, which can only happen for a non-pseudo-action.
    """
    carrier = SyntheticCarrier.of(pa)
    pos = carrier.index()
    W, TB = pa.combined, pa.B.table
    rows = []
    for x, b in carrier.pairs:
        row = []
        for x2, b2 in carrier.pairs:
            target = (int(W[x, b, x2, b2]), TB[b][b2])
            if target not in pos:
                raise StructuralError(
                    f"synthetic operation is not closed: ({pa.X.elements[x]},{pa.B.elements[b]})"
                    f"+({pa.X.elements[x2]},{pa.B.elements[b2]}) leaves the carrier")
            row.append(pos[target])
        rows.append(row)
    unit = (pa.X.identity, pa.B.identity)
    if unit not in pos:
        raise StructuralError("(0,1) is not in the carrier")
    M = FiniteMonoid(carrier.names(), rows, pos[unit], name or f"R({pa.X.name},{pa.B.name})")
    return M, carrier


def synthesize(pa: PseudoAction, check: bool = True) -> SemiBiproduct:
    """The synthetic diagram ``X -> R -> B`` with ``<1,0>``, ``pi_B``, ``pi_X``, ``<0,1>``."""
    if check:
        report = verify_pseudo_action(pa)
        if not report.ok:
            raise ContractError(f"not a pseudo-action: {report.summary()}")
    R, carrier = synthetic_monoid(pa)
    pos = carrier.index()
    X, B = pa.X, pa.B
    d = SemiBiproduct(
        X, R, B,
        Homomorphism(R, B, tuple(b for _, b in carrier.pairs)),
        Homomorphism(X, R, tuple(pos[(x, B.identity)] for x in range(X.size))),
        PointedMap(R, X, tuple(x for x, _ in carrier.pairs)),
        PointedMap(B, R, tuple(pos[(X.identity, b)] for b in range(B.size))),
    )
    if check:
        assert d.verified, f"synthetic diagram fails: {d.report.summary()}"
    return d


def extract_morphism(m: SbpMorphism) -> PaMorphism:
    out = PaMorphism(extract(m.source), extract(m.target), m.f1, m.f3)
    report = verify_pa_morphism(out)
    assert report.ok, f"extracted morphism fails: {report.summary()}"
    return out


def synthesize_morphism(m: PaMorphism, source: SemiBiproduct | None = None,
                        target: SemiBiproduct | None = None) -> SbpMorphism:
    """``(f, h, g)`` with ``h(x, b) = (f(x), g(b))`` between the synthetic diagrams.

    Pass already-synthesized endpoints to avoid rebuilding them.
    """
    report = verify_pa_morphism(m)
    if not report.ok:
        raise ContractError(f"not a morphism of pseudo-actions: {report.summary()}")
    src = source or synthesize(m.source)
    tgt = target or synthesize(m.target)
    src_pairs = SyntheticCarrier.of(m.source).pairs
    tgt_pos = SyntheticCarrier.of(m.target).index()
    h = Homomorphism(src.A, tgt.A, tuple(tgt_pos[(m.f.mapping[x], m.g.mapping[b])]
                                         for x, b in src_pairs))
    out = SbpMorphism(src, tgt, m.f, h, m.g)
    check = verify_morphism(out)
    assert check.ok, f"synthesized morphism fails: {check.summary()}"
    return out


def roundtrip_action(pa: PseudoAction) -> bool:
    """Whether extracting from the synthetic diagram gives back exactly ``pa``."""
    return extract(synthesize(pa)) == pa


class RoundTrip(NamedTuple):
    beta: SbpMorphism | None    # None when the comparison maps are not isomorphisms
    alpha: SbpMorphism | None
    report: LawReport


def comparison_maps(d: SemiBiproduct, synthetic: SemiBiproduct) -> tuple[PointedMap, PointedMap]:
    """``beta(a) = (q a, p a)`` and ``alpha(x, b) = kx + sb`` as plain maps."""
    pairs = SyntheticCarrier.of(extract(d)).pairs
    pos = {pr: i for i, pr in enumerate(pairs)}
    beta = PointedMap(d.A, synthetic.A,
                      tuple(pos[(d.q.mapping[a], d.p.mapping[a])] for a in range(d.A.size)))
    alpha = PointedMap(synthetic.A, d.A,
                       tuple(d.A.table[d.k.mapping[x]][d.s.mapping[b]] for x, b in pairs))
    return beta, alpha


def roundtrip_diagram(d: SemiBiproduct,
                      morphisms: Iterable[SbpMorphism] = ()) -> RoundTrip:
    """Certify that ``d`` is isomorphic to ``synthesize(extract(d))``.

    The comparison maps must be mutually inverse homomorphisms forming
    morphisms of diagrams with identities on ``X`` and ``B``. For every
    supplied morphism out of ``d`` the naturality squares are checked as well.
    """
    d.require_verified()
    syn = synthesize(extract(d))
    beta_map, alpha_map = comparison_maps(d, syn)
    report = LawReport({"beta-hom": [], "alpha-hom": [], "inverse": [],
                        "beta-morphism": [], "alpha-morphism": [], "naturality": []})
    for law, m in (("beta-hom", beta_map), ("alpha-hom", alpha_map)):
        cls = m.classify()
        if cls.witness is not None:
            report.add(law, Failure(law, cls.witness))
    for a in range(d.A.size):
        if alpha_map(beta_map(a)) != a:
            report.add("inverse", Failure("inverse", (d.A.elements[a],)))
            break
    for r in range(syn.A.size):
        if beta_map(alpha_map(r)) != r:
            report.add("inverse", Failure("inverse", (syn.A.elements[r],)))
            break
    if not report.ok:
        return RoundTrip(None, None, report)

    beta = SbpMorphism(d, syn, identity_map(d.X), Homomorphism(d.A, syn.A, beta_map.mapping),
                       identity_map(d.B))
    alpha = SbpMorphism(syn, d, identity_map(d.X), Homomorphism(syn.A, d.A, alpha_map.mapping),
                        identity_map(d.B))
    for law, m in (("beta-morphism", beta), ("alpha-morphism", alpha)):
        for f in verify_morphism(m).failures:
            report.add(law, f)

    for m in morphisms:
        if m.source != d:
            raise StructuralError("naturality morphisms must start at the diagram")
        tgt_syn = synthesize(extract(m.target))
        beta2, alpha2 = comparison_maps(m.target, tgt_syn)
        h = synthesize_morphism(extract_morphism(m), syn, tgt_syn).f2
        for a in range(d.A.size):
            if h(beta_map(a)) != beta2(m.f2(a)):
                report.add("naturality", Failure("naturality", (d.A.elements[a],)))
                break
        for r in range(syn.A.size):
            if m.f2(alpha_map(r)) != alpha2(h(r)):
                report.add("naturality", Failure("naturality", (syn.A.elements[r],)))
                break
    return RoundTrip(beta, alpha, report)


def compose_pa_morphisms(g: PaMorphism, f: PaMorphism) -> PaMorphism:
    if f.target != g.source:
        raise StructuralError("morphisms are not composable")
    return PaMorphism(f.source, g.target, compose(g.f, f.f), compose(g.g, f.g))


def identity_pa_morphism(pa: PseudoAction) -> PaMorphism:
    return PaMorphism(pa, pa, identity_map(pa.X), identity_map(pa.B))


def derived_pairs(pa: PseudoAction) -> list[tuple[int, int]]:
    """``{(x^b, b)}`` in lexicographic order; equals the carrier for a pseudo-action."""
    return sorted({(pa.rho[x][b], b) for x, b in itertools.product(range(pa.X.size),
                                                                  range(pa.B.size))})
