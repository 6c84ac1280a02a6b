"""Building semi-biproducts from a relation ``R`` inside ``X x B``.

A seed fixes ``R``, a map ``u: B -> X`` (so that ``s(b) = (u(b), b)``) and a
fibrewise-injective ``q: R -> X``. Every monoid structure on ``R`` with
``(0,1)`` neutral and ``(x,b) -> b`` a homomorphism is tried; the derived
operations decide whether it yields a semi-biproduct.
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import BudgetExceeded, StructuralError
from .monoid import FiniteMonoid, Homomorphism, PointedMap, enumerate_tables
from .report import Failure, LawReport
from .semibiproduct import SemiBiproduct, check_kernel

DEFAULT_BUDGET = 200_000


class Reason(enum.Enum):
    OPLUS = "⊕≠+"
    CORRECTION = "q(x,b)^b≠q(x,b)"
    NOT_NEUTRAL = "not-neutral"
    PROJECTION = "projection-not-hom"


@dataclass(frozen=True)
class RelationSeed:
    X: FiniteMonoid
    B: FiniteMonoid
    pairs: tuple[tuple[int, int], ...]
    u: tuple[int, ...]
    q: tuple[int, ...]          # aligned with ``pairs``

    def __post_init__(self):
        pairs = tuple((int(x), int(b)) for x, b in self.pairs)
        if len(set(pairs)) != len(pairs):
            raise StructuralError("relation lists a pair twice")
        if any(not (0 <= x < self.X.size and 0 <= b < self.B.size) for x, b in pairs):
            raise StructuralError("relation pair out of range")
        if len(self.u) != self.B.size or len(self.q) != len(pairs):
            raise StructuralError("u must cover B and q must cover R")
        # carrier order is lexicographic in (x, b)
        order = sorted(range(len(pairs)), key=lambda i: pairs[i])
        object.__setattr__(self, "pairs", tuple(pairs[i] for i in order))
        object.__setattr__(self, "q", tuple(int(self.q[i]) for i in order))
        object.__setattr__(self, "u", tuple(int(v) for v in self.u))

    @classmethod
    def standard(cls, X: FiniteMonoid, B: FiniteMonoid,
                 pairs: Sequence[tuple[int, int]]) -> RelationSeed:
        """``u = 0`` and ``q`` the first projection."""
        return cls(X, B, tuple(pairs), (X.identity,) * B.size, tuple(x for x, _ in pairs))

    def index(self) -> dict[tuple[int, int], int]:
        return {pr: i for i, pr in enumerate(self.pairs)}

    def names(self) -> list[str]:
        return [f"({self.X.elements[x]},{self.B.elements[b]})" for x, b in self.pairs]


def check_seed(seed: RelationSeed) -> LawReport:
    """The three seed conditions, each with its first witness."""
    X, B = seed.X, seed.B
    pos = seed.index()
    report = LawReport({"x R 1 and q(x,1)=x": [], "u(b) R b and q(u(b),b)=0": [],
                        "q injective on fibres": []})
    for x in range(X.size):
        i = pos.get((x, B.identity))
        if i is None or seed.q[i] != x:
            report.add("x R 1 and q(x,1)=x", Failure(
                "x R 1 and q(x,1)=x", (X.elements[x],)))
            break
    for b in range(B.size):
        i = pos.get((seed.u[b], b))
        if i is None or seed.q[i] != X.identity:
            report.add("u(b) R b and q(u(b),b)=0", Failure(
                "u(b) R b and q(u(b),b)=0", (B.elements[b],)))
            break
    seen: dict[tuple[int, int], int] = {}
    for (x, b), qv in zip(seed.pairs, seed.q):
        other = seen.setdefault((b, qv), x)
        if other != x:
            report.add("q injective on fibres", Failure(
                "q injective on fibres", (X.elements[other], X.elements[x], B.elements[b])))
            break
    return report


@dataclass
class Candidate:
    """One monoid structure on ``R`` and what the construction made of it."""

    monoid: FiniteMonoid
    oplus: tuple[tuple[int, ...], ...]
    rho: tuple[tuple[int, ...], ...]
    phi: tuple[tuple[int, ...], ...]
    gamma: tuple[tuple[int, ...], ...]
    diagram: SemiBiproduct | None = None
    reason: Reason | None = None
    witness: Failure | None = None

    @property
    def accepted(self) -> bool:
        return self.diagram is not None


@dataclass
class SearchResult:
    seed: RelationSeed
    candidate_tables: int = 0
    accepted: list[Candidate] = field(default_factory=list)
    rejected: list[Candidate] = field(default_factory=list)


def _derive(seed: RelationSeed, table) -> tuple:
    X, B = seed.X, seed.B
    pos = seed.index()
    q = seed.q
    k = [pos[(x, B.identity)] for x in range(X.size)]
    s = [pos[(seed.u[b], b)] for b in range(B.size)]
    oplus = tuple(tuple(q[table[k[x]][k[x2]]] for x2 in range(X.size)) for x in range(X.size))
    gamma = tuple(tuple(q[table[s[b]][s[b2]]] for b2 in range(B.size)) for b in range(B.size))
    phi = tuple(tuple(q[table[s[b]][k[x]]] for x in range(X.size)) for b in range(B.size))
    rho = tuple(tuple(q[table[k[x]][s[b]]] for b in range(B.size)) for x in range(X.size))
    return oplus, rho, phi, gamma, k, s


def _judge(seed: RelationSeed, table, constrained: bool) -> Candidate:
    X, B = seed.X, seed.B
    identity = _identity_index(seed) if constrained else _find_identity(table)
    M = FiniteMonoid(seed.names(), table, identity, f"R({X.name},{B.name})")
    oplus, rho, phi, gamma, k, s = _derive(seed, table)
    cand = Candidate(M, oplus, rho, phi, gamma)
    unit = _identity_index(seed)
    if M.identity != unit:
        cand.reason = Reason.NOT_NEUTRAL
        cand.witness = Failure(Reason.NOT_NEUTRAL.value, (M.elements[unit],))
        return cand
    proj = [b for _, b in seed.pairs]
    for i, j in itertools.product(range(M.size), repeat=2):
        if proj[table[i][j]] != B.table[proj[i]][proj[j]]:
            cand.reason = Reason.PROJECTION
            cand.witness = Failure(Reason.PROJECTION.value, (M.elements[i], M.elements[j]))
            return cand
    for x, x2 in itertools.product(range(X.size), repeat=2):
        if oplus[x][x2] != X.table[x][x2]:
            cand.reason = Reason.OPLUS
            cand.witness = Failure(Reason.OPLUS.value, (X.elements[x], X.elements[x2]),
                                   X.elements[oplus[x][x2]], X.elements[X.table[x][x2]])
            return cand
    for (x, b), qv in zip(seed.pairs, seed.q):
        if rho[qv][b] != qv:
            cand.reason = Reason.CORRECTION
            cand.witness = Failure(Reason.CORRECTION.value, (X.elements[x], B.elements[b]),
                                   X.elements[rho[qv][b]], X.elements[qv])
            return cand
    d = SemiBiproduct(
        X, M, B,
        Homomorphism(M, B, tuple(proj)),
        Homomorphism(X, M, tuple(k)),
        PointedMap(M, X, seed.q),
        PointedMap(B, M, tuple(s)),
    )
    # (x,b) = (q(x,b),1) + (u(b),b) on every element
    for i, ((x, b), qv) in enumerate(zip(seed.pairs, seed.q)):
        assert table[k[qv]][s[b]] == i, f"decomposition fails at ({x},{b})"
    assert d.verified, f"accepted structure does not verify: {d.report.summary()}"
    cand.diagram = d
    return cand


def _identity_index(seed: RelationSeed) -> int:
    return seed.index()[(seed.X.identity, seed.B.identity)]


def _find_identity(table) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][i] == i == table[i][e] for i in range(n)):
            return e
    return -1


def monoid_structures(seed: RelationSeed, constrained: bool = True) -> Iterator[tuple]:
    """Associative tables on ``R``.

    Constrained: ``(0,1)`` is the identity and each product lies in the fibre
    over the product of the second coordinates. Unconstrained: every
    associative table with some identity element.
    """
    n = len(seed.pairs)
    if constrained:
        B = seed.B
        fibre: dict[int, list[int]] = {}
        for i, (_, b) in enumerate(seed.pairs):
            fibre.setdefault(b, []).append(i)
        proj = [b for _, b in seed.pairs]

        def allowed(i, j):
            return fibre.get(B.table[proj[i]][proj[j]], [])

        yield from enumerate_tables(n, _identity_index(seed), allowed)
        return
    seen = set()
    for e in range(n):
        for table in enumerate_tables(n, e):
            if table not in seen:
                seen.add(table)
                yield table


def build_from_relation(seed: RelationSeed, constrained: bool = True,
                        budget: int | None = None) -> SearchResult:
    """Try every admissible monoid structure on ``R``.

    With ``constrained`` (the default) only structures with ``(0,1)`` neutral
    and the second projection a homomorphism are generated, so the last two
    rejection reasons never occur.
    """
    report = check_seed(seed)
    if not report.ok:
        raise StructuralError(f"invalid relation seed: {report.summary()}", report)
    result = SearchResult(seed)
    for table in monoid_structures(seed, constrained):
        result.candidate_tables += 1
        if budget is not None and result.candidate_tables > budget:
            raise BudgetExceeded(f"more than {budget} tables on R")
        cand = _judge(seed, table, constrained)
        (result.accepted if cand.accepted else result.rejected).append(cand)
    return result


def derived_rows(cand: Candidate, seed: RelationSeed,
                 rows: Sequence[tuple[str, str, str, str]]) -> list[dict]:
    """Tabulate ``x (+) x'``, ``b x b'``, ``b.x`` and ``x^b`` for named ``(x, b, x', b')``."""
    X, B = seed.X, seed.B
    out = []
    for x, b, x2, b2 in rows:
        xi, bi, x2i, b2i = X.index(x), B.index(b), X.index(x2), B.index(b2)
        out.append({
            "x": x, "b": b, "x'": x2, "b'": b2,
            "x(+)x'": X.elements[cand.oplus[xi][x2i]],
            "bxb'": X.elements[cand.gamma[bi][b2i]],
            "b.x": X.elements[cand.phi[bi][xi]],
            "x^b": X.elements[cand.rho[xi][bi]],
        })
    return out


# ---------------------------------------------------------------------------
# enumeration over all seeds
# ---------------------------------------------------------------------------

def iter_seeds(X: FiniteMonoid, B: FiniteMonoid) -> Iterator[RelationSeed]:
    """All seeds, ordered by ``u``, then ``R``, then ``q``.

    ``u(1) = 0`` is forced: ``(u(1), 1)`` lies in the fibre over 1, where
    ``q`` is the identity, and ``q(u(1), 1) = 0``.
    """
    zero, one = X.identity, B.identity
    others = [b for b in range(B.size) if b != one]
    nonzero = [x for x in range(X.size) if x != zero]
    for u_vals in itertools.product(range(X.size), repeat=len(others)):
        u = [zero] * B.size
        for b, v in zip(others, u_vals):
            u[b] = v
        fibre_options = []
        for b in others:
            rest = [x for x in range(X.size) if x != u[b]]
            choices = []
            for r in range(len(rest) + 1):
                for extra in itertools.combinations(rest, r):
                    fibre = sorted((u[b],) + extra)
                    # q: u(b) -> 0, the rest injectively into X \ {0}
                    for qv in itertools.permutations(nonzero, len(extra)):
                        qmap = {u[b]: zero, **dict(zip(extra, qv))}
                        choices.append((fibre, qmap))
            fibre_options.append(choices)
        for combo in itertools.product(*fibre_options):
            pairs, qvals = [], []
            for x in range(X.size):
                pairs.append((x, one))
                qvals.append(x)
            for b, (fibre, qmap) in zip(others, combo):
                for x in fibre:
                    pairs.append((x, b))
                    qvals.append(qmap[x])
            yield RelationSeed(X, B, tuple(pairs), tuple(u), tuple(qvals))


@dataclass
class EnumerationResult:
    diagrams: list[SemiBiproduct]
    seeds: int
    candidate_tables: int
    complete: bool


def _accepted(seed: RelationSeed) -> tuple[int, list[SemiBiproduct]]:
    res = build_from_relation(seed)
    return res.candidate_tables, [c.diagram for c in res.accepted]


def enumerate_semibiproducts(X: FiniteMonoid, B: FiniteMonoid,
                             budget: int | None = DEFAULT_BUDGET,
                             jobs: int = 1) -> EnumerationResult:
    """Every diagram the construction produces over every seed.

    Identical diagrams are reported once; isomorphic ones are not merged.
    When more than ``budget`` candidate tables are examined the enumeration
    stops and the result is flagged incomplete.
    """
    seeds = list(iter_seeds(X, B))
    diagrams: list[SemiBiproduct] = []
    seen: set[SemiBiproduct] = set()
    tables = 0
    complete = True
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = pool.map(_accepted, seeds, chunksize=max(1, len(seeds) // (4 * jobs)))
            batches = list(outcomes)
    else:
        batches = map(_accepted, seeds)
    for count, found in batches:
        tables += count
        for d in found:
            if d not in seen:
                seen.add(d)
                diagrams.append(d)
        if budget is not None and tables > budget:
            complete = False
            break
    return EnumerationResult(diagrams, len(seeds), tables, complete)


# ---------------------------------------------------------------------------
# completing a bare extension
# ---------------------------------------------------------------------------

def complete_extension(X: FiniteMonoid, A: FiniteMonoid, B: FiniteMonoid,
                       k: Homomorphism, p: Homomorphism) -> list[tuple[PointedMap, PointedMap]]:
    """All ``(q, s)`` making ``X -k-> A -p-> B`` a semi-biproduct.

    ``s`` ranges over pointed sections of ``p``; ``q`` is pinned on the image
    of ``k`` (``qk = 1``) and of ``s`` (``qs = 0``) and free elsewhere.
    """
    if any(p.mapping[kx] != B.identity for kx in k.mapping):
        raise StructuralError("p after k is not the zero map")
    probe = SemiBiproduct(X, A, B, p, k, PointedMap(A, X, (X.identity,) * A.size),
                          PointedMap(B, A, (A.identity,) * B.size))
    if not check_kernel(probe):
        raise StructuralError("k is not the kernel inclusion of p")
    fibres = [[a for a in range(A.size) if p.mapping[a] == b] for b in range(B.size)]
    if any(not f for f in fibres):
        return []
    out = []
    others = [b for b in range(B.size) if b != B.identity]
    for svals in itertools.product(*(fibres[b] for b in others)):
        s = [A.identity] * B.size
        for b, a in zip(others, svals):
            s[b] = a
        pinned: dict[int, int] = {k.mapping[x]: x for x in range(X.size)}
        if any(pinned.get(s[b], X.identity) != X.identity for b in range(B.size)):
            continue
        for b in range(B.size):
            pinned[s[b]] = X.identity
        free = [a for a in range(A.size) if a not in pinned]
        for qvals in itertools.product(range(X.size), repeat=len(free)):
            q = [0] * A.size
            for a, x in pinned.items():
                q[a] = x
            for a, x in zip(free, qvals):
                q[a] = x
            if all(A.table[k.mapping[q[a]]][s[p.mapping[a]]] == a for a in range(A.size)):
                out.append((PointedMap(A, X, tuple(q)), PointedMap(B, A, tuple(s))))
    return out


# ---------------------------------------------------------------------------
# the order relation on the naturals, truncated
# ---------------------------------------------------------------------------

@dataclass
class NatDemoReport:
    bound: int
    elements: int
    checks: dict[str, bool]
    label: str = "partial verification (bounded)"

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def nat_order_demo(bound: int) -> NatDemoReport:
    """Pointwise checks of ``{(x, b) : x >= b}`` under addition, up to ``bound``.

    Maps: ``p(x>=b) = b``, ``k(x) = (x>=0)``, ``q(x>=b) = x-b``,
    ``s(b) = (b>=b)``; comparison ``beta(x>=b) = (x-b, b)``,
    ``alpha(x, b) = (x+b >= b)``. Only sums that stay within the bound are
    examined, so this is evidence, not a proof.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    R = [(x, b) for x in range(bound + 1) for b in range(x + 1)]
    Rset = set(R)
    nats = range(bound + 1)

    def p(a): return a[1]
    def k(x): return (x, 0)
    def q(a): return a[0] - a[1]
    def s(b): return (b, b)
    def add(a, c): return (a[0] + c[0], a[1] + c[1])
    def beta(a): return (a[0] - a[1], a[1])
    def alpha(x, b): return (x + b, b)

    in_bound = [(a, c) for a in R for c in R if a[0] + c[0] <= bound]
    pairs = [(x, b) for x in nats for b in nats if x + b <= bound]
    checks = {
        "ps=1": all(p(s(b)) == b for b in nats),
        "qk=1": all(q(k(x)) == x for x in nats),
        "pk=0": all(p(k(x)) == 0 for x in nats),
        "qs=0": all(q(s(b)) == 0 for b in nats),
        "kq+sp=1": all(add(k(q(a)), s(p(a))) == a for a in R),
        "closed": all(add(a, c) in Rset for a, c in in_bound),
        "p,k hom": all(p(add(a, c)) == p(a) + p(c) for a, c in in_bound)
        and all(k(x + y) == add(k(x), k(y)) for x in nats for y in nats if x + y <= bound),
        "q,s hom": all(q(add(a, c)) == q(a) + q(c) for a, c in in_bound)
        and all(s(b + c) == add(s(b), s(c)) for b in nats for c in nats if b + c <= bound),
        "alpha.beta=1": all(alpha(*beta(a)) == a for a in R),
        "beta.alpha=1": all(beta(alpha(x, b)) == (x, b) for x, b in pairs),
        "beta hom": all(beta(add(a, c)) == tuple(map(sum, zip(beta(a), beta(c))))
                        for a, c in in_bound),
        "alpha hom": all(alpha(x + x2, b + b2) == add(alpha(x, b), alpha(x2, b2))
                         for x, b in pairs for x2, b2 in pairs if x + b + x2 + b2 <= bound),
        "schreier": all(q(add(k(x), s(b))) == x for x, b in pairs),
    }
    return NatDemoReport(bound, len(R), checks)
