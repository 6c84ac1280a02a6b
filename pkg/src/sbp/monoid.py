"""Finite monoids as Cayley tables, maps between them, and the standard
constructions used everywhere else: kernels, products, congruences,
quotients and exhaustive enumeration of tables and homomorphisms.

Elements are addressed by index in memory and by name in files. A monoid
never shares element identity with another monoid; maps are explicit.
"""
from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import SizeLimitError, StructuralError
from .report import Failure, LawReport

DEFAULT_MAX_SIZE = 64

UNDEFINED = -1


def max_size() -> int:
    """Largest monoid the package will build (``SBP_MAX_SIZE``, default 64)."""
    return int(os.environ.get("SBP_MAX_SIZE", DEFAULT_MAX_SIZE))


# ---------------------------------------------------------------------------
# validation of raw tables
# ---------------------------------------------------------------------------

def _first_assoc_failure(T: np.ndarray):
    lhs = T[T]          # lhs[i, j, k] = T[T[i, j], k]
    rhs = T[:, T]       # rhs[i, j, k] = T[i, T[j, k]]
    bad = np.argwhere(lhs != rhs)
    return bad, lhs, rhs


def validate_monoid(elements: Sequence, table: Sequence, identity,
                    exhaustive: bool = False) -> LawReport:
    """Check raw table data against the monoid laws.

    ``table`` cells may be element names, indices, or ``None`` for an
    undefined cell; ``identity`` may be a name or an index. Malformed input
    (non-square table, unknown or duplicate names) is reported under the
    ``malformed`` law instead of raising.
    """
    report = LawReport({"malformed": [], "totality": [], "identity": [],
                        "associativity": []})
    names = [str(e) for e in elements]
    n = len(names)
    seen: set[str] = set()
    for name in names:
        if name in seen:
            report.add("malformed", Failure("malformed", (name,), "duplicate element name"))
            return report
        seen.add(name)
    index = {name: i for i, name in enumerate(names)}

    if n == 0:
        report.add("malformed", Failure("malformed", (), "no elements"))
        return report
    if isinstance(identity, str):
        if identity not in index:
            report.add("malformed", Failure("malformed", (identity,), "unknown identity"))
            return report
        e = index[identity]
    elif isinstance(identity, (int, np.integer)) and 0 <= identity < n:
        e = int(identity)
    else:
        report.add("malformed", Failure("malformed", (str(identity),), "bad identity"))
        return report

    if len(table) != n or any(len(row) != n for row in table):
        report.add("malformed", Failure("malformed", (), "table is not square"))
        return report

    T = np.full((n, n), UNDEFINED, dtype=np.int64)
    for i, row in enumerate(table):
        for j, cell in enumerate(row):
            if cell is None:
                value = UNDEFINED
            elif isinstance(cell, str):
                if cell not in index:
                    report.add("malformed", Failure(
                        "malformed", (names[i], names[j]), f"unknown element {cell!r}"))
                    return report
                value = index[cell]
            elif isinstance(cell, (int, np.integer)) and not isinstance(cell, bool):
                value = int(cell) if 0 <= cell < n else UNDEFINED
            else:
                report.add("malformed", Failure(
                    "malformed", (names[i], names[j]), f"bad cell {cell!r}"))
                return report
            if value == UNDEFINED and (exhaustive or not report.laws["totality"]):
                report.add("totality", Failure("totality", (names[i], names[j])))
            T[i, j] = value

    total = not report.laws["totality"]
    for i in range(n):
        for lhs, rhs in ((T[e, i], i), (T[i, e], i)):
            if lhs != UNDEFINED and lhs != rhs:
                if exhaustive or not report.laws["identity"]:
                    report.add("identity", Failure(
                        "identity", (names[e], names[i]), names[lhs], names[rhs]))

    if total:
        bad, lhs, rhs = _first_assoc_failure(T)
        for i, j, k in (bad if exhaustive else bad[:1]):
            report.add("associativity", Failure(
                "associativity", (names[i], names[j], names[k]),
                names[lhs[i, j, k]], names[rhs[i, j, k]]))
    else:
        for i, j, k in itertools.product(range(n), repeat=3):
            ij, jk = T[i, j], T[j, k]
            if UNDEFINED in (ij, jk):
                continue
            left, right = T[ij, k], T[i, jk]
            if UNDEFINED in (left, right) or left == right:
                continue
            report.add("associativity", Failure(
                "associativity", (names[i], names[j], names[k]), names[left], names[right]))
            if not exhaustive:
                break
    return report


# ---------------------------------------------------------------------------
# monoids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteMonoid:
    """A monoid on ``elements`` with ``table[i][j]`` the index of ``i + j``."""

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(str(e) for e in self.elements))
        object.__setattr__(self, "table", tuple(tuple(int(c) for c in row) for row in self.table))
        object.__setattr__(self, "identity", int(self.identity))
        if len(self.elements) > max_size():
            raise SizeLimitError(
                f"monoid {self.name or '?'} has {len(self.elements)} elements; "
                f"maximum is {max_size()}")
        report = validate_monoid(self.elements, self.table, self.identity)
        if not report.ok:
            raise StructuralError(
                f"{self.name or 'table'} is not a monoid: {report.summary()}", report)

    @classmethod
    def from_names(cls, elements: Sequence[str], table: Sequence[Sequence[str]],
                   identity: str | None = None, name: str = "") -> FiniteMonoid:
        """Build from a table of element names; the identity defaults to the first element."""
        elements = [str(e) for e in elements]
        report = validate_monoid(elements, table, identity if identity is not None else 0)
        if not report.ok:
            raise StructuralError(f"{name or 'table'} is not a monoid: {report.summary()}", report)
        index = {e: i for i, e in enumerate(elements)}
        rows = [[index[c] for c in row] for row in table]
        e = index[identity] if identity is not None else 0
        return cls(tuple(elements), tuple(map(tuple, rows)), e, name)

    @classmethod
    def trivial(cls, name: str = "1", element: str = "0") -> FiniteMonoid:
        return cls((element,), ((0,),), 0, name)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteMonoid({self.name or '?'}, {list(self.elements)})"

    @property
    def size(self) -> int:
        return len(self.elements)

    def op(self, i: int, j: int) -> int:
        return self.table[i][j]

    def sum(self, *items: int) -> int:
        acc = self.identity
        for i in items:
            acc = self.table[acc][i]
        return acc

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"{name!r} is not an element of {self.name or 'monoid'}") from None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def is_commutative(self) -> bool:
        return bool((self.array == self.array.T).all())

    def is_right_cancellable(self) -> bool:
        # x + z = y + z implies x = y: every column is injective
        return all(len(set(self.array[:, z].tolist())) == self.size for z in range(self.size))

    def is_group(self) -> bool:
        return all(self.identity in row for row in self.table)

    def with_name(self, name: str) -> FiniteMonoid:
        return FiniteMonoid(self.elements, self.table, self.identity, name)


def restrict(M: FiniteMonoid, subset: Iterable[int], name: str = "") -> FiniteMonoid:
    """The submonoid on ``subset`` (kept in index order), re-indexed from 0."""
    keep = sorted(set(subset))
    pos = {old: new for new, old in enumerate(keep)}
    if M.identity not in pos:
        raise StructuralError("subset does not contain the identity")
    rows = []
    for i in keep:
        row = []
        for j in keep:
            c = M.table[i][j]
            if c not in pos:
                raise StructuralError(
                    f"subset not closed: {M.elements[i]}+{M.elements[j]}={M.elements[c]}")
            row.append(pos[c])
        rows.append(row)
    return FiniteMonoid(tuple(M.elements[i] for i in keep), rows, pos[M.identity], name)


def product(M: FiniteMonoid, N: FiniteMonoid, name: str = "") -> FiniteMonoid:
    """Cartesian product with componentwise operation, elements named ``(m,n)``."""
    pairs = list(itertools.product(range(M.size), range(N.size)))
    pos = {pr: i for i, pr in enumerate(pairs)}
    rows = [[pos[(M.table[a][c], N.table[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    elements = [f"({M.elements[a]},{N.elements[b]})" for a, b in pairs]
    return FiniteMonoid(elements, rows, pos[(M.identity, N.identity)],
                        name or f"{M.name}x{N.name}")


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------

class MapKind(enum.Enum):
    NOT_POINTED = "not_pointed"
    POINTED_ONLY = "pointed_only"
    HOMOMORPHISM = "homomorphism"


class Classification(NamedTuple):
    kind: MapKind
    witness: tuple[str, ...] | None = None


def preservation_failures(domain: FiniteMonoid, codomain: FiniteMonoid,
                          mapping: Sequence[int]) -> list[tuple[int, int]]:
    """All pairs ``(a, b)`` with ``f(a+b) != f(a)+f(b)``, in index order."""
    f = np.asarray(mapping, dtype=np.int64)
    lhs = f[domain.array]
    rhs = codomain.array[f[:, None], f[None, :]]
    return [(int(a), int(b)) for a, b in np.argwhere(lhs != rhs)]


def classify_map(domain: FiniteMonoid, codomain: FiniteMonoid,
                 mapping: Sequence[int]) -> Classification:
    """Classify a total map as not pointed, pointed only, or a homomorphism.

    The witness is the identity's name for an unpointed map and the first
    non-preserved pair otherwise.
    """
    if len(mapping) != domain.size or any(not 0 <= v < codomain.size for v in mapping):
        raise StructuralError("mapping is not a total map between the given monoids")
    if mapping[domain.identity] != codomain.identity:
        return Classification(MapKind.NOT_POINTED, (domain.elements[domain.identity],))
    bad = preservation_failures(domain, codomain, mapping)
    if bad:
        a, b = bad[0]
        return Classification(MapKind.POINTED_ONLY, (domain.elements[a], domain.elements[b]))
    return Classification(MapKind.HOMOMORPHISM)


@dataclass(frozen=True)
class PointedMap:
    """An identity-preserving map of underlying sets."""

    domain: FiniteMonoid
    codomain: FiniteMonoid
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        if len(self.mapping) != self.domain.size:
            raise StructuralError(
                f"map from {self.domain.name} has {len(self.mapping)} values, "
                f"expected {self.domain.size}")
        if any(not 0 <= v < self.codomain.size for v in self.mapping):
            raise StructuralError(f"map into {self.codomain.name} has out-of-range values")
        if self.mapping[self.domain.identity] != self.codomain.identity:
            raise StructuralError(
                f"map {self.domain.name}->{self.codomain.name} does not preserve the identity")

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __repr__(self) -> str:
        pairs = ", ".join(f"{self.domain.elements[i]}->{self.codomain.elements[v]}"
                          for i, v in enumerate(self.mapping))
        return f"{type(self).__name__}({self.domain.name}->{self.codomain.name}: {pairs})"

    def classify(self) -> Classification:
        return classify_map(self.domain, self.codomain, self.mapping)

    def is_homomorphism(self) -> bool:
        return not preservation_failures(self.domain, self.codomain, self.mapping)

    def same_as(self, other: PointedMap) -> bool:
        """Equal as maps, regardless of whether either is typed as a homomorphism."""
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.mapping == other.mapping)

    @classmethod
    def from_names(cls, domain: FiniteMonoid, codomain: FiniteMonoid,
                   assignment: dict[str, str]):
        missing = [e for e in domain.elements if e not in assignment]
        extra = [e for e in assignment if e not in domain._index]
        if missing or extra:
            raise StructuralError(
                f"map {domain.name}->{codomain.name}: missing {missing}, unknown {extra}")
        return cls(domain, codomain, tuple(codomain.index(assignment[e]) for e in domain.elements))


@dataclass(frozen=True, repr=False)
class Homomorphism(PointedMap):
    """A pointed map that also preserves the operation."""

    def __post_init__(self):
        super().__post_init__()
        bad = preservation_failures(self.domain, self.codomain, self.mapping)
        if bad:
            a, b = bad[0]
            d = self.domain
            raise StructuralError(
                f"map {d.name}->{self.codomain.name} is not a homomorphism at "
                f"({d.elements[a]}, {d.elements[b]})")


def as_homomorphism(m: PointedMap) -> Homomorphism:
    return m if isinstance(m, Homomorphism) else Homomorphism(m.domain, m.codomain, m.mapping)


def as_pointed(m: PointedMap) -> PointedMap:
    return PointedMap(m.domain, m.codomain, m.mapping)


def identity_map(M: FiniteMonoid) -> Homomorphism:
    return Homomorphism(M, M, tuple(range(M.size)))


def zero_map(M: FiniteMonoid, N: FiniteMonoid) -> Homomorphism:
    """The constant map onto the identity of ``N``."""
    return Homomorphism(M, N, (N.identity,) * M.size)


def compose(g: PointedMap, f: PointedMap) -> PointedMap:
    """``g`` after ``f``; a homomorphism when both factors are."""
    if f.codomain != g.domain:
        raise StructuralError(
            f"cannot compose {g.domain.name}->{g.codomain.name} after "
            f"{f.domain.name}->{f.codomain.name}")
    cls = Homomorphism if isinstance(f, Homomorphism) and isinstance(g, Homomorphism) else PointedMap
    return cls(f.domain, g.codomain, tuple(g.mapping[v] for v in f.mapping))


def is_isomorphism(f: Homomorphism) -> bool:
    return len(set(f.mapping)) == f.domain.size == f.codomain.size


def is_injective(f: PointedMap) -> bool:
    return len(set(f.mapping)) == f.domain.size


def is_surjective(f: PointedMap) -> bool:
    return len(set(f.mapping)) == f.codomain.size


def kernel(p: Homomorphism) -> tuple[FiniteMonoid, Homomorphism]:
    """The submonoid sent to the identity, with its inclusion."""
    fibre = [a for a, v in enumerate(p.mapping) if v == p.codomain.identity]
    K = restrict(p.domain, fibre, name=f"ker({p.domain.name})")
    return K, Homomorphism(K, p.domain, tuple(fibre))


# ---------------------------------------------------------------------------
# congruences and quotients
# ---------------------------------------------------------------------------

def _normalize(class_of: Sequence[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(c, len(relabel)) for c in class_of)


@dataclass(frozen=True)
class Partition:
    base: FiniteMonoid
    class_of: tuple[int, ...]

    def __post_init__(self):
        if len(self.class_of) != self.base.size:
            raise StructuralError("partition does not cover the monoid")
        # class ids are renumbered by least member
        object.__setattr__(self, "class_of", _normalize(self.class_of))

    @property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(max(self.class_of) + 1)]
        for a, c in enumerate(self.class_of):
            out[c].append(a)
        return out

    def named_classes(self) -> list[list[str]]:
        return [[self.base.elements[a] for a in cls] for cls in self.classes]

    def compatibility_failure(self) -> tuple[int, int, int] | None:
        """First ``(a, b, c)`` with ``a ~ b`` but a translate by ``c`` splitting them."""
        T = self.base.table
        cls = self.class_of
        n = self.base.size
        for a, b in itertools.product(range(n), repeat=2):
            if a >= b or cls[a] != cls[b]:
                continue
            for c in range(n):
                if cls[T[a][c]] != cls[T[b][c]] or cls[T[c][a]] != cls[T[c][b]]:
                    return a, b, c
        return None

    def is_congruence(self) -> bool:
        return self.compatibility_failure() is None


def discrete_partition(M: FiniteMonoid) -> Partition:
    return Partition(M, tuple(range(M.size)))


def kernel_pair(f: PointedMap) -> Partition:
    return Partition(f.domain, f.mapping)


def congruence_closure(M: FiniteMonoid, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest two-sided congruence containing ``pairs`` (union-find + worklist)."""
    parent = list(range(M.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    T = M.table
    work = list(pairs)
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        for c in range(M.size):
            work.append((T[a][c], T[b][c]))
            work.append((T[c][a], T[c][b]))
    return Partition(M, tuple(find(a) for a in range(M.size)))


def quotient(M: FiniteMonoid, part: Partition, name: str = "") -> tuple[FiniteMonoid, Homomorphism]:
    """Quotient monoid by a congruence, with the projection.

    Classes are named ``[rep]`` after their least member and ordered by it.
    """
    if part.base != M:
        raise StructuralError("partition is over a different monoid")
    bad = part.compatibility_failure()
    if bad is not None:
        a, b, c = (M.elements[i] for i in bad)
        raise StructuralError(f"not a congruence: {a} ~ {b} but translation by {c} separates them")
    classes = part.classes
    reps = [cls[0] for cls in classes]
    rows = [[part.class_of[M.table[r][s]] for s in reps] for r in reps]
    Q = FiniteMonoid([f"[{M.elements[r]}]" for r in reps], rows,
                     part.class_of[M.identity], name or f"{M.name}/~")
    return Q, Homomorphism(M, Q, part.class_of)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_pointed_maps(M: FiniteMonoid, N: FiniteMonoid) -> Iterator[PointedMap]:
    """Every identity-preserving map, in lexicographic order of mapping arrays."""
    free = [i for i in range(M.size) if i != M.identity]
    for values in itertools.product(range(N.size), repeat=len(free)):
        mapping = [N.identity] * M.size
        for i, v in zip(free, values):
            mapping[i] = v
        yield PointedMap(M, N, tuple(mapping))


def enumerate_homs(M: FiniteMonoid, N: FiniteMonoid) -> Iterator[Homomorphism]:
    """Every homomorphism, in lexicographic order, by pruned backtracking."""
    n = M.size
    TM, TN = M.table, N.table
    f = [UNDEFINED] * n

    def consistent(i: int) -> bool:
        # every product whose operands and result are assigned, touching i
        for a in range(i + 1):
            for b in range(i + 1):
                c = TM[a][b]
                if c <= i and (a == i or b == i or c == i) and f[c] != TN[f[a]][f[b]]:
                    return False
        return True

    def extend(i: int) -> Iterator[Homomorphism]:
        if i == n:
            yield Homomorphism(M, N, tuple(f))
            return
        choices = (N.identity,) if i == M.identity else range(N.size)
        for v in choices:
            f[i] = v
            if consistent(i):
                yield from extend(i + 1)
        f[i] = UNDEFINED

    yield from extend(0)


def enumerate_tables(n: int, identity: int,
                     allowed: Callable[[int, int], Iterable[int]] | None = None
                     ) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All associative tables on ``n`` elements with ``identity`` as two-sided unit.

    Cells are filled row-major with values from ``allowed(i, j)`` (default:
    all of them); after each assignment every associativity instance that
    reads the new cell and is fully assigned is checked.
    """
    T = [[UNDEFINED] * n for _ in range(n)]
    for i in range(n):
        T[identity][i] = i
        T[i][identity] = i
    cells = [(i, j) for i in range(n) for j in range(n) if identity not in (i, j)]
    options = [tuple(allowed(i, j)) if allowed else tuple(range(n)) for i, j in cells]

    def ok(i: int, j: int) -> bool:
        v = T[i][j]
        for c in range(n):
            # (i+j)+c vs i+(j+c)
            left, jc = T[v][c], T[j][c]
            if left != UNDEFINED and jc != UNDEFINED:
                right = T[i][jc]
                if right != UNDEFINED and left != right:
                    return False
            # (c+i)+j vs c+(i+j)
            ci, right = T[c][i], T[c][v]
            if ci != UNDEFINED and right != UNDEFINED:
                left = T[ci][j]
                if left != UNDEFINED and left != right:
                    return False
        for a in range(n):
            for b in range(n):
                # (a+b)+j with a+b = i
                if T[a][b] == i:
                    bj = T[b][j]
                    if bj != UNDEFINED:
                        right = T[a][bj]
                        if right != UNDEFINED and right != v:
                            return False
                # i+(a+b) with a+b = j
                if T[a][b] == j:
                    ia = T[i][a]
                    if ia != UNDEFINED:
                        left = T[ia][b]
                        if left != UNDEFINED and left != v:
                            return False
        return True

    def fill(pos: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if pos == len(cells):
            yield tuple(tuple(row) for row in T)
            return
        i, j = cells[pos]
        for v in options[pos]:
            T[i][j] = v
            if ok(i, j):
                yield from fill(pos + 1)
        T[i][j] = UNDEFINED

    yield from fill(0)


def enumerate_monoids(n: int, names: Sequence[str] | None = None,
                      prefix: str = "M") -> Iterator[FiniteMonoid]:
    """All monoid tables on ``n`` labelled elements with identity at index 0.

    Isomorphic copies are not merged.
    """
    names = list(names) if names is not None else (["e"] + [f"m{i}" for i in range(1, n)])
    for count, table in enumerate(enumerate_tables(n, 0)):
        yield FiniteMonoid(names, table, 0, f"{prefix}{n}_{count}")


def small_monoids(max_order: int) -> list[FiniteMonoid]:
    """Labelled monoids of every order up to ``max_order``."""
    out: list[FiniteMonoid] = []
    for n in range(1, max_order + 1):
        out.extend(enumerate_monoids(n))
    return out
