"""Built-in worked examples with the facts each one is expected to show.

Everything is constructed in memory. ``observe`` recomputes the facts from a
record's bundle and ``compare`` lists any drift from the stored expectations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import serialize as io
from .equivalence import extract, roundtrip_diagram
from .monoid import (FiniteMonoid, Homomorphism, PointedMap, classify_map, compose,
                     enumerate_homs, preservation_failures, restrict)
from .search import RelationSeed, build_from_relation, derived_rows
from .semibiproduct import (SemiBiproduct, biproduct, check_cokernel, check_kernel,
                            image_of_beta, is_schreier)

# rows of the eight operation tables on {0,a,b,c,d}
A_ROWS = {
    1: ["0abcd", "aabcd", "bbbcd", "ccddd", "ddddd"],
    2: ["0abcd", "aabcd", "bbbcd", "cccdc", "dddcd"],
    3: ["0abcd", "aabcc", "bbbcc", "ccccc", "ddccc"],
    4: ["0abcd", "aabcc", "bbbcc", "ccccc", "dcccc"],
    5: ["0abcd", "aabdd", "bbbdd", "cccdd", "ddddd"],
    6: ["0abcd", "aabdd", "bbbdd", "cdddd", "ddddd"],
    7: ["0abcd", "aabdd", "bbbdd", "ccccc", "ddddd"],
    8: ["0abcd", "aabdd", "bbbdd", "cddcd", "ddddd"],
}


def _monoid(name: str, elements: str, rows: list[str]) -> FiniteMonoid:
    return FiniteMonoid.from_names(list(elements), [list(r) for r in rows], elements[0], name)


def chain(name: str, elements: str) -> FiniteMonoid:
    """The join semilattice on a chain, bottom first."""
    n = len(elements)
    return FiniteMonoid(list(elements), [[max(i, j) for j in range(n)] for i in range(n)], 0, name)


def case_monoid(i: int) -> FiniteMonoid:
    return _monoid(f"A{i}", "0abcd", A_ROWS[i])


def case_diagram(i: int) -> SemiBiproduct:
    X, B, A = chain("X", "0ab"), chain("B", "0c"), case_monoid(i)
    return SemiBiproduct(
        X, A, B,
        Homomorphism.from_names(A, B, dict(zip("0abcd", "000cc"))),
        Homomorphism.from_names(X, A, {"0": "0", "a": "a", "b": "b"}),
        PointedMap.from_names(A, X, dict(zip("0abcd", "0ab0a"))),
        PointedMap.from_names(B, A, {"0": "0", "c": "c"}),
    )


def chain_extension() -> SemiBiproduct:
    X = _monoid("X", "1a", ["1a", "aa"])
    A = _monoid("A", "1ab", ["1ab", "aab", "bbb"])
    B = _monoid("B", "1b", ["1b", "bb"])
    return SemiBiproduct(
        X, A, B,
        Homomorphism.from_names(A, B, {"1": "1", "a": "1", "b": "b"}),
        Homomorphism.from_names(X, A, {"1": "1", "a": "a"}),
        PointedMap.from_names(A, X, {"1": "1", "a": "a", "b": "1"}),
        PointedMap.from_names(B, A, {"1": "1", "b": "b"}),
    )


def group_base_example() -> SemiBiproduct:
    X = _monoid("X", "1a", ["1a", "aa"])
    A = _monoid("A", "1ab", ["1ab", "aab", "bba"])
    B = _monoid("B", "1b", ["1b", "b1"])
    return SemiBiproduct(
        X, A, B,
        Homomorphism.from_names(A, B, {"1": "1", "a": "1", "b": "b"}),
        Homomorphism.from_names(X, A, {"1": "1", "a": "a"}),
        PointedMap.from_names(A, X, {"1": "1", "a": "a", "b": "1"}),
        PointedMap.from_names(B, A, {"1": "1", "b": "b"}),
    )


def two_point_seed(idempotent: bool) -> RelationSeed:
    """``R = {(0,1), (s,1), (0,t)}`` over ``X = {0,s}`` and ``B = {1,t}``."""
    X = _monoid("X", "0s", ["0s", "ss" if idempotent else "s0"])
    B = _monoid("B", "1t", ["1t", "tt"])
    return RelationSeed.standard(X, B, [(0, 0), (1, 0), (0, 1)])


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExampleRecord:
    name: str
    kind: str                   # "diagram" or "relation"
    bundle: dict
    expected: dict
    note: str = ""
    extra: dict = field(default_factory=dict)   # auxiliary monoids and maps


def _seed_bundle(seed: RelationSeed) -> dict:
    return {"X": io.monoid_to_json(seed.X), "B": io.monoid_to_json(seed.B),
            "relation": io.seed_to_json(seed)}


def _a2_counterexample() -> dict:
    A2 = case_monoid(2)
    Y = restrict(A2, [A2.index(e) for e in "0cd"], "Y")
    g = Homomorphism.from_names(A2, Y, dict(zip("0abcd", "000cd")))
    return {"monoids": [io.monoid_to_json(Y)], "g": io.map_to_json(g)}


def _a1_section() -> dict:
    d = case_diagram(1)
    return {"s'": io.map_to_json(PointedMap.from_names(d.B, d.A, {"0": "0", "c": "d"}))}


def _case_expectation(i: int) -> dict:
    exp: dict[str, Any] = {
        "verified": i >= 5,
        "failures": {} if i >= 5 else {"kq+sp=1": {"witness": ["d"], "lhs": "c", "rhs": "d"}},
        "s": "homomorphism" if i in (3, 4, 7, 8) else "pointed_only",
        "q": "pointed_only",
        "q_fails_on": ["b", "c"],
        "commutative": i in (2, 4, 6, 8),
        "kernel": True,
        "cokernel": i != 2,
    }
    if i >= 5:
        exp["schreier"] = False
    if i in (1, 2):
        exp["not_jointly_mono_on"] = ["0", "d"]
    if i == 1:
        exp["s'"] = "homomorphism"
    if i == 2:
        exp["g_factors_through_p"] = False
    return exp


def examples_corpus() -> list[ExampleRecord]:
    records = []
    for i in range(1, 9):
        extra = {}
        if i == 1:
            extra = _a1_section()
        elif i == 2:
            extra = _a2_counterexample()
        records.append(ExampleRecord(f"A{i}", "diagram", io.diagram_to_json(case_diagram(i)),
                                     _case_expectation(i), f"five-element case {i}", extra))
    records.append(ExampleRecord(
        "chain-ext", "diagram", io.diagram_to_json(chain_extension()),
        {"verified": True, "failures": {}, "schreier": False, "image_size": 3, "product_size": 4,
         "pseudo_action": {"rho": {"1,1": "1", "1,b": "1", "a,1": "a", "a,b": "1"},
                           "phi": {"1,1": "1", "1,a": "a", "b,1": "1", "b,a": "1"},
                           "gamma": {"1,1": "1", "1,b": "1", "b,1": "1", "b,b": "1"}},
         "roundtrip": True},
        "three-element extension of a two-element chain"))
    chain_seed, signs_seed = two_point_seed(True), two_point_seed(False)
    records.append(ExampleRecord(
        "seed-chain", "relation", _seed_bundle(chain_seed),
        {"structures": 2,
         "accepted": [{"table": [["(0,1)", "(0,t)", "(s,1)"],
                                 ["(0,t)", "(0,t)", "(0,t)"],
                                 ["(s,1)", "(0,t)", "(s,1)"]],
                       "schreier": False}],
         "rejected": [{"reason": "⊕≠+", "witness": ["s", "s"], "lhs": "0", "rhs": "s"}],
         "derived": [
             {"x": "0", "b": "1", "x'": "0", "b'": "1",
              "x(+)x'": "0", "bxb'": "0", "b.x": "0", "x^b": "0"},
             {"x": "0", "b": "t", "x'": "s", "b'": "1",
              "x(+)x'": "s", "bxb'": "0", "b.x": "0", "x^b": "0"},
             {"x": "s", "b": "1", "x'": "0", "b'": "t",
              "x(+)x'": "s", "bxb'": "0", "b.x": "s", "x^b": "s"},
             {"x": "s", "b": "t", "x'": "s", "b'": "t",
              "x(+)x'": "s", "bxb'": "0", "b.x": "0", "x^b": "0"}]},
        "relation search with an idempotent generator"))
    records.append(ExampleRecord(
        "seed-signs", "relation", _seed_bundle(signs_seed),
        {"structures": 2,
         "accepted": [{"table": [["(0,1)", "(0,t)", "(s,1)"],
                                 ["(0,t)", "(0,t)", "(0,t)"],
                                 ["(s,1)", "(0,t)", "(0,1)"]],
                       "schreier": False}],
         "rejected": [{"reason": "⊕≠+", "witness": ["s", "s"], "lhs": "s", "rhs": "0"}]},
        "relation search with an involutive generator"))
    records.append(ExampleRecord(
        "seed-groupB", "diagram", io.diagram_to_json(group_base_example()),
        {"verified": True, "failures": {}, "schreier": False, "image_size": 3,
         "product_size": 4, "roundtrip": True},
        "base of order two acting on a non-cancellative kernel"))
    records.append(ExampleRecord(
        "product", "diagram", io.diagram_to_json(biproduct(chain("X", "0ab"), chain("B", "0c"), "XxB")),
        {"verified": True, "failures": {}, "schreier": True, "s": "homomorphism",
         "q": "homomorphism", "kernel": True, "cokernel": True, "roundtrip": True},
        "direct product baseline"))
    return records


def record(name: str) -> ExampleRecord:
    for r in examples_corpus():
        if r.name == name:
            return r
    raise KeyError(name)


# ---------------------------------------------------------------------------
# observing and comparing
# ---------------------------------------------------------------------------

def observe(rec: ExampleRecord) -> dict:
    """Recompute every fact the record's expectations can mention."""
    if rec.kind == "relation":
        return _observe_relation(rec)
    return _observe_diagram(rec)


def _observe_diagram(rec: ExampleRecord) -> dict:
    d = io.diagram_from_json(rec.bundle)
    report = d.report
    out: dict[str, Any] = {
        "verified": report.ok,
        "failures": {law: {"witness": list(fs[0].witness), "lhs": fs[0].lhs, "rhs": fs[0].rhs}
                     for law, fs in report.laws.items() if fs},
        "s": d.s.classify().kind.value,
        "q": d.q.classify().kind.value,
        "q_fails_on": None,
        "commutative": d.A.is_commutative(),
        "kernel": check_kernel(d),
        "cokernel": check_cokernel(d),
    }
    fails = preservation_failures(d.A, d.X, d.q.mapping)
    wanted = rec.expected.get("q_fails_on")
    if wanted is not None:
        pair = tuple(d.A.index(e) for e in wanted)
        out["q_fails_on"] = wanted if pair in fails else None
    if "not_jointly_mono_on" in rec.expected:
        out["not_jointly_mono_on"] = _jointly_mono_failure(d, rec.expected["not_jointly_mono_on"])
    if "s'" in rec.extra:
        monoids = {M.name: M for M in (d.X, d.A, d.B)}
        s2 = io.map_from_json(rec.extra["s'"], monoids)
        out["s'"] = classify_map(s2.domain, s2.codomain, s2.mapping).kind.value
    if "g" in rec.extra:
        out["g_factors_through_p"] = _factors_through(d, rec.extra)
    if report.ok:
        out["schreier"] = is_schreier(d)
        out["image_size"] = len(image_of_beta(d))
        out["product_size"] = d.X.size * d.B.size
        pa = extract(d)
        pj = io.pa_to_json(pa)
        out["pseudo_action"] = {key: pj[key] for key in ("rho", "phi", "gamma")}
        out["roundtrip"] = roundtrip_diagram(d).report.ok
    return out


def _jointly_mono_failure(d: SemiBiproduct, subset: list[str]) -> list[str] | None:
    """The subset, if its inclusion ``f`` is not recovered as ``kqf + spf``."""
    Z = restrict(d.A, [d.A.index(e) for e in subset], "Z")
    for z, name in enumerate(Z.elements):
        a = d.A.index(name)
        if d.A.table[d.k.mapping[d.q.mapping[a]]][d.s.mapping[d.p.mapping[a]]] != a:
            return subset
    return None


def _factors_through(d: SemiBiproduct, extra: dict) -> bool:
    monoids = {M.name: M for M in (d.X, d.A, d.B)}
    monoids.update(io.monoid_table(extra["monoids"]))
    g = io.map_from_json(extra["g"], monoids)
    return any(compose(gbar, d.p).mapping == g.mapping
               for gbar in enumerate_homs(d.B, g.codomain))


def _observe_relation(rec: ExampleRecord) -> dict:
    X = io.monoid_from_json(rec.bundle["X"])
    B = io.monoid_from_json(rec.bundle["B"])
    seed = io.seed_from_json(rec.bundle["relation"], X, B)
    result = build_from_relation(seed)
    out: dict[str, Any] = {
        "structures": result.candidate_tables,
        "accepted": [{"table": [[c.monoid.elements[v] for v in row] for row in c.monoid.table],
                      "schreier": is_schreier(c.diagram)} for c in result.accepted],
        "rejected": [{"reason": c.reason.value, "witness": list(c.witness.witness),
                      "lhs": c.witness.lhs, "rhs": c.witness.rhs} for c in result.rejected],
    }
    rows = rec.expected.get("derived")
    if rows is not None and result.accepted:
        keys = [(r["x"], r["b"], r["x'"], r["b'"]) for r in rows]
        out["derived"] = derived_rows(result.accepted[0], seed, keys)
    return out


def compare(expected: dict, observed: dict) -> list[str]:
    """Human-readable mismatches between expectations and observations."""
    return [f"{key}: expected {value!r}, observed {observed.get(key)!r}"
            for key, value in expected.items() if observed.get(key) != value]


def run_record(rec: ExampleRecord) -> tuple[dict, list[str]]:
    observed = observe(rec)
    return observed, compare(rec.expected, observed)
