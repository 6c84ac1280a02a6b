"""JSON interchange for monoids, maps, diagrams, pseudo-actions and seeds.

Elements are referred to by name. Unknown keys and duplicate keys are
rejected; every problem surfaces as :class:`StructuralError`.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import StructuralError
from .monoid import FiniteMonoid, Homomorphism, PointedMap, validate_monoid
from .pseudoaction import PseudoAction
from .search import RelationSeed
from .semibiproduct import SemiBiproduct

MONOID_KEYS = {"name", "elements", "identity", "table"}
MAP_KEYS = {"domain", "codomain", "kind", "map"}
DIAGRAM_KEYS = {"X", "A", "B", "p", "k", "q", "s"}
PA_KEYS = {"X", "B", "rho", "phi", "gamma"}
SIBLING_BUNDLE = "monoids.json"


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise StructuralError(f"duplicate key {key!r}")
        out[key] = value
    return out


def loads(text: str) -> Any:
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from None


def load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructuralError(f"cannot read {path}: {exc}") from None
    return loads(text)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _keys(obj: Any, allowed: set[str], required: Iterable[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise StructuralError(f"{what} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise StructuralError(f"{what}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise StructuralError(f"{what}: missing keys {missing}")


# ---------------------------------------------------------------------------
# monoids and maps
# ---------------------------------------------------------------------------

def monoid_to_json(M: FiniteMonoid) -> dict:
    return {
        "name": M.name,
        "elements": list(M.elements),
        "identity": M.elements[M.identity],
        "table": [[M.elements[c] for c in row] for row in M.table],
    }


def validate_monoid_json(obj: Any):
    """Validation report for a monoid object, malformed structure included."""
    _keys(obj, MONOID_KEYS, ("elements", "identity", "table"), "monoid")
    elements, table = obj["elements"], obj["table"]
    if not isinstance(elements, list) or not isinstance(table, list) or \
            any(not isinstance(row, list) for row in table):
        raise StructuralError("monoid: elements and table must be arrays")
    return validate_monoid(elements, table, obj["identity"])


def monoid_from_json(obj: Any) -> FiniteMonoid:
    report = validate_monoid_json(obj)
    name = obj.get("name", "")
    if not report.ok:
        raise StructuralError(f"monoid {name or '?'} is invalid: {report.summary()}", report)
    return FiniteMonoid.from_names(obj["elements"], obj["table"], obj["identity"], name)


def map_to_json(m: PointedMap) -> dict:
    return {
        "domain": m.domain.name,
        "codomain": m.codomain.name,
        "kind": "hom" if isinstance(m, Homomorphism) else "pointed",
        "map": {m.domain.elements[i]: m.codomain.elements[v] for i, v in enumerate(m.mapping)},
    }


def map_from_json(obj: Any, monoids: Mapping[str, FiniteMonoid]) -> PointedMap:
    _keys(obj, MAP_KEYS, MAP_KEYS, "map")
    try:
        dom, cod = monoids[obj["domain"]], monoids[obj["codomain"]]
    except KeyError as exc:
        raise StructuralError(f"map refers to unknown monoid {exc.args[0]!r}") from None
    if obj["kind"] not in ("hom", "pointed"):
        raise StructuralError(f"map kind must be 'hom' or 'pointed', got {obj['kind']!r}")
    if not isinstance(obj["map"], dict):
        raise StructuralError("map: 'map' must be an object")
    cls = Homomorphism if obj["kind"] == "hom" else PointedMap
    return cls.from_names(dom, cod, obj["map"])


def monoid_table(objs: Iterable[Any]) -> dict[str, FiniteMonoid]:
    out: dict[str, FiniteMonoid] = {}
    for obj in objs:
        M = monoid_from_json(obj)
        if not M.name:
            raise StructuralError("monoids in a bundle need names")
        if M.name in out:
            raise StructuralError(f"monoid {M.name!r} defined twice")
        out[M.name] = M
    return out


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------

def diagram_to_json(d: SemiBiproduct, inline: bool = True) -> dict:
    out: dict[str, Any] = {}
    if inline:
        seen, monoids = set(), []
        for M in (d.X, d.A, d.B):
            if M.name not in seen:
                seen.add(M.name)
                monoids.append(monoid_to_json(M))
        out["monoids"] = monoids
    out.update({"X": d.X.name, "A": d.A.name, "B": d.B.name})
    for label in ("p", "k", "q", "s"):
        out[label] = map_to_json(getattr(d, label))
    return out


def diagram_from_json(obj: Any, base_dir: str | Path | None = None,
                      extra_keys: set[str] = frozenset()) -> SemiBiproduct:
    """Read a diagram; monoids are inline under ``monoids`` or in a sibling
    ``monoids.json`` (an array of monoid objects) next to the diagram file.
    """
    _keys(obj, DIAGRAM_KEYS | {"monoids"} | set(extra_keys), DIAGRAM_KEYS, "diagram")
    monoids = load_monoids(obj, base_dir)
    try:
        X, A, B = (monoids[obj[key]] for key in ("X", "A", "B"))
    except KeyError as exc:
        raise StructuralError(f"diagram refers to unknown monoid {exc.args[0]!r}") from None
    maps = {label: map_from_json(obj[label], monoids) for label in ("p", "k", "q", "s")}
    for label in ("p", "k"):
        if not isinstance(maps[label], Homomorphism):
            raise StructuralError(f"{label} must have kind 'hom'")
    return SemiBiproduct(X, A, B, maps["p"], maps["k"], maps["q"], maps["s"])


def load_monoids(obj: dict, base_dir: str | Path | None) -> dict[str, FiniteMonoid]:
    if "monoids" in obj:
        if not isinstance(obj["monoids"], list):
            raise StructuralError("'monoids' must be an array")
        return monoid_table(obj["monoids"])
    if base_dir is None:
        raise StructuralError("no inline monoids and no directory to find monoids.json in")
    sibling = Path(base_dir) / SIBLING_BUNDLE
    data = load(sibling)
    if not isinstance(data, list):
        raise StructuralError(f"{sibling} must hold an array of monoids")
    return monoid_table(data)


# ---------------------------------------------------------------------------
# pseudo-actions
# ---------------------------------------------------------------------------

def _split_key(key: str, left: FiniteMonoid, right: FiniteMonoid) -> tuple[int, int]:
    # element names may contain commas, so try every split point
    hits = [(left.index(key[:i]), right.index(key[i + 1:]))
            for i, ch in enumerate(key) if ch == ","
            and key[:i] in left._index and key[i + 1:] in right._index]
    if len(hits) != 1:
        raise StructuralError(f"cannot read key {key!r} as a pair of elements")
    return hits[0]


def pa_to_json(pa: PseudoAction) -> dict:
    X, B = pa.X, pa.B
    xe, be = X.elements, B.elements
    return {
        "X": monoid_to_json(X),
        "B": monoid_to_json(B),
        "rho": {f"{xe[x]},{be[b]}": xe[pa.rho[x][b]]
                for x in range(X.size) for b in range(B.size)},
        "phi": {f"{be[b]},{xe[x]}": xe[pa.phi[b][x]]
                for b in range(B.size) for x in range(X.size)},
        "gamma": {f"{be[b]},{be[c]}": xe[pa.gamma[b][c]]
                  for b in range(B.size) for c in range(B.size)},
    }


def _grid(obj: Any, left: FiniteMonoid, right: FiniteMonoid, values: FiniteMonoid,
          label: str) -> list[list[int]]:
    if not isinstance(obj, dict):
        raise StructuralError(f"{label} must be an object")
    grid = [[-1] * right.size for _ in range(left.size)]
    for key, value in obj.items():
        i, j = _split_key(key, left, right)
        grid[i][j] = values.index(value)
    for i in range(left.size):
        for j in range(right.size):
            if grid[i][j] < 0:
                raise StructuralError(
                    f"{label} is missing {left.elements[i]},{right.elements[j]}")
    return grid


def pa_from_json(obj: Any) -> PseudoAction:
    _keys(obj, PA_KEYS, PA_KEYS, "pseudo-action")
    X, B = monoid_from_json(obj["X"]), monoid_from_json(obj["B"])
    return PseudoAction(
        X, B,
        _grid(obj["rho"], X, B, X, "rho"),
        _grid(obj["phi"], B, X, X, "phi"),
        _grid(obj["gamma"], B, B, X, "gamma"),
    )


# ---------------------------------------------------------------------------
# relation seeds and extension bundles
# ---------------------------------------------------------------------------

def seed_from_json(obj: Any, X: FiniteMonoid, B: FiniteMonoid) -> RelationSeed:
    """``{"pairs": [[x, b], ...], "u": {b: x}, "q": {"x,b": x}}``.

    ``u`` defaults to the identity of ``X`` and ``q`` to the first projection.
    """
    _keys(obj, {"pairs", "u", "q"}, ("pairs",), "relation")
    if not isinstance(obj["pairs"], list):
        raise StructuralError("relation: 'pairs' must be an array")
    pairs = []
    for item in obj["pairs"]:
        if not (isinstance(item, list) and len(item) == 2):
            raise StructuralError(f"relation pair {item!r} must be [x, b]")
        pairs.append((X.index(item[0]), B.index(item[1])))
    u = [X.identity] * B.size
    for b, x in obj.get("u", {}).items():
        u[B.index(b)] = X.index(x)
    q = {pr: pr[0] for pr in pairs}
    for key, x in obj.get("q", {}).items():
        pr = _split_key(key, X, B)
        if pr not in q:
            raise StructuralError(f"q given on {key!r}, which is not in the relation")
        q[pr] = X.index(x)
    return RelationSeed(X, B, tuple(pairs), tuple(u), tuple(q[pr] for pr in pairs))


def seed_to_json(seed: RelationSeed) -> dict:
    X, B = seed.X, seed.B
    return {
        "pairs": [[X.elements[x], B.elements[b]] for x, b in seed.pairs],
        "u": {B.elements[b]: X.elements[x] for b, x in enumerate(seed.u)},
        "q": {f"{X.elements[x]},{B.elements[b]}": X.elements[v]
              for (x, b), v in zip(seed.pairs, seed.q)},
    }


def extension_from_json(obj: Any, base_dir: str | Path | None = None):
    """``{"monoids": [...], "X", "A", "B", "k", "p"}`` for completion search."""
    _keys(obj, {"monoids", "X", "A", "B", "k", "p"}, ("X", "A", "B", "k", "p"), "extension")
    monoids = load_monoids(obj, base_dir)
    try:
        X, A, B = (monoids[obj[key]] for key in ("X", "A", "B"))
    except KeyError as exc:
        raise StructuralError(f"extension refers to unknown monoid {exc.args[0]!r}") from None
    k, p = map_from_json(obj["k"], monoids), map_from_json(obj["p"], monoids)
    if not (isinstance(k, Homomorphism) and isinstance(p, Homomorphism)):
        raise StructuralError("k and p must have kind 'hom'")
    return X, A, B, k, p


def hom_from_json(obj: Any, monoids: dict[str, FiniteMonoid]) -> Homomorphism:
    """A map object, or ``{"monoids": [...], "map": {...}}`` bringing its own domain."""
    if isinstance(obj, dict) and "map" in obj and isinstance(obj["map"], dict) \
            and "domain" in obj["map"]:
        _keys(obj, {"monoids", "map"}, ("map",), "map bundle")
        monoids = {**monoids, **monoid_table(obj.get("monoids", []))}
        obj = obj["map"]
    m = map_from_json(obj, monoids)
    if not isinstance(m, Homomorphism):
        raise StructuralError("expected a map of kind 'hom'")
    return m
