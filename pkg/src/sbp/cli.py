"""``sbp`` command-line front end.

Exit status: 0 when the check passes, 1 when it fails (witnesses are
reported), 2 on malformed input or usage errors. ``--json`` prints a single
report object instead of text.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import serialize as io
from .corpus import examples_corpus, run_record
from .equivalence import extract, roundtrip_action, roundtrip_diagram, synthesize
from .errors import BudgetExceeded, SbpError
from .pseudoaction import check_derived_identities, verify_pseudo_action
from .report import Failure, LawReport
from .search import (DEFAULT_BUDGET, build_from_relation, check_seed, complete_extension,
                     enumerate_semibiproducts, nat_order_demo)
from .semibiproduct import (SemiBiproduct, check_cokernel, check_kernel, image_of_beta,
                            is_schreier, pullback, verify)

OK, FAILED, BAD_INPUT = 0, 1, 2


@dataclass
class Outcome:
    ok: bool
    verdicts: dict[str, Any] = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)
    result: Any = None
    lines: list[str] = field(default_factory=list)
    echo_result: bool = True     # print the result in text mode


class Inputs:
    """Reads input files and remembers their digests."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def json(self, path: str) -> Any:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise SbpError(f"cannot read {path}: {exc.strerror}") from None
        self.digests[path] = "sha256:" + hashlib.sha256(data).hexdigest()
        try:
            return io.loads(data.decode("utf-8"))
        except UnicodeDecodeError:
            raise SbpError(f"{path} is not UTF-8 text") from None

    def diagram(self, path: str) -> SemiBiproduct:
        return io.diagram_from_json(self.json(path), Path(path).parent)


def _witnesses(report: LawReport) -> list[dict]:
    return [{"law": f.law, **f.to_dict()} for f in report.failures]


def _law_verdicts(report: LawReport) -> dict[str, bool]:
    return {law: not fs for law, fs in report.laws.items()}


def _describe(report: LawReport) -> list[str]:
    return [f"  {f.describe()}" for f in report.failures]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args, inp: Inputs) -> Outcome:
    obj = inp.json(args.monoid)
    objs = obj if isinstance(obj, list) else [obj]
    out = Outcome(True)
    for i, item in enumerate(objs):
        report = io.validate_monoid_json(item)
        if report.first("malformed"):
            raise SbpError(f"malformed monoid: {report.first('malformed').describe()}")
        name = item.get("name") or f"#{i}"
        out.verdicts[name] = _law_verdicts(report)
        out.witnesses += [{"monoid": name, **w} for w in _witnesses(report)]
        out.ok &= report.ok
        out.lines.append(f"{name}: {'valid monoid' if report.ok else 'not a monoid'}")
        out.lines += _describe(report)
    return out


def cmd_verify(args, inp: Inputs) -> Outcome:
    d = inp.diagram(args.diagram)
    report = verify(d, exhaustive=args.exhaustive_witnesses)
    q, s = d.q.classify(), d.s.classify()
    verdicts = {"semi-biproduct": report.ok, **_law_verdicts(report),
                "q": q.kind.value, "s": s.kind.value, "commutative": d.A.is_commutative()}
    lines = [f"semi-biproduct: {'yes' if report.ok else 'no'}"] + _describe(report)
    lines += [f"q: {q.kind.value}", f"s: {s.kind.value}"]
    return Outcome(report.ok, verdicts, _witnesses(report), lines=lines)


def _unverified(d: SemiBiproduct) -> Outcome:
    report = d.report
    return Outcome(False, {"semi-biproduct": False, **_law_verdicts(report)},
                   _witnesses(report),
                   lines=["not a semi-biproduct"] + _describe(report))


def cmd_schreier(args, inp: Inputs) -> Outcome:
    d = inp.diagram(args.diagram)
    if not d.verified:
        return _unverified(d)
    schreier = is_schreier(d)
    size = len(image_of_beta(d))
    out = Outcome(schreier, {"semi-biproduct": True, "schreier": schreier, "image_size": size,
                             "product_size": d.X.size * d.B.size})
    if not schreier:
        pa = extract(d)
        x, b = next((x, b) for x in range(d.X.size) for b in range(d.B.size)
                    if pa.rho[x][b] != x)
        f = Failure("x^b=x", (d.X.elements[x], d.B.elements[b]),
                    d.X.elements[pa.rho[x][b]], d.X.elements[x])
        out.witnesses.append({"law": f.law, **f.to_dict()})
        out.lines.append(f"  {f.describe()}")
    out.lines.insert(0, f"schreier: {'yes' if schreier else 'no'} "
                        f"(|image| = {size}, |X x B| = {d.X.size * d.B.size})")
    return out


def cmd_pullback(args, inp: Inputs) -> Outcome:
    d = inp.diagram(args.diagram)
    if not d.verified:
        return _unverified(d)
    h = io.hom_from_json(inp.json(args.h), {M.name: M for M in (d.X, d.A, d.B)})
    pb = pullback(d, h)
    report = verify(pb, exhaustive=args.exhaustive_witnesses)
    return Outcome(report.ok, {"semi-biproduct": report.ok, "size": pb.A.size},
                   _witnesses(report), io.diagram_to_json(pb),
                   [f"pullback on {pb.A.size} elements: "
                    f"{'semi-biproduct' if report.ok else 'not a semi-biproduct'}"])


def cmd_cokernel(args, inp: Inputs) -> Outcome:
    d = inp.diagram(args.diagram)
    kernel, cokernel = check_kernel(d), check_cokernel(d)
    return Outcome(kernel and cokernel, {"kernel": kernel, "cokernel": cokernel},
                   lines=[f"k is the kernel of p: {'yes' if kernel else 'no'}",
                          f"p is the cokernel of k: {'yes' if cokernel else 'no'}"])


def cmd_extract(args, inp: Inputs) -> Outcome:
    d = inp.diagram(args.diagram)
    if not d.verified:
        return _unverified(d)
    pa = extract(d)
    return Outcome(True, {"pseudo-action": True}, result=io.pa_to_json(pa),
                   lines=["pseudo-action extracted"])


def _pseudo_action(args, inp: Inputs, path: str):
    pa = io.pa_from_json(inp.json(path))
    return pa, verify_pseudo_action(pa, exhaustive=args.exhaustive_witnesses)


def cmd_synthesize(args, inp: Inputs) -> Outcome:
    pa, report = _pseudo_action(args, inp, args.pseudo_action)
    if not report.ok:
        return Outcome(False, _law_verdicts(report), _witnesses(report),
                       lines=["not a pseudo-action"] + _describe(report))
    d = synthesize(pa)
    return Outcome(True, {"semi-biproduct": d.verified, "size": d.A.size},
                   result=io.diagram_to_json(d),
                   lines=[f"synthetic semi-biproduct on {d.A.size} elements"])


def cmd_pa_verify(args, inp: Inputs) -> Outcome:
    pa, report = _pseudo_action(args, inp, args.pseudo_action)
    verdicts = _law_verdicts(report)
    lines = [f"pseudo-action: {'yes' if report.ok else 'no'}"] + _describe(report)
    if report.ok:
        derived = check_derived_identities(pa)
        verdicts["derived-identities"] = derived.ok
        lines.append(f"derived identities: {'hold' if derived.ok else 'FAIL'}")
        report = derived
    return Outcome(report.ok, verdicts, _witnesses(report), lines=lines)


def cmd_roundtrip(args, inp: Inputs) -> Outcome:
    obj = inp.json(args.input)
    if isinstance(obj, dict) and "rho" in obj:
        pa = io.pa_from_json(obj)
        report = verify_pseudo_action(pa)
        if not report.ok:
            return Outcome(False, _law_verdicts(report), _witnesses(report),
                           lines=["not a pseudo-action"] + _describe(report))
        same = roundtrip_action(pa)
        return Outcome(same, {"extract(synthesize)=id": same},
                       lines=[f"extract(synthesize(pa)) == pa: {'yes' if same else 'no'}"])
    d = io.diagram_from_json(obj, Path(args.input).parent)
    if not d.verified:
        return _unverified(d)
    rt = roundtrip_diagram(d)
    return Outcome(rt.report.ok, _law_verdicts(rt.report), _witnesses(rt.report),
                   lines=[f"alpha and beta mutually inverse isomorphisms: "
                          f"{'yes' if rt.report.ok else 'no'}"] + _describe(rt.report))


def cmd_construct(args, inp: Inputs) -> Outcome:
    obj = inp.json(args.seed)
    if not isinstance(obj, dict) or set(obj) != {"X", "B", "relation"}:
        raise SbpError("seed file needs exactly the keys X, B and relation")
    X, B = io.monoid_from_json(obj["X"]), io.monoid_from_json(obj["B"])
    seed = io.seed_from_json(obj["relation"], X, B)
    seed_report = check_seed(seed)
    if not seed_report.ok:
        raise SbpError(f"invalid relation seed: {seed_report.summary()}")
    try:
        res = build_from_relation(seed, constrained=not args.unconstrained, budget=args.budget)
    except BudgetExceeded as exc:
        return Outcome(False, {"complete": False}, lines=[str(exc)])
    accepted = [{"table": [[c.monoid.elements[v] for v in row] for row in c.monoid.table],
                 "schreier": is_schreier(c.diagram)} for c in res.accepted]
    rejected = [{"reason": c.reason.value, **c.witness.to_dict()} for c in res.rejected]
    lines = [f"{res.candidate_tables} monoid structures on R, "
             f"{len(accepted)} accepted, {len(rejected)} rejected"]
    lines += [f"  rejected: {r['reason']} at ({', '.join(r['witness'])})" for r in rejected]
    diagrams = [io.diagram_to_json(c.diagram) for c in res.accepted]
    return Outcome(bool(accepted),
                   {"complete": True, "structures": res.candidate_tables,
                    "accepted": len(accepted), "rejected": len(rejected)},
                   [{"law": r["reason"], **{k: r[k] for k in ("witness", "lhs", "rhs")}}
                    for r in rejected],
                   {"accepted": accepted, "diagrams": diagrams}, lines, echo_result=False)


def cmd_enumerate(args, inp: Inputs) -> Outcome:
    X = io.monoid_from_json(inp.json(args.X))
    B = io.monoid_from_json(inp.json(args.B))
    res = enumerate_semibiproducts(X, B, budget=args.budget, jobs=args.jobs)
    actions = {extract(d) for d in res.diagrams}
    verdicts = {"complete": res.complete, "seeds": res.seeds,
                "candidate_tables": res.candidate_tables, "diagrams": len(res.diagrams),
                "pseudo_actions": len(actions)}
    lines = [f"{len(res.diagrams)} diagrams from {res.seeds} seeds "
             f"({res.candidate_tables} tables), {len(actions)} distinct pseudo-actions"]
    if not res.complete:
        lines.append(f"budget of {args.budget} tables exhausted: enumeration incomplete")
    return Outcome(res.complete, verdicts, lines=lines)


def cmd_complete(args, inp: Inputs) -> Outcome:
    X, A, B, k, p = io.extension_from_json(inp.json(args.extension), Path(args.extension).parent)
    found = complete_extension(X, A, B, k, p)
    result = [{"q": io.map_to_json(q), "s": io.map_to_json(s)} for q, s in found]
    return Outcome(bool(found), {"completions": len(found)}, result=result,
                   lines=[f"{len(found)} completions (q, s)"])


def cmd_nat_demo(args, inp: Inputs) -> Outcome:
    rep = nat_order_demo(args.bound)
    lines = [f"{rep.label}: bound {rep.bound}, {rep.elements} elements of R"]
    lines += [f"  {name}: {'ok' if passed else 'FAIL'}" for name, passed in rep.checks.items()]
    return Outcome(rep.ok, {"label": rep.label, "bound": rep.bound, **rep.checks}, lines=lines)


def cmd_examples(args, inp: Inputs) -> Outcome:
    records = examples_corpus()
    if args.action == "list":
        return Outcome(True, {"examples": [r.name for r in records]},
                       lines=[f"{r.name:10s} {r.note}" for r in records])
    if args.all:
        verdicts, lines, witnesses = {}, [], []
        for rec in records:
            _, drift = run_record(rec)
            verdicts[rec.name] = not drift
            lines.append(f"{rec.name}: {'reproduced' if not drift else 'DRIFT'}")
            lines += [f"  {m}" for m in drift]
            witnesses += [{"example": rec.name, "drift": m} for m in drift]
        return Outcome(all(verdicts.values()), verdicts, witnesses, lines=lines)
    if args.name is None:
        raise SbpError("examples run needs a record name or --all")
    try:
        rec = next(r for r in records if r.name == args.name)
    except StopIteration:
        raise SbpError(f"no example named {args.name!r}") from None
    observed, drift = run_record(rec)
    if rec.kind == "relation":
        passed = bool(observed["accepted"])
        witnesses = [{"law": r["reason"], "witness": r["witness"], "lhs": r["lhs"],
                      "rhs": r["rhs"]} for r in observed["rejected"]]
    else:
        passed = observed["verified"]
        witnesses = [{"law": law, **f} for law, f in observed["failures"].items()]
    verdicts = {"expectations_reproduced": not drift, **observed}
    lines = [f"{rec.name}: {rec.note}"]
    lines += [f"  {key}: {value}" for key, value in observed.items()
              if not isinstance(value, (dict, list)) or key == "failures"]
    lines.append(f"expectations: {'reproduced' if not drift else 'DRIFT'}")
    lines += [f"  {m}" for m in drift]
    return Outcome(passed and not drift, verdicts, witnesses, lines=lines)


# ---------------------------------------------------------------------------
# argument parsing and the report
# ---------------------------------------------------------------------------

def _global_flags() -> argparse.ArgumentParser:
    # defaults are suppressed so the flags work before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the JSON report")
    common.add_argument("--max-size", type=int, metavar="N", default=argparse.SUPPRESS,
                        help="largest monoid accepted (also SBP_MAX_SIZE)")
    common.add_argument("--jobs", type=int, metavar="N", default=argparse.SUPPRESS,
                        help="worker processes for enumerate")
    common.add_argument("--exhaustive-witnesses", action="store_true",
                        default=argparse.SUPPRESS, help="report every failing instance")
    return common


COMMANDS: dict[str, tuple[Callable, str, list[tuple]]] = {
    "validate": (cmd_validate, "check a monoid table", [("monoid",)]),
    "verify": (cmd_verify, "check the five semi-biproduct identities", [("diagram",)]),
    "schreier": (cmd_schreier, "test for a trivial correction system", [("diagram",)]),
    "pullback": (cmd_pullback, "pull a diagram back along h", [("diagram",), ("h",)]),
    "cokernel": (cmd_cokernel, "check kernel and cokernel properties", [("diagram",)]),
    "extract": (cmd_extract, "read off the pseudo-action", [("diagram",)]),
    "synthesize": (cmd_synthesize, "build the synthetic diagram", [("pseudo_action",)]),
    "roundtrip": (cmd_roundtrip, "certify the round trip", [("input",)]),
    "pa-verify": (cmd_pa_verify, "check the pseudo-action laws", [("pseudo_action",)]),
    "construct": (cmd_construct, "monoid structures on a relation seed", [("seed",)]),
    "enumerate": (cmd_enumerate, "all diagrams over two monoids", [("X",), ("B",)]),
    "complete": (cmd_complete, "find q and s completing k and p", [("extension",)]),
    "nat-demo": (cmd_nat_demo, "bounded check of the order on the naturals", []),
    "examples": (cmd_examples, "list or run the built-in examples", []),
}


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="sbp", parents=[common],
                                     description="Semi-biproducts of finite monoids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (func, help_text, positionals) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        for (dest,) in positionals:
            p.add_argument(dest, metavar=f"{dest.replace('_', '-')}.json")
        p.set_defaults(func=func)
    for name in ("pullback", "extract", "synthesize", "complete", "construct"):
        sub.choices[name].add_argument("-o", "--output", metavar="FILE",
                                       help="write the produced JSON to FILE")
    sub.choices["construct"].add_argument("--unconstrained", action="store_true",
                                          help="try every monoid structure on R")
    for name in ("construct", "enumerate"):
        sub.choices[name].add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                                       help="maximum number of candidate tables")
    sub.choices["nat-demo"].add_argument("--bound", type=int, default=20)
    ex = sub.choices["examples"]
    ex.add_argument("action", choices=("list", "run"))
    ex.add_argument("name", nargs="?")
    ex.add_argument("--all", action="store_true", help="run every example")
    return parser


def make_report(command: str, inp: Inputs, out: Outcome, seconds: float) -> dict:
    report = {"command": command, "inputs": dict(inp.digests), "ok": out.ok,
              "verdicts": out.verdicts, "witnesses": out.witnesses}
    if out.result is not None:
        report["result"] = out.result
    report["timing"] = {"seconds": round(seconds, 6)}
    return report


def _error_report(command: str, inp: Inputs, message: str) -> dict:
    return {"command": command, "inputs": dict(inp.digests), "ok": False,
            "verdicts": {"error": message}, "witnesses": [], "timing": {"seconds": 0.0}}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag, default in (("json", False), ("max_size", None), ("jobs", 1),
                          ("exhaustive_witnesses", False)):
        if not hasattr(args, flag):
            setattr(args, flag, default)
    if args.command == "examples" and args.action == "run" and not args.all and not args.name:
        parser.error("examples run needs a record name or --all")
    if args.max_size is None:
        return _run(args)
    # the limit is read from the environment; restore it so in-process callers are unaffected
    saved = os.environ.get("SBP_MAX_SIZE")
    os.environ["SBP_MAX_SIZE"] = str(args.max_size)
    try:
        return _run(args)
    finally:
        if saved is None:
            del os.environ["SBP_MAX_SIZE"]
        else:
            os.environ["SBP_MAX_SIZE"] = saved


def _run(args) -> int:
    inp = Inputs()
    start = time.perf_counter()
    try:
        out = args.func(args, inp)
    except (SbpError, ValueError) as exc:
        if args.json:
            sys.stdout.write(io.dumps(_error_report(args.command, inp, str(exc))))
        else:
            print(f"sbp {args.command}: error: {exc}", file=sys.stderr)
        return BAD_INPUT
    elapsed = time.perf_counter() - start

    output = getattr(args, "output", None)
    if output and out.result is not None:
        Path(output).write_text(io.dumps(out.result), encoding="utf-8")
    if args.json:
        sys.stdout.write(io.dumps(make_report(args.command, inp, out, elapsed)))
    else:
        for line in out.lines:
            print(line)
        if out.result is not None and out.echo_result and not output:
            sys.stdout.write(io.dumps(out.result))
    return OK if out.ok else FAILED


if __name__ == "__main__":
    sys.exit(main())
