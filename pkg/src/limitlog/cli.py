"""Command-line interface: ``limitlog {check,solve,materialize,counter-model,oracle}``.

Exit codes: 0 success (or entailed), 1 not entailed / no counter-model,
2 usage or parse error, 3 static-analysis rejection, 4 iteration budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import analyze
from .core import INF, Fact, PseudoInterpretation
from .engine import EngineConfig, prepare_and_run
from .errors import (AnalysisError, ContractError, DivergenceError,
                     ParseError, ValidationError)
from .frontend import normalize, parse_fact, parse_program
from .frontend.printer import format_fact

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_REJECTED, EXIT_BUDGET = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="limitlog", description="Limit Datalog reasoner.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine_flags(sp):
        sp.add_argument("--unsafe-skip-stability-gate", action="store_true",
                        help="run even if the program is not type-consistent")
        sp.add_argument("--max-iterations", type=int, metavar="N")
        sp.add_argument("--trace", action="store_true",
                        help="write one JSON record per iteration to stderr")
        sp.add_argument("--json", action="store_true")

    c = sub.add_parser("check", help="parse and run the static checks")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="decide entailment of a fact")
    s.add_argument("file")
    s.add_argument("--query", required=True)
    engine_flags(s)

    m = sub.add_parser("materialize", help="print the closure")
    m.add_argument("file")
    engine_flags(m)

    cm = sub.add_parser("counter-model", help="bounded search for a refuting pseudo-model")
    cm.add_argument("file")
    cm.add_argument("--query", required=True)
    cm.add_argument("--bound", type=int, required=True)
    cm.add_argument("--json", action="store_true")

    o = sub.add_parser("oracle", help="reference answers for the example tasks")
    o.add_argument("task", choices=["shortest-path", "path-count", "diffusion"])
    o.add_argument("file", help="JSON instance")
    return p


def _fact_dict(f: Fact) -> dict:
    v = f.value
    return {"pred": f.pred.name, "args": list(f.objects),
            "value": None if v is None else ("inf" if v is INF else v)}


def _visible(J: PseudoInterpretation) -> list[Fact]:
    return [f for f in J.facts() if not f.pred.builtin]


def _emit(doc: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(doc, sort_keys=True) + "\n")
        return
    for d in doc.get("diagnostics", []):
        out.write(d["text"] + "\n")
    if "answer" in doc:
        out.write(f"{doc['answer']}\n")
    for f in doc.get("_facts", []):
        out.write(f"{format_fact(f)}.\n")


def _diag(d) -> dict:
    out = d.to_dict()
    out["text"] = str(d)
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _engine_cfg(args) -> EngineConfig:
    return EngineConfig(max_iterations=args.max_iterations, trace=args.trace,
                        enforce_stability_precondition=not args.unsafe_skip_stability_gate,
                        trace_stream=sys.stderr)


def _cmd_check(args, out) -> int:
    prog = parse_program(_read(args.file))
    report = analyze(prog)
    diags = [_diag(d) for d in report.diagnostics]
    ok = report.type_consistent
    _emit({"status": "ok" if ok else "rejected", "diagnostics": diags,
           "answer": "ok" if ok else "rejected"}, args.json, out)
    return EXIT_OK if ok else EXIT_REJECTED


def _stats(res) -> dict:
    return {"iterations": res.result.iterations, "rules_semiground": res.result.rules}


def _cmd_solve(args, out) -> int:
    prog = parse_program(_read(args.file))
    alpha = parse_fact(args.query, prog)
    res = prepare_and_run(prog, _engine_cfg(args), (alpha,))
    yes = res.closure_satisfies(alpha)
    _emit({"status": "entailed" if yes else "not_entailed", "query": format_fact(alpha),
           "answer": "entailed" if yes else "not entailed", "diagnostics": [],
           "stats": _stats(res)}, args.json, out)
    return EXIT_OK if yes else EXIT_NO


def _cmd_materialize(args, out) -> int:
    prog = parse_program(_read(args.file))
    res = prepare_and_run(prog, _engine_cfg(args))
    facts = _visible(res.result.closure)
    doc = {"status": "ok", "facts": [_fact_dict(f) for f in facts],
           "diagnostics": [], "stats": _stats(res)}
    if not args.json:
        doc["_facts"] = facts
    _emit(doc, args.json, out)
    return EXIT_OK


def _cmd_counter_model(args, out) -> int:
    from .analysis import require_limit_linear
    from .verifier import counter_model_search
    if args.bound < 0:
        raise _Usage("--bound must be non-negative")
    prog = parse_program(_read(args.file))
    alpha = parse_fact(args.query, prog)
    require_limit_linear(normalize(prog))
    J = counter_model_search(prog, alpha, args.bound)
    if J is None:
        _emit({"status": "none", "answer": f"no counter-model within bound {args.bound}",
               "facts": [], "diagnostics": []}, args.json, out)
        return EXIT_NO
    facts = _visible(J)
    doc = {"status": "found", "facts": [_fact_dict(f) for f in facts], "diagnostics": []}
    if not args.json:
        doc["answer"] = "counter-model found"
        doc["_facts"] = facts
    _emit(doc, args.json, out)
    return EXIT_OK


def _cmd_oracle(args, out) -> int:
    from .verifier import graph_oracle
    try:
        inst = json.loads(_read(args.file))
    except json.JSONDecodeError as exc:
        raise _Usage(f"{args.file}: invalid JSON: {exc}") from None
    try:
        ans = graph_oracle(args.task, inst)
    except (KeyError, TypeError) as exc:
        raise _Usage(f"{args.file}: malformed instance ({exc})") from None
    if isinstance(ans, set):
        result = sorted(ans)
    elif args.task == "path-count":
        result = [{"from": x, "to": y, "value": v} for (x, y), v in sorted(ans.items())]
    else:
        result = dict(sorted(ans.items()))
    out.write(json.dumps({"status": "ok", "task": args.task, "result": result}, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check, "solve": _cmd_solve, "materialize": _cmd_materialize,
    "counter-model": _cmd_counter_model, "oracle": _cmd_oracle,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _Usage as exc:
        err.write(f"limitlog: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        for d in exc.diagnostics:
            err.write(f"{d}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except AnalysisError as exc:
        err.write(f"rejected: {exc}\n")
        for v in exc.violations:
            err.write(f"  {v.to_diagnostic() if hasattr(v, 'to_diagnostic') else v}\n")
        return EXIT_REJECTED
    except DivergenceError as exc:
        err.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except ContractError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
