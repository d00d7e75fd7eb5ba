"""Command-line entry point: eval, safe, check, derive, verify.

Exit codes: 0 success, 1 refuted judgement or failed derivation/suite,
2 stuck evaluation, 64 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._lexer import ParseError
from .derivation import DerivationError, derive, validate
from .evaluator import Terminal, format_trace, safe_for, trace
from .generators import GenConfig
from .harness import CATALOG, format_report, run_property
from .semantics import ProbeConfig, Verdict, Witness, format_verdict, holds
from .terms import OpenTermError, UnboundVariableError, parse_term, print_term, resolve
from .typeexpr import TypeExpr, parse_type, print_type

EXIT_OK, EXIT_FAIL, EXIT_STUCK, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "stuck"
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _text(arg: str) -> str:
    if arg.startswith("@"):
        try:
            return Path(arg[1:]).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {arg[1:]}: {e.strerror}") from None
    return arg


def _closed_term(arg: str):
    return resolve(parse_term(_text(arg)), closed=True).term


def _type(arg: str) -> TypeExpr:
    t = parse_type(_text(arg))
    if t.free_bound:
        raise UsageError(f"type has unbound variables: {arg}")
    return t


def _env(arg: str | None) -> dict[str, TypeExpr]:
    env: dict[str, TypeExpr] = {}
    if not arg:
        return env
    for part in _text(arg).split(","):
        if not part.strip():
            continue
        name, sep, ty = part.partition(":")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise UsageError(f"bad binding {part.strip()!r}; expected name:Type")
        env[name] = _type(ty)
    return env


def _emit(args, text: str, data: dict) -> None:
    if args.format == "structured":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _trace_data(tr) -> dict:
    return {
        "steps": [print_term(s) for s in tr.steps],
        "steps_taken": tr.steps_taken,
        "terminal": tr.terminal.value,
        "result": print_term(tr.last),
    }


def _witness_data(w: Witness | None) -> dict | None:
    if w is None:
        return None
    out = {"judgement": w.headline(), "reason": w.reason}
    if w.gamma:
        out["gamma"] = {n: print_term(t) for n, t in w.gamma}
    if w.probe is not None:
        out["probe"] = print_term(w.probe)
        out["probe_index"] = w.probe_index
    if w.trace is not None:
        out["trace"] = _trace_data(w.trace)
    if w.cause is not None:
        out["cause"] = _witness_data(w.cause)
    return out


def _verdict_data(v: Verdict) -> dict:
    return {"verdict": v.outcome.value, "probes": v.probes, "witness": _witness_data(v.witness)}


def cmd_eval(args) -> int:
    if args.steps < 0:
        raise UsageError("--steps must be non-negative")
    tr = trace(_closed_term(args.term), args.steps)
    _emit(args, format_trace(tr), _trace_data(tr))
    return EXIT_STUCK if tr.terminal is Terminal.STUCK else EXIT_OK


def cmd_safe(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    ok, tr = safe_for(_closed_term(args.term), args.k)
    text = f"safe: {'yes' if ok else 'no'}\n{format_trace(tr)}"
    _emit(args, text, {"safe": ok, "k": args.k, "trace": _trace_data(tr)})
    return EXIT_OK if ok else EXIT_STUCK


def cmd_check(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    if args.probes < 1:
        raise UsageError("--probes must be at least 1")
    cfg = ProbeConfig(probes_per_type=args.probes, seed=args.seed)
    v = holds(_closed_term(args.term), args.k, _type(args.type), cfg)
    _emit(args, format_verdict(v), _verdict_data(v))
    return EXIT_FAIL if v.refuted else EXIT_OK


def cmd_derive(args) -> int:
    env = _env(args.env)
    try:
        d = derive(env, parse_term(_text(args.term)))
        validate(d)
    except DerivationError as e:
        print(f"derivation failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    _emit(args, f"{print_type(d.type)}\n{d}", {"type": print_type(d.type), "derivation": d.to_dict()})
    return EXIT_OK


def cmd_verify(args) -> int:
    names = CATALOG if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in CATALOG:
        raise UsageError(f"unknown suite {args.suite!r}; known: all, {', '.join(CATALOG)}")
    if args.cases < 1 or args.k < 0:
        raise UsageError("--cases must be positive and --k non-negative")
    gcfg = GenConfig(seed=args.seed, max_index=args.k, cases_per_property=args.cases)
    pcfg = ProbeConfig(seed=args.seed)
    reports = [run_property(n, gcfg, pcfg) for n in names]
    failed = [r.name for r in reports if not r.passed]
    if args.format == "structured":
        data = {
            "suite": args.suite,
            "seed": args.seed,
            "properties": [
                {
                    "name": r.name, "cases": r.cases, "skipped": r.skipped,
                    "refutations": r.refutations, "summary": dict(sorted(r.tally.items())),
                    "status": "pass" if r.passed else "fail",
                    "counterexample": r.counterexample.lines() if r.counterexample else None,
                }
                for r in reports
            ],
            "failed": failed,
        }
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n\n".join(format_report(r) for r in reports))
        print(f"\nsuite: {args.suite}\nseed: {args.seed}\nfailed: {len(failed)} of {len(reports)}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stepcbn", description="Step-indexed types for call-by-name lambda terms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("eval", cmd_eval, "reduce a closed term and print the trace")
    sp.add_argument("term", help="term text or @file")
    sp.add_argument("--steps", type=int, default=100)

    sp = add("safe", cmd_safe, "check that a term does not get stuck within k steps")
    sp.add_argument("term")
    sp.add_argument("--k", type=int, default=1000)

    sp = add("check", cmd_check, "check a :_k T")
    sp.add_argument("term")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--type", required=True, help="type text or @file")
    sp.add_argument("--probes", type=int, default=5, help="probes per type")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("derive", cmd_derive, "derive a type for an annotated term")
    sp.add_argument("term")
    sp.add_argument("--env", default="", help='bindings such as "x:Nat, f:Nat -> Nat"')

    sp = add("verify", cmd_verify, "run the property suite")
    sp.add_argument("--suite", default="all", help=f"all or one of: {', '.join(CATALOG)}")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k", type=int, default=25, help="largest sampled step index")
    sp.add_argument("--cases", type=int, default=100, help="cases per property")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
    except (UnboundVariableError, OpenTermError) as e:
        print(f"error: {e}", file=sys.stderr)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
