"""Command line front end.

Exit codes follow verification-tool convention: 0 when the property holds
(Valid, Correct, Sat), 1 when it does not (NotValid, Warning, Unsat), 2 for
usage or input errors and 3 when the node budget runs out.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .constraints import ConstraintError, ConstraintSystem, FlatSystem, load_table
from .formula import Formula, FormulaError, Not, show
from .oracle import ExistsUnsupported, OracleBounds, SatWitness, evaluate_all, oracle_sat, relevant_atoms, strip_exists
from .parsing import ParseError, parse_formula, parse_program, parse_spec
from .render import tableau_to_dot
from .streams import StreamError, simplify
from .tableau import BudgetExceeded, Tableau, TableauOptions, check_sat
from .tccp import ProgramError, diagnose, uncovered_hint
from .traces import trace_to_json

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass(frozen=True)
class SessionConfig:
    table: Path | None = None
    stream_mode: bool = False
    node_budget: int = 10**6
    output: str = "text"
    dot: Path | None = None
    oracle_check: bool = False
    oracle_prefix: int = 4
    oracle_cycle: int = 3
    uncovered: bool = False

    def __post_init__(self):
        if self.node_budget < 1:
            raise ValueError("node budget must be at least 1")
        if self.output not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output!r}")

    def system(self) -> ConstraintSystem:
        return load_table(self.table) if self.table else FlatSystem()

    def tableau_options(self) -> TableauOptions:
        return TableauOptions(stream_mode=self.stream_mode, node_budget=self.node_budget)

    def oracle_bounds(self) -> OracleBounds:
        return OracleBounds(self.oracle_prefix, self.oracle_cycle)


def read_formula(path: Path, cs: ConstraintSystem) -> Formula:
    return parse_formula(path.read_text(encoding="utf-8"), cs)


def oracle_agrees(fs: list[Formula], sat: bool, model, cs, bounds: OracleBounds) -> str:
    """``agree``/``disagree`` with the tableau verdict, or ``skipped``."""
    try:
        fs = strip_exists(fs)
        if sat:
            ok = evaluate_all(model, fs, cs)
        else:
            ok = not isinstance(oracle_sat(fs, cs, relevant_atoms(fs), bounds), SatWitness)
    except ExistsUnsupported:
        return "skipped"
    return "agree" if ok else "disagree"


def _tableau_summary(tab: Tableau) -> dict:
    return {"nodes": len(tab.nodes), "branches": len(tab.leaves())}


def _run_formula(cmd: str, cfg: SessionConfig, cs: ConstraintSystem, f: Formula) -> tuple[int, dict, list]:
    if cfg.stream_mode:
        f = simplify(f)
    root = [f] if cmd == "sat" else [Not(f)]
    res = check_sat(root, cs, cfg.tableau_options())
    if cmd == "sat":
        verdict, code = ("Sat", EXIT_HOLDS) if res.satisfiable else ("Unsat", EXIT_FAILS)
    else:
        verdict, code = ("NotValid", EXIT_FAILS) if res.satisfiable else ("Valid", EXIT_HOLDS)
    report = {
        "command": cmd,
        "formula": show(f),
        "verdict": verdict,
        "tableau": _tableau_summary(res.tableau),
        "witness": trace_to_json(res.model) if res.model else None,
    }
    if cfg.oracle_check:
        report["oracle"] = oracle_agrees(root, res.satisfiable, res.model, cs, cfg.oracle_bounds())
    return code, report, [("tableau", res.tableau, res.model)]


def _run_diagnose(cfg: SessionConfig, cs: ConstraintSystem, prog_path: Path, spec_path: Path):
    program = parse_program(prog_path.read_text(encoding="utf-8"), cs)
    spec = parse_spec(spec_path.read_text(encoding="utf-8"), cs)
    results = diagnose(program, spec, cs, cfg.tableau_options())
    hints = uncovered_hint(program, spec, cs, cfg.tableau_options()) if cfg.uncovered else {}
    procs, tabs = [], []
    for d in results:
        entry = {
            "process": f"{d.process}/{d.arity}",
            "verdict": d.verdict,
            "tableau": _tableau_summary(d.tableau),
            "witness": trace_to_json(d.countermodel) if d.countermodel else None,
        }
        if cfg.oracle_check:
            entry["oracle"] = oracle_agrees(
                [Not(d.implication)], not d.correct, d.countermodel, cs, cfg.oracle_bounds()
            )
        if cfg.uncovered:
            entry["uncovered_heuristic"] = hints[d.process, d.arity]
        procs.append(entry)
        tabs.append((f"{d.process}_{d.arity}", d.tableau, d.countermodel))
    correct = all(d.correct for d in results)
    report = {
        "command": "diagnose",
        "verdict": "Correct" if correct else "Warning",
        "processes": procs,
        "tableau": {
            "nodes": sum(len(d.tableau.nodes) for d in results),
            "branches": sum(len(d.tableau.leaves()) for d in results),
        },
    }
    return (EXIT_HOLDS if correct else EXIT_FAILS), report, tabs


def _print_text(report: dict, tabs, out) -> None:
    if report["command"] == "diagnose":
        for p in report["processes"]:
            line = f"{p['process']}: {p['verdict']}"
            if p["verdict"] == "Warning":
                line += " (possible incorrectness, the abstract check is not conclusive)"
            print(line, file=out)
            if "oracle" in p:
                print(f"  oracle: {p['oracle']}", file=out)
            if "uncovered_heuristic" in p:
                verdict = "nothing uncovered found" if p["uncovered_heuristic"] else "possibly uncovered behavior"
                print(f"  uncovered (heuristic): {verdict}", file=out)
        for name, _, model in tabs:
            if model is not None:
                print(f"  witness {name}: {model}", file=out)
    else:
        print(report["verdict"], file=out)
        for _, _, model in tabs:
            if model is not None:
                print(f"witness: {model}", file=out)
        if "oracle" in report:
            print(f"oracle: {report['oracle']}", file=out)
    t = report["tableau"]
    print(f"tableau: {t['nodes']} nodes, {t['branches']} branches, {report['seconds']:.3f}s", file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", type=Path, help="finite constraint table (default: flat equality system)")
    common.add_argument("--streams", action="store_true", help="simplify stream cells and use the stream next operator")
    common.add_argument("--budget", type=int, default=10**6, help="node budget (default 10^6)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--dot", type=Path, help="also write the tableau as GraphViz DOT")
    common.add_argument("--oracle-check", action="store_true", help="cross-check the verdict with the bounded oracle")
    common.add_argument("--oracle-prefix", type=int, default=4)
    common.add_argument("--oracle-cycle", type=int, default=3)

    parser = argparse.ArgumentParser(prog="csltl", description="csLTL tableau prover and tccp abstract diagnosis")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sat", parents=[common], help="satisfiability of a formula file")
    p.add_argument("formula", type=Path)
    p = sub.add_parser("valid", parents=[common], help="validity of a formula file")
    p.add_argument("formula", type=Path)
    p = sub.add_parser("diagnose", parents=[common], help="abstract diagnosis of a tccp program")
    p.add_argument("program", type=Path)
    p.add_argument("spec", type=Path)
    p.add_argument("--uncovered", action="store_true", help="also run the heuristic reverse check")
    return parser


def config_from_args(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig(
        table=args.table,
        stream_mode=args.streams,
        node_budget=args.budget,
        output=args.format,
        dot=args.dot,
        oracle_check=args.oracle_check,
        oracle_prefix=args.oracle_prefix,
        oracle_cycle=args.oracle_cycle,
        uncovered=getattr(args, "uncovered", False),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_HOLDS
    out = sys.stdout
    start = time.perf_counter()
    try:
        cfg = config_from_args(args)
        cs = cfg.system()
        if args.command == "diagnose":
            code, report, tabs = _run_diagnose(cfg, cs, args.program, args.spec)
        else:
            code, report, tabs = _run_formula(args.command, cfg, cs, read_formula(args.formula, cs))
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, ConstraintError, FormulaError, ProgramError, StreamError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report["seconds"] = round(time.perf_counter() - start, 6)
    if cfg.dot:
        cfg.dot.write_text("".join(tableau_to_dot(t, name) for name, t, _ in tabs), encoding="utf-8")
    if cfg.output == "json":
        json.dump(report, out, indent=2, ensure_ascii=False)
        out.write("\n")
    else:
        _print_text(report, tabs, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
