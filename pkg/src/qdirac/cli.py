"""Command-line front end.

Every subcommand prints a run report: the parsed inputs, the
subcommand-specific results and a list of named checks. The exit status is
0 when every check passed, 1 on a domain failure and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field

from . import game, linalg, measurement, oracles, protocols, verify
from .errors import QDiracError
from .states import bell, is_entangled_2q, state_from_json, state_to_json

ANGLE_CONSTANTS = {"PI": math.pi, "PI_2": math.pi / 2, "PI_4": math.pi / 4}
_ANGLE_RE = re.compile(r"^\s*(?:([-+]?[0-9.]+(?:[eE][-+]?\d+)?)\s*\*\s*)?(PI_2|PI_4|PI)\s*$", re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Radians, or a named constant ``PI``, ``PI_2``, ``PI_4`` with an optional ``k*`` prefix."""
    m = _ANGLE_RE.match(text)
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        return coef * ANGLE_CONSTANTS[m.group(2).upper()]
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def parse_strategy(text: str) -> game.Strategy:
    if "," in text:
        theta, phi = text.split(",", 1)
        try:
            return game.Strategy(parse_angle(theta), parse_angle(phi))
        except QDiracError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    try:
        return game.named_strategy(text)
    except QDiracError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_grid(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[xX](\d+)", text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"grid must look like 65x33, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def parse_coeffs(text: str) -> game.PayoffCoeffs:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected four comma-separated payoffs r,s,t,p, got {text!r}")
    try:
        return game.PayoffCoeffs(*(float(p) for p in parts))
    except ValueError:
        raise argparse.ArgumentTypeError(f"payoffs must be numbers, got {text!r}") from None


def parse_bits(text: str) -> str:
    if not re.fullmatch(r"[01]+", text):
        raise argparse.ArgumentTypeError(f"expected a bitstring, got {text!r}")
    return text


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        value = float("nan")
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


@dataclass
class RunReport:
    subcommand: str
    inputs: dict
    results: object = None
    checks: list[verify.Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "results": self.results,
            "checks": [c.to_json() for c in self.checks],
        }


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise QDiracError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise QDiracError(f"{path} is not valid JSON: {exc}") from None


def load_state(path: str, eps: float):
    """Read a state file; a run report whose results hold a state is accepted too."""
    obj = _load_json(path)
    if isinstance(obj, dict) and "results" in obj and isinstance(obj["results"], dict):
        obj = obj["results"].get("state", obj["results"])
    return state_from_json(obj, eps)


# --- subcommands ---

def cmd_measure(args) -> RunReport:
    s = load_state(args.state_file, args.eps)
    p0, p1 = measurement.prob0(s, args.qubit), measurement.prob1(s, args.qubit)
    counts = measurement.sample_counts(s, args.qubit, args.shots, args.seed)
    report = RunReport("measure", {"state_file": args.state_file, "qubit": args.qubit,
                                   "shots": args.shots, "seed": args.seed})
    report.results = {"prob0": p0, "prob1": p1, "counts": counts}
    report.checks.append(verify.Check("probabilities sum to 1", abs(p0 + p1 - 1) < args.eps, f"{p0 + p1:.12f}"))
    return report


def cmd_teleport(args) -> RunReport:
    phi = load_state(args.state_file, args.eps)
    report = RunReport("teleport", {"state_file": args.state_file, "branch": args.branch})
    rows = []
    for out in protocols.teleport(phi, args.eps):
        if args.branch is not None and args.branch != f"{out.m1}{out.m2}":
            continue
        fid = out.fidelity(phi)
        rows.append({"m1": out.m1, "m2": out.m2, "probability": out.probability, "fidelity": fid})
        report.checks.append(verify.Check(
            f"branch {out.m1}{out.m2} recovers the state",
            fid >= 1 - args.eps and abs(out.probability - 0.25) < args.eps,
            f"fidelity {fid:.12f}, probability {out.probability:.12f}",
        ))
    report.results = rows
    return report


def _oracle_result(kind, value: int, p_zero: float) -> dict:
    return {"eval": value, "classification": kind.value, "all_zero_probability": p_zero}


def cmd_deutsch(args) -> RunReport:
    if len(args.table) != 2:
        raise QDiracError(f"Deutsch's algorithm needs a 2-entry table, got {args.table!r}")
    f = oracles.BooleanFunction.from_bits(args.table)
    kind = oracles.classify(f)
    state = oracles.deutsch_algo(f)
    value = oracles.deutsch_eval(f)
    report = RunReport("deutsch", {"table": args.table})
    report.results = _oracle_result(kind, value, measurement.prob0(state, 0))
    report.checks.append(verify.Check("eval equals f(0) xor f(1)", value == f(0) ^ f(1), f"eval {value}"))
    return report


def cmd_jozsa(args) -> RunReport:
    f = oracles.BooleanFunction.from_bits(args.table)
    if args.n is not None and args.n != f.n_inputs:
        raise QDiracError(f"--n {args.n} does not match a table of length {len(args.table)}")
    kind = oracles.classify(f)
    state = oracles.jozsa_algo(f)
    value = oracles.jozsa_eval(f)
    report = RunReport("jozsa", {"n": f.n_inputs, "table": args.table})
    report.results = _oracle_result(kind, value, oracles.all_zero_probability(state))
    expected = 1 if kind is oracles.Promise.CONSTANT else 0
    report.checks.append(verify.Check("eval is 1 iff constant", value == expected, f"{kind.value} -> {value}"))
    return report


def cmd_noclone(args) -> RunReport:
    if args.basis_cloner is not None:
        machine = protocols.basis_cloner(args.basis_cloner)
    elif args.machine_file:
        machine = protocols.machine_from_json(_load_json(args.machine_file), args.eps)
    else:
        raise QDiracError("noclone needs --machine-file or --basis-cloner")
    a, b = (load_state(p, args.eps) for p in args.states)
    ca, cb = protocols.is_cloner_for(machine, a, args.eps), protocols.is_cloner_for(machine, b, args.eps)
    overlap = abs(linalg.inner_prod(a.vector, b.vector)) if a.n_qubits == b.n_qubits else None
    report = RunReport("noclone", {"machine_file": args.machine_file, "basis_cloner": args.basis_cloner,
                                   "states": args.states})
    report.results = {"cloner_for_a": ca, "cloner_for_b": cb, "overlap": overlap}
    if ca and cb:
        g = protocols.no_cloning_check(machine, a, b, args.eps)
        report.checks.append(verify.Check("cloned pair is identical or orthogonal",
                                          min(g, abs(1 - g)) < args.eps, f"|<a|b>| = {g:.12f}"))
    return report


def _pair_json(p: game.PayoffPair) -> dict:
    out = {"alice": p.alice, "bob": p.bob}
    if p.branch_probs is not None:
        out["branch_probs"] = dict(zip(("P00", "P01", "P10", "P11"), p.branch_probs))
    return out


def _strategy_json(s: game.Strategy) -> dict:
    return {"theta": s.theta, "phi": s.phi, "name": game.strategy_name(s)}


def cmd_game(args) -> RunReport:
    cfg = game.GameConfig(args.gamma, args.coeffs)
    grid = game.GridSpec(*args.grid, classical_only=args.classical_only)
    report = RunReport("game", {"gamma": args.gamma, "coeffs": list(cfg.coeffs), "grid": list(args.grid),
                                "alice": args.alice_text, "bob": args.bob_text, "table": args.table,
                                "nash": args.nash, "pareto": args.pareto, "classical_only": args.classical_only})
    results = {}
    if args.table:
        rows, cols = args.table
        table = game.payoff_table(cfg, [game.named_strategy(c) for c in rows], [game.named_strategy(c) for c in cols])
        results["table"] = {"rows": list(rows), "cols": list(cols),
                            "cells": [[_pair_json(cell) for cell in row] for row in table]}
    if (args.nash or args.pareto) and (args.alice is None or args.bob is None):
        raise QDiracError("--nash and --pareto need both --alice and --bob")
    if args.alice is not None and args.bob is not None:
        pair = game.payoffs(cfg, args.alice, args.bob)
        results["payoffs"] = _pair_json(pair)
        report.checks.append(verify.Check("branch probabilities sum to 1",
                                          abs(sum(pair.branch_probs) - 1) < args.eps, ""))
        if args.nash:
            v = game.is_nash_eq(cfg, args.alice, args.bob, grid, args.margin)
            results["nash"] = {"holds": v.holds, "player": v.player, "gain": v.gain,
                               "witness": _strategy_json(v.witness) if v.witness else None,
                               "witness_payoff": v.witness_payoff}
        if args.pareto:
            v = game.is_pareto_optimal(cfg, args.alice, args.bob, grid, args.margin)
            results["pareto"] = {"holds": v.holds,
                                 "witness": [_strategy_json(s) for s in v.witness] if v.witness else None,
                                 "witness_payoffs": list(v.witness_payoffs) if v.witness_payoffs else None}
    if not results:
        raise QDiracError("game needs --table or both --alice and --bob")
    report.results = results
    return report


def cmd_bell(args) -> RunReport:
    a, b = int(args.label[0]), int(args.label[1])
    s = bell(a, b)
    report = RunReport("bell", {"label": args.label})
    report.results = {"state": state_to_json(s), "entangled": is_entangled_2q(s, args.eps),
                      "prob1": [measurement.prob1(s, 0), measurement.prob1(s, 1)]}
    report.checks.append(verify.Check("Bell state is entangled", report.results["entangled"], ""))
    return report


def cmd_verify(args) -> RunReport:
    report = RunReport("verify", {"eps": args.eps})
    report.checks = verify.run_all(args.eps)
    report.results = {"passed": sum(c.passed for c in report.checks), "total": len(report.checks)}
    return report


# --- output ---

def _fmt(x: float) -> str:
    r = round(x, 9)
    return f"{r:g}" if r != 0 else "0"


def render_text(report: RunReport) -> str:
    lines = []
    res = report.results
    if report.subcommand == "game" and "table" in res:
        t = res["table"]
        cells = [[f"({_fmt(c['alice'])}, {_fmt(c['bob'])})" for c in row] for row in t["cells"]]
        width = max(len(c) for row in cells for c in row + t["cols"])
        lines.append("Alice \\ Bob  " + "  ".join(c.center(width) for c in t["cols"]))
        for name, row in zip(t["rows"], cells):
            lines.append(f"{name:<11}  " + "  ".join(c.center(width) for c in row))
        res = {k: v for k, v in res.items() if k != "table"}
    if report.subcommand == "teleport":
        for row in res:
            lines.append(f"m1={row['m1']} m2={row['m2']}  probability={row['probability']:.12f}  "
                         f"fidelity={row['fidelity']:.12f}")
    elif report.subcommand != "verify" and res:
        for key, value in res.items():
            lines.append(f"{key}: {json.dumps(value)}")
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"[{status}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    if report.subcommand == "verify":
        lines.append(f"{res['passed']}/{res['total']} checks passed")
    return "\n".join(lines)


# --- argument parsing ---

def _env_eps() -> float:
    raw = os.environ.get("QDIRAC_EPS")
    if raw is None:
        return linalg.DEFAULT_EPS
    return positive_float(raw)


def build_parser(default_eps: float) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--eps", type=positive_float, default=default_eps,
                        help="comparison tolerance (default: $QDIRAC_EPS or 1e-9)")

    parser = argparse.ArgumentParser(prog="qdirac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("measure", parents=[common], help="measure one qubit of a state")
    p.add_argument("--state-file", required=True)
    p.add_argument("--qubit", type=int, default=0)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("teleport", parents=[common], help="teleport a 1-qubit state")
    p.add_argument("--state-file", required=True)
    p.add_argument("--branch", choices=("00", "01", "10", "11"))
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("deutsch", parents=[common], help="run Deutsch's algorithm")
    p.add_argument("--table", type=parse_bits, required=True, help="f(0)f(1), e.g. 01")
    p.set_defaults(func=cmd_deutsch)

    p = sub.add_parser("jozsa", parents=[common], help="run the Deutsch-Jozsa algorithm")
    p.add_argument("--n", type=int)
    p.add_argument("--table", type=parse_bits, required=True, help="truth table in basis order")
    p.set_defaults(func=cmd_jozsa)

    p = sub.add_parser("noclone", parents=[common], help="test a cloning machine on two states")
    p.add_argument("--machine-file")
    p.add_argument("--basis-cloner", type=int, metavar="N", help="use the built-in basis cloner on N qubits")
    p.add_argument("--states", nargs=2, required=True, metavar=("A", "B"))
    p.set_defaults(func=cmd_noclone)

    p = sub.add_parser("game", parents=[common], help="quantum Prisoner's Dilemma")
    p.add_argument("--gamma", type=parse_angle, default=math.pi / 2)
    p.add_argument("--alice", dest="alice_text")
    p.add_argument("--bob", dest="bob_text")
    p.add_argument("--table", nargs=2, metavar=("ROWS", "COLS"), help="strategy letters, e.g. CDQM CDE")
    p.add_argument("--nash", action="store_true")
    p.add_argument("--pareto", action="store_true")
    p.add_argument("--grid", type=parse_grid, default=(65, 33), help="theta x phi points (default 65x33)")
    p.add_argument("--classical-only", action="store_true", help="restrict deviations to phi = 0")
    p.add_argument("--margin", type=positive_float, default=1e-7)
    p.add_argument("--coeffs", type=parse_coeffs, default=game.PayoffCoeffs(), help="r,s,t,p (default 3,0,5,1)")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("bell", parents=[common], help="emit a Bell state")
    p.add_argument("label", nargs="?", default="00", choices=("00", "01", "10", "11"))
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("verify", parents=[common], help="run every theorem check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        default_eps = _env_eps()
    except argparse.ArgumentTypeError as exc:
        print(f"qdirac: error: QDIRAC_EPS: {exc}", file=sys.stderr)
        return 2
    parser = build_parser(default_eps)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.subcommand == "game":
        try:
            args.alice = parse_strategy(args.alice_text) if args.alice_text else None
            args.bob = parse_strategy(args.bob_text) if args.bob_text else None
            if args.table:
                for letters in args.table:
                    for c in letters:
                        game.named_strategy(c)
        except (argparse.ArgumentTypeError, QDiracError) as exc:
            print(f"qdirac game: error: {exc}", file=sys.stderr)
            return 2
    try:
        report = args.func(args)
    except QDiracError as exc:
        print(f"qdirac {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(render_text(report))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
