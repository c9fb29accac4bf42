"""Theorem checks run by ``qdirac verify``.

Each check returns a :class:`Check`; a check that raises is reported as failed
rather than aborting the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import game, gates, linalg, measurement, oracles, protocols
from .states import bell, is_entangled_2q, ket, normalized


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _random_qubit(rng: np.random.Generator):
    return normalized(rng.normal(size=2) + 1j * rng.normal(size=2))


def check_gates(eps: float) -> Check:
    worst = max(linalg.unitarity_deviation(g().matrix) for g in gates.NAMED_GATES.values())
    self_adjoint = all(
        np.allclose(linalg.dagger(g.matrix), g.matrix, atol=eps) for g in (gates.hadamard(), gates.cnot())
    )
    return Check("named gates are unitary; H and cNOT self-adjoint", worst < eps and self_adjoint,
                 f"max unitarity deviation {worst:.2e}")


def check_bell(eps: float) -> Check:
    ok = True
    for a in (0, 1):
        for b in (0, 1):
            s = bell(a, b)
            ok &= is_entangled_2q(s, eps)
            for m in (0, 1):
                after = measurement.post_meas(s, 0, m, eps)
                same = measurement.prob1(after, 1) if m else measurement.prob0(after, 1)
                ok &= abs(same - (1.0 if b == 0 else 0.0)) < eps
    return Check("Bell states are entangled with correlated measurements", bool(ok), "4 Bell states")


def check_no_cloning(eps: float) -> Check:
    m = protocols.basis_cloner(1)
    plus = normalized([1, 1])
    clones_basis = protocols.is_cloner_for(m, ket("0"), eps) and protocols.is_cloner_for(m, ket("1"), eps)
    fails_plus = protocols.cloning_residual(m, plus) > 0.4
    overlap = protocols.no_cloning_check(m, ket("0"), ket("1"), eps)
    rng = np.random.default_rng(0)
    gaps = [linalg.cauchy_schwarz_gap(linalg.column(rng.normal(size=4) + 1j * rng.normal(size=4)),
                                      linalg.column(rng.normal(size=4) + 1j * rng.normal(size=4)))
            for _ in range(1000)]
    ok = clones_basis and fails_plus and overlap < eps and min(gaps) >= -1e-12
    return Check("no-cloning: copyable states are identical or orthogonal", ok,
                 f"|<0|1>| = {overlap:.1e}, superposition residual {protocols.cloning_residual(m, plus):.3f}, "
                 f"min Cauchy-Schwarz gap {min(gaps):.1e}")


def check_teleportation(eps: float) -> Check:
    rng = np.random.default_rng(1)
    worst_fid, worst_prob = 1.0, 0.0
    for _ in range(200):
        phi = _random_qubit(rng)
        for out in protocols.teleport(phi, eps):
            worst_fid = min(worst_fid, out.fidelity(phi))
            worst_prob = max(worst_prob, abs(out.probability - 0.25))
    ok = worst_fid >= 1 - eps and worst_prob < eps
    return Check("teleportation: Bob recovers the sent state on every branch", ok,
                 f"200 states, min fidelity {worst_fid:.12f}, max |p - 1/4| {worst_prob:.1e}")


def check_deutsch(eps: float) -> Check:
    bad = [f.bits() for f in map(oracles.BooleanFunction.from_bits, ("00", "01", "10", "11"))
           if oracles.deutsch_eval(f) != f(0) ^ f(1)]
    return Check("Deutsch: one query yields f(0) xor f(1)", not bad, f"mismatches: {bad or 'none'}")


def check_deutsch_jozsa(eps: float) -> Check:
    counts, bad = [], []
    for n in (1, 2, 3):
        const, bal = oracles.constant_tables(n), oracles.balanced_tables(n)
        bad += [f.bits() for f in const if oracles.jozsa_eval(f) != 1]
        bad += [f.bits() for f in bal if oracles.jozsa_eval(f) != 0]
        counts.append(f"n={n}: {len(const)} constant, {len(bal)} balanced")
    return Check("Deutsch-Jozsa: output is 1 iff constant, 0 iff balanced", not bad,
                 "; ".join(counts) + (f"; failures {bad}" if bad else ""))


EXPECTED_TABLE = [
    [(3, 3), (0, 5), (1.5, 4)],
    [(5, 0), (1, 1), (3, 0.5)],
    [(1, 1), (5, 0), (3, 0.5)],
    [(3, 0.5), (3, 0.5), (1, 1)],
]


def check_game_table(eps: float) -> Check:
    n = game.named_strategy
    table = game.payoff_table(game.GameConfig(math.pi / 2), [n(c) for c in "CDQM"], [n(c) for c in "CDE"])
    dev = max(max(abs(cell.alice - a), abs(cell.bob - b))
              for row, ref in zip(table, EXPECTED_TABLE) for cell, (a, b) in zip(row, ref))
    e_best = game.best_response(game.GameConfig(math.pi / 2), n("M"), [n(c) for c in "CDE"]) == n("E")
    return Check("quantum Prisoner's Dilemma payoff table at maximal entanglement", dev < eps and e_best,
                 f"max deviation {dev:.1e}; Bob's best reply to M is E: {e_best}")


def check_miracle_move(eps: float) -> Check:
    m = game.named_strategy("M")
    dev, wrong = 0.0, 0.0
    for g in np.linspace(0, math.pi / 2, 20):
        cfg = game.GameConfig(float(g))
        for t in np.linspace(0, math.pi, 20):
            sim = game.payoffs(cfg, m, game.Strategy(float(t), 0.0))
            closed = game.miracle_payoffs_closed_form(float(g), float(t))
            dev = max(dev, abs(sim.alice - closed.alice), abs(sim.bob - closed.bob))
            if g == math.pi / 2:
                wrong = max(wrong, abs(sim.alice - (3 + 2 * math.sin(t))), abs(sim.bob - (1 - math.sin(t)) / 2))
    draw = game.miracle_payoffs_closed_form(math.pi / 2, math.pi / 2)
    ok = dev < eps and wrong > 0.1 and abs(draw.alice - 1) < eps and abs(draw.bob - 1) < eps
    return Check("miracle move: corrected closed forms match simulation", ok,
                 f"max deviation {dev:.1e}; uncorrected forms off by {wrong:.2f}")


def check_equilibria(eps: float) -> Check:
    n = game.named_strategy
    classical, quantum = game.GameConfig(0.0), game.GameConfig(math.pi / 2)
    dd_classical = game.is_nash_eq(classical, n("D"), n("D"))
    dd_quantum = game.is_nash_eq(quantum, n("D"), n("D"))
    qq_nash = game.is_nash_eq(quantum, n("Q"), n("Q"))
    qq_pareto = game.is_pareto_optimal(quantum, n("Q"), n("Q"))
    ok = (dd_classical.holds and not dd_quantum.holds and dd_quantum.witness_payoff >= 5 - 1e-6
          and qq_nash.holds and qq_pareto.holds)
    return Check("equilibria: (D,D) Nash only classically; (Q,Q) Nash and Pareto optimal", ok,
                 f"65x33 grid; quantum (D,D) deviation gains {dd_quantum.gain}")


CHECKS: list[Callable[[float], Check]] = [
    check_gates,
    check_bell,
    check_no_cloning,
    check_teleportation,
    check_deutsch,
    check_deutsch_jozsa,
    check_game_table,
    check_miracle_move,
    check_equilibria,
]


def run_all(eps: float | None = None) -> list[Check]:
    eps = linalg.check_eps(eps)
    results = []
    for fn in CHECKS:
        try:
            results.append(fn(eps))
        except Exception as exc:  # a crashing check is a failed check
            results.append(Check(fn.__name__, False, f"{type(exc).__name__}: {exc}"))
    return results
