"""The Eisert-Wilkens-Lewenstein quantum Prisoner's Dilemma.

Each player picks ``U(θ, φ)`` with ``θ ∈ [0, π]`` and ``φ ∈ [0, π/2]``. The
referee entangles ``|00>`` with ``J = exp(iγ D⊗D/2)``, both strategies act,
``J†`` disentangles, and the payoffs are expectations over the four outcomes.

Nash and Pareto verdicts are computed over a finite strategy grid and are
only as strong as that grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import gates, linalg
from .errors import InvalidGrid, OutOfRange, QDiracError
from .gates import Gate
from .states import QuantumState, ket

PI = math.pi


@dataclass(frozen=True)
class Strategy:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0 <= self.theta <= PI:
            raise OutOfRange(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0 <= self.phi <= PI / 2:
            raise OutOfRange(f"phi must lie in [0, pi/2], got {self.phi!r}")


NAMED_STRATEGIES = {
    "C": Strategy(0.0, 0.0),
    "D": Strategy(PI, 0.0),
    "Q": Strategy(0.0, PI / 2),
    "M": Strategy(PI / 2, PI / 2),
    "E": Strategy(PI / 2, 0.0),
}


def named_strategy(name: str) -> Strategy:
    try:
        return NAMED_STRATEGIES[name.upper()]
    except KeyError:
        raise QDiracError(f"unknown strategy {name!r}; expected one of {', '.join(NAMED_STRATEGIES)}") from None


def strategy_name(s: Strategy) -> str | None:
    for name, named in NAMED_STRATEGIES.items():
        if named == s:
            return name
    return None


class PayoffCoeffs(NamedTuple):
    reward: float = 3.0
    sucker: float = 0.0
    temptation: float = 5.0
    punishment: float = 1.0


@dataclass(frozen=True)
class GameConfig:
    gamma: float
    coeffs: PayoffCoeffs = field(default_factory=PayoffCoeffs)

    def __post_init__(self):
        if not 0 <= self.gamma <= PI / 2:
            raise OutOfRange(f"gamma must lie in [0, pi/2], got {self.gamma!r}")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise QDiracError("payoff coefficients must be finite")
        object.__setattr__(self, "coeffs", PayoffCoeffs(*map(float, self.coeffs)))


@dataclass(frozen=True)
class PayoffPair:
    alice: float
    bob: float
    # (P00, P01, P10, P11); None when computed from the closed form.
    branch_probs: tuple[float, float, float, float] | None = None


def _u_entries(theta, phi):
    c = np.cos(np.asarray(theta) / 2)
    s = np.sin(np.asarray(theta) / 2)
    e = np.exp(1j * np.asarray(phi))
    return e * c, s, -s, np.conj(e) * c


def strategy_matrix(s: Strategy) -> Gate:
    a, b, c, d = _u_entries(s.theta, s.phi)
    return gates.make_gate(1, [[a, b], [c, d]])


def _defect_squared() -> np.ndarray:
    d = strategy_matrix(NAMED_STRATEGIES["D"]).matrix
    return linalg.kronecker(d, d)


def entangler(gamma: float) -> Gate:
    """``exp(iγ D⊗D/2) = cos(γ/2)·I + i·sin(γ/2)·D⊗D`` since ``(D⊗D)² = I``."""
    if not 0 <= gamma <= PI / 2:
        raise OutOfRange(f"gamma must lie in [0, pi/2], got {gamma!r}")
    m = math.cos(gamma / 2) * np.eye(4) + 1j * math.sin(gamma / 2) * _defect_squared()
    return gates.make_gate(2, m)


def final_state(cfg: GameConfig, sa: Strategy, sb: Strategy) -> QuantumState:
    j = entangler(cfg.gamma)
    local = gates.tensor_gates(strategy_matrix(sa), strategy_matrix(sb))
    circuit = gates.compose(gates.make_gate(2, linalg.dagger(j.matrix)), gates.compose(local, j))
    return gates.apply(circuit, ket("00"))


def _payoffs_from_probs(coeffs: PayoffCoeffs, p00, p01, p10, p11):
    r, s, t, p = coeffs
    alice = r * p00 + p * p11 + t * p10 + s * p01
    bob = r * p00 + p * p11 + t * p01 + s * p10
    return alice, bob


def payoffs(cfg: GameConfig, sa: Strategy, sb: Strategy) -> PayoffPair:
    probs = tuple(float(x) for x in np.abs(final_state(cfg, sa, sb).amplitudes) ** 2)
    alice, bob = _payoffs_from_probs(cfg.coeffs, *probs)
    return PayoffPair(float(alice), float(bob), probs)


def payoff_arrays(cfg: GameConfig, theta_a, phi_a, theta_b, phi_b) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized payoffs; the four parameter arrays broadcast against each other."""
    j = entangler(cfg.gamma).matrix
    ua = _u_entries(theta_a, phi_a)
    ub = _u_entries(theta_b, phi_b)
    # J|00> has weight only on |00> and |11>.
    j0, j3 = j[0, 0], j[3, 0]
    v = [ua[2 * a] * ub[2 * b] * j0 + ua[2 * a + 1] * ub[2 * b + 1] * j3 for a in (0, 1) for b in (0, 1)]
    jd = np.conj(j).T
    psi = [sum(jd[k, l] * v[l] for l in range(4)) for k in range(4)]
    probs = [np.abs(x) ** 2 for x in psi]
    return _payoffs_from_probs(cfg.coeffs, *probs)


def miracle_payoffs_closed_form(gamma: float, theta: float) -> PayoffPair:
    """Payoffs for Alice playing M against Bob's classical ``U(θ, 0)``."""
    if not 0 <= gamma <= PI / 2:
        raise OutOfRange(f"gamma must lie in [0, pi/2], got {gamma!r}")
    if not 0 <= theta <= PI:
        raise OutOfRange(f"theta must lie in [0, pi], got {theta!r}")
    cg2, sg2 = math.cos(gamma) ** 2, math.sin(gamma) ** 2
    sg, ct, st = math.sin(gamma), math.cos(theta), math.sin(theta)
    alice = (21 + cg2 * (-3 + 14 * ct) + 3 * sg2 - 16 * sg * st) / 8
    bob = (11 + cg2 * (7 - 6 * ct) - 7 * sg2 + 4 * sg * st) / 8
    return PayoffPair(alice, bob)


def classical_restriction(s: Strategy, eps: float | None = None) -> bool:
    return s.phi < linalg.check_eps(eps)


def payoff_table(cfg: GameConfig, rows: Sequence[Strategy], cols: Sequence[Strategy]) -> list[list[PayoffPair]]:
    if not rows or not cols:
        raise QDiracError("payoff table needs at least one row and one column strategy")
    return [[payoffs(cfg, a, b) for b in cols] for a in rows]


def best_response(cfg: GameConfig, opponent: Strategy, candidates: Sequence[Strategy], player: str = "bob") -> Strategy:
    """Candidate maximizing ``player``'s payoff against ``opponent`` (first wins ties)."""
    if player == "bob":
        scores = [payoffs(cfg, opponent, c).bob for c in candidates]
    else:
        scores = [payoffs(cfg, c, opponent).alice for c in candidates]
    return candidates[int(np.argmax(scores))]


# --- grid-relative equilibrium checks ---

_TIE = 1e-12


@dataclass(frozen=True)
class GridSpec:
    theta_points: int = 65
    phi_points: int = 33
    classical_only: bool = False

    def __post_init__(self):
        if self.theta_points < 2 or (not self.classical_only and self.phi_points < 2):
            raise InvalidGrid(f"grid needs at least 2 points per axis, got {self.theta_points}x{self.phi_points}")

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (θ, φ) arrays in lexicographic order, θ outermost."""
        thetas = np.linspace(0, PI, self.theta_points)
        phis = np.zeros(1) if self.classical_only else np.linspace(0, PI / 2, self.phi_points)
        t, p = np.meshgrid(thetas, phis, indexing="ij")
        return t.ravel(), p.ravel()


@dataclass(frozen=True)
class NashVerdict:
    holds: bool
    player: str | None = None
    witness: Strategy | None = None
    gain: float | None = None
    witness_payoff: float | None = None


@dataclass(frozen=True)
class ParetoVerdict:
    holds: bool
    witness: tuple[Strategy, Strategy] | None = None
    witness_payoffs: tuple[float, float] | None = None


def _first_best(scores: np.ndarray) -> int:
    return int(np.flatnonzero(scores >= scores.max() - _TIE)[0])


def _as_strategy(theta: float, phi: float) -> Strategy:
    # linspace endpoints can overshoot by an ulp
    return Strategy(min(max(float(theta), 0.0), PI), min(max(float(phi), 0.0), PI / 2))


def is_nash_eq(cfg: GameConfig, sa: Strategy, sb: Strategy, grid: GridSpec | None = None,
               margin: float = 1e-7) -> NashVerdict:
    """No unilateral deviation on ``grid`` improves either payoff by more than ``margin``.

    When refuted, the witness is the deviation with the largest gain, earliest
    in grid order among ties; Alice is examined before Bob.
    """
    grid = grid or GridSpec()
    base = payoffs(cfg, sa, sb)
    t, p = grid.points()
    alice, _ = payoff_arrays(cfg, t, p, sb.theta, sb.phi)
    _, bob = payoff_arrays(cfg, sa.theta, sa.phi, t, p)
    for player, scores, ref in (("alice", alice, base.alice), ("bob", bob, base.bob)):
        k = _first_best(scores)
        if scores[k] > ref + margin:
            return NashVerdict(False, player, _as_strategy(t[k], p[k]), float(scores[k] - ref), float(scores[k]))
    return NashVerdict(True)


def is_pareto_optimal(cfg: GameConfig, sa: Strategy, sb: Strategy, grid: GridSpec | None = None,
                      margin: float = 1e-7) -> ParetoVerdict:
    """No grid pair is at least as good for both players and better for one by more than ``margin``.

    The reported dominating pair maximizes the combined gain, earliest in grid
    order (Alice's parameters outermost) among ties.
    """
    grid = grid or GridSpec()
    base = payoffs(cfg, sa, sb)
    t, p = grid.points()
    best_score, best = -np.inf, None
    block = 64
    for start in range(0, len(t), block):
        ta, pa = t[start:start + block, None], p[start:start + block, None]
        alice, bob = payoff_arrays(cfg, ta, pa, t[None, :], p[None, :])
        dominates = ((alice >= base.alice - margin) & (bob >= base.bob - margin)
                     & ((alice > base.alice + margin) | (bob > base.bob + margin)))
        if not dominates.any():
            continue
        score = np.where(dominates, alice + bob, -np.inf).ravel()
        k = _first_best(score)
        if score[k] > best_score + _TIE:
            i, jb = divmod(k, len(t))
            best_score = score[k]
            best = (start + i, jb, float(alice.ravel()[k]), float(bob.ravel()[k]))
    if best is None:
        return ParetoVerdict(True)
    i, jb, pay_a, pay_b = best
    pair = (_as_strategy(t[i], p[i]), _as_strategy(t[jb], p[jb]))
    return ParetoVerdict(False, pair, (pay_a, pay_b))
