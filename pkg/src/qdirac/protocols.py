"""Quantum teleportation and the no-cloning theorem as executable checks."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gates, linalg, measurement
from .errors import NotACloner, QDiracError, WrongArity, WrongDimension
from .gates import Gate
from .states import QuantumState, basis_state, bell, from_amplitudes, state_from_json, state_to_json, tensor_states


def _require_one_qubit(phi: QuantumState) -> None:
    if phi.n_qubits != 1:
        raise WrongArity(f"teleportation sends a single qubit, got {phi.n_qubits} qubits")


def _require_three_qubits(s: QuantumState) -> None:
    if s.n_qubits != 3:
        raise WrongArity(f"expected a 3-qubit combined state, got {s.n_qubits} qubits")


@lru_cache(maxsize=None)
def _alice_circuit() -> Gate:
    entangle = gates.tensor_gates(gates.cnot(), gates.identity(1))
    rotate = gates.tensor_gates(gates.hadamard(), gates.identity(2))
    return gates.compose(rotate, entangle)


@lru_cache(maxsize=None)
def bob_correction(m1: int, m2: int) -> Gate:
    """Id₂ ⊗ G with G = I, X, Z or Z·X (X first) for bits 00, 01, 10, 11."""
    x, z = gates.pauli_x(), gates.pauli_z()
    g = {
        (0, 0): gates.identity(1),
        (0, 1): x,
        (1, 0): z,
        (1, 1): gates.compose(z, x),
    }[(m1, m2)]
    return gates.tensor_gates(gates.identity(2), g)


def alice_encode(phi: QuantumState) -> QuantumState:
    """``(H ⊗ Id₂)·(cNOT ⊗ Id₁)·(φ ⊗ β₀₀)``."""
    _require_one_qubit(phi)
    return gates.apply(_alice_circuit(), tensor_states(phi, bell(0, 0)))


def alice_out(phi: QuantumState, m1: int, m2: int, eps: float | None = None) -> tuple[float, QuantumState]:
    """Probability of Alice reading ``(m1, m2)`` and the collapsed 3-qubit state."""
    return _measure_alice(alice_encode(phi), m1, m2, eps)


def _measure_alice(s: QuantumState, m1: int, m2: int, eps: float | None) -> tuple[float, QuantumState]:
    p1 = measurement.prob1(s, 0) if m1 else measurement.prob0(s, 0)
    s = measurement.post_meas(s, 0, m1, eps)
    p2 = measurement.prob1(s, 1) if m2 else measurement.prob0(s, 1)
    s = measurement.post_meas(s, 1, m2, eps)
    return p1 * p2, s


def bob_decode(post: QuantumState, m1: int, m2: int) -> QuantumState:
    _require_three_qubits(post)
    return gates.apply(bob_correction(m1, m2), post)


def split_off_last_qubit(s: QuantumState, m1: int, m2: int, eps: float | None = None) -> QuantumState:
    """Return ``w`` such that ``s = |m1 m2> ⊗ w``, or raise if ``s`` does not factor."""
    _require_three_qubits(s)
    eps = linalg.check_eps(eps)
    offset = 4 * m1 + 2 * m2
    stray = np.delete(s.amplitudes, [offset, offset + 1])
    if np.max(np.abs(stray)) >= eps:
        raise QDiracError(f"combined state does not factor through |{m1}{m2}>")
    return from_amplitudes(s.amplitudes[offset:offset + 2], eps)


@dataclass(frozen=True)
class TeleportOutcome:
    m1: int
    m2: int
    probability: float
    combined_state: QuantumState
    bob_state: QuantumState

    def fidelity(self, phi: QuantumState) -> float:
        return abs(linalg.inner_prod(self.bob_state.vector, phi.vector)) ** 2


def teleport(phi: QuantumState, eps: float | None = None) -> list[TeleportOutcome]:
    """Run all four measurement branches of the protocol."""
    _require_one_qubit(phi)
    encoded = alice_encode(phi)
    outcomes = []
    for m1 in (0, 1):
        for m2 in (0, 1):
            p, post = _measure_alice(encoded, m1, m2, eps)
            combined = bob_decode(post, m1, m2)
            outcomes.append(TeleportOutcome(m1, m2, p, combined, split_off_last_qubit(combined, m1, m2, eps)))
    return outcomes


@dataclass(frozen=True, eq=False)
class QuantumMachine:
    """A device with an ``n``-qubit ancilla and a unitary on ``2n`` qubits."""

    n: int
    ancilla: QuantumState
    unitary: Gate

    def __post_init__(self):
        if self.ancilla.n_qubits != self.n:
            raise WrongDimension(f"ancilla has {self.ancilla.n_qubits} qubits, machine register has {self.n}")
        if self.unitary.n_qubits != 2 * self.n:
            raise WrongDimension(f"machine unitary acts on {self.unitary.n_qubits} qubits, expected {2 * self.n}")


def cloning_residual(m: QuantumMachine, v: QuantumState) -> float:
    """``‖U(v ⊗ s) − v ⊗ v‖``."""
    if v.n_qubits != m.n:
        raise WrongArity(f"machine copies {m.n}-qubit states, got {v.n_qubits} qubits")
    out = linalg.matmul(m.unitary.matrix, linalg.kronecker(v.vector, m.ancilla.vector))
    return float(np.linalg.norm(out - linalg.kronecker(v.vector, v.vector)))


def is_cloner_for(m: QuantumMachine, v: QuantumState, eps: float | None = None) -> bool:
    return cloning_residual(m, v) < linalg.check_eps(eps)


def no_cloning_check(m: QuantumMachine, v: QuantumState, w: QuantumState, eps: float | None = None) -> float:
    """Return ``|<v|w>|`` for two states ``m`` copies; the result is 0 or 1."""
    for name, s in (("v", v), ("w", w)):
        if not is_cloner_for(m, s, eps):
            raise NotACloner(f"machine does not clone {name} (residual {cloning_residual(m, s):.3g})")
    return abs(linalg.inner_prod(v.vector, w.vector))


def basis_cloner(n: int) -> QuantumMachine:
    """Bitwise ``|x>|y> -> |x>|y ⊕ x>`` with ancilla ``|0...0>``; copies basis kets only."""
    if n < 1:
        raise WrongDimension(f"register size must be positive, got {n}")
    dim = 1 << n
    m = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for x in range(dim):
        for y in range(dim):
            m[x * dim + (y ^ x), x * dim + y] = 1
    return QuantumMachine(n, basis_state(n, 0), gates.make_gate(2 * n, m))


def machine_to_json(m: QuantumMachine) -> dict:
    return {"n": m.n, "ancilla": state_to_json(m.ancilla), "unitary": gates.gate_to_json(m.unitary)}


def machine_from_json(obj: dict, eps: float | None = None) -> QuantumMachine:
    try:
        n, ancilla, unitary = int(obj["n"]), obj["ancilla"], obj["unitary"]
    except (KeyError, TypeError, ValueError) as exc:
        raise QDiracError(f"malformed machine JSON: {exc}") from None
    return QuantumMachine(n, state_from_json(ancilla, eps), gates.gate_from_json(unitary, eps))
