"""Quantum circuit simulation in the matrix semantics, with executable checks
for no-cloning, teleportation, Deutsch-Jozsa and the quantum Prisoner's
Dilemma."""

from .errors import QDiracError
from .gates import Gate, apply, cnot, compose, hadamard, identity, make_gate, tensor_gates
from .linalg import DEFAULT_EPS
from .states import QuantumState, bell, bra, ket, make_state, tensor_states

__all__ = [
    "DEFAULT_EPS",
    "Gate",
    "QDiracError",
    "QuantumState",
    "apply",
    "bell",
    "bra",
    "cnot",
    "compose",
    "hadamard",
    "identity",
    "ket",
    "make_gate",
    "make_state",
    "tensor_gates",
    "tensor_states",
]
