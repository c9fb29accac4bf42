"""Unitary gates, the standard named gates, and their application to states."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import NotUnitary, QDiracError, WrongArity, WrongDimension
from .states import QuantumState


@dataclass(frozen=True, eq=False)
class Gate:
    n_qubits: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


def make_gate(n: int, m, eps: float | None = None) -> Gate:
    """Validate ``m`` as a ``2^n x 2^n`` unitary."""
    eps = linalg.check_eps(eps)
    if int(n) != n or n < 1:
        raise WrongDimension(f"number of qubits must be a positive integer, got {n!r}")
    m = linalg.as_matrix(m)
    dim = 1 << int(n)
    if m.shape != (dim, dim):
        raise WrongDimension(f"{n}-qubit gate must be {dim}x{dim}, got {m.shape[0]}x{m.shape[1]}")
    dev = linalg.unitarity_deviation(m)
    if dev >= eps:
        raise NotUnitary(f"matrix is not unitary (max deviation {dev:.3g})", deviation=dev)
    return Gate(int(n), m)


_S2 = 1 / math.sqrt(2)


@lru_cache(maxsize=None)
def hadamard() -> Gate:
    return make_gate(1, [[_S2, _S2], [_S2, -_S2]])


@lru_cache(maxsize=None)
def cnot() -> Gate:
    """Controlled-NOT with qubit 0 as control: ``|xy> -> |x, x⊕y>``."""
    return make_gate(2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


@lru_cache(maxsize=None)
def pauli_x() -> Gate:
    return make_gate(1, [[0, 1], [1, 0]])


@lru_cache(maxsize=None)
def pauli_y() -> Gate:
    return make_gate(1, [[0, -1j], [1j, 0]])


@lru_cache(maxsize=None)
def pauli_z() -> Gate:
    return make_gate(1, [[1, 0], [0, -1]])


@lru_cache(maxsize=None)
def phase_s() -> Gate:
    return make_gate(1, [[1, 0], [0, 1j]])


@lru_cache(maxsize=None)
def gate_t() -> Gate:
    return make_gate(1, [[1, 0], [0, np.exp(1j * math.pi / 4)]])


@lru_cache(maxsize=None)
def identity(n: int) -> Gate:
    if n < 1:
        raise WrongDimension(f"identity needs at least one qubit, got {n}")
    return Gate(n, linalg.identity_matrix(1 << n))


def tensor_gates(a: Gate, b: Gate) -> Gate:
    m = linalg.kronecker(a.matrix, b.matrix)
    dev = linalg.unitarity_deviation(m)
    if dev >= linalg.DEFAULT_EPS:
        # Kronecker products of unitaries are unitary; reaching here is a bug.
        raise NotUnitary(f"tensor product drifted from unitarity by {dev:.3g}", deviation=dev)
    return Gate(a.n_qubits + b.n_qubits, m)


def tensor_power(g: Gate, k: int) -> Gate:
    if k < 1:
        raise WrongArity(f"tensor power needs k >= 1, got {k}")
    out = g
    for _ in range(k - 1):
        out = tensor_gates(out, g)
    return out


def compose(a: Gate, b: Gate) -> Gate:
    """Sequential composition; ``b`` acts first, so the matrix is ``a·b``."""
    if a.n_qubits != b.n_qubits:
        raise WrongArity(f"cannot compose a {a.n_qubits}-qubit gate with a {b.n_qubits}-qubit gate")
    m = linalg.matmul(a.matrix, b.matrix)
    dev = linalg.unitarity_deviation(m)
    if dev >= linalg.DEFAULT_EPS:
        raise NotUnitary(f"composition drifted from unitarity by {dev:.3g}", deviation=dev)
    return Gate(a.n_qubits, m)


def apply(g: Gate, s: QuantumState) -> QuantumState:
    if g.n_qubits != s.n_qubits:
        raise WrongArity(f"{g.n_qubits}-qubit gate applied to a {s.n_qubits}-qubit state")
    return QuantumState(s.n_qubits, linalg.matmul(g.matrix, s.vector))


NAMED_GATES = {
    "H": hadamard,
    "X": pauli_x,
    "Y": pauli_y,
    "Z": pauli_z,
    "S": phase_s,
    "T": gate_t,
    "CNOT": cnot,
    "ID1": lambda: identity(1),
    "ID2": lambda: identity(2),
}


def named_gate(token: str) -> Gate:
    try:
        return NAMED_GATES[token.upper()]()
    except KeyError:
        raise QDiracError(f"unknown gate {token!r}; expected one of {', '.join(NAMED_GATES)}") from None


def gate_to_json(g: Gate) -> dict:
    return {"n_qubits": g.n_qubits, **linalg.matrix_to_json(g.matrix)}


def gate_from_json(obj: dict, eps: float | None = None) -> Gate:
    try:
        n = int(obj["n_qubits"])
    except (KeyError, TypeError, ValueError) as exc:
        raise QDiracError(f"malformed gate JSON: {exc}") from None
    return make_gate(n, linalg.matrix_from_json(obj), eps)
