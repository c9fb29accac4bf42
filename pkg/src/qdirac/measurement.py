"""Single-qubit computational-basis measurement."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import WrongArity, ZeroProbabilityBranch
from .states import QuantumState


def select_index(n: int, i: int, j: int) -> bool:
    """True iff basis label ``j`` (n bits, most significant first) has a 1 at position ``i``."""
    if not (0 <= i < n and 0 <= j < 1 << n):
        return False
    return (j >> (n - 1 - i)) & 1 == 1


def _check_index(s: QuantumState, i: int) -> None:
    if not 0 <= i < s.n_qubits:
        raise WrongArity(f"qubit index {i} out of range for a {s.n_qubits}-qubit state")


@lru_cache(maxsize=256)
def _one_mask(n: int, i: int) -> np.ndarray:
    return linalg.freeze((np.arange(1 << n) >> (n - 1 - i)) & 1 == 1)


def prob1(s: QuantumState, i: int) -> float:
    _check_index(s, i)
    return float(np.sum(np.abs(s.amplitudes[_one_mask(s.n_qubits, i)]) ** 2))


def prob0(s: QuantumState, i: int) -> float:
    _check_index(s, i)
    return float(np.sum(np.abs(s.amplitudes[~_one_mask(s.n_qubits, i)]) ** 2))


def _project(s: QuantumState, i: int, bit: int, eps: float | None) -> QuantumState:
    eps = linalg.check_eps(eps)
    p = prob1(s, i) if bit else prob0(s, i)
    if p <= eps:
        raise ZeroProbabilityBranch(f"outcome {bit} on qubit {i} has probability {p:.3g}")
    keep = _one_mask(s.n_qubits, i) == bool(bit)
    v = np.where(keep, s.amplitudes, 0) / math.sqrt(p)
    return QuantumState(s.n_qubits, linalg.freeze(v.reshape(-1, 1)))


def post_meas0(s: QuantumState, i: int, eps: float | None = None) -> QuantumState:
    """State after observing 0 on qubit ``i``."""
    return _project(s, i, 0, eps)


def post_meas1(s: QuantumState, i: int, eps: float | None = None) -> QuantumState:
    """State after observing 1 on qubit ``i``."""
    return _project(s, i, 1, eps)


def post_meas(s: QuantumState, i: int, bit: int, eps: float | None = None) -> QuantumState:
    return _project(s, i, bit, eps)


@dataclass(frozen=True)
class MeasurementOutcome:
    qubit_index: int
    bit: int
    probability: float
    post_state: QuantumState | None


def measure(s: QuantumState, i: int, rng_seed: int, eps: float | None = None) -> MeasurementOutcome:
    """Sample one measurement of qubit ``i`` with a seeded PCG64 generator."""
    eps = linalg.check_eps(eps)
    p1 = prob1(s, i)
    bit = int(np.random.default_rng(rng_seed).random() < p1)
    p = p1 if bit else prob0(s, i)
    post = _project(s, i, bit, eps) if p > eps else None
    return MeasurementOutcome(i, bit, p, post)


def sample_counts(s: QuantumState, i: int, shots: int, rng_seed: int) -> dict[str, int]:
    """Repeat the measurement ``shots`` times on fresh copies of ``s``."""
    p1 = prob1(s, i)
    ones = int(np.sum(np.random.default_rng(rng_seed).random(shots) < p1))
    return {"0": shots - ones, "1": ones}
