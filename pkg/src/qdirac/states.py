"""n-qubit pure states as normalized 2^n column vectors.

Qubit 0 is the leftmost (most significant) bit of a basis label, so ``|xy>``
sits at index ``2x + y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, NotColumn, NotNormalized, QDiracError, WrongArity, WrongDimension


@dataclass(frozen=True, eq=False)
class QuantumState:
    n_qubits: int
    vector: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def amplitudes(self) -> np.ndarray:
        return self.vector[:, 0]

    def __repr__(self) -> str:
        amps = ", ".join(f"{a:.4g}" for a in self.amplitudes)
        return f"QuantumState(n_qubits={self.n_qubits}, amplitudes=[{amps}])"


def make_state(n: int, v, eps: float | None = None) -> QuantumState:
    """Validate ``v`` as an ``n``-qubit state."""
    eps = linalg.check_eps(eps)
    if int(n) != n or n < 1:
        raise WrongDimension(f"number of qubits must be a positive integer, got {n!r}")
    m = np.asarray(v, dtype=np.complex128)
    if m.ndim == 1:
        raise NotColumn(f"state must be a column matrix, got a flat array of length {m.shape[0]}")
    if m.ndim != 2 or m.shape[1] != 1:
        raise NotColumn(f"state must be a single column, got shape {m.shape}")
    if m.shape[0] != 1 << n:
        raise WrongDimension(f"{n}-qubit state needs {1 << n} rows, got {m.shape[0]}")
    m = linalg.as_matrix(m)
    length = linalg.norm(m)
    if abs(length - 1) >= eps:
        raise NotNormalized(f"state has norm {length:.12g}, expected 1")
    return QuantumState(int(n), m)


def from_amplitudes(amplitudes: Sequence[complex], eps: float | None = None) -> QuantumState:
    """Build a state from a flat amplitude list, inferring the qubit count."""
    dim = len(amplitudes)
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise WrongDimension(f"amplitude count must be a power of two >= 2, got {dim}")
    return make_state(n, np.asarray(amplitudes, dtype=np.complex128).reshape(-1, 1), eps)


def normalized(amplitudes: Sequence[complex]) -> QuantumState:
    """Rescale ``amplitudes`` to unit length and wrap them as a state."""
    a = np.asarray(amplitudes, dtype=np.complex128)
    length = np.linalg.norm(a)
    if length == 0:
        raise NotNormalized("the zero vector is not a quantum state")
    return from_amplitudes(a / length)


def basis_index(bits: str | Sequence[int]) -> int:
    idx = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise QDiracError(f"basis label digits must be 0 or 1, got {b}")
        idx = 2 * idx + b
    return idx


def basis_state(n: int, index: int) -> QuantumState:
    if not 0 <= index < 1 << n:
        raise WrongDimension(f"basis index {index} out of range for {n} qubits")
    v = np.zeros((1 << n, 1), dtype=np.complex128)
    v[index, 0] = 1
    return QuantumState(n, linalg.freeze(v))


def ket(bits: str | Sequence[int]) -> QuantumState:
    """Computational basis state for a label such as ``"01"`` or ``(0, 1)``."""
    if len(bits) < 1:
        raise WrongDimension("a basis label needs at least one bit")
    return basis_state(len(bits), basis_index(bits))


def bra(s: QuantumState) -> np.ndarray:
    return linalg.dagger(s.vector)


def tensor_states(a: QuantumState, b: QuantumState) -> QuantumState:
    return QuantumState(a.n_qubits + b.n_qubits, linalg.kronecker(a.vector, b.vector))


def tensor_power(s: QuantumState, k: int) -> QuantumState:
    out = s
    for _ in range(k - 1):
        out = tensor_states(out, s)
    return out


def bell(a: int, b: int) -> QuantumState:
    """Bell state β_ab."""
    if a not in (0, 1) or b not in (0, 1):
        raise QDiracError(f"Bell indices must be bits, got ({a}, {b})")
    s = 1 / math.sqrt(2)
    sign = -1 if a else 1
    amps = [0, s, sign * s, 0] if b else [s, 0, 0, sign * s]
    return from_amplitudes(amps)


def _require_two_qubits(s: QuantumState) -> None:
    if s.n_qubits != 2:
        raise WrongArity(f"entanglement test is defined for 2 qubits, got {s.n_qubits}")


def is_product_state_2q(s: QuantumState, eps: float | None = None) -> bool:
    """Rank-one test on the 2x2 amplitude matrix: α00·α11 − α01·α10 = 0."""
    _require_two_qubits(s)
    a = s.amplitudes
    return abs(a[0] * a[3] - a[1] * a[2]) < linalg.check_eps(eps)


def is_entangled_2q(s: QuantumState, eps: float | None = None) -> bool:
    return not is_product_state_2q(s, eps)


def factor_product_2q(s: QuantumState, eps: float | None = None) -> tuple[QuantumState, QuantumState]:
    """Split a 2-qubit product state into single-qubit factors ``(u, w)``.

    The factors are fixed only up to a global phase shared between them.
    """
    if not is_product_state_2q(s, eps):
        raise QDiracError("state is entangled and has no product factorization")
    amp = s.amplitudes.reshape(2, 2)
    # The row with the largest norm carries w; column norms then give u.
    row = int(np.argmax(np.linalg.norm(amp, axis=1)))
    w = amp[row] / np.linalg.norm(amp[row])
    u = amp @ np.conj(w)
    return normalized(u), normalized(w)


def states_equal_up_to_phase(a: QuantumState, b: QuantumState, eps: float | None = None) -> bool:
    """True when ``a = e^{iδ} b`` for some real δ, i.e. ``|<a|b>| = 1``."""
    if a.n_qubits != b.n_qubits:
        return False
    return abs(abs(linalg.inner_prod(a.vector, b.vector)) - 1) < linalg.check_eps(eps)


def fidelity(a: QuantumState, b: QuantumState) -> float:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"fidelity of {a.n_qubits}- and {b.n_qubits}-qubit states")
    return abs(linalg.inner_prod(a.vector, b.vector)) ** 2


def state_to_json(s: QuantumState) -> dict:
    return {
        "n_qubits": s.n_qubits,
        "amplitudes": [[float(z.real), float(z.imag)] for z in s.amplitudes],
    }


def state_from_json(obj: dict, eps: float | None = None) -> QuantumState:
    try:
        n = int(obj["n_qubits"])
        amps = [complex(float(re), float(im)) for re, im in obj["amplitudes"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise QDiracError(f"malformed state JSON: {exc}") from None
    return make_state(n, np.asarray(amps, dtype=np.complex128).reshape(-1, 1), eps)
