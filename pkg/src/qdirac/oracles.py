"""Boolean-function oracles, Deutsch's algorithm and Deutsch-Jozsa."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import gates, linalg, measurement
from .errors import IndeterminateOutcome, PromiseViolated, QDiracError, WrongArity
from .gates import Gate
from .states import QuantumState, ket, tensor_states

# Margin for deciding that a probability is 0 or 1.
DICHOTOMY_MARGIN = 1e-6


@dataclass(frozen=True)
class BooleanFunction:
    """``f : {0, ..., 2^n - 1} -> {0, 1}`` stored as its truth table."""

    n_inputs: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n_inputs < 1:
            raise WrongArity(f"a Boolean function needs at least one input bit, got {self.n_inputs}")
        if len(self.table) != 1 << self.n_inputs:
            raise WrongArity(f"table of length {len(self.table)} does not fit {self.n_inputs} inputs")
        if any(b not in (0, 1) for b in self.table):
            raise QDiracError("table entries must be 0 or 1")

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> "BooleanFunction":
        table = tuple(int(b) for b in bits)
        n = len(table).bit_length() - 1
        if len(table) < 2 or 1 << n != len(table):
            raise WrongArity(f"table length must be a power of two >= 2, got {len(table)}")
        return cls(n, table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def bits(self) -> str:
        return "".join(map(str, self.table))


class Promise(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"


def classify(f: BooleanFunction) -> Promise | None:
    """Classical reference: scan the whole table. ``None`` means neither."""
    ones = sum(f.table)
    if ones in (0, len(f.table)):
        return Promise.CONSTANT
    if 2 * ones == len(f.table):
        return Promise.BALANCED
    return None


def classical_queries(f: BooleanFunction) -> tuple[Promise, int]:
    """Decide a promised function by sequential queries, counting them.

    Stops as soon as two values differ (balanced) or once more than half the
    domain agrees (constant), so the worst case is ``2^(n-1) + 1`` queries.
    """
    if classify(f) is None:
        raise PromiseViolated(f"table {f.bits()} is neither constant nor balanced")
    first = f(0)
    half = len(f.table) // 2
    for queries in range(2, half + 2):
        if f(queries - 1) != first:
            return Promise.BALANCED, queries
    return Promise.CONSTANT, half + 1


def oracle_gate(f: BooleanFunction) -> Gate:
    """Permutation ``|x>|y> -> |x>|y ⊕ f(x)>`` on ``n + 1`` qubits."""
    dim = 2 << f.n_inputs
    target = np.array([2 * x + (y ^ fx) for x, fx in enumerate(f.table) for y in (0, 1)])
    # A permutation matrix is unitary, which replaces the O(dim^3) check.
    assert np.array_equal(np.sort(target), np.arange(dim))
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[target, np.arange(dim)] = 1
    return Gate(f.n_inputs + 1, linalg.freeze(m))


def _dichotomy(p: float, what: str) -> int:
    if p >= 1 - DICHOTOMY_MARGIN:
        return 1
    if p <= DICHOTOMY_MARGIN:
        return 0
    raise IndeterminateOutcome(f"{what} probability {p:.6g} is neither 0 nor 1")


def deutsch_algo(f: BooleanFunction) -> QuantumState:
    if f.n_inputs != 1:
        raise WrongArity(f"Deutsch's algorithm takes a one-input function, got {f.n_inputs} inputs")
    h = gates.hadamard()
    s = gates.apply(gates.tensor_gates(h, h), ket("01"))
    s = gates.apply(oracle_gate(f), s)
    return gates.apply(gates.tensor_gates(h, gates.identity(1)), s)


def deutsch_eval(f: BooleanFunction) -> int:
    """First-qubit measurement result of Deutsch's circuit; equals f(0) ⊕ f(1)."""
    return _dichotomy(measurement.prob1(deutsch_algo(f), 0), "first-qubit")


def _check_promise(f: BooleanFunction, promise: Promise | None) -> Promise:
    kind = classify(f)
    if kind is None:
        raise PromiseViolated(f"table {f.bits()} is neither constant nor balanced")
    if promise is not None and Promise(promise) is not kind:
        raise PromiseViolated(f"table {f.bits()} is {kind.value}, not {Promise(promise).value}")
    return kind


def jozsa_algo(f: BooleanFunction, promise: Promise | None = None) -> QuantumState:
    """Output of the Deutsch-Jozsa circuit on ``|0...0>|1>``."""
    _check_promise(f, promise)
    n = f.n_inputs
    top_h = gates.tensor_power(gates.hadamard(), n)
    s = tensor_states(ket("0" * n), ket("1"))
    s = gates.apply(gates.tensor_gates(top_h, gates.hadamard()), s)
    s = gates.apply(oracle_gate(f), s)
    return gates.apply(gates.tensor_gates(top_h, gates.identity(1)), s)


def all_zero_probability(s: QuantumState) -> float:
    """Probability that the first ``n - 1`` qubits all read 0."""
    return float(np.sum(np.abs(s.amplitudes[:2]) ** 2))


def jozsa_eval(f: BooleanFunction, promise: Promise | None = None) -> int:
    """1 iff ``f`` is constant, 0 iff balanced."""
    return _dichotomy(all_zero_probability(jozsa_algo(f, promise)), "all-zero register")


def constant_tables(n: int) -> list[BooleanFunction]:
    size = 1 << n
    return [BooleanFunction(n, (0,) * size), BooleanFunction(n, (1,) * size)]


def balanced_tables(n: int) -> list[BooleanFunction]:
    size = 1 << n
    out = []
    for ones in combinations(range(size), size // 2):
        table = [0] * size
        for k in ones:
            table[k] = 1
        out.append(BooleanFunction(n, tuple(table)))
    return out
