"""Dense complex matrix arithmetic.

Matrices are 2-D ``complex128`` numpy arrays flagged read-only, so a value
handed out by any constructor here can be shared freely. Column vectors are
simply matrices with one column.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, QDiracError

DEFAULT_EPS = 1e-9


def check_eps(eps: float | None) -> float:
    if eps is None:
        return DEFAULT_EPS
    eps = float(eps)
    if not (eps > 0 and math.isfinite(eps)):
        raise QDiracError(f"tolerance must be a positive finite number, got {eps!r}")
    return eps


def freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(data) -> np.ndarray:
    """Validate ``data`` as a finite 2-D complex matrix and return a frozen copy."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise QDiracError("matrix entries must be finite")
    return freeze(m)


def column(values: Iterable[complex]) -> np.ndarray:
    return as_matrix(np.asarray(list(values), dtype=np.complex128).reshape(-1, 1))


def identity_matrix(dim: int) -> np.ndarray:
    return freeze(np.eye(dim, dtype=np.complex128))


def _shape(m: np.ndarray) -> str:
    return f"{m.shape[0]}x{m.shape[1]}"


def _require_column(v: np.ndarray, name: str = "vector") -> None:
    if v.ndim != 2 or v.shape[1] != 1:
        raise DimensionError(f"{name} must be a single column, got shape {v.shape}")


def dagger(m: np.ndarray) -> np.ndarray:
    """Hermitian conjugate (conjugate transpose)."""
    return freeze(np.conj(m).T.copy())


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {_shape(a)} by {_shape(b)}")
    return freeze(a @ b)


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return freeze(np.kron(a, b))


def inner_prod(v: np.ndarray, w: np.ndarray) -> complex:
    """``<v|w>``, conjugate-linear in the first argument."""
    _require_column(v, "v")
    _require_column(w, "w")
    if v.shape != w.shape:
        raise DimensionError(f"inner product of {_shape(v)} and {_shape(w)}")
    return complex(np.vdot(v[:, 0], w[:, 0]))


def norm(v: np.ndarray) -> float:
    _require_column(v)
    return float(np.linalg.norm(v[:, 0]))


def unitarity_deviation(m: np.ndarray) -> float:
    """Largest entrywise deviation of ``M†M`` and ``MM†`` from the identity."""
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitarity is only defined for square matrices, got {_shape(m)}")
    eye = np.eye(m.shape[0])
    md = np.conj(m).T
    return float(max(np.max(np.abs(md @ m - eye)), np.max(np.abs(m @ md - eye))))


def is_unitary(m: np.ndarray, eps: float | None = None) -> bool:
    return unitarity_deviation(m) < check_eps(eps)


def probe_basis(dim: int) -> list[np.ndarray]:
    """Probes {e_i} ∪ {(e_i+e_j)/√2} ∪ {(e_i+i·e_j)/√2}.

    Length preservation on this set pins down every entry of ``M†M``, so it
    decides unitarity exactly.
    """
    s = 1 / math.sqrt(2)
    probes = []
    for i in range(dim):
        e = np.zeros((dim, 1), dtype=np.complex128)
        e[i, 0] = 1
        probes.append(freeze(e))
    for i in range(dim):
        for j in range(i + 1, dim):
            for phase in (1, 1j):
                p = np.zeros((dim, 1), dtype=np.complex128)
                p[i, 0] = s
                p[j, 0] = phase * s
                probes.append(freeze(p))
    return probes


def is_length_preserving(m: np.ndarray, probes: Sequence[np.ndarray], eps: float | None = None) -> bool:
    eps = check_eps(eps)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {_shape(m)}")
    if not probes:
        raise DimensionError("at least one probe vector is required")
    for v in probes:
        _require_column(v, "probe")
        if v.shape[0] != m.shape[1]:
            raise DimensionError(f"probe of length {v.shape[0]} does not fit {_shape(m)}")
        if abs(norm(matmul(m, v)) - norm(v)) >= eps:
            return False
    return True


def cauchy_schwarz_gap(v: np.ndarray, w: np.ndarray) -> float:
    """``Re(<v|v><w|w>) - |<v|w>|²``; never meaningfully negative."""
    vv = inner_prod(v, v)
    ww = inner_prod(w, w)
    return float((vv * ww).real - abs(inner_prod(v, w)) ** 2)


def matrix_to_json(m: np.ndarray) -> dict:
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in np.asarray(m).ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError) as exc:
        raise QDiracError(f"malformed matrix JSON: {exc}") from None
    if rows < 1 or cols < 1:
        raise DimensionError(f"matrix JSON must have positive rows and cols, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise DimensionError(f"matrix JSON has {len(entries)} entries, expected {rows * cols}")
    flat = [complex(float(re), float(im)) for re, im in entries]
    return as_matrix(np.array(flat, dtype=np.complex128).reshape(rows, cols))
