"""Shared fixtures and independent reference routines.

The helpers here deliberately avoid numpy's linear algebra so they can serve
as oracles for the library code.
"""
import cmath
import math

import numpy as np
import pytest

from qdirac.states import normalized


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_state(rng, n=1):
    return normalized(random_complex(rng, 1 << n))


def naive_kron(a, b):
    """Kronecker product by explicit index arithmetic."""
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = [[0j] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = complex(a[i][j]) * complex(b[k][l])
    return np.array(out)


def naive_matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return np.array([[sum(complex(a[i][k]) * complex(b[k][j]) for k in range(m)) for j in range(p)]
                     for i in range(n)])


def gram_schmidt_unitary(rng, dim):
    """Random unitary from modified Gram-Schmidt on random complex columns."""
    cols = []
    for _ in range(dim):
        v = [complex(z) for z in random_complex(rng, dim)]
        for u in cols:
            proj = sum(uc.conjugate() * vc for uc, vc in zip(u, v))
            v = [vc - proj * uc for uc, vc in zip(u, v)]
        length = math.sqrt(sum(abs(z) ** 2 for z in v))
        cols.append([z / length for z in v])
    return np.array(cols).T


def enumerate_probability(amplitudes, n, qubit, bit):
    """Sum |α_j|² over basis labels whose character at ``qubit`` equals ``bit``."""
    total = 0.0
    for j, a in enumerate(amplitudes):
        label = format(j, f"0{n}b")
        if label[qubit] == str(bit):
            total += abs(a) ** 2
    return total


def expm_series(m, terms=20):
    """Truncated power series for exp(m)."""
    out = np.eye(len(m), dtype=complex)
    term = np.eye(len(m), dtype=complex)
    for k in range(1, terms + 1):
        term = naive_matmul(term, m) / k
        out = out + term
    return out


def phase(x):
    return cmath.exp(1j * x)
