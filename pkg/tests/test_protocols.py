import json
import math

import numpy as np
import pytest

from qdirac import linalg, measurement
from qdirac.errors import NotACloner, WrongArity, WrongDimension
from qdirac.gates import cnot, identity, make_gate
from qdirac.protocols import (
    QuantumMachine,
    alice_encode,
    alice_out,
    basis_cloner,
    bob_decode,
    cloning_residual,
    is_cloner_for,
    machine_from_json,
    machine_to_json,
    no_cloning_check,
    teleport,
)
from qdirac.states import basis_state, from_amplitudes, ket, normalized, states_equal_up_to_phase

from conftest import gram_schmidt_unitary, random_state

EPS = 1e-9
S = 1 / math.sqrt(2)


def test_alice_encode_basis_inputs():
    np.testing.assert_allclose(alice_encode(ket("0")).amplitudes, [0.5, 0, 0, 0.5, 0.5, 0, 0, 0.5], atol=EPS)
    np.testing.assert_allclose(alice_encode(ket("1")).amplitudes, [0, 0.5, 0.5, 0, 0, -0.5, -0.5, 0], atol=EPS)


def test_alice_encode_preserves_norm(rng):
    for _ in range(50):
        assert abs(linalg.norm(alice_encode(random_state(rng)).vector) - 1) < EPS


def test_alice_encode_arity():
    with pytest.raises(WrongArity):
        alice_encode(ket("00"))


def test_alice_out_branches():
    total = 0.0
    for m1 in (0, 1):
        for m2 in (0, 1):
            p, post = alice_out(ket("0"), m1, m2)
            assert p == pytest.approx(0.25, abs=EPS)
            total += p
            assert measurement.prob1(post, 0) == pytest.approx(m1, abs=EPS)
            assert measurement.prob1(post, 1) == pytest.approx(m2, abs=EPS)
    assert total == pytest.approx(1, abs=EPS)


def test_bob_decode_cases():
    s = from_amplitudes([0, 0, 0, 0, 0, 0, 0.6, 0.8])
    np.testing.assert_array_equal(bob_decode(s, 0, 0).amplitudes, s.amplitudes)
    np.testing.assert_allclose(bob_decode(s, 0, 1).amplitudes[6:], [0.8, 0.6])
    np.testing.assert_allclose(bob_decode(s, 1, 0).amplitudes[6:], [0.6, -0.8])
    # Z·X = [[0, 1], [-1, 0]]
    np.testing.assert_allclose(bob_decode(s, 1, 1).amplitudes[6:], [0.8, -0.6])
    with pytest.raises(WrongArity):
        bob_decode(ket("00"), 0, 0)


def _teleport_reference(phi):
    """Independent 8-dimensional evaluation with plain numpy and hand-built gates."""
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    x, z = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    epr = np.array([1, 0, 0, 1]) / math.sqrt(2)
    s = np.kron(h, np.eye(4)) @ np.kron(cx, np.eye(2)) @ np.kron(phi, epr)
    out = {}
    for m1 in (0, 1):
        for m2 in (0, 1):
            bob = s[4 * m1 + 2 * m2: 4 * m1 + 2 * m2 + 2]
            p = float(np.sum(np.abs(bob) ** 2))
            fix = np.linalg.matrix_power(z, m1) @ np.linalg.matrix_power(x, m2)
            out[m1, m2] = p, fix @ bob / math.sqrt(p)
    return out


def test_teleport_matches_reference(rng):
    for phi in [ket("0"), normalized([1, 1]), random_state(rng), random_state(rng)]:
        ref = _teleport_reference(phi.amplitudes)
        for out in teleport(phi):
            p, bob = ref[out.m1, out.m2]
            assert out.probability == pytest.approx(p, abs=1e-12)
            np.testing.assert_allclose(out.bob_state.amplitudes, bob, atol=1e-12)


def test_teleport_basis_and_plus():
    for out in teleport(ket("0")):
        np.testing.assert_allclose(out.bob_state.amplitudes, [1, 0], atol=EPS)
    plus = normalized([1, 1])
    for out in teleport(plus):
        np.testing.assert_allclose(out.bob_state.amplitudes, plus.amplitudes, atol=EPS)


def test_teleport_combined_state_factors(rng):
    phi = random_state(rng)
    for out in teleport(phi):
        expected = np.kron(ket(f"{out.m1}{out.m2}").amplitudes, phi.amplitudes)
        np.testing.assert_allclose(out.combined_state.amplitudes, expected, atol=EPS)


def test_teleport_random_states(rng):
    for _ in range(1000):
        phi = random_state(rng)
        outs = teleport(phi)
        assert len(outs) == 4
        for out in outs:
            assert out.fidelity(phi) >= 1 - 1e-9
            assert abs(out.probability - 0.25) < 1e-9
            assert states_equal_up_to_phase(out.bob_state, phi)


def test_measurement_order_does_not_matter(rng):
    for _ in range(100):
        s = alice_encode(random_state(rng))
        for m1 in (0, 1):
            for m2 in (0, 1):
                a = measurement.post_meas(measurement.post_meas(s, 0, m1), 1, m2)
                b = measurement.post_meas(measurement.post_meas(s, 1, m2), 0, m1)
                np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=EPS)
                pa = (measurement.prob1(s, 0) if m1 else measurement.prob0(s, 0))
                pa *= measurement.prob1(measurement.post_meas(s, 0, m1), 1) if m2 else \
                    measurement.prob0(measurement.post_meas(s, 0, m1), 1)
                pb = (measurement.prob1(s, 1) if m2 else measurement.prob0(s, 1))
                pb *= measurement.prob1(measurement.post_meas(s, 1, m2), 0) if m1 else \
                    measurement.prob0(measurement.post_meas(s, 1, m2), 0)
                assert pa == pytest.approx(pb, abs=EPS)


# --- no-cloning ---

def test_basis_cloner_one_qubit_is_cnot():
    m = basis_cloner(1)
    np.testing.assert_array_equal(m.unitary.matrix, cnot().matrix)
    assert linalg.is_unitary(m.unitary.matrix)


def test_basis_cloner_copies_basis_only():
    m = basis_cloner(1)
    assert is_cloner_for(m, ket("0")) and is_cloner_for(m, ket("1"))
    plus = normalized([1, 1])
    assert not is_cloner_for(m, plus)
    assert cloning_residual(m, plus) > 0.4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_basis_cloner_clones_every_basis_ket(n):
    m = basis_cloner(n)
    for x in range(1 << n):
        assert cloning_residual(m, basis_state(n, x)) < 1e-12


def test_basis_cloner_fails_on_superpositions(rng):
    m = basis_cloner(1)
    for _ in range(200):
        v = random_state(rng)
        assert not is_cloner_for(m, v)


def test_identity_machine_clones_only_its_ancilla(rng):
    s = random_state(rng)
    m = QuantumMachine(1, s, identity(2))
    assert is_cloner_for(m, s)
    assert not is_cloner_for(m, random_state(rng))


def test_no_cloning_check_examples():
    m = basis_cloner(1)
    assert no_cloning_check(m, ket("0"), ket("1")) == 0
    assert no_cloning_check(m, ket("1"), ket("1")) == pytest.approx(1)
    with pytest.raises(NotACloner, match="w"):
        no_cloning_check(m, ket("0"), normalized([1, 1]))


def test_machine_shape_validation():
    with pytest.raises(WrongDimension):
        QuantumMachine(2, ket("0"), identity(2))
    with pytest.raises(WrongDimension):
        QuantumMachine(1, ket("0"), identity(3))
    with pytest.raises(WrongArity):
        is_cloner_for(basis_cloner(1), ket("00"))


def test_random_machines_never_clone_nonorthogonal_pairs(rng):
    hits = 0
    for _ in range(300):
        u = make_gate(2, gram_schmidt_unitary(rng, 4))
        m = QuantumMachine(1, random_state(rng), u)
        v, w = random_state(rng), random_state(rng)
        if is_cloner_for(m, v) and is_cloner_for(m, w):
            hits += 1
    assert hits == 0


def test_machine_json_round_trip():
    m = basis_cloner(1)
    obj = json.loads(json.dumps(machine_to_json(m)))
    back = machine_from_json(obj)
    assert back.n == 1
    np.testing.assert_array_equal(back.unitary.matrix, m.unitary.matrix)
    np.testing.assert_array_equal(back.ancilla.amplitudes, m.ancilla.amplitudes)
