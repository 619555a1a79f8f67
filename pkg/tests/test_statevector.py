import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from neqr_grover.errors import InvalidArgumentError
from neqr_grover.statevector import (
    CCX,
    CX,
    MCX,
    MCZ,
    Circuit,
    H,
    StateVector,
    X,
    Z,
    apply_circuit,
    controlled_x,
    equal_up_to_global_phase,
    inverse_circuit,
    marginal_probabilities,
    new_basis_state,
    probabilities,
    sample,
    unitary,
    zero_state,
)

from helpers import random_circuit, random_gate, random_state

SQRT1_2 = 1 / math.sqrt(2)


def dense_gate_matrix(n, gate):
    """Independent reference: build the permutation/phase/Hadamard matrix by bit arithmetic."""
    dim = 1 << n
    if isinstance(gate, H):
        h = np.array([[1, 1], [1, -1]]) * SQRT1_2
        mats = [h if q == gate.target else np.eye(2) for q in reversed(range(n))]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bit = lambda q: (i >> q) & 1  # noqa: E731
        if isinstance(gate, (Z, MCZ)):
            m[i, i] = -1 if all(bit(q) for q in gate.qubits) else 1
            continue
        controls = gate.qubits[:-1]
        target = gate.qubits[-1]
        j = i ^ (1 << target) if all(bit(c) for c in controls) else i
        m[j, i] = 1
    return m


class TestBasisState:
    def test_two_qubit_zero(self):
        np.testing.assert_array_equal(new_basis_state(2, 0).amplitudes, [1, 0, 0, 0])

    def test_one_qubit_one(self):
        np.testing.assert_array_equal(new_basis_state(1, 1).amplitudes, [0, 1])

    def test_ten_qubits(self):
        s = new_basis_state(10, 0)
        assert len(s) == 1024 and s.amplitudes[0] == 1 and np.count_nonzero(s.amplitudes) == 1

    @pytest.mark.parametrize("n,idx", [(0, 0), (25, 0), (2, 4), (2, -1)])
    def test_out_of_range(self, n, idx):
        with pytest.raises(InvalidArgumentError):
            new_basis_state(n, idx)

    def test_rejects_unnormalised(self):
        with pytest.raises(InvalidArgumentError):
            StateVector(1, [1, 1])

    def test_amplitudes_read_only(self):
        s = zero_state(2)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0


class TestApplyCircuit:
    def test_not(self):
        out = apply_circuit(zero_state(1), Circuit(1).x(0))
        np.testing.assert_array_equal(out.amplitudes, [0, 1])

    def test_hadamard(self):
        out = apply_circuit(zero_state(1), Circuit(1).h(0))
        np.testing.assert_allclose(out.amplitudes, [0.70710678, 0.70710678], atol=1e-8)

    def test_two_qubit_grover_finds_11(self):
        c = Circuit(2).h(0).h(1)
        c.mcz([0, 1])  # oracle marks |11>
        c.h(0).h(1).x(0).x(1).mcz([0, 1]).x(0).x(1).h(0).h(1)
        p = probabilities(apply_circuit(zero_state(2), c))
        assert abs(p[3] - 1) < 1e-12

    def test_qubit_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            apply_circuit(zero_state(2), Circuit(3))

    def test_input_not_mutated(self):
        s = zero_state(2)
        apply_circuit(s, Circuit(2).x(0))
        assert s.amplitudes[0] == 1

    def test_qubit_zero_is_lsb(self):
        out = apply_circuit(zero_state(3), Circuit(3).x(0))
        assert out.amplitudes[1] == 1
        out = apply_circuit(zero_state(3), Circuit(3).x(2))
        assert out.amplitudes[4] == 1

    @pytest.mark.parametrize("seed", range(40))
    def test_each_gate_matches_dense_reference(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 6))
        gate = random_gate(n, rng)
        state = random_state(n, rng)
        got = apply_circuit(state, Circuit(n, [gate])).amplitudes
        want = dense_gate_matrix(n, gate) @ state.amplitudes
        np.testing.assert_allclose(got, want, atol=1e-12)


class TestGateValidation:
    @pytest.mark.parametrize("gate", [X(3), CX(0, 0), CCX(0, 1, 1), MCX((0, 1, 2), 2), MCZ((0, 5))])
    def test_bad_gates(self, gate):
        with pytest.raises(InvalidArgumentError):
            Circuit(3, [gate])

    def test_empty_mcz(self):
        with pytest.raises(InvalidArgumentError):
            MCZ(())

    @pytest.mark.parametrize("k,cls", [(0, X), (1, CX), (2, CCX), (3, MCX)])
    def test_controlled_x_picks_smallest_gate(self, k, cls):
        assert isinstance(controlled_x(range(1, k + 1), 0), cls)


class TestProperties:
    def test_unitarity_after_1000_random_gates(self, rng):
        n = 12
        out = apply_circuit(random_state(n, rng), random_circuit(n, 1000, rng))
        assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10

    @pytest.mark.parametrize("gate", [X(1), H(2), Z(0), CX(2, 0), CCX(0, 2, 1)])
    def test_involutions(self, gate, rng):
        s = random_state(3, rng)
        out = apply_circuit(s, Circuit(3, [gate, gate]))
        np.testing.assert_allclose(out.amplitudes, s.amplitudes, atol=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_mcz_is_diagonal_with_one_negative(self, k):
        c = Circuit(k).mcz(range(k))
        m = np.column_stack(
            [apply_circuit(new_basis_state(k, i), c).amplitudes for i in range(1 << k)]
        )
        assert np.count_nonzero(m - np.diag(np.diag(m))) == 0
        diag = np.diag(m).real
        assert list(np.flatnonzero(diag == -1)) == [(1 << k) - 1]
        assert np.count_nonzero(diag == 1) == (1 << k) - 1

    @given(st.integers(1, 6), st.integers(0, 40), st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_inverse_round_trip(self, n, size, seed):
        rng = np.random.default_rng(seed)
        c = random_circuit(n, size, rng)
        s = random_state(n, rng)
        back = apply_circuit(apply_circuit(s, c), inverse_circuit(c))
        np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-10)


class TestInverse:
    def test_reverses_order(self):
        assert inverse_circuit(Circuit(2, [H(0), X(1)])).gates == (X(1), H(0))

    def test_empty(self):
        assert len(inverse_circuit(Circuit(3))) == 0


class TestProbabilitiesAndSampling:
    def test_uniform(self):
        p = probabilities(apply_circuit(zero_state(2), Circuit(2).h(0).h(1)))
        np.testing.assert_allclose(p, [0.25] * 4, atol=1e-15)

    def test_basis_one(self):
        np.testing.assert_array_equal(probabilities(new_basis_state(1, 1)), [0, 1])

    def test_deterministic_state(self):
        assert sample(new_basis_state(1, 1), 100, seed=3) == {"1": 100}

    def test_binomial_bounds(self):
        hist = sample(apply_circuit(zero_state(1), Circuit(1).h(0)), 10_000, seed=11)
        sigma = math.sqrt(10_000 * 0.5 * 0.5)
        assert sigma == 50
        for key in "01":
            assert abs(hist[key] - 5000) < 5 * sigma

    def test_seed_determinism(self, rng):
        s = random_state(4, rng)
        assert sample(s, 500, seed=9) == sample(s, 500, seed=9)

    def test_keys_and_total(self, rng):
        s = random_state(3, rng)
        hist = sample(s, 777, seed=1)
        assert sum(hist.values()) == 777
        assert all(len(k) == 3 for k in hist)

    def test_zero_shots(self):
        with pytest.raises(InvalidArgumentError):
            sample(zero_state(1), 0, seed=0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_chi_square(self, n, rng):
        s = random_state(n, rng)
        p = probabilities(s)
        shots = 100_000
        hist = sample(s, shots, seed=n)
        observed = np.array([hist.get(format(i, f"0{n}b"), 0) for i in range(1 << n)])
        expected = shots * p
        chi2 = float(((observed - expected) ** 2 / expected).sum())
        assert chi2 < stats.chi2.ppf(0.999, df=(1 << n) - 1)

    def test_marginal_matches_brute_force(self, rng):
        s = random_state(4, rng)
        p = probabilities(s)
        qubits = [3, 1]
        want = np.zeros(4)
        for i, pi in enumerate(p):
            sub = ((i >> 3) & 1) | (((i >> 1) & 1) << 1)
            want[sub] += pi
        np.testing.assert_allclose(marginal_probabilities(s, qubits), want, atol=1e-15)

    def test_sample_subregister(self):
        s = apply_circuit(zero_state(3), Circuit(3).x(2).h(0))
        hist = sample(s, 200, seed=0, qubits=[2])
        assert hist == {"1": 200}


class TestGlobalPhase:
    def test_equal_up_to_phase(self, rng):
        s = random_state(3, rng)
        assert equal_up_to_global_phase(s, np.exp(0.7j) * s.amplitudes)
        assert equal_up_to_global_phase(-unitary(Circuit(2).h(0)), unitary(Circuit(2).h(0)))

    def test_not_equal(self, rng):
        a, b = random_state(3, rng), random_state(3, rng)
        assert not equal_up_to_global_phase(a, b)
