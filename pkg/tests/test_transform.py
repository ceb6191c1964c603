import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nuqft.errors import ContractError, DimensionError
from nuqft.transform import (
    PhaseParameter,
    RegisterState,
    deviation,
    iqft,
    iqft_columns,
    measure_distribution,
    n_qubits_for,
    phase_estimate_distribution,
    phase_estimate_prob,
    phase_state,
    qft,
    qft_columns,
    qft_matrix,
)


def brute_force_readout(theta, n):
    # direct double sum: amplitude of y' is (1/N) sum_x exp(2 pi i x (theta - y'/N))
    N = 1 << n
    x = np.arange(N)
    return np.array(
        [abs(np.sum(np.exp(2j * np.pi * x * (theta - y / N)))) ** 2 / N**2 for y in range(N)]
    )


class TestRegisterState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ContractError):
            RegisterState(np.array([1.0, 1.0]))

    def test_rejects_non_power_of_two(self):
        with pytest.raises(DimensionError):
            RegisterState.from_vector(np.ones(3))

    def test_n_qubits(self):
        assert RegisterState.uniform(4).n_qubits == 4
        assert n_qubits_for(1) == 0

    def test_immutable(self):
        s = RegisterState.basis(2, 1)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1


class TestQft:
    def test_one_qubit_zero(self):
        out = qft(RegisterState.basis(1, 0)).amplitudes
        np.testing.assert_allclose(out, [1 / np.sqrt(2)] * 2, atol=1e-15)

    def test_uniform_to_zero(self):
        out = qft(RegisterState.uniform(5)).amplitudes
        np.testing.assert_allclose(out, np.eye(32)[0], atol=1e-14)

    def test_two_qubit_basis_one(self):
        out = qft(RegisterState.basis(2, 1)).amplitudes
        np.testing.assert_allclose(out, 0.5 * np.array([1, 1j, -1, -1j]), atol=1e-15)

    def test_inverse_of_example(self):
        out = iqft(RegisterState(0.5 * np.array([1, 1j, -1, -1j]))).amplitudes
        np.testing.assert_allclose(out, [0, 1, 0, 0], atol=1e-15)

    def test_roundtrip_basis(self):
        out = iqft(qft(RegisterState.basis(3, 5))).amplitudes
        np.testing.assert_allclose(out, np.eye(8)[5], atol=1e-15)

    def test_iqft_zero_is_uniform(self):
        np.testing.assert_allclose(iqft(RegisterState.basis(3, 0)).amplitudes, np.full(8, 8**-0.5))

    def test_degenerate_register(self):
        np.testing.assert_array_equal(qft_columns(np.array([1.0 + 0j])), [1.0])

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_matrix(self, rng, n):
        N = 1 << n
        X = rng.normal(size=(N, 4)) + 1j * rng.normal(size=(N, 4))
        assert np.max(np.abs(qft_columns(X) - qft_matrix(n) @ X)) <= 1e-12
        assert np.max(np.abs(iqft_columns(X) - qft_matrix(n, inverse=True) @ X)) <= 1e-12

    @pytest.mark.parametrize("n", [3, 6])
    def test_basis_state_phase_ramp(self, n):
        N = 1 << n
        y = np.arange(N)
        for x in range(N):
            out = qft(RegisterState.basis(n, x)).amplitudes
            np.testing.assert_allclose(out, np.exp(2j * np.pi * x * y / N) / np.sqrt(N), atol=1e-12)

    def test_matrix_is_unitary(self):
        F = qft_matrix(5)
        np.testing.assert_allclose(F.conj().T @ F, np.eye(32), atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
def test_unitarity_and_roundtrip(n, seed):
    s = RegisterState.random(n, np.random.default_rng(seed))
    out = qft(s)
    assert abs(np.linalg.norm(out.amplitudes) - 1.0) <= 1e-10
    assert np.linalg.norm(iqft(out).amplitudes - s.amplitudes) <= 1e-10


class TestPhase:
    def test_theta_zero_uniform(self):
        amps = phase_state(PhaseParameter(0.0, 3)).amplitudes
        np.testing.assert_allclose(amps, np.full(8, 8**-0.5))

    def test_theta_third(self):
        amps = phase_state(PhaseParameter(1 / 3, 2)).amplitudes
        w = np.exp(2j * np.pi / 3)
        np.testing.assert_allclose(amps, 0.5 * np.array([1, w, w**2, 1]), atol=1e-15)

    def test_grid_theta_is_basis_after_iqft(self):
        n, y = 4, 11
        p = measure_distribution(iqft(phase_state(PhaseParameter(y / 16, n))))
        np.testing.assert_allclose(p, np.eye(16)[y], atol=1e-14)

    def test_rejects_theta_out_of_range(self):
        with pytest.raises(ContractError):
            PhaseParameter(1.0, 3)

    def test_nearest_and_epsilon(self):
        p = PhaseParameter(0.99, 3)
        assert p.nearest == 0
        assert p.epsilon == pytest.approx(-0.01)
        assert deviation(0.3, 2, 3) == pytest.approx(0.05)

    def test_exact_case(self):
        for y in range(8):
            p = PhaseParameter(y / 8, 3)
            assert phase_estimate_prob(p, y) == 1.0
            assert max(phase_estimate_prob(p, z) for z in range(8) if z != y) <= 1e-30

    def test_closed_form_against_brute_force(self):
        closed = phase_estimate_distribution(0.3, 3)
        np.testing.assert_allclose(closed, brute_force_readout(0.3, 3), atol=1e-10)

    def test_closed_form_against_simulation(self):
        for theta in np.linspace(0, 1, 37, endpoint=False):
            sim = measure_distribution(iqft(phase_state(PhaseParameter(theta, 5))))
            np.testing.assert_allclose(phase_estimate_distribution(theta, 5), sim, atol=1e-12)

    def test_probabilities_sum_to_one(self):
        thetas = np.linspace(0, 1, 100, endpoint=False)
        p = phase_estimate_distribution(thetas, 6)
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-9)
        assert np.all((p >= 0) & (p <= 1 + 1e-15))

    def test_y_prime_range(self):
        with pytest.raises(ContractError):
            phase_estimate_prob(PhaseParameter(0.1, 2), 4)

    def test_measure_basis_and_uniform(self):
        np.testing.assert_array_equal(measure_distribution(RegisterState.basis(2, 3)), [0, 0, 0, 1])
        np.testing.assert_allclose(measure_distribution(RegisterState.uniform(3)), np.full(8, 1 / 8))
