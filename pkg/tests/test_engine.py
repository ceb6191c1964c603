import numpy as np
import pytest

from nuqft import engine
from nuqft.engine import (
    NonuniformAngleSet,
    align_interval,
    build_exponential_matrix,
    circular_shift,
    direct_nudft,
    factor_edge,
    interp_nudft_baseline,
    interpolate,
    modulate_basis,
    modulate_columns,
    precompute_interpolators,
    qsvd_nudft,
    reference_basis,
    relative_error,
    scale,
    select_rank,
    transform_scaled,
)
from nuqft.errors import ConfigurationError, ContractError, PartitionError
from nuqft.transform import iqft_columns, qft_columns


def brute_force(x, phi, N):
    # sum_n x[n] exp(-2 pi i (n - N/2) phi / N), evaluated term by term
    return np.array([sum(x[n] * np.exp(-2j * np.pi * (n - N / 2) * p / N) for n in range(N)) for p in phi])


@pytest.fixture(scope="module")
def basis64():
    return reference_basis(64, 128, seed=0, rank=64)


def instance(N, K, seed):
    r = np.random.default_rng(seed)
    return NonuniformAngleSet.random(N, K, r), r.normal(size=N) + 1j * r.normal(size=N)


class TestAngleSet:
    def test_partition(self):
        a = NonuniformAngleSet(64, [31.75, 0.0, 0.49, 0.5, 63.999])
        assert a.partition.tolist() == [63, 0, 0, 1, 127]
        assert a.cardinalities.sum() == a.K
        a.check_partition()

    def test_intervals(self):
        a = NonuniformAngleSet(4, [0.1, 2.6, 0.2, 2.7])
        groups = a.intervals()
        assert list(groups) == [0, 5]
        assert groups[0].tolist() == [0, 2]

    def test_out_of_range(self):
        with pytest.raises(ContractError):
            NonuniformAngleSet(8, [8.0])

    def test_bad_partition(self):
        with pytest.raises(PartitionError):
            NonuniformAngleSet(8, [1.2]).check_partition([3])

    def test_random_sorted(self, rng):
        a = NonuniformAngleSet.random(16, 40, rng)
        assert np.all(np.diff(a.angles) >= 0)


class TestExponentials:
    def test_matrix_entries(self, rng):
        a = NonuniformAngleSet.random(16, 10, rng)
        m = build_exponential_matrix(a)
        n = np.arange(16)[:, None]
        expected = np.exp(2j * np.pi * (n - 8) * a.angles[None, :] / 16)
        np.testing.assert_allclose(m.matrix, expected, atol=1e-12)
        np.testing.assert_allclose(np.abs(m.matrix), 1.0, atol=1e-12)
        assert m.tau == 8.0

    @pytest.mark.parametrize("part", ["real", "imag"])
    def test_edge_reconstruction(self, part):
        for seed in range(100):
            a, x = instance(64, 128, seed)
            m = build_exponential_matrix(a)
            f = factor_edge(m, part)
            assert np.max(np.abs(f.apply_adjoint(x) - m.matrix.conj().T @ x)) <= 1e-12

    def test_edge_split_real_part(self, rng):
        a = NonuniformAngleSet.random(8, 5, rng)
        m = build_exponential_matrix(a)
        f = factor_edge(m)
        np.testing.assert_allclose(f.D, 1j * m.matrix[0].real)
        np.testing.assert_allclose(f.E_tilde[1:], m.matrix[1:])

    def test_direct_against_brute_force(self, rng):
        a, x = instance(16, 9, 3)
        np.testing.assert_allclose(direct_nudft(x, a), brute_force(x, a.angles, 16), atol=1e-11)

    def test_direct_on_grid_is_dft(self):
        N = 16
        x = np.random.default_rng(1).normal(size=N)
        a = NonuniformAngleSet(N, np.arange(N, dtype=float))
        sign = (-1.0) ** np.arange(N)
        np.testing.assert_allclose(direct_nudft(x, a), sign * np.fft.fft(x), atol=1e-11)


class TestBasis:
    def test_threshold_rank(self):
        b = reference_basis(32, 64, rel_threshold=1e-8)
        assert b.L < 32
        assert b.S_L[-1] / b.S_L[0] >= 1e-8
        assert b.singular_values[0] / b.singular_values[b.L - 1] >= 1e6 or b.L < 6
        assert b.singular_values[b.L] / b.singular_values[0] < 1e-8

    def test_decay(self):
        s = reference_basis(32, 64).singular_values
        assert s[0] / s[19] >= 1e6

    def test_deterministic(self):
        a, b = reference_basis(16, 32, seed=5), reference_basis(16, 32, seed=5)
        np.testing.assert_array_equal(a.U, b.U)

    def test_real_orthonormal(self, basis64):
        assert basis64.U.dtype == float
        np.testing.assert_allclose(basis64.U.T @ basis64.U, np.eye(64), atol=1e-12)
        assert basis64.max_imag <= 1e-10

    def test_select_rank(self):
        assert select_rank([1, 0.1, 1e-9, 1e-12], 1e-8) == 2
        assert select_rank([1, 0.5], 1e-8) == 2

    def test_truncate_bounds(self, basis64):
        with pytest.raises(ContractError):
            basis64.truncate(0)


class TestShifts:
    def test_shift_direction(self):
        np.testing.assert_array_equal(circular_shift(np.arange(4), 1), [3, 0, 1, 2])

    @pytest.mark.parametrize("l", [0, 2, 6, 1, 3, 9])
    def test_modulation_matches_angle_offset(self, l):
        # reference angle phi maps to phi + i for l = 2i and to i - phi for l = 2i - 1
        N = 16
        i = (l + 1) // 2
        phi = np.array([0.05, 0.2, 0.41])
        moved = i - phi if l % 2 else phi + i
        ref = factor_edge(build_exponential_matrix(NonuniformAngleSet(N, phi)), "imag").E_tilde
        tgt = factor_edge(build_exponential_matrix(NonuniformAngleSet(N, moved)), "imag").E_tilde
        np.testing.assert_allclose(modulate_columns(ref, l)[1:], tgt[1:], atol=1e-12)

    def test_l_zero_identity(self, basis64):
        np.testing.assert_allclose(modulate_basis(basis64.truncate(4), 0), qft_columns(basis64.U[:, :4]), atol=1e-15)

    def test_shift_composition(self, rng):
        c = rng.normal(size=(8, 2)) + 0j
        twice = modulate_columns(modulate_columns(c, 2), 2)
        np.testing.assert_allclose(twice, modulate_columns(c, 4), atol=1e-14)

    def test_unit_norm(self, basis64):
        b = basis64.truncate(5)
        for l in (0, 1, 7, 100):
            np.testing.assert_allclose(np.linalg.norm(modulate_basis(b, l), axis=0), 1.0, atol=1e-10)

    def test_odd_modes_agree(self):
        N = 32
        a = NonuniformAngleSet(N, [3.6, 7.8, 7.9])
        E = factor_edge(build_exponential_matrix(a), "imag").E_tilde
        for l, idx in a.intervals().items():
            np.testing.assert_allclose(
                align_interval(E[:, idx], l, "conjugate"), align_interval(E[:, idx], l, "reverse"), atol=1e-12
            )

    def test_bad_odd_mode(self):
        with pytest.raises(ContractError):
            align_interval(np.ones((4, 1)), 1, "flip")


class TestPipeline:
    def test_stage_shapes_and_scale(self, basis64, rng):
        b = basis64.truncate(6)
        x = rng.normal(size=64)
        D = scale(x, b)
        assert D.shape == (64, 6)
        np.testing.assert_allclose(D, x[:, None] * iqft_columns(b.U_L), atol=1e-12)
        np.testing.assert_allclose(scale(np.ones(64), b), iqft_columns(b.U_L))
        Q = transform_scaled(D)
        assert Q.shape == (64, 6)
        np.testing.assert_allclose(iqft_columns(Q), D, atol=1e-10)

    def test_delta_input_single_entry(self, basis64):
        D = scale(np.eye(64)[0], basis64.truncate(3))
        assert np.all(np.count_nonzero(np.abs(D) > 0, axis=0) <= 1)

    def test_zero_input(self, basis64):
        a, _ = instance(64, 20, 1)
        np.testing.assert_array_equal(qsvd_nudft(np.zeros(64), a, basis64.truncate(8)), 0)

    def test_empty_angle_set(self, basis64):
        a = NonuniformAngleSet(64, np.zeros(0))
        assert qsvd_nudft(np.ones(64), a, basis64).size == 0

    def test_least_squares_residual_orthogonal(self, basis64):
        b = basis64.truncate(5)
        a, _ = instance(64, 40, 2)
        interp = precompute_interpolators(b, a)
        E = factor_edge(build_exponential_matrix(a), "imag").E_tilde
        for l, idx in a.intervals().items():
            target = align_interval(E[:, idx], l)
            resid = target - b.U_L @ interp.P[l].T
            assert np.max(np.abs(b.U_L.T @ resid)) <= 1e-9
        assert interp.real

    def test_full_rank_single_angle_intervals(self, basis64):
        a = NonuniformAngleSet(64, np.array([0.1, 5.7, 20.3, 41.9, 63.6]))
        x = np.random.default_rng(4).normal(size=64)
        assert relative_error(qsvd_nudft(x, a, basis64), direct_nudft(x, a)) <= 1e-9

    @pytest.mark.parametrize("N", [16, 32, 64])
    def test_full_rank_equivalence(self, N):
        b = reference_basis(N, 2 * N, rank=N)
        for seed in range(5):
            a, x = instance(N, 2 * N, seed)
            assert relative_error(qsvd_nudft(x, a, b), direct_nudft(x, a)) <= 1e-9

    def test_threshold_rank_accuracy(self):
        b = reference_basis(64, 128, rel_threshold=1e-8)
        errs = [relative_error(qsvd_nudft(x, a, b), direct_nudft(x, a)) for a, x in (instance(64, 128, s) for s in range(20))]
        assert np.median(errs) <= 1e-3

    def test_interval_zero_uses_row_zero(self, basis64):
        b = basis64.truncate(8)
        a = NonuniformAngleSet(64, [0.1, 0.3])
        interp = precompute_interpolators(b, a)
        Q = np.zeros((64, 8), dtype=complex)
        Q[1:] = np.nan
        Q[0] = 1.0
        assert np.all(np.isfinite(interpolate(Q, interp, a)))

    def test_missing_interpolator(self, basis64):
        b = basis64.truncate(4)
        interp = precompute_interpolators(b, NonuniformAngleSet(64, [0.2]))
        with pytest.raises(ConfigurationError):
            interpolate(np.zeros((64, 4)), interp, NonuniformAngleSet(64, [3.3]))

    def test_basis_size_mismatch(self, basis64):
        with pytest.raises(ConfigurationError):
            precompute_interpolators(basis64, NonuniformAngleSet(32, [1.0]))


class TestBaseline:
    def test_on_grid_exact(self):
        a, x = instance(32, 1, 0)
        a = NonuniformAngleSet(32, [0.0, 5.0, 31.0])
        for order in (1, 4, 7):
            np.testing.assert_allclose(interp_nudft_baseline(x, a, order), direct_nudft(x, a), atol=1e-10)

    def test_nearest_neighbour(self):
        x = np.random.default_rng(2).normal(size=16)
        grid = engine.uniform_coefficients(x)
        a = NonuniformAngleSet(16, [3.2, 3.8, 15.7])
        np.testing.assert_allclose(interp_nudft_baseline(x, a, 1), grid[[3, 4, 0]])

    def test_smooth_spectrum_improves(self):
        # a short support input has a smooth, slowly varying spectrum
        N = 64
        x = np.zeros(N, dtype=complex)
        x[N // 2 - 2: N // 2 + 2] = [1.0, 0.5, -0.25, 0.7j]
        a, _ = instance(N, 50, 9)
        errs = [relative_error(interp_nudft_baseline(x, a, k), direct_nudft(x, a)) for k in (1, 3, 5, 9)]
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] <= 1e-3

    def test_order_positive(self):
        with pytest.raises(ContractError):
            interp_nudft_baseline(np.ones(4), NonuniformAngleSet(4, [1.0]), 0)
