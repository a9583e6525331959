import numpy as np
import pytest
from reference_data import GHZ3, SWAP, SWAP_PRINT_TOL

from cvwitness.states import (
    add_noise,
    entangled_pair,
    ghz_covariance,
    random_covariance,
    random_xp_diagonal,
    swap_input,
    swap_state,
    two_mode_squeezed,
    ww_state,
)
from cvwitness.symplectic import (
    gaussian_entropy,
    is_valid_covariance,
    mode_permutation,
    partial_transpose,
    symplectic_eigenvalues,
)
from cvwitness.witness import duan_witness, fully_wit

R_SWAP = 2 * np.log(2) / 3


class TestTwoModeSqueezed:
    def test_vacuum_at_zero(self):
        np.testing.assert_array_equal(two_mode_squeezed(0.0).entries, np.eye(4))

    def test_duan_value(self):
        assert np.sum(duan_witness(1.0) * two_mode_squeezed(0.8).entries) == pytest.approx(np.exp(-1.6))

    def test_partial_transpose_spectrum(self):
        pt = partial_transpose(two_mode_squeezed(0.25), [1])
        assert symplectic_eigenvalues(pt)[-1] == pytest.approx(np.exp(-0.5), abs=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            two_mode_squeezed(-0.1)

    def test_boundary_at_zero(self):
        assert abs(fully_wit(two_mode_squeezed(0.0)).x_e) < 1e-7


class TestWW:
    def test_valid(self):
        assert is_valid_covariance(ww_state())

    def test_ppt(self):
        assert is_valid_covariance(partial_transpose(ww_state(), [2, 3]), tol=1e-10)

    def test_partition(self):
        assert list(ww_state().partition.sizes) == [2, 2]


class TestGHZ:
    def test_printed_matrix(self):
        g = ghz_covariance(3, np.log(2) / 2, np.log(2) / 2).entries
        np.testing.assert_allclose(g, GHZ3, atol=1e-12)

    @pytest.mark.parametrize("N", [2, 3, 5])
    def test_pure(self, N):
        g = ghz_covariance(N, 0.3, 0.7)
        np.testing.assert_allclose(symplectic_eigenvalues(g), np.ones(N), atol=1e-9)

    def test_closed_form(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            N, r1, r2 = int(rng.integers(2, 6)), *rng.uniform(0.05, 1.5, size=2)
            e1, e2 = np.exp(2 * r1), np.exp(2 * r2)
            g = ghz_covariance(N, r1, r2).entries
            a, b = e1 / N + (N - 1) / (N * e2), 1 / (N * e1) + (N - 1) * e2 / N
            c, d = (e1 - 1 / e2) / N, (1 / e1 - e2) / N
            np.testing.assert_allclose(g[0:2, 0:2], np.diag([a, b]), atol=1e-12)
            np.testing.assert_allclose(g[0:2, 2:4], np.diag([c, d]), atol=1e-12)

    def test_permutation_invariant(self):
        g = ghz_covariance(4, 0.4, 0.2).entries
        P = mode_permutation(4, [2, 0, 3, 1])
        np.testing.assert_allclose(P @ g @ P.T, g, atol=1e-12)

    @pytest.mark.parametrize("args", [(1, 0.3, 0.3), (3, 0.0, 0.3), (3, 0.3, -1.0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            ghz_covariance(*args)


class TestSwap:
    def test_printed_matrix(self):
        np.testing.assert_allclose(swap_state(R_SWAP, 5.0).entries, SWAP, atol=SWAP_PRINT_TOL)

    def test_pairs(self):
        for orientation in (1, -1):
            pair = entangled_pair(R_SWAP, 5.0, orientation)
            np.testing.assert_allclose(symplectic_eigenvalues(pair), [np.sqrt(5)] * 2, atol=1e-9)
            assert gaussian_entropy(pair) == pytest.approx(2.152, abs=1e-3)
            assert symplectic_eigenvalues(partial_transpose(pair, [1]))[-1] < 1

    def test_input_uncorrelated(self):
        g = swap_input(R_SWAP, 5.0).entries
        assert np.all(g[:4, 4:] == 0)
        assert is_valid_covariance(g, tol=1e-9)

    def test_valid(self):
        assert is_valid_covariance(swap_state(), tol=1e-9)

    def test_invalid(self):
        with pytest.raises(ValueError):
            swap_state(0.5, 0.5)


class TestRandom:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_covariance(3, 0.2, seed=9).entries, random_covariance(3, 0.2, seed=9).entries)

    def test_seed_matters(self):
        assert not np.allclose(random_covariance(3, seed=1).entries, random_covariance(3, seed=2).entries)

    @pytest.mark.parametrize("seed", range(10))
    def test_valid(self, seed):
        assert is_valid_covariance(random_covariance(4, mix=0.3, seed=seed), tol=1e-9)
        assert is_valid_covariance(random_xp_diagonal(4, mix=0.3, seed=seed), tol=1e-9)

    def test_pure(self):
        np.testing.assert_allclose(symplectic_eigenvalues(random_covariance(3, 0.0, seed=4)), 1.0, atol=1e-8)

    def test_xp_diagonal(self):
        g = random_xp_diagonal(3, seed=1).entries
        assert np.all(g[0::2, 1::2] == 0)


class TestNoise:
    def test_zero(self):
        g = ww_state()
        np.testing.assert_array_equal(add_noise(g, 0.0).entries, g.entries)

    def test_linear_in_witness_value(self):
        Z = duan_witness(1.0)
        g = two_mode_squeezed(0.5).entries
        assert np.sum(Z * add_noise(g, 0.3)) == pytest.approx(np.sum(Z * g) + 0.3 * np.trace(Z))

    def test_large_noise_hides_entanglement(self):
        Z = duan_witness(1.0)
        g = two_mode_squeezed(0.5).entries
        kappa = (1 - np.sum(Z * g)) / np.trace(Z)
        assert np.sum(Z * add_noise(g, kappa + 1e-6)) >= 1.0

    def test_negative(self):
        with pytest.raises(ValueError):
            add_noise(np.eye(2), -1.0)
