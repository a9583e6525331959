"""Covariance matrices of the example states plus seeded random instances."""

import numpy as np
from scipy.linalg import block_diag

from .symplectic import (
    CovarianceMatrix,
    as_matrix,
    beam_splitter_50_50,
    partial_transpose,
    phase_rotation,
    single_mode_squeezer,
)


def two_mode_squeezed(r):
    """Two-mode squeezed vacuum with squeezed combinations ``x1 + x2`` and ``p1 - p2``."""
    if r < 0:
        raise ValueError(f"squeezing must be non-negative, got {r}")
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    C = sh * np.diag([-1.0, 1.0])
    return CovarianceMatrix(np.block([[ch * np.eye(2), C], [C, ch * np.eye(2)]]), [1, 1])


def ww_state():
    """PPT entangled covariance matrix of 2 x 2 modes."""
    g = np.array(
        [
            [2, 0, 0, 0, 1, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, -1],
            [0, 0, 2, 0, 0, 0, -1, 0],
            [0, 0, 0, 1, 0, -1, 0, 0],
            [1, 0, 0, 0, 2, 0, 0, 0],
            [0, 0, 0, -1, 0, 4, 0, 0],
            [0, 0, -1, 0, 0, 0, 2, 0],
            [0, -1, 0, 0, 0, 0, 0, 4],
        ],
        dtype=float,
    )
    return CovarianceMatrix(g, [2, 2])


def ghz_covariance(N, r1, r2):
    """Pure, permutation-symmetric GHZ-like state of ``N`` modes.

    ``r1`` squeezes the first input mode and ``r2`` the remaining ``N - 1``.
    """
    if N < 2 or int(N) != N:
        raise ValueError(f"need an integer N >= 2, got {N}")
    if r1 <= 0 or r2 <= 0:
        raise ValueError("squeezing parameters must be positive")
    N = int(N)
    e1, e2 = np.exp(2 * r1), np.exp(2 * r2)
    a = e1 / N + (N - 1) / N / e2
    b = 1 / (N * e1) + (N - 1) / N * e2
    c = (e1 - 1 / e2) / N
    d = (1 / e1 - e2) / N
    g = np.kron(np.ones((N, N)), np.diag([c, d])) + np.kron(np.eye(N), np.diag([a - c, b - d]))
    return CovarianceMatrix(g, [1] * N)


def entangled_pair(r, alpha, orientation=1):
    """Mixed two-mode state whose partial transpose has symplectic spectrum ``(e^-2r, alpha e^2r)``.

    Built backwards from ``diag(e^-2r, e^-2r, alpha e^2r, alpha e^2r)`` by a
    balanced beam splitter (``orientation=-1`` uses its inverse) followed by
    partial transposition of the second mode. Both symplectic eigenvalues of
    the result equal ``sqrt(alpha)``.
    """
    if r <= 0 or alpha < 1:
        raise ValueError("need r > 0 and alpha >= 1")
    g = np.diag([np.exp(-2 * r)] * 2 + [alpha * np.exp(2 * r)] * 2)
    B = beam_splitter_50_50(2, 0, 1)
    if orientation < 0:
        B = B.T
    return CovarianceMatrix(partial_transpose(B @ g @ B.T, [1]), [1, 1])


def swap_input(r, alpha):
    """The two uncorrelated pairs (modes 1-2 and 3-4) before they are mixed."""
    p1 = entangled_pair(r, alpha, orientation=-1).entries
    p2 = entangled_pair(r, alpha, orientation=1).entries
    return CovarianceMatrix(block_diag(p1, p2), [1, 1, 1, 1])


def swap_state(r=2 * np.log(2) / 3, alpha=5.0):
    """Four-mode state of an entanglement-swapping run before the measurement.

    Two entangled pairs with modes 2 and 3 overlapped at a balanced beam splitter.
    """
    g = swap_input(r, alpha).entries
    B = beam_splitter_50_50(4, 1, 2).T
    out = B @ g @ B.T
    return CovarianceMatrix(0.5 * (out + out.T), [1, 1, 1, 1])


def random_symplectic(n, rng, steps=None, max_squeeze=1.0):
    """Random product of squeezers, beam splitters, rotations and mode swaps."""
    S = np.eye(2 * n)
    steps = 4 * n if steps is None else steps
    for _ in range(steps):
        kind = rng.integers(3 if n > 1 else 2)
        i = int(rng.integers(n))
        if kind == 0:
            T = single_mode_squeezer(n, i, np.exp(rng.uniform(-max_squeeze, max_squeeze)))
        elif kind == 1:
            T = phase_rotation(n, i, rng.uniform(0, 2 * np.pi))
        else:
            j = int((i + 1 + rng.integers(n - 1)) % n)
            t = rng.uniform(0, np.pi / 2)
            T = np.eye(2 * n)
            for q in (0, 1):
                a, b = 2 * i + q, 2 * j + q
                T[a, a], T[a, b], T[b, a], T[b, b] = np.cos(t), np.sin(t), -np.sin(t), np.cos(t)
        S = T @ S
    return S


def random_covariance(n, mix=0.0, seed=0, partition=None, max_squeeze=1.0):
    """Seeded random valid covariance ``S (I + D) S^T`` with ``D >= 0`` diagonal.

    ``mix`` bounds the thermal offsets in ``D``; ``mix=0`` gives a pure state.
    Uses numpy's PCG64 generator, so a seed reproduces the same matrix on any platform.
    """
    rng = np.random.default_rng(seed)
    offsets = np.repeat(rng.uniform(0, mix, size=n), 2) if mix > 0 else np.zeros(2 * n)
    S = random_symplectic(n, rng, max_squeeze=max_squeeze)
    g = S @ np.diag(1.0 + offsets) @ S.T
    return CovarianceMatrix(0.5 * (g + g.T), partition)


def random_xp_diagonal(n, mix=0.0, seed=0, partition=None, spread=1.0):
    """Seeded random valid covariance with no position-momentum correlations.

    In x-major form the matrix is ``X + P`` blocks with ``P`` random positive
    definite and ``X = P^-1 + mix * W W^T / n``; validity is ``X >= P^-1``.
    """
    rng = np.random.default_rng(seed)
    B = rng.normal(scale=spread / np.sqrt(n), size=(n, n))
    P = np.linalg.matrix_power(np.eye(n) + 0.5 * (B + B.T), 2) + 0.05 * np.eye(n)
    W = rng.normal(size=(n, n))
    X = np.linalg.inv(P) + mix * W @ W.T / n
    g = np.zeros((2 * n, 2 * n))
    g[0::2, 0::2] = 0.5 * (X + X.T)
    g[1::2, 1::2] = P
    return CovarianceMatrix(g, partition)


def add_noise(gamma, kappa):
    """Add isotropic noise ``kappa * I``."""
    if kappa < 0:
        raise ValueError(f"noise must be non-negative, got {kappa}")
    g = as_matrix(gamma) + kappa * np.eye(as_matrix(gamma).shape[0])
    if isinstance(gamma, CovarianceMatrix):
        return CovarianceMatrix(g, gamma.partition)
    return g
