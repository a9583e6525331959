"""Symplectic linear algebra on real covariance matrices.

Quadratures are ordered ``(x1, p1, x2, p2, ..., xn, pn)`` everywhere and the
vacuum covariance matrix is the identity.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

SYMMETRY_TOL = 1e-8
EIG_TOL = 1e-10


def symplectic_form(n):
    """Return the ``2n x 2n`` symplectic form, a direct sum of ``[[0, 1], [-1, 0]]``."""
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n}")
    return block_diag(*([np.array([[0.0, 1.0], [-1.0, 0.0]])] * int(n)))


def _as_square(M, name="matrix"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def _check_symmetric(M, tol=SYMMETRY_TOL, name="matrix"):
    M = _as_square(M, name)
    asym = np.max(np.abs(M - M.T)) if M.size else 0.0
    if asym > tol * max(1.0, np.max(np.abs(M))):
        raise ValueError(f"{name} is not symmetric (max asymmetry {asym:.3g})")
    return 0.5 * (M + M.T)


def _mode_count(M):
    if M.shape[0] % 2:
        raise ValueError(f"dimension {M.shape[0]} is odd; expected 2n x 2n")
    return M.shape[0] // 2


@dataclass(frozen=True)
class ModePartition:
    """Number of modes held by each party, e.g. ``ModePartition([3, 1, 2])``."""

    sizes: tuple

    def __init__(self, sizes):
        sizes = tuple(int(s) for s in np.atleast_1d(sizes))
        if not sizes:
            raise ValueError("a partition needs at least one party")
        if any(s < 1 for s in sizes):
            raise ValueError(f"every party must hold at least one mode: {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def parties(self):
        return len(self.sizes)

    @property
    def modes(self):
        return sum(self.sizes)

    def party_modes(self, k):
        """Zero-based mode indices held by party ``k``."""
        start = sum(self.sizes[:k])
        return list(range(start, start + self.sizes[k]))

    def quadrature_indices(self, parties):
        """Row/column indices of all quadratures belonging to the given parties."""
        idx = []
        for k in sorted(parties):
            for m in self.party_modes(k):
                idx.extend((2 * m, 2 * m + 1))
        return np.array(idx, dtype=int)


@dataclass(frozen=True)
class CovarianceMatrix:
    """A symmetric ``2n x 2n`` covariance matrix together with a mode partition.

    The partition defaults to one mode per party.
    """

    entries: np.ndarray = field(repr=False)
    partition: ModePartition = None

    def __post_init__(self):
        M = _check_symmetric(self.entries, 1e-10, "covariance matrix")
        n = _mode_count(M)
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        part = self.partition
        if part is None:
            part = ModePartition([1] * n)
        elif not isinstance(part, ModePartition):
            part = ModePartition(part)
        if part.modes != n:
            raise ValueError(
                f"partition {part.sizes} covers {part.modes} modes, matrix has {n}"
            )
        object.__setattr__(self, "partition", part)

    @property
    def modes(self):
        return self.entries.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)


def as_matrix(gamma):
    """Plain ndarray view of a ``CovarianceMatrix`` or array-like."""
    if isinstance(gamma, CovarianceMatrix):
        return np.array(gamma.entries)
    return _as_square(gamma)


def heisenberg_embedding(M, scale=1.0):
    """Real ``4n x 4n`` embedding of the Hermitian matrix ``M + i*scale*sigma``."""
    M = _as_square(M)
    sigma = scale * symplectic_form(_mode_count(M))
    return np.block([[M, -sigma], [sigma, M]])


def is_valid_covariance(gamma, tol=1e-10):
    """Check the uncertainty relation ``gamma + i sigma >= 0``.

    The complex condition is evaluated through its real embedding
    ``[[gamma, -sigma], [sigma, gamma]]``, which has the same spectrum (doubled).
    """
    M = _check_symmetric(as_matrix(gamma), name="covariance matrix")
    return bool(np.linalg.eigvalsh(heisenberg_embedding(M))[0] >= -tol)


def _psd_sqrt(M, tol):
    w, V = np.linalg.eigh(M)
    scale = max(1.0, np.max(np.abs(w))) if w.size else 1.0
    if w.size and w[0] < -tol * scale:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3g})")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


def symplectic_eigenvalues(M, tol=EIG_TOL):
    """Symplectic eigenvalues of a real symmetric PSD matrix, in descending order.

    These are the moduli of the eigenvalues of ``M^(1/2) (i sigma) M^(1/2)``,
    each pair counted once. The construction extends to singular ``M``
    (e.g. rank-deficient witnesses), where some values are zero.

    Args:
        M (array): ``2n x 2n`` real symmetric positive semidefinite matrix.
        tol (float): relative tolerance for negative eigenvalues of ``M``.

    Returns:
        array: ``n`` non-negative values ``s_1 >= ... >= s_n``.
    """
    M = _check_symmetric(as_matrix(M))
    n = _mode_count(M)
    R = _psd_sqrt(M, max(tol, 1e-8))
    K = R @ symplectic_form(n) @ R
    # K is real antisymmetric: singular values come in equal pairs
    sv = np.linalg.svd(K, compute_uv=False)
    s = 0.5 * (sv[0::2] + sv[1::2])
    s[s < EIG_TOL] = 0.0
    return s


def symplectic_trace(M, tol=EIG_TOL):
    """Sum of the symplectic eigenvalues, each counted once."""
    return float(np.sum(symplectic_eigenvalues(M, tol)))


def partial_transpose(gamma, modes):
    """Flip the sign of the momentum of each listed (zero-based) mode.

    Returns a new ``CovarianceMatrix`` when given one, otherwise an ndarray.
    """
    M = as_matrix(gamma)
    n = _mode_count(M)
    modes = [int(m) for m in np.atleast_1d(modes)]
    for m in modes:
        if not 0 <= m < n:
            raise IndexError(f"mode {m} out of range for {n} modes")
    flip = np.ones(2 * n)
    flip[[2 * m + 1 for m in modes]] = -1.0
    out = flip[:, None] * M * flip[None, :]
    if isinstance(gamma, CovarianceMatrix):
        return CovarianceMatrix(out, gamma.partition)
    return out


def xp_projectors(n):
    """Projectors ``(P_x, P_p)`` onto the position and momentum quadratures."""
    px = np.diag(np.tile([1.0, 0.0], n))
    return px, np.eye(2 * n) - px


def pinch_xp(M):
    """Drop all position-momentum cross entries: ``P_x M P_x + P_p M P_p``."""
    M = _as_square(M)
    px, pp = xp_projectors(_mode_count(M))
    return px @ M @ px + pp @ M @ pp


def is_symplectic(S, tol=SYMMETRY_TOL):
    S = _as_square(S, "transformation")
    sigma = symplectic_form(_mode_count(S))
    return np.linalg.norm(S @ sigma @ S.T - sigma) <= tol


def apply_symplectic(gamma, S, tol=SYMMETRY_TOL):
    """Congruence ``S gamma S^T`` after checking that ``S`` is symplectic."""
    M = as_matrix(gamma)
    S = _as_square(S, "transformation")
    if S.shape != M.shape:
        raise ValueError(f"shape mismatch: {S.shape} vs {M.shape}")
    sigma = symplectic_form(_mode_count(S))
    violation = np.linalg.norm(S @ sigma @ S.T - sigma)
    if violation > tol:
        raise ValueError(f"transformation is not symplectic (|S sigma S^T - sigma| = {violation:.3g})")
    out = S @ M @ S.T
    out = 0.5 * (out + out.T)
    if isinstance(gamma, CovarianceMatrix):
        return CovarianceMatrix(out, gamma.partition)
    return out


def _check_modes(n, *modes):
    for m in modes:
        if not 0 <= m < n:
            raise IndexError(f"mode {m} out of range for {n} modes")


def beam_splitter_50_50(n, i, j):
    """Balanced beam splitter between zero-based modes ``i`` and ``j``.

    Acts as ``[[1, 1], [-1, 1]] / sqrt(2)`` on ``(q_i, q_j)`` for ``q`` in ``{x, p}``.
    """
    _check_modes(n, i, j)
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    S = np.eye(2 * n)
    h = 1.0 / np.sqrt(2.0)
    for q in (0, 1):
        a, b = 2 * i + q, 2 * j + q
        S[a, a], S[a, b], S[b, a], S[b, b] = h, h, -h, h
    return S


def single_mode_squeezer(n, i, d):
    """``diag(d, 1/d)`` on mode ``i``; ``d`` must be nonzero."""
    _check_modes(n, i)
    if d == 0:
        raise ValueError("squeezing factor must be nonzero")
    S = np.eye(2 * n)
    S[2 * i, 2 * i] = d
    S[2 * i + 1, 2 * i + 1] = 1.0 / d
    return S


def phase_rotation(n, i, theta):
    """Rotation of the ``(x_i, p_i)`` plane by ``theta``."""
    _check_modes(n, i)
    S = np.eye(2 * n)
    c, s = np.cos(theta), np.sin(theta)
    S[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = [[c, s], [-s, c]]
    return S


def mode_permutation(n, perm):
    """Symplectic matrix moving mode ``perm[k]`` to position ``k``.

    ``S gamma S^T`` then has the quadrature pair of old mode ``perm[k]`` in slot ``k``.
    """
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of range({n})")
    S = np.zeros((2 * n, 2 * n))
    for k, p in enumerate(perm):
        S[2 * k, 2 * p] = 1.0
        S[2 * k + 1, 2 * p + 1] = 1.0
    return S


def gaussian_entropy(gamma, tol=1e-8):
    """Von Neumann entropy (nats) of the Gaussian state with covariance ``gamma``."""
    M = as_matrix(gamma)
    if not is_valid_covariance(M, tol):
        raise ValueError("not a valid covariance matrix")
    s = np.maximum(symplectic_eigenvalues(M), 1.0)
    N = (s - 1.0) / 2.0
    # x ln x -> 0 as x -> 0
    return float(np.sum((N + 1) * np.log(N + 1) - np.where(N > 0, N * np.log(np.where(N > 0, N, 1.0)), 0.0)))


def p_measure(x_e):
    """Scaling measure ``1 / (1 + x_e)`` of the separability margin ``x_e``."""
    if x_e <= -1:
        raise ValueError(f"margin must exceed -1, got {x_e}")
    return 1.0 / (1.0 + x_e)
