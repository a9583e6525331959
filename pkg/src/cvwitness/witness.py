"""Optimal second-moment entanglement witnesses.

``fully_wit`` finds the witness ``Z`` minimising ``Tr[Z gamma]`` among all
witnesses against separability with respect to a given partition of the modes;
``multi_wit`` does the same against bi-separability, so that ``c < 0``
certifies genuine multipartite entanglement.

Both solve the separability-margin program

    maximize x_e  s.t.  gamma - (separable part) >= 0,
                        (separable part) + (1 + x_e) i sigma >= 0

and read the witness off the dual variable of the first constraint.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import sdpcore
from .symplectic import (
    CovarianceMatrix,
    ModePartition,
    as_matrix,
    symplectic_form,
    symplectic_trace,
)

SEPARABLE = "separable"
ENTANGLED = "entangled"
BOUNDARY = "boundary"


class WitnessError(RuntimeError):
    """The witness program could not be solved."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class InfeasibleConstraintsError(WitnessError):
    """The measurement constraints leave no admissible witness."""


@dataclass(frozen=True)
class MeasurementConstraint:
    """Restricts the witness to ``Tr[Z A] = 0``."""

    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"constraint matrix must be square, got {A.shape}")
        if not np.allclose(A, A.T, atol=1e-12):
            raise ValueError("constraint matrix must be symmetric")
        object.__setattr__(self, "A", 0.5 * (A + A.T))


@dataclass(frozen=True)
class Bipartition:
    """Two-block coarse graining of ``N`` parties; party 0 is always in ``first``."""

    mask: frozenset
    parties: int

    def __post_init__(self):
        mask = frozenset(int(k) for k in self.mask)
        if 0 not in mask:
            raise ValueError("canonical bipartitions keep party 0 in the first block")
        if not mask < frozenset(range(self.parties)):
            raise ValueError(f"{sorted(mask)} is not a proper subset of {self.parties} parties")
        object.__setattr__(self, "mask", mask)

    @property
    def first(self):
        return sorted(self.mask)

    @property
    def second(self):
        return sorted(set(range(self.parties)) - self.mask)

    def __str__(self):
        letters = [chr(ord("A") + k) if self.parties <= 26 else f"[{k}]" for k in range(self.parties)]
        return "".join(letters[k] for k in self.first) + "|" + "".join(letters[k] for k in self.second)


@dataclass
class WitnessReport:
    """Outcome of checking the three witness conditions on ``Z``."""

    psd: bool
    min_eigenvalue: float
    block_str_sum: float
    total_str: float
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    split_str_sums: dict = field(default_factory=dict)

    @property
    def is_witness(self):
        return self.cond_i and self.cond_ii and self.cond_iii


@dataclass
class WitnessResult:
    """Optimal witness ``Z`` with value ``c = Tr[Z gamma] - 1`` and primal margin ``x_e``."""

    Z: np.ndarray
    c: float
    x_e: float
    gap: float
    status: str
    conditions: WitnessReport
    partition: ModePartition
    kind: str
    iterations: int
    solution: sdpcore.SdpSolution = field(repr=False, default=None)

    @property
    def entangled(self):
        return self.c < 0

    @property
    def p_measure(self):
        return 1.0 / (1.0 + self.x_e)


def symmetric_basis(j, k, n):
    """Symmetric ``n x n`` matrix with ones at ``(j, k)`` and ``(k, j)`` (zero-based)."""
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"({j}, {k}) out of range for dimension {n}")
    F = np.zeros((n, n))
    F[j, k] = F[k, j] = 1.0
    return F


def _sym_basis(d):
    return np.array([symmetric_basis(j, k, d) for j in range(d) for k in range(j, d)]).reshape(-1, d, d)


def enumerate_bipartitions(N):
    """All ``2^(N-1) - 1`` bipartitions of ``N`` parties, ordered by ascending mask."""
    if N < 2:
        raise ValueError(f"need at least two parties, got {N}")
    out = []
    for bits in range(1, 2 ** (N - 1)):
        # bit j set means party j+1 joins party 0; bits == all-ones would empty the second block
        mask = {0} | {j + 1 for j in range(N - 1) if not bits >> j & 1}
        out.append(Bipartition(frozenset(mask), N))
    return sorted(out, key=lambda bp: sum(1 << k for k in bp.mask))


def _heis_coef(sigma):
    return np.block([[np.zeros_like(sigma), -sigma], [sigma, np.zeros_like(sigma)]])


def _embed_real(E):
    return np.block([[E, np.zeros_like(E)], [np.zeros_like(E), E]])


def _start_dual(d, n_total):
    """Half the real embedding of ``1 - i sigma / n_total`` on a ``d``-dimensional block."""
    s = symplectic_form(d // 2) / n_total
    return 0.5 * np.block([[np.eye(d), s], [-s, np.eye(d)]])


class _Builder:
    """Accumulates variables and blocks of a witness program."""

    def __init__(self):
        self.blocks = []  # (F0, {var: coefficient matrix})
        self.nvars = 0
        self.c = []

    def var(self, cost=0.0):
        self.c.append(cost)
        self.nvars += 1
        return self.nvars - 1

    def block(self, F0):
        self.blocks.append((np.asarray(F0, dtype=float), {}))
        return len(self.blocks) - 1

    def coef(self, b, v, M):
        terms = self.blocks[b][1]
        terms[v] = terms.get(v, 0.0) + M

    def problem(self, eq=()):
        F0s, Fs = [], []
        for F0, terms in self.blocks:
            d = F0.shape[0]
            arr = np.zeros((self.nvars, d, d))
            for v, M in terms.items():
                arr[v] = M
            F0s.append(F0)
            Fs.append(arr)
        return sdpcore.SdpProblem(np.array(self.c), F0s, Fs, eq_constraints=eq)


def _prepare(gamma, partition, constraints):
    G = as_matrix(gamma)
    if partition is None:
        partition = gamma.partition if isinstance(gamma, CovarianceMatrix) else ModePartition([1] * (G.shape[0] // 2))
    elif not isinstance(partition, ModePartition):
        partition = ModePartition(partition)
    CovarianceMatrix(G, partition)  # validates shape, symmetry, sizes
    cons = []
    for A in constraints or ():
        A = A if isinstance(A, MeasurementConstraint) else MeasurementConstraint(A)
        if A.A.shape != G.shape:
            raise ValueError(f"constraint shape {A.A.shape} does not match covariance {G.shape}")
        cons.append(A)
    return 0.5 * (G + G.T), partition, cons


def _add_party_block(builder, main, idx, dim_total, n_total, heis_var):
    """Variables for a symmetric block on quadratures ``idx`` with its Heisenberg constraint."""
    d = len(idx)
    sigma = symplectic_form(d // 2)
    hb = builder.block(_heis_coef(sigma) if heis_var is None else np.zeros((2 * d, 2 * d)))
    if heis_var is not None:
        builder.coef(hb, heis_var, _heis_coef(sigma))
    for E in _sym_basis(d):
        v = builder.var()
        full = np.zeros((dim_total, dim_total))
        full[np.ix_(idx, idx)] = E
        builder.coef(main, v, -full)
        builder.coef(hb, v, _embed_real(E))
    return _start_dual(d, n_total)


def _clean_witness(Z, tol):
    Z = 0.5 * (Z + Z.T)
    w, V = np.linalg.eigh(Z)
    w = np.where((w < 0) & (w > -tol), 0.0, w)
    Z = (V * w) @ V.T
    return 0.5 * (Z + Z.T)


def _finish(sol, builder_xe, G, partition, kind, tol, validator):
    if sol.status == sdpcore.DUAL_INFEASIBLE:
        raise InfeasibleConstraintsError(
            "the measurement constraints admit no witness (separability margin unbounded)", sol
        )
    if sol.status != sdpcore.OPTIMAL:
        raise WitnessError(
            f"solver stopped with status {sol.status} after {sol.iterations} iterations "
            f"(gap {sol.gap:.3g}, primal res {sol.primal_residual:.3g}, dual res {sol.dual_residual:.3g})",
            sol,
        )
    Z = _clean_witness(sol.Z[0], tol)
    c = float(np.sum(Z * G) - 1.0)
    x_e = float(sol.x[builder_xe])
    return WitnessResult(
        Z=Z,
        c=c,
        x_e=x_e,
        gap=sol.gap,
        status=sol.status,
        conditions=validator(Z, partition),
        partition=partition,
        kind=kind,
        iterations=sol.iterations,
        solution=sol,
    )


def fully_wit(gamma, partition=None, constraints=(), tol=1e-8, max_iter=200):
    """Optimal witness against full separability with respect to ``partition``.

    Args:
        gamma (array or CovarianceMatrix): ``2n x 2n`` covariance matrix.
        partition (ModePartition or list[int]): modes per party; taken from
            ``gamma`` when it is a ``CovarianceMatrix``, else one mode per party.
        constraints (list): matrices ``A`` (or ``MeasurementConstraint``) with
            ``Tr[Z A] = 0`` imposed on the witness.
        tol (float): duality-gap tolerance passed to the solver.

    Returns:
        WitnessResult: ``c < 0`` iff ``gamma`` is detected as entangled.

    Raises:
        InfeasibleConstraintsError: the constraints exclude every witness.
        WitnessError: the solver failed.
    """
    G, partition, cons = _prepare(gamma, partition, constraints)
    dim, n = G.shape[0], partition.modes
    b = _Builder()
    main = b.block(G)
    x_e = b.var(cost=-1.0)
    z0 = [np.eye(dim)]
    for k in range(partition.parties):
        idx = partition.quadrature_indices([k])
        z0.append(_add_party_block(b, main, idx, dim, n, None))
        b.coef(len(b.blocks) - 1, x_e, _heis_coef(symplectic_form(len(idx) // 2)))
    for con in cons:
        b.coef(main, b.var(), con.A)
    sol = sdpcore.solve(b.problem(), tol=tol, max_iter=max_iter, z0=z0)
    return _finish(sol, x_e, G, partition, "full", tol, validate_witness)


def multi_wit(gamma, partition=None, constraints=(), tol=1e-8, max_iter=200):
    """Optimal witness against bi-separability; ``c < 0`` certifies genuine multipartite entanglement.

    Two-party inputs are delegated to ``fully_wit``. Arguments as for ``fully_wit``.
    """
    G, partition, cons = _prepare(gamma, partition, constraints)
    N = partition.parties
    if N < 2:
        raise ValueError("bi-separability needs at least two parties")
    if N == 2:
        return fully_wit(G, partition, cons, tol=tol, max_iter=max_iter)
    dim, n = G.shape[0], partition.modes
    b = _Builder()
    main = b.block(G)
    x_e = b.var(cost=-1.0)
    z0 = [np.eye(dim)]
    lams = []
    for bp in enumerate_bipartitions(N):
        lam = b.var()
        lams.append(lam)
        for side in (bp.first, bp.second):
            z0.append(_add_party_block(b, main, partition.quadrature_indices(side), dim, n, lam))
    for lam in lams:
        b.coef(b.block(np.zeros((1, 1))), lam, np.ones((1, 1)))
        z0.append(np.ones((1, 1)))
    for con in cons:
        b.coef(main, b.var(), con.A)
    row = np.zeros(b.nvars)
    row[lams] = 1.0
    row[x_e] = -1.0
    sol = sdpcore.solve(b.problem(eq=[(row, 1.0)]), tol=tol, max_iter=max_iter, z0=z0)
    return _finish(sol, x_e, G, partition, "biseparable", tol, validate_multipartite_witness)


def decide_separability(gamma, partition=None, tol=1e-8, constraints=()):
    """Verdict from the sign of the margin ``x_e``; ``|x_e| < 10 tol`` is a boundary case.

    A ``separable`` verdict is conclusive only for Gaussian states: a
    non-Gaussian state with the same second moments may still be entangled.
    """
    res = fully_wit(gamma, partition, constraints, tol=tol)
    if abs(res.x_e) < 10 * tol:
        return BOUNDARY
    return ENTANGLED if res.x_e < 0 else SEPARABLE


def _check_square(Z, partition):
    Z = as_matrix(Z)
    if not isinstance(partition, ModePartition):
        partition = ModePartition(partition)
    if Z.shape != (2 * partition.modes, 2 * partition.modes):
        raise ValueError(f"witness shape {Z.shape} does not match partition {partition.sizes}")
    if not np.allclose(Z, Z.T, atol=1e-10):
        raise ValueError("witness must be symmetric")
    return 0.5 * (Z + Z.T), partition


def _str_or_nan(M):
    try:
        return symplectic_trace(M, tol=1e-6)
    except ValueError:
        return np.nan


def _block_str(Z, partition, parties):
    idx = partition.quadrature_indices(parties)
    return _str_or_nan(Z[np.ix_(idx, idx)])


def validate_witness(Z, partition, tol=1e-8, str_tol=1e-6, margin=1e-12):
    """Check ``Z >= 0``, ``sum_k str[Z_k] >= 1/2`` and ``str[Z] < 1/2``.

    ``Z_k`` is the diagonal block of party ``k``. All three hold exactly when
    ``Z`` is a witness against full separability for this partition.
    """
    Z, partition = _check_square(Z, partition)
    emin = float(np.linalg.eigvalsh(Z)[0])
    psd = emin >= -tol
    blocks = sum(_block_str(Z, partition, [k]) for k in range(partition.parties)) if psd else np.nan
    total = _str_or_nan(Z) if psd else np.nan
    return WitnessReport(
        psd=psd,
        min_eigenvalue=emin,
        block_str_sum=float(blocks),
        total_str=float(total),
        cond_i=psd,
        cond_ii=bool(blocks >= 0.5 - str_tol),
        cond_iii=bool(total < 0.5 - margin),
    )


def validate_multipartite_witness(Z, partition, tol=1e-8, str_tol=1e-6, margin=1e-12):
    """Witness conditions against bi-separability.

    Condition (ii) must hold for every bipartition: the two diagonal blocks'
    symplectic traces sum to at least 1/2. ``block_str_sum`` reports the minimum.
    """
    Z, partition = _check_square(Z, partition)
    if partition.parties < 2:
        raise ValueError("need at least two parties")
    emin = float(np.linalg.eigvalsh(Z)[0])
    psd = emin >= -tol
    splits = {}
    if psd:
        for bp in enumerate_bipartitions(partition.parties):
            splits[str(bp)] = float(_block_str(Z, partition, bp.first) + _block_str(Z, partition, bp.second))
    worst = min(splits.values()) if splits else np.nan
    total = _str_or_nan(Z) if psd else np.nan
    return WitnessReport(
        psd=psd,
        min_eigenvalue=emin,
        block_str_sum=float(worst),
        total_str=float(total),
        cond_i=psd,
        cond_ii=bool(worst >= 0.5 - str_tol),
        cond_iii=bool(total < 0.5 - margin),
        split_str_sums=splits,
    )


def duan_witness(a=1.0):
    """Two-mode witness for the variances of ``|a| x1 + x2 / a`` and ``|a| p1 - p2 / a``.

    ``a = 1`` gives the familiar test with entries ``+-1/4``.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    sgn = np.sign(a)
    a2, ia2 = a * a, 1.0 / (a * a)
    Z = np.array(
        [
            [a2, 0, sgn, 0],
            [0, a2, 0, -sgn],
            [sgn, 0, ia2, 0],
            [0, -sgn, 0, ia2],
        ]
    )
    return Z / (2.0 * (a2 + ia2))


def xp_cross_constraints(n):
    """Constraints forcing every position-momentum entry of the witness to zero."""
    out = []
    for j, k in itertools.product(range(n), range(n)):
        out.append(MeasurementConstraint(symmetric_basis(2 * j, 2 * k + 1, 2 * n)))
    return out
