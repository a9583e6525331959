"""Independent reference formulations solved with cvxpy (test-only)."""

import warnings

import numpy as np

from cvwitness.symplectic import ModePartition, symplectic_form
from cvwitness.witness import enumerate_bipartitions


def _heis(G, scale, n):
    s = symplectic_form(n)
    return [[G, -scale * s], [scale * s, G]]


def _embed(G, idx, dim):
    import cvxpy as cp

    E = np.zeros((dim, len(idx)))
    E[idx, np.arange(len(idx))] = 1.0
    return E @ G @ E.T


def fully_primal(gamma, sizes, constraints=()):
    """Largest ``x_e`` with ``gamma >= sum_k gamma_k`` and ``gamma_k + (1 + x_e) i sigma >= 0``."""
    import cvxpy as cp

    part = ModePartition(sizes)
    dim = gamma.shape[0]
    xe = cp.Variable()
    cons, total = [], 0
    for k in range(part.parties):
        idx = list(part.quadrature_indices([k]))
        G = cp.Variable((len(idx), len(idx)), symmetric=True)
        cons.append(cp.bmat(_heis(G, 1 + xe, len(idx) // 2)) >> 0)
        total = total + _embed(G, idx, dim)
    M = gamma - total
    if constraints:
        y = cp.Variable(len(constraints))
        M = M + sum(y[i] * A for i, A in enumerate(constraints))
    cons.append(M >> 0)
    prob = cp.Problem(cp.Maximize(xe), cons)
    return _solve(prob, xe)


def multi_primal(gamma, sizes):
    """Largest ``x_e`` over convex mixtures of bipartition-separable blocks with weights summing to ``1 + x_e``."""
    import cvxpy as cp

    part = ModePartition(sizes)
    dim = gamma.shape[0]
    xe = cp.Variable()
    lam = cp.Variable(len(enumerate_bipartitions(part.parties)), nonneg=True)
    cons, total = [cp.sum(lam) == 1 + xe], 0
    for k, bp in enumerate(enumerate_bipartitions(part.parties)):
        for side in (bp.first, bp.second):
            idx = list(part.quadrature_indices(side))
            G = cp.Variable((len(idx), len(idx)), symmetric=True)
            cons.append(cp.bmat(_heis(G, lam[k], len(idx) // 2)) >> 0)
            total = total + _embed(G, idx, dim)
    cons.append(gamma - total >> 0)
    prob = cp.Problem(cp.Maximize(xe), cons)
    return _solve(prob, xe)


def _solve(prob, xe):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        prob.solve(solver="CLARABEL")
    # interior-point reference; "optimal_inaccurate" is still within ~1e-7
    return prob.status.replace("_inaccurate", ""), float(xe.value)
