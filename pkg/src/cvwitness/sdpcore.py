"""Dense primal-dual interior-point solver for small block semidefinite programs.

Primal::

    minimize    c^T x
    subject to  F(x) = F0 + sum_i x_i F_i >= 0     (block diagonal)
                A x = b                            (optional equalities)

Dual::

    maximize    -Tr[F0 Z] - b^T y
    subject to  Z >= 0,  Tr[F_i Z] - (A^T y)_i = c_i

For any feasible pair ``c^T x + Tr[F0 Z] + b^T y = Tr[F(x) Z] >= 0``.

The iteration works on the homogeneous self-dual embedding, so no feasible
starting point is required and infeasibility is detected from certificates.
Directions use Nesterov-Todd scaling with a Mehrotra predictor-corrector step.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
PRIMAL_INFEASIBLE = "primal_infeasible"
DUAL_INFEASIBLE = "dual_infeasible"
NUMERICAL_TROUBLE = "numerical_trouble"
ITERATION_LIMIT = "iteration_limit"

STEP_DAMPING = 0.98


class SdpError(ValueError):
    """Malformed problem data."""


@dataclass(frozen=True)
class SdpProblem:
    """Block SDP in the form ``minimize c^T x s.t. F0 + sum x_i F_i >= 0, A x = b``.

    Args:
        c (array): objective vector of length ``t``.
        F0 (list[array]): constant term, one square symmetric matrix per block.
        F (list[array]): per block, an array of shape ``(t, d, d)`` holding
            ``F_1, ..., F_t`` restricted to that block.
        eq_constraints (list[tuple[array, float]]): optional rows ``(a, beta)``
            imposing ``a^T x = beta``.
    """

    c: np.ndarray
    F0: tuple
    F: tuple
    eq_constraints: tuple = ()
    A_eq: np.ndarray = field(init=False, repr=False)
    b_eq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        t = c.shape[0]
        if len(self.F0) != len(self.F):
            raise SdpError(f"{len(self.F0)} constant blocks but {len(self.F)} coefficient blocks")
        F0, F = [], []
        for b, (f0, fb) in enumerate(zip(self.F0, self.F)):
            f0 = np.atleast_2d(np.asarray(f0, dtype=float))
            d = f0.shape[0]
            if f0.shape != (d, d):
                raise SdpError(f"block {b}: constant term is not square {f0.shape}")
            fb = np.asarray(fb, dtype=float).reshape(t, d, d) if t else np.zeros((0, d, d))
            if np.max(np.abs(f0 - f0.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(f0))):
                raise SdpError(f"block {b}: F0 is not symmetric")
            if fb.size and np.max(np.abs(fb - fb.transpose(0, 2, 1))) > 1e-12 * max(1.0, np.max(np.abs(fb))):
                raise SdpError(f"block {b}: some F_i is not symmetric")
            F0.append(0.5 * (f0 + f0.T))
            F.append(0.5 * (fb + fb.transpose(0, 2, 1)))
        rows = [np.asarray(a, dtype=float).ravel() for a, _ in self.eq_constraints]
        for a in rows:
            if a.shape[0] != t:
                raise SdpError(f"equality row has length {a.shape[0]}, expected {t}")
        A = np.array(rows).reshape(len(rows), t)
        bvec = np.array([float(beta) for _, beta in self.eq_constraints])
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "F0", tuple(F0))
        object.__setattr__(self, "F", tuple(F))
        object.__setattr__(self, "eq_constraints", tuple(self.eq_constraints))
        object.__setattr__(self, "A_eq", A)
        object.__setattr__(self, "b_eq", bvec)

    @property
    def num_vars(self):
        return self.c.shape[0]

    @property
    def block_structure(self):
        return [f0.shape[0] for f0 in self.F0]

    def evaluate(self, x):
        """Blocks of ``F(x)``."""
        x = np.asarray(x, dtype=float)
        return [f0 + np.tensordot(x, fb, axes=1) for f0, fb in zip(self.F0, self.F)]

    def adjoint(self, Z):
        """Vector ``(Tr[F_i Z])_i`` for block matrix ``Z``."""
        out = np.zeros(self.num_vars)
        for fb, zb in zip(self.F, Z):
            out += np.tensordot(fb, zb, axes=([1, 2], [0, 1]))
        return out


@dataclass
class SdpSolution:
    status: str
    x: np.ndarray
    Z: list
    y: np.ndarray
    primal_objective: float
    dual_objective: float
    gap: float
    iterations: int
    primal_residual: float = np.nan
    dual_residual: float = np.nan


def _inner(A, B):
    return float(np.sum([np.vdot(a, b) for a, b in zip(A, B)]))


def _jordan_solve(lam, D):
    """Solve ``(L U + U L) / 2 = D`` for ``U`` with ``L = diag(lam)``."""
    return 2.0 * D / (lam[:, None] + lam[None, :])


def _max_step(lam, D):
    """Largest ``a`` with ``diag(lam) + a D >= 0`` (inf if unbounded)."""
    isq = 1.0 / np.sqrt(lam)
    e = np.linalg.eigvalsh(isq[:, None] * D * isq[None, :])[0]
    return np.inf if e >= 0 else -1.0 / e


def _nt_scaling(S, Z):
    """Return ``(R, lam)`` with ``R^{-1} S R^{-T} = R^T Z R = diag(lam)``."""
    L1 = np.linalg.cholesky(S)
    L2 = np.linalg.cholesky(Z)
    U, lam, Vt = np.linalg.svd(L2.T @ L1)
    R = L1 @ Vt.T / np.sqrt(lam)[None, :]
    return R, lam


def _sym(M):
    return 0.5 * (M + M.T)


def solve(problem, tol=1e-8, max_iter=200, x0=None, z0=None, feastol=None):
    """Solve a block SDP to a certified duality gap.

    Args:
        problem (SdpProblem): the program.
        tol (float): target for the duality gap ``c^T x + Tr[F0 Z] + b^T y``.
        max_iter (int): iteration cap.
        x0 (array): optional starting primal vector.
        z0 (list[array]): optional positive definite starting dual blocks,
            e.g. a known strictly feasible dual point.
        feastol (float): tolerance on scaled primal and dual residuals; defaults to ``tol``.

    Returns:
        SdpSolution
    """
    if feastol is None:
        feastol = tol
    c, A, b = problem.c, problem.A_eq, problem.b_eq
    F0, F = problem.F0, problem.F
    t, p = problem.num_vars, A.shape[0]
    dims = problem.block_structure
    m = sum(dims)

    x = np.zeros(t) if x0 is None else np.array(x0, dtype=float)
    y = np.zeros(p)
    tau, kappa = 1.0, 1.0
    if z0 is None:
        z0 = [np.eye(d) for d in dims]
    if len(z0) != len(dims) or any(np.shape(zb) != (d, d) for zb, d in zip(z0, dims)):
        raise SdpError("starting dual point does not match the block structure")
    scal = [_nt_scaling(np.eye(d), _sym(np.asarray(zb, dtype=float))) for zb, d in zip(z0, dims)]

    nrm_c = max(1.0, np.linalg.norm(c))
    nrm_bh = max(1.0, np.sqrt(np.sum(b**2) + _inner(F0, F0)))

    def blocks_s():
        return [R @ np.diag(lam) @ R.T for R, lam in scal]

    def blocks_z():
        out = []
        for R, lam in scal:
            Ri = np.linalg.inv(R)
            out.append(Ri.T @ np.diag(lam) @ Ri)
        return out

    def result(status, it, gap=np.nan, pres=np.nan, dres=np.nan):
        S, Z = blocks_s(), blocks_z()
        if status == OPTIMAL:
            xs, ys, Zs = x / tau, y / tau, [_sym(zb) / tau for zb in Z]
        elif status == PRIMAL_INFEASIBLE:
            scale = -(_inner(F0, Z) + b @ y)
            xs, ys, Zs = np.full(t, np.nan), y / scale, [_sym(zb) / scale for zb in Z]
        elif status == DUAL_INFEASIBLE:
            scale = -(c @ x)
            xs, ys, Zs = x / scale, np.full(p, np.nan), [np.full_like(zb, np.nan) for zb in Z]
        else:
            xs, ys, Zs = x / tau, y / tau, [_sym(zb) / tau for zb in Z]
        pobj = float(c @ xs)
        dobj = float(-_inner(F0, Zs) - b @ ys)
        return SdpSolution(status, xs, Zs, ys, pobj, dobj, float(pobj - dobj), it, pres, dres)

    for it in range(max_iter + 1):
        S, Z = blocks_s(), blocks_z()
        FZ = problem.adjoint(Z)
        # residuals of the embedding (s = F0 tau + sum x_i F_i, G^T z = -adjoint)
        rx = c * tau - FZ + A.T @ y
        ry = b * tau - A @ x
        rz = [sb - tau * f0 - np.tensordot(x, fb, axes=1) for sb, f0, fb in zip(S, F0, F)]
        hz = _inner(F0, Z)
        rt = kappa + c @ x + b @ y + hz
        sz = float(sum(np.sum(lam**2) for _, lam in scal))
        mu = (sz + tau * kappa) / (m + 1)

        pcost = c @ x / tau
        dcost = -(hz + b @ y) / tau
        pres = max(np.linalg.norm(ry), np.sqrt(_inner(rz, rz))) / tau / nrm_bh
        dres = np.linalg.norm(rx) / tau / nrm_c
        gap = pcost - dcost
        logger.debug("it %3d pcost % .10e dcost % .10e gap %.2e pres %.2e dres %.2e tau %.2e",
                     it, pcost, dcost, gap, pres, dres, tau)
        if pres <= feastol and dres <= feastol and abs(gap) <= tol and sz / tau**2 <= tol:
            return result(OPTIMAL, it, gap, pres, dres)

        # infeasibility certificates
        if hz + b @ y < 0:
            pinf = np.linalg.norm(FZ - A.T @ y) / nrm_c / (-(hz + b @ y))
            if pinf <= feastol:
                return result(PRIMAL_INFEASIBLE, it, pres=pres, dres=dres)
        if c @ x < 0:
            Fx = [np.tensordot(x, fb, axes=1) for fb in F]
            rs = np.sqrt(_inner([sb - fx for sb, fx in zip(S, Fx)], [sb - fx for sb, fx in zip(S, Fx)]))
            dinf = max(np.linalg.norm(A @ x) / max(1.0, np.linalg.norm(b)), rs / nrm_bh) / (-(c @ x))
            if dinf <= feastol:
                return result(DUAL_INFEASIBLE, it, pres=pres, dres=dres)
        if it == max_iter:
            return result(ITERATION_LIMIT, it, gap, pres, dres)

        # scaled data for this iteration
        Rinv = [np.linalg.inv(R) for R, _ in scal]
        Fh = [np.einsum("ij,tjk,lk->til", Ri, fb, Ri) for Ri, fb in zip(Rinv, F)]
        F0h = [Ri @ f0 @ Ri.T for Ri, f0 in zip(Rinv, F0)]
        rzh = [Ri @ r @ Ri.T for Ri, r in zip(Rinv, rz)]
        H = np.zeros((t, t))
        for fh in Fh:
            flat = fh.reshape(t, -1)
            H += flat @ flat.T
        K = np.block([[H, A.T], [A, np.zeros((p, p))]])
        try:
            lu = scipy.linalg.lu_factor(K, check_finite=True)
        except (ValueError, np.linalg.LinAlgError):
            return result(NUMERICAL_TROUBLE, it, gap, pres, dres)

        def kkt(bx, by, bzh):
            # A^T uy - Tr[F_i uz] = bx ; A ux = by ; -sum ux_i F_i - W uz W = bz
            q = np.zeros(t)
            for fh, bb in zip(Fh, bzh):
                q += np.tensordot(fh, bb, axes=([1, 2], [0, 1]))
            rhs = np.concatenate([bx - q, by])
            sol = scipy.linalg.lu_solve(lu, rhs)
            sol += scipy.linalg.lu_solve(lu, rhs - K @ sol)
            ux, uy = sol[:t], sol[t:]
            uzh = [-np.tensordot(ux, fh, axes=1) - bb for fh, bb in zip(Fh, bzh)]
            return ux, uy, uzh

        # v-system is shared by predictor and corrector
        vx, vy, vzh = kkt(-c, b, F0h)
        vden = c @ vx + b @ vy + _inner(F0h, vzh) - kappa / tau

        def direction(eta, ds, dk):
            us = [_jordan_solve(lam, d) for (_, lam), d in zip(scal, ds)]
            bzh = [-eta * r - u for r, u in zip(rzh, us)]
            ux, uy, uzh = kkt(-eta * rx, eta * ry, bzh)
            num = -eta * rt - dk / tau - (c @ ux + b @ uy + _inner(F0h, uzh))
            dtau = num / vden
            dx = ux + dtau * vx
            dy = uy + dtau * vy
            dzh = [u + dtau * v for u, v in zip(uzh, vzh)]
            dsh = [u - dz for u, dz in zip(us, dzh)]
            dkap = (dk - kappa * dtau) / tau
            return dx, dy, dsh, dzh, dtau, dkap

        def step_length(dsh, dzh, dtau, dkap):
            a = np.inf
            for (_, lam), ds, dz in zip(scal, dsh, dzh):
                a = min(a, _max_step(lam, _sym(ds)), _max_step(lam, _sym(dz)))
            if dtau < 0:
                a = min(a, -tau / dtau)
            if dkap < 0:
                a = min(a, -kappa / dkap)
            return a

        try:
            lam_sq = [np.diag(lam**2) for _, lam in scal]
            aff = direction(1.0, [-ls for ls in lam_sq], -tau * kappa)
            a_aff = min(1.0, step_length(*aff[2:]))
            sigma = (1.0 - a_aff) ** 3
            ds = []
            for (_, lam), ls, dsa, dza in zip(scal, lam_sq, aff[2], aff[3]):
                cross = 0.5 * (dsa @ dza + dza @ dsa)
                ds.append(-ls - cross + sigma * mu * np.eye(len(lam)))
            dk = -tau * kappa - aff[4] * aff[5] + sigma * mu
            dx, dy, dsh, dzh, dtau, dkap = direction(1.0 - sigma, ds, dk)
            alpha = min(1.0, STEP_DAMPING * step_length(dsh, dzh, dtau, dkap))
        except np.linalg.LinAlgError:
            return result(NUMERICAL_TROUBLE, it, gap, pres, dres)
        if not np.isfinite(alpha) or alpha <= 1e-12:
            return result(NUMERICAL_TROUBLE, it, gap, pres, dres)

        x = x + alpha * dx
        y = y + alpha * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkap
        new = []
        try:
            for (R, lam), ds_, dz_ in zip(scal, dsh, dzh):
                sn = np.diag(lam) + alpha * _sym(ds_)
                zn = np.diag(lam) + alpha * _sym(dz_)
                Rn, lamn = _nt_scaling(sn, zn)
                new.append((R @ Rn, lamn))
        except np.linalg.LinAlgError:
            return result(NUMERICAL_TROUBLE, it, gap, pres, dres)
        scal = new

    return result(ITERATION_LIMIT, max_iter)


def weak_duality_residual(problem, x, Z, y=None, tol=1e-8):
    """Return ``c^T x + Tr[F0 Z] + b^T y``, which equals ``Tr[F(x) Z]`` for feasible pairs.

    A warning is emitted when ``(x, Z, y)`` is not feasible within ``tol``; the
    residual is returned regardless.
    """
    x = np.asarray(x, dtype=float)
    y = np.zeros(problem.A_eq.shape[0]) if y is None else np.asarray(y, dtype=float)
    Z = [np.asarray(zb, dtype=float) for zb in Z]
    Fx = problem.evaluate(x)
    feasible = (
        all(np.linalg.eigvalsh(_sym(fb))[0] >= -tol for fb in Fx)
        and all(np.linalg.eigvalsh(_sym(zb))[0] >= -tol for zb in Z)
        and np.allclose(problem.adjoint(Z) - problem.A_eq.T @ y, problem.c, atol=tol)
        and np.allclose(problem.A_eq @ x, problem.b_eq, atol=tol)
    )
    if not feasible:
        warnings.warn("weak_duality_residual called with an infeasible pair", RuntimeWarning, stacklevel=2)
    return float(problem.c @ x + _inner(problem.F0, Z) + problem.b_eq @ y)
