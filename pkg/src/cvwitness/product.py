"""Curved (product) witnesses built from linear ones.

Any witness splits as ``Z = Zx + Zp + Zxp`` into position, momentum and
cross parts. The product functional

    P_Z(gamma) = Tr[Zx g] Tr[Zp g] + Tr[Zxp g] / 2 - Tr[Zxp g]^2 / 4

is at least 1/4 on separable covariances and detects strictly more
entangled ones than ``Tr[Z gamma] < 1``, because it is invariant under the
local squeezings ``S = sqrt(a) P_x + P_p / sqrt(a)``.
"""

from dataclasses import dataclass

import numpy as np

from .symplectic import as_matrix, symplectic_form, xp_projectors
from .witness import validate_multipartite_witness, validate_witness

THRESHOLD = 0.25


class DegenerateWitnessError(ValueError):
    """A position or momentum part has non-positive weight on the given state."""


@dataclass(frozen=True)
class ProductWitness:
    Zx: np.ndarray
    Zp: np.ndarray
    Zxp: np.ndarray

    @property
    def Z(self):
        return self.Zx + self.Zp + self.Zxp

    def traces(self, gamma):
        g = as_matrix(gamma)
        if g.shape != self.Zx.shape:
            raise ValueError(f"covariance shape {g.shape} does not match witness {self.Zx.shape}")
        return float(np.sum(self.Zx * g)), float(np.sum(self.Zp * g)), float(np.sum(self.Zxp * g))


def decompose_xp(Z):
    """Split ``Z`` into its position, momentum and cross parts (exact, entrywise)."""
    Z = as_matrix(Z)
    px, pp = xp_projectors(Z.shape[0] // 2)
    Zx = px @ Z @ px
    Zp = pp @ Z @ pp
    return ProductWitness(Zx, Zp, Z - Zx - Zp)


def _as_pw(pw):
    return pw if isinstance(pw, ProductWitness) else decompose_xp(pw)


def product_value(pw, gamma):
    """Evaluate ``P_Z(gamma)``; below 1/4 signals entanglement when ``Z`` is a witness."""
    tx, tp, txp = _as_pw(pw).traces(gamma)
    return tx * tp + 0.5 * txp - 0.25 * txp**2


def xp_scaling(n, a):
    """The local squeezing ``sqrt(a) P_x + P_p / sqrt(a)``."""
    if a <= 0:
        raise ValueError(f"scale must be positive, got {a}")
    px, pp = xp_projectors(n)
    S = np.sqrt(a) * px + pp / np.sqrt(a)
    sigma = symplectic_form(n)
    assert np.allclose(S @ sigma @ S.T, sigma)
    return S


def scale_xp(M, a):
    """Congruence ``S M S^T`` with ``S = sqrt(a) P_x + P_p / sqrt(a)``."""
    M = as_matrix(M)
    S = xp_scaling(M.shape[0] // 2, a)
    return S @ M @ S.T


def balance_parameter(pw, gamma):
    """Scale ``a`` with ``Tr[a Zx gamma] = Tr[Zp gamma / a]``, i.e. ``sqrt(Tr[Zp g] / Tr[Zx g])``."""
    tx, tp, _ = _as_pw(pw).traces(gamma)
    if tx <= 0 or tp <= 0:
        raise DegenerateWitnessError(f"need positive traces, got Tr[Zx g]={tx:.3g}, Tr[Zp g]={tp:.3g}")
    return float(np.sqrt(tp / tx))


def balanced_witness(pw, gamma):
    """Linear witness ``a Zx + Zp / a + Zxp`` tuned to ``gamma``.

    It detects ``gamma`` whenever the product criterion does.
    """
    pw = _as_pw(pw)
    a = balance_parameter(pw, gamma)
    return ProductWitness(a * pw.Zx, pw.Zp / a, pw.Zxp)


def detects_product(pw, gamma, partition, tol=1e-8, multipartite=False):
    """Product-criterion verdict: ``P_Z(gamma) < 1/4 - tol``.

    The underlying ``Z`` must pass the witness conditions for ``partition``
    (against bi-separability when ``multipartite``), otherwise ``ValueError``.
    If a trace is degenerate the linear verdict ``Tr[Z gamma] < 1 - tol`` is returned.
    """
    pw = _as_pw(pw)
    check = validate_multipartite_witness if multipartite else validate_witness
    report = check(pw.Z, partition)
    if not report.is_witness:
        raise ValueError(f"not a valid witness for partition {partition}: {report}")
    tx, tp, txp = pw.traces(gamma)
    if tx <= 0 or tp <= 0:
        return bool(tx + tp + txp < 1.0 - tol)
    return bool(product_value(pw, gamma) < THRESHOLD - tol)
