"""Lagrange-operator construction and Helstrom's minimum-error measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import DecisionRegion
from .measurement import Povm
from .operators import (
    DensityOperator,
    EigenDecomposition,
    HermitianOperator,
    hermitian_eig,
    trace_inner,
)
from .tolerances import ETA_ZERO_TOL, PSD_TOL


@dataclass(frozen=True)
class Priors:
    """Prior probabilities of the two hypotheses; must sum to one."""

    p_h0: float
    p_h1: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_h0 <= 1.0 and 0.0 <= self.p_h1 <= 1.0):
            raise ValueError(f"priors must lie in [0, 1], got ({self.p_h0}, {self.p_h1})")
        if abs(self.p_h0 + self.p_h1 - 1.0) > 1e-12:
            raise ValueError(f"priors sum to {self.p_h0 + self.p_h1!r}, not 1")

    @classmethod
    def from_p_h1(cls, p_h1: float) -> "Priors":
        return cls(1.0 - p_h1, p_h1)

    @property
    def ratio(self) -> float:
        """P(H0)/P(H1).  Undefined for P(H1) = 0, where deciding '0' always is optimal."""
        if self.p_h1 == 0.0:
            raise ValueError(
                "P(H1) = 0: the prior ratio is infinite; always deciding '0' "
                "is trivially optimal with zero error probability"
            )
        return self.p_h0 / self.p_h1


@dataclass(frozen=True)
class HelstromSolution:
    """Optimal two-outcome projective measurement for a density pair and priors.

    ``w1_indices`` are the Lagrange eigenvalue indices assigned to the
    decide-'1' subspace W1 (eigenvalues >= -ETA_ZERO_TOL; exact-zero
    eigenvalues go to W1 by convention and never change the error).
    """

    lagrange: HermitianOperator
    eigen: EigenDecomposition
    pi1: HermitianOperator
    pi0: HermitianOperator
    w1_indices: frozenset[int]
    min_error: float


def lagrange_operator(
    rho0: DensityOperator, rho1: DensityOperator, priors: Priors
) -> HermitianOperator:
    """rho1 - C rho0 with C the prior ratio P(H0)/P(H1)."""
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    c = priors.ratio
    mat = rho1.matrix - c * rho0.matrix
    return HermitianOperator(0.5 * (mat + mat.conj().T))


def helstrom_binary(
    rho0: DensityOperator, rho1: DensityOperator, priors: Priors
) -> HelstromSolution:
    """Minimum-error projectors onto the sign eigenspaces of the Lagrange operator."""
    lag = lagrange_operator(rho0, rho1, priors)
    eig = hermitian_eig(lag)
    keep = eig.eigenvalues >= -ETA_ZERO_TOL
    w1 = frozenset(int(i) for i in np.flatnonzero(keep))
    vecs = eig.eigenvectors[:, keep]
    pi1_mat = vecs @ vecs.conj().T
    pi1_mat = 0.5 * (pi1_mat + pi1_mat.conj().T)
    pi0_mat = np.eye(lag.dim) - pi1_mat
    err = priors.p_h1 * (1.0 - math.fsum(eig.eigenvalues[keep].tolist()))
    return HelstromSolution(
        lagrange=lag,
        eigen=eig,
        pi1=HermitianOperator(pi1_mat),
        pi0=HermitianOperator(pi0_mat),
        w1_indices=w1,
        min_error=min(max(err, 0.0), 1.0),
    )


def helstrom_rank_one(
    rho0: DensityOperator, rho1: DensityOperator, priors: Priors
) -> tuple[Povm, DecisionRegion]:
    """Rank-one standard POVM over the Lagrange eigenbasis plus its decide-'1' region.

    Feeding the result through the decision layer reproduces the two-outcome
    measurement's error probability.
    """
    sol = helstrom_binary(rho0, rho1, priors)
    povm = Povm.from_vectors(sol.eigen.eigenvectors.T)
    return povm, DecisionRegion(sol.w1_indices)


def error_probability(
    pi1: HermitianOperator,
    rho0: DensityOperator,
    rho1: DensityOperator,
    priors: Priors,
) -> float:
    """Error probability of the two-outcome POVM {1 - pi1, pi1}.

    ``pi1`` must satisfy 0 <= pi1 <= 1 within PSD_TOL.  For P(H1) = 0 the
    Lagrange form is undefined and the error reduces to P(H0) Tr[pi1 rho0].
    """
    vals = np.linalg.eigvalsh(pi1.matrix)
    if vals[0] < -PSD_TOL or vals[-1] > 1.0 + PSD_TOL:
        raise ValueError(
            f"pi1 eigenvalues must lie in [0, 1], got range [{vals[0]:.3e}, {vals[-1]:.12g}]"
        )
    if priors.p_h1 == 0.0:
        err = priors.p_h0 * trace_inner(pi1, rho0.op)
    else:
        lag = lagrange_operator(rho0, rho1, priors)
        err = priors.p_h1 - priors.p_h1 * trace_inner(pi1, lag)
    return min(max(err, 0.0), 1.0)
