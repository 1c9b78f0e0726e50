"""Random problem generators and small oracles shared across the test suite."""

from __future__ import annotations

import numpy as np

from qdet import DensityOperator, HermitianOperator, Povm, Priors

EXAMPLE1_P0 = np.full(8, 1.0 / 8.0)
# Asymmetric triangular distribution; numerators 2,4,6,8,7,5,3,1 over their sum.
EXAMPLE1_P1 = np.array([2, 4, 6, 8, 7, 5, 3, 1], dtype=float) / 36.0


def example1_densities() -> tuple[DensityOperator, DensityOperator]:
    rho0 = DensityOperator.from_matrix(np.eye(8, dtype=complex) / 8.0)
    rho1 = DensityOperator.from_matrix(np.diag(EXAMPLE1_P1).astype(complex))
    return rho0, rho1


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(gauss)
    phases = np.diag(r).copy()
    phases[phases == 0] = 1.0
    return q * (phases / np.abs(phases)).conj()


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> HermitianOperator:
    gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianOperator(scale * 0.5 * (gauss + gauss.conj().T))


def random_density(rng: np.random.Generator, n: int) -> DensityOperator:
    probs = rng.dirichlet(np.ones(n))
    u = random_unitary(rng, n)
    mat = (u * probs) @ u.conj().T
    return DensityOperator.from_matrix(0.5 * (mat + mat.conj().T))


def random_priors(rng: np.random.Generator, lo: float = 0.05, hi: float = 0.95) -> Priors:
    return Priors.from_p_h1(float(rng.uniform(lo, hi)))


def random_povm(rng: np.random.Generator, n: int, ranks: list[int]) -> Povm:
    """POVM whose m-th element has the requested rank (ranks must cover C^n jointly)."""
    raw = []
    for r in ranks:
        b = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        raw.append(b @ b.conj().T)
    total = sum(raw)
    vals, vecs = np.linalg.eigh(total)
    if vals.min() < 1e-8:
        raise ValueError("raw elements do not cover the space; draw again")
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    elements = []
    for a in raw:
        e = inv_sqrt @ a @ inv_sqrt
        elements.append(0.5 * (e + e.conj().T))
    return Povm.from_matrices(elements)


def random_pmf_pair(rng: np.random.Generator, m: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(m))


def brute_force_min_error(p0: np.ndarray, p1: np.ndarray, priors: Priors) -> float:
    """Minimum error probability over every subset of outcomes, by enumeration."""
    m = p0.size
    best = np.inf
    for mask in range(1 << m):
        idx = [s for s in range(m) if mask >> s & 1]
        err = priors.p_h0 * p0[idx].sum() + priors.p_h1 * (1.0 - p1[idx].sum())
        best = min(best, err)
    return float(best)
