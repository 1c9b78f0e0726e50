"""Complex Hermitian linear algebra: operators, eigensystems, density operators.

All value types are immutable after construction and validate their own
invariants, so every function in the package can assume its inputs are
well-formed.  Operations are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tolerances import (
    HERMITICITY_TOL,
    IMAG_TOL,
    NORM_TOL,
    ORTHO_TOL,
    PSD_TOL,
    TRACE_TOL,
)


def _as_complex_matrix(matrix: np.ndarray) -> np.ndarray:
    mat = np.array(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    mat.setflags(write=False)
    return mat


def outer(vector: np.ndarray) -> np.ndarray:
    """Rank-one outer product |v><v| as a dense complex matrix."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class HermitianOperator:
    """A square complex matrix equal to its conjugate transpose within tolerance."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = _as_complex_matrix(self.matrix)
        asym = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if asym > HERMITICITY_TOL:
            raise ValueError(
                f"matrix is not Hermitian: max |M - M^H| = {asym:.3e} "
                f"exceeds {HERMITICITY_TOL:.0e}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_outer(cls, vector: np.ndarray) -> "HermitianOperator":
        return cls(outer(vector))

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim, dtype=complex))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a Hermitian operator.

    ``eigenvalues`` are real and ascending; column ``i`` of ``eigenvectors``
    is the unit eigenvector paired with ``eigenvalues[i]``.  For degenerate
    eigenvalues the basis of the eigenspace is whatever LAPACK returns; it is
    deterministic for a fixed input matrix, and only outer products over
    eigenspaces are contractually meaningful.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.eigenvalues, dtype=float)
        vecs = np.array(self.eigenvectors, dtype=complex)
        if vals.ndim != 1 or vecs.shape != (vals.size, vals.size):
            raise ValueError("eigenvalues/eigenvectors shapes are inconsistent")
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]

    def reconstruct(self) -> np.ndarray:
        """Sum of eigenvalue-weighted outer products, re-hermitized."""
        mat = (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T
        return 0.5 * (mat + mat.conj().T)


def hermitian_eig(op: HermitianOperator) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    vals, vecs = np.linalg.eigh(op.matrix)
    return EigenDecomposition(vals, vecs)


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive semidefinite Hermitian operator.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clamped to zero on construction (the
    stored matrix is rebuilt from the clamped eigensystem); anything below
    ``-PSD_TOL`` is rejected.
    """

    op: HermitianOperator
    eig: EigenDecomposition = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        tr = np.trace(self.op.matrix)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr:.12g}, not 1 within {TRACE_TOL:.0e}")
        eig = hermitian_eig(self.op)
        lo = float(eig.eigenvalues.min()) if eig.dim else 0.0
        if lo < -PSD_TOL:
            raise ValueError(
                f"matrix is not positive semidefinite: min eigenvalue {lo:.3e}"
            )
        if lo < 0.0:
            clamped = np.where(eig.eigenvalues < 0.0, 0.0, eig.eigenvalues)
            eig = EigenDecomposition(clamped, eig.eigenvectors)
            object.__setattr__(self, "op", HermitianOperator(eig.reconstruct()))
        object.__setattr__(self, "eig", eig)

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DensityOperator":
        return cls(HermitianOperator(matrix))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(HermitianOperator(np.eye(dim, dtype=complex) / dim))


@dataclass(frozen=True)
class PureStateVector:
    """Unit-norm complex state vector."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"squared norm is {norm_sq:.12g}, not 1 within {NORM_TOL:.0e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        return DensityOperator(HermitianOperator(outer(self.amplitudes)))


def _check_orthonormal(vectors: np.ndarray, tol: float = ORTHO_TOL) -> None:
    gram = vectors.conj().T @ vectors
    defect = np.max(np.abs(gram - np.eye(vectors.shape[1])))
    if defect > tol:
        raise ValueError(f"vectors are not orthonormal: max Gram defect {defect:.3e}")


def density_from_eigensystem(probs, vectors) -> DensityOperator:
    """Build sum_i probs[i] |vectors[i]><vectors[i]| as a validated density.

    ``vectors`` is a sequence of N vectors (or an array whose rows are the
    vectors); they must be orthonormal and ``probs`` must be a probability
    vector over them.
    """
    p = np.asarray(probs, dtype=float).reshape(-1)
    vecs = np.array([np.asarray(v, dtype=complex).reshape(-1) for v in vectors]).T
    if vecs.shape != (p.size, p.size):
        raise ValueError(
            f"need {p.size} vectors of dimension {p.size}, got shape {vecs.shape[::-1]}"
        )
    if p.min(initial=0.0) < 0.0:
        raise ValueError(f"negative probability {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > TRACE_TOL:
        raise ValueError(f"probabilities sum to {total:.12g}, not 1 within {TRACE_TOL:.0e}")
    _check_orthonormal(vecs)
    mat = (vecs * p) @ vecs.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(HermitianOperator(mat))


def trace_inner(a: HermitianOperator, b: HermitianOperator) -> float:
    """Tr[a b] for Hermitian a, b, returned as a real number.

    Computed as sum_ij b_ij* a_ij, which is bit-for-bit symmetric in its
    arguments after the (checked) imaginary residue is discarded.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    value = complex(np.vdot(b.matrix, a.matrix))
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"trace inner product has imaginary residue {value.imag:.3e}")
    return value.real
