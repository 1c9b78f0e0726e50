"""POVM representation, validation, Born-rule statistics, and classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import DensityOperator, HermitianOperator, trace_inner
from .tolerances import COMPLETENESS_TOL, PSD_TOL, RANK_TOL_BASE


def rank_threshold(values: np.ndarray) -> float:
    """Relative rank cutoff: RANK_TOL_BASE scaled by the largest value, floor 1."""
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    return RANK_TOL_BASE * max(1.0, peak)


@dataclass(frozen=True)
class Povm:
    """Ordered measurement elements; outcome index m doubles as the score value.

    Construction checks shapes only.  Positivity and completeness are
    reported by :func:`validate_povm` so that deliberately broken element
    sets can still be inspected.  Zero elements are permitted and simply
    yield outcome probability zero.
    """

    elements: tuple[HermitianOperator, ...]

    def __post_init__(self) -> None:
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("a POVM needs at least one element")
        dims = {e.dim for e in elems}
        if len(dims) != 1:
            raise ValueError(f"elements have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def num_outcomes(self) -> int:
        return len(self.elements)

    @classmethod
    def from_matrices(cls, matrices) -> "Povm":
        return cls(tuple(HermitianOperator(m) for m in matrices))

    @classmethod
    def from_vectors(cls, vectors) -> "Povm":
        """Rank-one POVM with elements |v><v| for each vector."""
        return cls(tuple(HermitianOperator.from_outer(v) for v in vectors))

    @classmethod
    def canonical(cls, dim: int) -> "Povm":
        """Standard measurement in the canonical basis of C^dim."""
        return cls.from_vectors(np.eye(dim, dtype=complex))


@dataclass(frozen=True)
class PovmValidationReport:
    max_hermiticity_defect: float
    min_element_eigenvalue: float
    completeness_residual: float

    @property
    def passed(self) -> bool:
        return (
            self.max_hermiticity_defect <= COMPLETENESS_TOL
            and self.min_element_eigenvalue >= -PSD_TOL
            and self.completeness_residual <= COMPLETENESS_TOL
        )


def validate_povm(p: Povm) -> PovmValidationReport:
    """Report Hermiticity defect, minimum element eigenvalue, and completeness residual."""
    herm = max(np.max(np.abs(e.matrix - e.matrix.conj().T)) for e in p.elements)
    min_eig = min(float(np.linalg.eigvalsh(e.matrix)[0]) for e in p.elements)
    total = sum(e.matrix for e in p.elements)
    residual = float(np.max(np.abs(total - np.eye(p.dim))))
    return PovmValidationReport(float(herm), min_eig, residual)


def outcome_pmf(p: Povm, rho: DensityOperator) -> np.ndarray:
    """Born-rule outcome probabilities Tr[E_m rho], clamped to [0, 1]."""
    if p.dim != rho.dim:
        raise ValueError(f"dimension mismatch: POVM on C^{p.dim}, state on C^{rho.dim}")
    probs = np.array([trace_inner(e, rho.op) for e in p.elements])
    return np.clip(probs, 0.0, 1.0)


def is_standard(p: Povm, tol: float = COMPLETENESS_TOL) -> bool:
    """True iff every element is idempotent and distinct elements are orthogonal."""
    mats = [e.matrix for e in p.elements]
    for m in mats:
        if np.max(np.abs(m @ m - m)) > tol:
            return False
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if np.max(np.abs(mats[i] @ mats[j])) > tol:
                return False
    return True


def is_rank_one(p: Povm) -> bool:
    """True iff every element has exactly one eigenvalue above the rank cutoff."""
    for e in p.elements:
        vals = np.linalg.eigvalsh(e.matrix)
        if int(np.sum(vals > rank_threshold(vals))) != 1:
            return False
    return True


def projector_from_span(vectors) -> HermitianOperator:
    """Orthogonal projector onto the span of a linearly independent vector set."""
    cols = np.array([np.asarray(v, dtype=complex).reshape(-1) for v in vectors]).T
    if cols.size == 0:
        raise ValueError("need at least one vector")
    u, sv, _ = np.linalg.svd(cols, full_matrices=False)
    rank = int(np.sum(sv > rank_threshold(sv)))
    if rank < cols.shape[1]:
        raise ValueError(
            f"vectors are linearly dependent: numerical rank {rank} < {cols.shape[1]}"
        )
    proj = u[:, :rank] @ u[:, :rank].conj().T
    return HermitianOperator(0.5 * (proj + proj.conj().T))
