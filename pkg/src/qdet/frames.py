"""Parseval-frame / POVM correspondence and equivalent-system construction.

Any nonnegative Hermitian operator E can be resolved as a sum of K >= rank(E)
rank-one outer products, with the expansion coefficients forming a matrix A
whose rows are orthogonal with squared norms equal to E's eigenvalues
(A A^H = Lambda).  Pooling such expansions over a POVM's elements produces a
rank-one POVM, and grouping its outcomes back by source element yields a
decision system equivalent to the original.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import DecisionRegion, ScorePmfPair, pf_pd
from .measurement import Povm, outcome_pmf, rank_threshold
from .operators import DensityOperator, HermitianOperator, hermitian_eig, outer
from .tolerances import FRAME_TOL, PSD_TOL

SEED_BASES = ("canonical", "dft", "haar")


@dataclass(frozen=True)
class ParsevalFrame:
    """Vectors whose outer products sum to a declared operator (often the identity)."""

    dim: int
    vectors: tuple[np.ndarray, ...]
    resolved: np.ndarray

    def __post_init__(self) -> None:
        vecs = tuple(np.asarray(v, dtype=complex).reshape(-1) for v in self.vectors)
        resolved = np.asarray(self.resolved, dtype=complex)
        if any(v.size != self.dim for v in vecs) or resolved.shape != (self.dim, self.dim):
            raise ValueError("frame vectors and resolved operator have inconsistent shapes")
        total = sum((outer(v) for v in vecs), np.zeros_like(resolved))
        residual = float(np.max(np.abs(total - resolved))) if vecs else float(
            np.max(np.abs(resolved))
        )
        if residual > FRAME_TOL:
            raise ValueError(f"frame does not resolve its operator: residual {residual:.3e}")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "resolved", resolved)


def _nonnegative_eigensystem(e: HermitianOperator) -> tuple[np.ndarray, np.ndarray]:
    eig = hermitian_eig(e)
    vals = eig.eigenvalues
    if vals.min() < -PSD_TOL:
        raise ValueError(f"operator has negative eigenvalue {vals.min():.3e}")
    return np.clip(vals, 0.0, None), eig.eigenvectors


def eigen_frame(e: HermitianOperator) -> ParsevalFrame:
    """Eigenvalue-scaled eigenvectors of a nonnegative operator; resolves it exactly."""
    vals, vecs = _nonnegative_eigensystem(e)
    cut = rank_threshold(vals)
    kept = [np.sqrt(vals[i]) * vecs[:, i] for i in range(e.dim) if vals[i] > cut]
    return ParsevalFrame(e.dim, tuple(kept), e.matrix)


def haar_random_orthonormal_basis(dim: int, seed: int) -> np.ndarray:
    """Deterministic Haar-like orthonormal basis; row i is the i-th vector.

    A standard complex Gaussian matrix is QR-orthonormalized with the phase of
    the R diagonal absorbed, which makes the output unique and, over the seed
    distribution, approximately Haar.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(seed)
    gauss = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(gauss / math.sqrt(2.0))
    diag = np.diag(r).copy()
    diag[diag == 0] = 1.0
    return (q * (diag / np.abs(diag)).conj()).T


def _dft_basis(dim: int) -> np.ndarray:
    k = np.arange(dim)
    return np.exp(-2j * math.pi * np.outer(k, k) / dim) / math.sqrt(dim)


def _seed_basis(tag: str, dim: int, seed: int | None) -> np.ndarray:
    if tag == "canonical":
        return np.eye(dim, dtype=complex)
    if tag == "dft":
        return _dft_basis(dim)
    if tag == "haar":
        if seed is None:
            raise ValueError("the haar seed basis requires an integer seed")
        return haar_random_orthonormal_basis(dim, seed)
    raise ValueError(f"unknown seed basis {tag!r}; expected one of {SEED_BASES}")


def _expansion_matrix(
    lam: np.ndarray, k: int, seed_basis: str, seed: int | None
) -> np.ndarray:
    """L x K coefficient matrix with orthogonal rows of squared norms lam.

    Rows live in C^K, so the seed basis is built there (for K >= N that is the
    same L-dimensional space the construction nominally starts from).  Rows
    for zero eigenvalues are zero; with fewer seed vectors than eigenvalues
    the nonzero rows consume seed vectors in index order.
    """
    n = lam.size
    big_l = max(n, k)
    basis = _seed_basis(seed_basis, k, seed)
    a = np.zeros((big_l, k), dtype=complex)
    cut = rank_threshold(lam)
    if k >= n:
        for i in range(n):
            if lam[i] > cut:
                a[i] = math.sqrt(lam[i]) * basis[i]
    else:
        nxt = 0
        for i in range(n):
            if lam[i] > cut:
                a[i] = math.sqrt(lam[i]) * basis[nxt]
                nxt += 1
    return a


def expand_element(
    e: HermitianOperator, k: int, seed_basis: str = "canonical", seed: int | None = None
) -> list[np.ndarray]:
    """Resolve a nonnegative operator into K rank-one outer products.

    Scales seed-basis vectors to the operator's eigenvalues to form the
    coefficient matrix, then mixes the eigenvectors by its columns.  K must be
    at least rank(e); the choice of seed basis selects among the (non-unique)
    valid frames.
    """
    vals, vecs = _nonnegative_eigensystem(e)
    rank = int(np.sum(vals > rank_threshold(vals)))
    if k < rank:
        raise ValueError(
            f"K < rank(E): cannot resolve a rank-{rank} element with {k} vectors"
        )
    a = _expansion_matrix(vals, k, seed_basis, seed)
    frame = vecs @ a[: e.dim, :]
    return [frame[:, col].copy() for col in range(k)]


def dft_frame(e: HermitianOperator) -> list[np.ndarray]:
    """Closed-form N-vector resolution mixing eigenvectors by complex exponentials.

    f_k = sum_i sqrt(lam_i / N) exp(-2 pi i j k / N) v_i; agrees with
    ``expand_element(e, N, "dft")`` up to a global phase on each vector.
    """
    vals, vecs = _nonnegative_eigensystem(e)
    n = e.dim
    weights = np.sqrt(vals / n)
    phases = np.exp(-2j * math.pi * np.outer(np.arange(n), np.arange(n)) / n)
    frame = vecs @ (weights[:, None] * phases)
    return [frame[:, k].copy() for k in range(n)]


@dataclass(frozen=True)
class FrameExpansion:
    """A POVM resolved element-by-element into a pooled rank-one POVM.

    ``groups[j]`` is the source outcome of expanded outcome ``j``; the flat
    outcome order is element 0's vectors, then element 1's, and so on.
    ``a_matrices[m]`` is the L_m x K_m coefficient matrix of element m and
    ``lambdas[m]`` its eigenvalue vector padded to length L_m.
    """

    source: Povm
    counts: tuple[int, ...]
    frames: tuple[tuple[np.ndarray, ...], ...]
    a_matrices: tuple[np.ndarray, ...]
    lambdas: tuple[np.ndarray, ...]
    expanded: Povm
    groups: tuple[int, ...]

    def resolution_residuals(self) -> list[float]:
        """Per-element max-abs gap between the summed outer products and the element."""
        out = []
        for elem, vecs in zip(self.source.elements, self.frames):
            total = sum((outer(v) for v in vecs), np.zeros_like(elem.matrix))
            out.append(float(np.max(np.abs(total - elem.matrix))))
        return out

    def coefficient_residuals(self) -> list[float]:
        """Per-element max-abs gap between A A^H and the eigenvalue diagonal."""
        out = []
        for a, lam in zip(self.a_matrices, self.lambdas):
            out.append(float(np.max(np.abs(a @ a.conj().T - np.diag(lam)))))
        return out

    def pooled_parseval_residual(self) -> float:
        """Max-abs gap between the pooled outer-product sum and the identity."""
        dim = self.source.dim
        total = np.zeros((dim, dim), dtype=complex)
        for vecs in self.frames:
            for v in vecs:
                total += outer(v)
        return float(np.max(np.abs(total - np.eye(dim))))


def expand_povm(
    p: Povm, counts, seed_basis="canonical", seed: int | None = None
) -> FrameExpansion:
    """Expand every POVM element into rank-one vectors and pool the results.

    ``counts`` gives K_m per element; ``seed_basis`` is a single tag or one
    tag per element.  Haar-seeded elements draw from ``seed + m`` so the whole
    expansion is reproducible from one integer.  Vectors of negligible norm
    are kept (outcome probability zero) so outcome indices stay aligned.
    """
    counts = tuple(int(c) for c in counts)
    if len(counts) != p.num_outcomes:
        raise ValueError(f"need {p.num_outcomes} counts, got {len(counts)}")
    if isinstance(seed_basis, str):
        tags = (seed_basis,) * p.num_outcomes
    else:
        tags = tuple(seed_basis)
        if len(tags) != p.num_outcomes:
            raise ValueError(f"need {p.num_outcomes} seed-basis tags, got {len(tags)}")

    frames = []
    a_matrices = []
    lambdas = []
    groups: list[int] = []
    flat_vectors: list[np.ndarray] = []
    for m, (elem, k, tag) in enumerate(zip(p.elements, counts, tags)):
        elem_seed = None if seed is None else seed + m
        vals, vecs = _nonnegative_eigensystem(elem)
        rank = int(np.sum(vals > rank_threshold(vals)))
        if k < rank:
            raise ValueError(
                f"K < rank(E): element {m} has rank {rank} but K_m = {k}"
            )
        a = _expansion_matrix(vals, k, tag, elem_seed)
        mixed = vecs @ a[: p.dim, :]
        frame = [mixed[:, col].copy() for col in range(k)]
        frames.append(tuple(frame))
        a_matrices.append(a)
        lambdas.append(np.concatenate([vals, np.zeros(a.shape[0] - vals.size)]))
        groups.extend([m] * k)
        flat_vectors.extend(frame)

    expansion = FrameExpansion(
        source=p,
        counts=counts,
        frames=tuple(frames),
        a_matrices=tuple(a_matrices),
        lambdas=tuple(lambdas),
        expanded=Povm.from_vectors(flat_vectors),
        groups=tuple(groups),
    )
    worst = max(
        max(expansion.resolution_residuals()), max(expansion.coefficient_residuals())
    )
    if worst > FRAME_TOL:
        raise ValueError(f"expansion residual {worst:.3e} exceeds {FRAME_TOL:.0e}")
    return expansion


def build_equivalent_system(
    expansion: FrameExpansion, base_region: DecisionRegion
) -> tuple[Povm, DecisionRegion]:
    """Expanded POVM plus the decision region collecting its source outcomes.

    The grouped element sums equal the source elements, so the returned system
    decides like the source system on every input state.
    """
    if base_region.indices and max(base_region.indices) >= expansion.source.num_outcomes:
        raise ValueError("base region indexes outcomes the source POVM does not have")
    flat = frozenset(
        j for j, m in enumerate(expansion.groups) if m in base_region.indices
    )
    return expansion.expanded, DecisionRegion(flat)


def verify_equivalence(
    sys_a: tuple[Povm, DecisionRegion],
    sys_b: tuple[Povm, DecisionRegion],
    rho0: DensityOperator,
    rho1: DensityOperator,
) -> float:
    """Largest gap between the two systems' decision probabilities on either state."""
    povm_a, region_a = sys_a
    povm_b, region_b = sys_b
    if povm_a.dim != povm_b.dim:
        raise ValueError(f"dimension mismatch: {povm_a.dim} vs {povm_b.dim}")
    point_a = pf_pd(
        ScorePmfPair(outcome_pmf(povm_a, rho0), outcome_pmf(povm_a, rho1)), region_a
    )
    point_b = pf_pd(
        ScorePmfPair(outcome_pmf(povm_b, rho0), outcome_pmf(povm_b, rho1)), region_b
    )
    return max(
        abs(point_a.pf - point_b.pf),
        abs(point_a.pd - point_b.pd),
        abs((1.0 - point_a.pf) - (1.0 - point_b.pf)),
        abs((1.0 - point_a.pd) - (1.0 - point_b.pd)),
    )
