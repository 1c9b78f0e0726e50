"""Operating-characteristic generation: QDOCs, QMOCs, prior sweeps, ellipses.

The qubit measurement sweep traces a rotated ellipse centered at (1/2, 1/2)
in the (P_F, P_D) plane whenever it is nondegenerate; the ellipse parameters
are computed in closed form and can be verified against sampled sweep points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import (
    CurveKind,
    OperatingCharacteristic,
    OperatingPoint,
    ScorePmfPair,
    lrt_roc,
    min_error_vertex,
    reconstruct_lrt_from_svt,
    svt_roc,
)
from .helstrom import Priors, helstrom_binary, lagrange_operator
from .measurement import Povm, outcome_pmf, rank_threshold
from .operators import DensityOperator, trace_inner
from .tolerances import ORTHO_TOL, PSD_TOL

_DEGENERATE_TOL = 1e-12
_EIGENVECTOR_RESIDUE_TOL = 1e-8
DEFAULT_ANGLE_SAMPLES = 720


@dataclass(frozen=True)
class QubitDiscriminationSetup:
    """Two qubit mixed states parametrized by eigenvalues and eigenbasis angle.

    The first state is diagonal in the reference basis with probabilities
    (a0, a1); the second has probabilities (b0, b1) in a basis rotated by
    ``alpha``.  All measurement-sweep formulas depend only on these five
    numbers.
    """

    alpha: float
    a0: float
    a1: float
    b0: float
    b1: float

    def __post_init__(self) -> None:
        for name, lo, hi in (("a0", self.a0, self.a1), ("b0", self.b0, self.b1)):
            if not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
                raise ValueError(f"{name} pair ({lo}, {hi}) outside [0, 1]")
            if abs(lo + hi - 1.0) > 1e-12:
                raise ValueError(f"{name} pair sums to {lo + hi!r}, not 1")

    @classmethod
    def from_marginals(cls, alpha: float, a0: float, b0: float) -> "QubitDiscriminationSetup":
        return cls(alpha, a0, 1.0 - a0, b0, 1.0 - b0)


@dataclass(frozen=True)
class EllipseParams:
    """Rotated ellipse centered at (1/2, 1/2): tilt angle and semi-axes (major >= minor)."""

    rotation: float
    semi_major: float
    semi_minor: float

    def __post_init__(self) -> None:
        if self.semi_major < 0.0 or self.semi_minor < 0.0:
            raise ValueError("semi-axes must be nonnegative")
        if self.semi_major < self.semi_minor:
            raise ValueError("semi_major must be >= semi_minor")

    @property
    def eccentricity(self) -> float:
        if self.semi_major == 0.0:
            return 0.0
        return math.sqrt(max(1.0 - (self.semi_minor / self.semi_major) ** 2, 0.0))


@dataclass(frozen=True)
class DegenerateConic:
    """Collapsed measurement sweep: a point or a segment in the (P_F, P_D) plane."""

    kind: str  # "point" | "segment"
    start: tuple[float, float]
    end: tuple[float, float]


def qdoc(
    rho0: DensityOperator, rho1: DensityOperator, povm: Povm, rule: str
) -> OperatingCharacteristic:
    """Decision operating characteristic: fix the POVM, sweep decision regions."""
    if rule not in ("svt", "lrt"):
        raise ValueError(f"rule must be 'svt' or 'lrt', got {rule!r}")
    pmfs = ScorePmfPair(outcome_pmf(povm, rho0), outcome_pmf(povm, rho1))
    return svt_roc(pmfs) if rule == "svt" else lrt_roc(pmfs)


def qmoc_coordinates(setup: QubitDiscriminationSetup, thetas) -> tuple[np.ndarray, np.ndarray]:
    """(P_F, P_D) of the angle-theta projective measurement with decision region {1}."""
    t = np.asarray(thetas, dtype=float)
    pf = setup.a0 * np.cos(t / 2.0) ** 2 + setup.a1 * np.sin(t / 2.0) ** 2
    shifted = (t - setup.alpha) / 2.0
    pd = setup.b0 * np.cos(shifted) ** 2 + setup.b1 * np.sin(shifted) ** 2
    return pf, pd


def default_angle_grid(samples: int = DEFAULT_ANGLE_SAMPLES) -> np.ndarray:
    return np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)


def qmoc_qubit(
    setup: QubitDiscriminationSetup, thetas=None
) -> OperatingCharacteristic:
    """Measurement operating characteristic: fix the decision rule, sweep the angle."""
    grid = default_angle_grid() if thetas is None else np.asarray(thetas, dtype=float)
    pf, pd = qmoc_coordinates(setup, grid)
    points = tuple(
        OperatingPoint(float(f), float(d), "angle", float(t), frozenset({1}))
        for f, d, t in zip(pf, pd, grid)
    )
    return OperatingCharacteristic(CurveKind.QMOC, points)


def qmoc_ellipse_params(
    setup: QubitDiscriminationSetup,
) -> EllipseParams | DegenerateConic:
    """Closed-form ellipse parameters of the qubit measurement sweep.

    Degenerate sweeps (equal probabilities in either state, or aligned
    eigenbases) collapse to a point or segment and are returned as such.
    The tilt uses a quadrant-correct arctangent; the semi-axis branch makes
    the major axis the larger one.
    """
    a = 0.5 * (setup.a0 - setup.a1)
    b = 0.5 * (setup.b0 - setup.b1)
    sin_alpha = math.sin(setup.alpha)
    cos_alpha = math.cos(setup.alpha)
    if abs(a) <= _DEGENERATE_TOL and abs(b) <= _DEGENERATE_TOL:
        return DegenerateConic("point", (0.5, 0.5), (0.5, 0.5))
    if abs(a) <= _DEGENERATE_TOL:
        return DegenerateConic("segment", (0.5, 0.5 - abs(b)), (0.5, 0.5 + abs(b)))
    if abs(b) <= _DEGENERATE_TOL:
        return DegenerateConic("segment", (0.5 - abs(a), 0.5), (0.5 + abs(a), 0.5))
    if abs(sin_alpha) <= _DEGENERATE_TOL:
        return DegenerateConic(
            "segment",
            (0.5 - a, 0.5 - b * math.copysign(1.0, cos_alpha)),
            (0.5 + a, 0.5 + b * math.copysign(1.0, cos_alpha)),
        )
    rotation = 0.5 * math.atan2(2.0 * a * b * cos_alpha, a * a - b * b)
    # hypot realizes (a^2 - b^2)/cos(2 rotation) on the branch with major >= minor.
    spread = math.hypot(a * a - b * b, 2.0 * a * b * cos_alpha)
    semi_major = math.sqrt(0.5 * (a * a + b * b + spread))
    semi_minor = math.sqrt(max(0.5 * (a * a + b * b - spread), 0.0))
    return EllipseParams(rotation, semi_major, semi_minor)


def conic_coefficients(params: EllipseParams) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of A x^2 + B xy + C y^2 - 1 = 0 in centered coordinates."""
    if params.semi_major == 0.0 or params.semi_minor == 0.0:
        raise ValueError("conic coefficients are undefined for a collapsed ellipse")
    c, s = math.cos(params.rotation), math.sin(params.rotation)
    inv_q2 = 1.0 / params.semi_major**2
    inv_r2 = 1.0 / params.semi_minor**2
    coef_a = c * c * inv_q2 + s * s * inv_r2
    coef_b = 2.0 * c * s * (inv_q2 - inv_r2)
    coef_c = s * s * inv_q2 + c * c * inv_r2
    return coef_a, coef_b, coef_c


def verify_ellipse(
    setup: QubitDiscriminationSetup,
    params: EllipseParams | DegenerateConic,
    samples: int = DEFAULT_ANGLE_SAMPLES,
) -> float:
    """Max residual of sampled sweep points against the implicit conic equation.

    The conic is normalized to A x^2 + B xy + C y^2 = 1 in coordinates
    centered at (1/2, 1/2); the ellipse condition B^2 - 4AC < 0 is asserted.
    """
    if isinstance(params, DegenerateConic):
        raise ValueError("cannot verify a degenerate conic against the ellipse equation")
    coef_a, coef_b, coef_c = conic_coefficients(params)
    if coef_b * coef_b - 4.0 * coef_a * coef_c >= 0.0:
        raise ValueError("conic discriminant is nonnegative; not an ellipse")
    pf, pd = qmoc_coordinates(setup, default_angle_grid(samples))
    x = pf - 0.5
    y = pd - 0.5
    residual = np.abs(coef_a * x * x + coef_b * x * y + coef_c * y * y - 1.0)
    return float(residual.max())


def prior_sweep(
    rho0: DensityOperator, rho1: DensityOperator, prior_grid
) -> OperatingCharacteristic:
    """Optimal operating point for each P(H1) in the grid.

    Each point carries its prior and the eigenvalue indices spanning the
    decide-'1' subspace, so the projector rank is recoverable per point.
    The endpoints P(H1) = 0 and 1 are the degenerate always-'0'/always-'1'
    rules and map to (0, 0) and (1, 1) exactly.
    """
    grid = [float(w) for w in prior_grid]
    if any(not 0.0 <= w <= 1.0 for w in grid):
        raise ValueError("prior grid values must lie in [0, 1]")
    dim = rho0.dim
    points = []
    for w in grid:
        if w == 0.0:
            points.append(OperatingPoint(0.0, 0.0, "prior", 0.0, frozenset()))
        elif w == 1.0:
            points.append(OperatingPoint(1.0, 1.0, "prior", 1.0, frozenset(range(dim))))
        else:
            sol = helstrom_binary(rho0, rho1, Priors.from_p_h1(w))
            pf = min(max(trace_inner(sol.pi1, rho0.op), 0.0), 1.0)
            pd = min(max(trace_inner(sol.pi1, rho1.op), 0.0), 1.0)
            points.append(OperatingPoint(pf, pd, "prior", w, sol.w1_indices))
    return OperatingCharacteristic(CurveKind.PRIOR_SWEEP, tuple(points))


def count_rank_segments(curve: OperatingCharacteristic, dim: int) -> int:
    """Number of maximal constant-rank runs with 0 < rank(pi1) < dim.

    Points of rank 0 and rank ``dim`` sit exactly on (0, 0) and (1, 1) and are
    not counted as segments.
    """
    segments = 0
    previous = None
    for pt in curve.points:
        if pt.region is None:
            raise ValueError("curve points do not carry decide-'1' index sets")
        rank = len(pt.region)
        if 0 < rank < dim and rank != previous:
            segments += 1
        previous = rank
    return segments


def reduce_to_qubit(
    rho0: DensityOperator, rho1: DensityOperator
) -> QubitDiscriminationSetup:
    """Project a density pair supported on a <= 2-dimensional subspace to a qubit setup.

    Eigenvectors with eigenvalue above PSD_TOL from both states must span at
    most two dimensions; otherwise the measurement sweep is not an ellipse and
    a ValueError explains the failed condition.
    """
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    if rho0.dim < 2:
        raise ValueError("need a state space of dimension at least 2")
    support = [
        rho.eig.eigenvectors[:, rho.eig.eigenvalues > PSD_TOL] for rho in (rho0, rho1)
    ]
    stacked = np.hstack(support)
    u, sv, _ = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(sv > rank_threshold(sv)))
    if rank > 2:
        raise ValueError(
            f"nonzero eigenvectors of the two states span a {rank}-dimensional "
            "subspace; the qubit reduction requires a span of at most 2 dimensions"
        )
    basis = u[:, :2]
    reduced = []
    for rho in (rho0, rho1):
        mat = basis.conj().T @ rho.matrix @ basis
        reduced.append(0.5 * (mat + mat.conj().T))
    avals, x_basis = np.linalg.eigh(reduced[0])
    bvals, y_basis = np.linalg.eigh(reduced[1])
    # Projection can shed up to PSD_TOL of mass; renormalize the eigenvalue pairs.
    avals = np.clip(avals, 0.0, None) / np.clip(avals, 0.0, None).sum()
    bvals = np.clip(bvals, 0.0, None) / np.clip(bvals, 0.0, None).sum()
    overlap = x_basis.conj().T @ y_basis[:, 0]
    alpha = 2.0 * math.atan2(abs(overlap[1]), abs(overlap[0]))
    return QubitDiscriminationSetup(
        alpha, float(avals[0]), float(avals[1]), float(bvals[0]), float(bvals[1])
    )


def reconstruct_helstrom_subspaces(
    rho0: DensityOperator,
    rho1: DensityOperator,
    priors: Priors,
    z_vectors,
) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """Recover the optimal decision subspaces knowing only the Lagrange eigenvectors.

    Builds the rank-one POVM over ``z_vectors`` in the order given, sweeps
    score thresholds, rebuilds the likelihood-ratio curve from that sweep,
    and reads the decide-'1' set off the minimum-error vertex.  Returns the
    spanning vectors of the decide-'1' and decide-'0' subspaces; the output
    does not depend on the input ordering.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in z_vectors]
    z = np.array(vecs).T
    if z.shape[0] != z.shape[1] or z.shape[0] != rho0.dim:
        raise ValueError(f"need {rho0.dim} vectors of dimension {rho0.dim}")
    gram = z.conj().T @ z
    defect = np.max(np.abs(gram - np.eye(z.shape[1])))
    if defect > ORTHO_TOL:
        raise ValueError(f"vectors are not orthonormal: max Gram defect {defect:.3e}")
    lag = lagrange_operator(rho0, rho1, priors)
    transformed = z.conj().T @ lag.matrix @ z
    off = transformed - np.diag(np.diag(transformed))
    if np.max(np.abs(off)) > _EIGENVECTOR_RESIDUE_TOL:
        raise ValueError(
            "vectors do not diagonalize the Lagrange operator: "
            f"max off-diagonal residue {np.max(np.abs(off)):.3e}"
        )
    povm = Povm.from_vectors(vecs)
    pmfs = ScorePmfPair(outcome_pmf(povm, rho0), outcome_pmf(povm, rho1))
    curve = reconstruct_lrt_from_svt(svt_roc(pmfs))
    best = min_error_vertex(curve, priors)
    assert best.region is not None
    decide_one = sorted(best.region)
    decide_zero = sorted(set(range(len(vecs))) - best.region)
    return (
        tuple(vecs[m] for m in decide_one),
        tuple(vecs[m] for m in decide_zero),
    )
