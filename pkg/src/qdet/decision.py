"""Score-variable decision layer: PMF pairs, decision regions, ROC assembly.

Conventions for likelihood ratios with zero-probability outcomes:
``p0(s) = 0, p1(s) > 0`` counts as ratio +inf (always decided '1'), while
outcomes with ``p0(s) = p1(s) = 0`` have no defined ratio and are never
included in a likelihood-ratio decision region.  These choices preserve
Neyman-Pearson optimality.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .tolerances import COMPLETENESS_TOL

_CONCAVITY_SLACK = 1e-12
_ENDPOINT_TOL = 1e-9


@dataclass(frozen=True)
class ScorePmfPair:
    """Conditional PMFs of the score variable under each hypothesis."""

    p0: np.ndarray
    p1: np.ndarray

    def __post_init__(self) -> None:
        p0 = np.array(self.p0, dtype=float).reshape(-1)
        p1 = np.array(self.p1, dtype=float).reshape(-1)
        if p0.size != p1.size or p0.size == 0:
            raise ValueError(f"PMF lengths differ or are empty: {p0.size}, {p1.size}")
        for name, p in (("p0", p0), ("p1", p1)):
            if p.min() < 0.0:
                raise ValueError(f"{name} has a negative mass {p.min():.3e}")
            if abs(math.fsum(p.tolist()) - 1.0) > COMPLETENESS_TOL:
                raise ValueError(f"{name} sums to {math.fsum(p.tolist())!r}, not 1")
        p0.setflags(write=False)
        p1.setflags(write=False)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    @property
    def num_outcomes(self) -> int:
        return self.p0.size


@dataclass(frozen=True)
class DecisionRegion:
    """Set of score values on which the final decision is '1'."""

    indices: frozenset[int]

    def __post_init__(self) -> None:
        idx = frozenset(int(i) for i in self.indices)
        if any(i < 0 for i in idx):
            raise ValueError("decision region contains a negative outcome index")
        object.__setattr__(self, "indices", idx)

    def complement(self, num_outcomes: int) -> "DecisionRegion":
        return DecisionRegion(frozenset(range(num_outcomes)) - self.indices)


@dataclass(frozen=True)
class OperatingPoint:
    """A (P_F, P_D) pair, optionally tagged with the parameter that produced it.

    ``param_kind`` is one of ``"svt"`` (param = threshold), ``"lrt"`` (param =
    the half-open threshold interval ``(lo, hi]`` realizing the point),
    ``"angle"`` (param = measurement angle), or ``"prior"`` (param = P(H1)).
    ``region`` records the decision region when one is known, so regions can
    be recovered from any point on a curve.
    """

    pf: float
    pd: float
    param_kind: str | None = None
    param: float | tuple[float, float] | None = None
    region: frozenset[int] | None = None

    def __post_init__(self) -> None:
        if not (-1e-12 <= self.pf <= 1.0 + 1e-12 and -1e-12 <= self.pd <= 1.0 + 1e-12):
            raise ValueError(f"operating point ({self.pf}, {self.pd}) outside [0, 1]^2")


class CurveKind(enum.Enum):
    SVT_QDOC = "svt-qdoc"
    LRT_QDOC = "lrt-qdoc"
    QMOC = "qmoc"
    PRIOR_SWEEP = "prior-sweep"


@dataclass(frozen=True)
class OperatingCharacteristic:
    """An ordered collection of operating points of one kind.

    LRT curves must be sorted by P_F ascending and concave as polylines;
    this is validated on construction with a 1e-12 slack.
    """

    kind: CurveKind
    points: tuple[OperatingPoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if self.kind is CurveKind.LRT_QDOC:
            pf = [p.pf for p in pts]
            if any(b < a - 1e-12 for a, b in zip(pf, pf[1:])):
                raise ValueError("LRT curve points are not sorted by pf ascending")
            slack = min_chord_slack(pts)
            if slack < -_CONCAVITY_SLACK:
                raise ValueError(f"LRT curve is not concave: chord slack {slack:.3e}")

    def pf_values(self) -> np.ndarray:
        return np.array([p.pf for p in self.points])

    def pd_values(self) -> np.ndarray:
        return np.array([p.pd for p in self.points])


def min_chord_slack(points) -> float:
    """Smallest signed gap between an interior vertex and its neighbors' chord.

    Nonnegative (within float noise) iff the polyline is concave.  Vertical
    neighbor pairs contribute no constraint.
    """
    pts = list(points)
    slack = math.inf
    for a, v, b in zip(pts, pts[1:], pts[2:]):
        if b.pf > a.pf:
            chord = a.pd + (v.pf - a.pf) * (b.pd - a.pd) / (b.pf - a.pf)
            slack = min(slack, v.pd - chord)
    return 0.0 if slack is math.inf else slack


def pf_pd(pmfs: ScorePmfPair, region: DecisionRegion) -> OperatingPoint:
    """False-alarm and detection probabilities of a decision region."""
    if region.indices and max(region.indices) >= pmfs.num_outcomes:
        raise ValueError(
            f"region index {max(region.indices)} out of range for {pmfs.num_outcomes} outcomes"
        )
    idx = sorted(region.indices)
    pf = math.fsum(pmfs.p0[i] for i in idx)
    pd = math.fsum(pmfs.p1[i] for i in idx)
    return OperatingPoint(pf, pd, region=region.indices)


def svt_region(num_outcomes: int, threshold: float) -> DecisionRegion:
    """Score-threshold region {s : s >= threshold}."""
    return DecisionRegion(frozenset(s for s in range(num_outcomes) if s >= threshold))


def likelihood_ratios(pmfs: ScorePmfPair) -> np.ndarray:
    """Per-outcome ratios p1/p0; +inf where only p1 has mass, NaN where neither does."""
    p0, p1 = pmfs.p0, pmfs.p1
    out = np.full(p0.size, np.nan)
    pos = p0 > 0.0
    out[pos] = p1[pos] / p0[pos]
    out[(~pos) & (p1 > 0.0)] = np.inf
    return out


def lrt_region(pmfs: ScorePmfPair, threshold: float) -> DecisionRegion:
    """Likelihood-ratio region {s : p1(s)/p0(s) >= threshold} under the module conventions."""
    if threshold < 0.0:
        raise ValueError(f"likelihood-ratio threshold must be nonnegative, got {threshold}")
    ratios = likelihood_ratios(pmfs)
    keep = ~np.isnan(ratios) & (ratios >= threshold)
    return DecisionRegion(frozenset(int(s) for s in np.flatnonzero(keep)))


def svt_roc(pmfs: ScorePmfPair) -> OperatingCharacteristic:
    """Threshold-sweep curve: one point per integer threshold 0..M, in sweep order.

    Intermediate thresholds produce no new regions for integer scores, so the
    sweep starts at (1, 1) for threshold 0 and ends at (0, 0) for threshold M.
    """
    m = pmfs.num_outcomes
    points = []
    for gamma in range(m + 1):
        base = pf_pd(pmfs, svt_region(m, gamma))
        points.append(
            OperatingPoint(base.pf, base.pd, "svt", float(gamma), base.region)
        )
    return OperatingCharacteristic(CurveKind.SVT_QDOC, tuple(points))


def _ratio_groups_descending(pmfs: ScorePmfPair) -> list[tuple[float, list[int]]]:
    ratios = likelihood_ratios(pmfs)
    defined = np.flatnonzero(~np.isnan(ratios))
    levels = np.unique(ratios[defined])[::-1]
    return [
        (float(r), [int(s) for s in defined if ratios[s] == r]) for r in levels
    ]


def lrt_roc(pmfs: ScorePmfPair) -> OperatingCharacteristic:
    """Neyman-Pearson curve: accumulate outcomes by descending likelihood ratio.

    Outcomes sharing an exact ratio enter as one group, so each vertex is the
    operating point of ``lrt_region(pmfs, eta)`` for every ``eta`` in the
    half-open interval it carries.  The first vertex is (0, 0); zero-mass
    outcomes never appear in any region.
    """
    groups = _ratio_groups_descending(pmfs)
    boundaries = [g[0] for g in groups] + [0.0]
    points = [
        OperatingPoint(0.0, 0.0, "lrt", (boundaries[0], math.inf), frozenset())
    ]
    region: set[int] = set()
    for j, (_, members) in enumerate(groups):
        region.update(members)
        base = pf_pd(pmfs, DecisionRegion(frozenset(region)))
        interval = (boundaries[j + 1], boundaries[j])
        points.append(OperatingPoint(base.pf, base.pd, "lrt", interval, base.region))
    return OperatingCharacteristic(CurveKind.LRT_QDOC, tuple(points))


def reconstruct_lrt_from_svt(svt: OperatingCharacteristic) -> OperatingCharacteristic:
    """Rebuild the likelihood-ratio curve from a threshold-sweep curve alone.

    Consecutive threshold points differ by exactly one outcome's probability
    mass, so the sweep's edge segments enumerate the outcomes.  Rearranging
    the segments by descending slope (merging exact slope ties) yields the
    concave Neyman-Pearson polyline without access to the PMFs; when the
    input came from ``svt_roc`` its vertex set matches ``lrt_roc``'s.  Each
    output vertex keeps the set of thresholds' outcomes composing it, i.e.
    its decision region.

    The input must contain the (0, 0) and (1, 1) endpoints and every point
    must carry its ``"svt"`` threshold parameter.
    """
    pts = list(svt.points)
    if not any(abs(p.pf) <= _ENDPOINT_TOL and abs(p.pd) <= _ENDPOINT_TOL for p in pts):
        raise ValueError("missing (0, 0) endpoint in the threshold-sweep curve")
    if not any(
        abs(p.pf - 1.0) <= _ENDPOINT_TOL and abs(p.pd - 1.0) <= _ENDPOINT_TOL for p in pts
    ):
        raise ValueError("missing (1, 1) endpoint in the threshold-sweep curve")
    if any(p.param_kind != "svt" or p.param is None for p in pts):
        raise ValueError("every input point must carry its threshold parameter")

    pts.sort(key=lambda p: -float(p.param))  # type: ignore[arg-type]
    edges: dict[float, tuple[float, float, set[int]]] = {}
    for above, below in zip(pts, pts[1:]):
        dpf = below.pf - above.pf
        dpd = below.pd - above.pd
        if dpf == 0.0 and dpd == 0.0:
            continue
        outcome = int(float(below.param))  # type: ignore[arg-type]
        slope = dpd / dpf if dpf != 0.0 else math.copysign(math.inf, dpd)
        pf_sum, pd_sum, members = edges.setdefault(slope, (0.0, 0.0, set()))
        edges[slope] = (pf_sum + dpf, pd_sum + dpd, members | {outcome})

    slopes = sorted(edges, reverse=True)
    boundaries = slopes + [0.0]
    points = [
        OperatingPoint(0.0, 0.0, "lrt", (boundaries[0] if slopes else 0.0, math.inf), frozenset())
    ]
    deltas_pf: list[float] = []
    deltas_pd: list[float] = []
    region: set[int] = set()
    for j, slope in enumerate(slopes):
        dpf, dpd, members = edges[slope]
        deltas_pf.append(dpf)
        deltas_pd.append(dpd)
        region.update(members)
        points.append(
            OperatingPoint(
                min(max(math.fsum(deltas_pf), 0.0), 1.0),
                min(max(math.fsum(deltas_pd), 0.0), 1.0),
                "lrt",
                (boundaries[j + 1], boundaries[j]),
                frozenset(region),
            )
        )
    return OperatingCharacteristic(CurveKind.LRT_QDOC, tuple(points))


def error_at_point(pt: OperatingPoint, priors) -> float:
    """P(error) = P(H0) P_F + P(H1) (1 - P_D)."""
    return priors.p_h0 * pt.pf + priors.p_h1 * (1.0 - pt.pd)


def min_error_vertex(curve: OperatingCharacteristic, priors) -> OperatingPoint:
    """Vertex minimizing the error probability; ties go to the larger region."""
    best = None
    best_err = math.inf
    for pt in curve.points:
        err = error_at_point(pt, priors)
        better = err < best_err - 1e-12
        tied = abs(err - best_err) <= 1e-12
        larger = (
            tied
            and pt.region is not None
            and (best is None or best.region is None or len(pt.region) > len(best.region))
        )
        if best is None or better or larger:
            best, best_err = pt, min(err, best_err)
    assert best is not None
    return best
