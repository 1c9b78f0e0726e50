import math

import numpy as np
import pytest

from qdet import (
    CurveKind,
    DecisionRegion,
    OperatingCharacteristic,
    OperatingPoint,
    Priors,
    ScorePmfPair,
    error_at_point,
    helstrom_binary,
    helstrom_rank_one,
    lrt_region,
    lrt_roc,
    min_error_vertex,
    outcome_pmf,
    pf_pd,
    reconstruct_lrt_from_svt,
    svt_region,
    svt_roc,
)
from qdet.decision import min_chord_slack
from helpers import (
    EXAMPLE1_P0,
    EXAMPLE1_P1,
    random_density,
    random_pmf_pair,
    random_priors,
)

EXAMPLE1 = ScorePmfPair(EXAMPLE1_P0, EXAMPLE1_P1)
EQUAL = Priors(0.5, 0.5)

# Ratio-sort oracle, frozen: outcomes ordered 3,4,2,5,1,6,0,7 by descending
# p1/p0, cumulative sums in /8 and /36 units.
EXAMPLE1_LRT_PF = np.arange(9) / 8.0
EXAMPLE1_LRT_PD = np.array([0, 8, 15, 21, 26, 30, 33, 35, 36]) / 36.0
# Threshold sweep gamma = 0..8: suffix sums.
EXAMPLE1_SVT_PF = (8 - np.arange(9)) / 8.0
EXAMPLE1_SVT_PD = np.array([36, 34, 30, 24, 16, 9, 4, 1, 0]) / 36.0


def vertices(curve):
    return [(p.pf, p.pd) for p in curve.points]


class TestPfPd:
    def test_empty_region(self):
        pt = pf_pd(EXAMPLE1, DecisionRegion(frozenset()))
        assert (pt.pf, pt.pd) == (0.0, 0.0)

    def test_full_region(self):
        pt = pf_pd(EXAMPLE1, DecisionRegion(frozenset(range(8))))
        assert pt.pf == pytest.approx(1.0, abs=1e-14)
        assert pt.pd == pytest.approx(1.0, abs=1e-14)

    def test_single_outcome(self):
        pt = pf_pd(EXAMPLE1, DecisionRegion(frozenset({3})))
        assert pt.pf == pytest.approx(1 / 8)
        assert pt.pd == pytest.approx(8 / 36)

    def test_out_of_range_index(self):
        with pytest.raises(ValueError, match="out of range"):
            pf_pd(EXAMPLE1, DecisionRegion(frozenset({8})))

    def test_additive_exactly_on_dyadic_pmfs(self):
        pmfs = ScorePmfPair(
            [0.25, 0.125, 0.125, 0.5], [0.5, 0.25, 0.125, 0.125]
        )
        d1 = DecisionRegion(frozenset({0, 2}))
        d2 = DecisionRegion(frozenset({1, 3}))
        union = DecisionRegion(frozenset({0, 1, 2, 3}))
        p1, p2, pu = pf_pd(pmfs, d1), pf_pd(pmfs, d2), pf_pd(pmfs, union)
        assert pu.pf == p1.pf + p2.pf
        assert pu.pd == p1.pd + p2.pd

    def test_additive_within_an_ulp_on_random_pmfs(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            m = int(rng.integers(2, 10))
            pmfs = ScorePmfPair(*random_pmf_pair(rng, m))
            picks = rng.random(m) < 0.5
            d1 = DecisionRegion(frozenset(int(i) for i in np.flatnonzero(picks)))
            d2 = DecisionRegion(frozenset(int(i) for i in np.flatnonzero(~picks)))
            union = DecisionRegion(frozenset(range(m)))
            pu = pf_pd(pmfs, union)
            assert abs(pu.pf - (pf_pd(pmfs, d1).pf + pf_pd(pmfs, d2).pf)) < 1e-15
            assert abs(pu.pd - (pf_pd(pmfs, d1).pd + pf_pd(pmfs, d2).pd)) < 1e-15


class TestSvtRegion:
    def test_zero_threshold_keeps_everything(self):
        assert svt_region(8, 0.0).indices == frozenset(range(8))

    def test_threshold_at_count_empties(self):
        assert svt_region(8, 8.0).indices == frozenset()

    def test_interior_threshold(self):
        assert svt_region(8, 3.0).indices == frozenset({3, 4, 5, 6, 7})


class TestLrtRegion:
    def test_zero_threshold_keeps_all_defined_ratios(self):
        assert lrt_region(EXAMPLE1, 0.0).indices == frozenset(range(8))

    def test_example1_unit_threshold(self):
        assert lrt_region(EXAMPLE1, 1.0).indices == {2, 3, 4, 5}

    def test_infinite_threshold_keeps_only_zero_p0_outcomes(self):
        pmfs = ScorePmfPair([0.5, 0.5, 0.0], [0.0, 0.5, 0.5])
        assert lrt_region(pmfs, math.inf).indices == {2}

    def test_zero_mass_outcomes_never_included(self):
        pmfs = ScorePmfPair([0.5, 0.5, 0.0, 0.0], [0.0, 0.5, 0.5, 0.0])
        assert lrt_region(pmfs, 0.0).indices == {0, 1, 2}

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            lrt_region(EXAMPLE1, -1.0)


class TestSvtRoc:
    def test_disjoint_supports(self):
        pmfs = ScorePmfPair([1.0, 0.0], [0.0, 1.0])
        assert vertices(svt_roc(pmfs)) == [(1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]

    def test_example1_sweep(self):
        curve = svt_roc(EXAMPLE1)
        assert curve.kind is CurveKind.SVT_QDOC
        np.testing.assert_allclose(curve.pf_values(), EXAMPLE1_SVT_PF, atol=1e-14)
        np.testing.assert_allclose(curve.pd_values(), EXAMPLE1_SVT_PD, atol=1e-14)
        assert [p.param for p in curve.points] == [float(g) for g in range(9)]

    def test_identical_pmfs_lie_on_the_diagonal(self):
        rng = np.random.default_rng(42)
        p = rng.dirichlet(np.ones(6))
        for pt in svt_roc(ScorePmfPair(p, p)).points:
            assert pt.pd == pytest.approx(pt.pf, abs=1e-14)


class TestLrtRoc:
    def test_identical_pmfs_give_the_diagonal(self):
        rng = np.random.default_rng(43)
        p = rng.dirichlet(np.ones(5))
        curve = lrt_roc(ScorePmfPair(p, p))
        for pt in curve.points:
            assert pt.pd == pytest.approx(pt.pf, abs=1e-14)

    def test_perfect_test(self):
        pmfs = ScorePmfPair([1.0, 0.0], [0.0, 1.0])
        assert vertices(lrt_roc(pmfs)) == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]

    def test_example1_matches_ratio_sort_oracle(self):
        curve = lrt_roc(EXAMPLE1)
        np.testing.assert_allclose(curve.pf_values(), EXAMPLE1_LRT_PF, atol=1e-14)
        np.testing.assert_allclose(curve.pd_values(), EXAMPLE1_LRT_PD, atol=1e-14)

    def test_vertices_carry_realizing_threshold_intervals(self):
        curve = lrt_roc(EXAMPLE1)
        for pt in curve.points[1:]:
            lo, hi = pt.param
            assert lrt_region(EXAMPLE1, hi).indices == pt.region
            mid = hi if math.isinf(lo) else 0.5 * (lo + hi)
            assert lrt_region(EXAMPLE1, mid).indices == pt.region

    def test_concavity_enforced_on_construction(self):
        bad = (
            OperatingPoint(0.0, 0.0),
            OperatingPoint(0.5, 0.1),
            OperatingPoint(1.0, 1.0),
        )
        with pytest.raises(ValueError, match="concave"):
            OperatingCharacteristic(CurveKind.LRT_QDOC, bad)

    def test_curves_are_concave_for_random_pmfs(self):
        rng = np.random.default_rng(44)
        for _ in range(100):
            m = int(rng.integers(2, 12))
            curve = lrt_roc(ScorePmfPair(*random_pmf_pair(rng, m)))
            assert min_chord_slack(curve.points) >= -1e-12


def lrt_pd_at(curve, pf):
    """Upper polyline value at pf, robust to repeated pf values."""
    best = {}
    for pt in curve.points:
        best[pt.pf] = max(best.get(pt.pf, 0.0), pt.pd)
    xs = sorted(best)
    return float(np.interp(pf, xs, [best[x] for x in xs]))


class TestLrtDominatesSvt:
    def test_example1(self):
        lrt = lrt_roc(EXAMPLE1)
        for pt in svt_roc(EXAMPLE1).points:
            assert lrt_pd_at(lrt, pt.pf) >= pt.pd - 1e-12

    def test_random_pmf_pairs(self):
        rng = np.random.default_rng(45)
        for _ in range(100):
            m = int(rng.integers(2, 10))
            pmfs = ScorePmfPair(*random_pmf_pair(rng, m))
            lrt = lrt_roc(pmfs)
            for pt in svt_roc(pmfs).points:
                assert lrt_pd_at(lrt, pt.pf) >= pt.pd - 1e-12


class TestReconstructLrtFromSvt:
    def test_concave_input_is_returned_unchanged(self):
        pmfs = ScorePmfPair([0.5, 0.3, 0.2], [0.1, 0.3, 0.6])
        svt = svt_roc(pmfs)
        assert min_chord_slack(svt.points[::-1]) >= 0.0
        rec = reconstruct_lrt_from_svt(svt)
        assert vertices(rec) == vertices(svt)[::-1]

    def test_example1_reproduces_the_direct_curve(self):
        rec = reconstruct_lrt_from_svt(svt_roc(EXAMPLE1))
        direct = lrt_roc(EXAMPLE1)
        assert len(rec.points) == len(direct.points)
        for a, b in zip(rec.points, direct.points):
            assert abs(a.pf - b.pf) < 1e-12
            assert abs(a.pd - b.pd) < 1e-12
            assert a.region == b.region

    def test_detour_vertex_below_the_chord_is_removed(self):
        pmfs = ScorePmfPair([0.5, 0.5], [0.9, 0.1])
        rec = reconstruct_lrt_from_svt(svt_roc(pmfs))
        assert (0.5, 0.1) not in vertices(rec)
        assert (0.5, 0.9) in vertices(rec)

    def test_missing_endpoint_rejected(self):
        points = (
            OperatingPoint(1.0, 1.0, "svt", 0.0),
            OperatingPoint(0.5, 0.2, "svt", 1.0),
        )
        svt = OperatingCharacteristic(CurveKind.SVT_QDOC, points)
        with pytest.raises(ValueError, match="endpoint"):
            reconstruct_lrt_from_svt(svt)

    def test_matches_direct_curve_for_random_pmfs(self):
        rng = np.random.default_rng(46)
        for _ in range(100):
            m = int(rng.integers(2, 12))
            pmfs = ScorePmfPair(*random_pmf_pair(rng, m))
            rec = reconstruct_lrt_from_svt(svt_roc(pmfs))
            direct = lrt_roc(pmfs)
            assert len(rec.points) == len(direct.points)
            for a, b in zip(rec.points, direct.points):
                assert abs(a.pf - b.pf) < 1e-12
                assert abs(a.pd - b.pd) < 1e-12


class TestErrorAtPoint:
    def test_perfect_point(self):
        assert error_at_point(OperatingPoint(0.0, 1.0), Priors(0.2, 0.8)) == 0.0

    def test_always_decide_zero(self):
        assert error_at_point(OperatingPoint(0.0, 0.0), EQUAL) == 0.5

    def test_always_decide_one(self):
        assert error_at_point(OperatingPoint(1.0, 1.0), Priors(0.3, 0.7)) == pytest.approx(0.3)


class TestMinErrorTiesToHelstrom:
    def test_lrt_vertex_minimum_equals_helstrom(self):
        rng = np.random.default_rng(47)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            rho0, rho1 = random_density(rng, n), random_density(rng, n)
            priors = random_priors(rng)
            povm, _ = helstrom_rank_one(rho0, rho1, priors)
            pmfs = ScorePmfPair(outcome_pmf(povm, rho0), outcome_pmf(povm, rho1))
            curve = lrt_roc(pmfs)
            best = min(error_at_point(p, priors) for p in curve.points)
            sol = helstrom_binary(rho0, rho1, priors)
            assert abs(best - sol.min_error) < 1e-10

    def test_min_error_vertex_recovers_the_optimal_region(self):
        best = min_error_vertex(lrt_roc(EXAMPLE1), EQUAL)
        assert best.region == {2, 3, 4, 5}
