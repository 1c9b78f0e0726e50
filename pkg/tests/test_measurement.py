import numpy as np
import pytest

from qdet import (
    DensityOperator,
    HermitianOperator,
    Povm,
    Priors,
    expand_element,
    helstrom_binary,
    is_rank_one,
    is_standard,
    outcome_pmf,
    projector_from_span,
    validate_povm,
)
from helpers import (
    EXAMPLE1_P0,
    EXAMPLE1_P1,
    example1_densities,
    random_density,
    random_povm,
)


class TestValidatePovm:
    def test_canonical_projectors_pass(self):
        report = validate_povm(Povm.canonical(8))
        assert report.passed
        assert report.completeness_residual < 1e-14

    def test_single_identity_element_passes(self):
        assert validate_povm(Povm((HermitianOperator.identity(3),))).passed

    def test_overcomplete_identity_fails_with_expected_residual(self):
        povm = Povm.from_matrices([0.5 * np.eye(2), 0.6 * np.eye(2)])
        report = validate_povm(povm)
        assert not report.passed
        assert report.completeness_residual == pytest.approx(0.1, abs=1e-12)


class TestOutcomePmf:
    def test_example1_uniform(self):
        rho0, _ = example1_densities()
        np.testing.assert_allclose(outcome_pmf(Povm.canonical(8), rho0), EXAMPLE1_P0)

    def test_example1_triangular(self):
        _, rho1 = example1_densities()
        np.testing.assert_allclose(outcome_pmf(Povm.canonical(8), rho1), EXAMPLE1_P1)

    def test_maximally_mixed_gives_scaled_traces(self):
        rng = np.random.default_rng(21)
        povm = random_povm(rng, 4, [1, 2, 3])
        rho = DensityOperator.maximally_mixed(4)
        expected = [np.trace(e.matrix).real / 4 for e in povm.elements]
        np.testing.assert_allclose(outcome_pmf(povm, rho), expected, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            outcome_pmf(Povm.canonical(2), DensityOperator.maximally_mixed(3))

    def test_sums_to_one_over_random_pairs(self):
        rng = np.random.default_rng(22)
        for _ in range(1000):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(1, 4))
            ranks = [int(rng.integers(1, n + 1)) for _ in range(m)]
            try:
                povm = random_povm(rng, n, ranks)
            except ValueError:
                continue
            pmf = outcome_pmf(povm, random_density(rng, n))
            assert abs(pmf.sum() - 1.0) < 1e-10
            assert pmf.min() >= 0.0 and pmf.max() <= 1.0


class TestIsStandard:
    def test_canonical_is_standard(self):
        assert is_standard(Povm.canonical(8))

    def test_scaled_identity_is_not(self):
        povm = Povm.from_matrices([0.5 * np.eye(2), 0.5 * np.eye(2)])
        assert not is_standard(povm)

    def test_helstrom_pair_is_standard(self):
        rng = np.random.default_rng(23)
        sol = helstrom_binary(
            random_density(rng, 5), random_density(rng, 5), Priors(0.4, 0.6)
        )
        assert is_standard(Povm((sol.pi1, sol.pi0)))


class TestIsRankOne:
    def test_canonical_is_rank_one(self):
        assert is_rank_one(Povm.canonical(8))

    def test_rank_two_projector_is_not(self):
        basis = np.eye(4, dtype=complex)
        p_v = projector_from_span([basis[0], basis[1]])
        p_perp = projector_from_span([basis[2], basis[3]])
        assert not is_rank_one(Povm((p_v, p_perp)))
        assert is_standard(Povm((p_v, p_perp)))

    def test_overcomplete_frame_povm_is_rank_one(self):
        vectors = expand_element(HermitianOperator.identity(2), 3, "dft")
        assert is_rank_one(Povm.from_vectors(vectors))

    def test_standard_rank_one_iff_unit_traces(self):
        # trace-1 standard elements are rank one; a trace-2 element is not
        rank_one = Povm.canonical(4)
        assert is_standard(rank_one) and is_rank_one(rank_one)
        basis = np.eye(4, dtype=complex)
        blocky = Povm(
            (
                projector_from_span([basis[0], basis[1]]),
                projector_from_span([basis[2]]),
                projector_from_span([basis[3]]),
            )
        )
        assert is_standard(blocky) and not is_rank_one(blocky)


class TestProjectorFromSpan:
    def test_single_basis_vector(self):
        p = projector_from_span([np.array([1.0, 0.0])])
        np.testing.assert_allclose(p.matrix, [[1, 0], [0, 0]], atol=1e-14)

    def test_full_span_gives_identity(self):
        p = projector_from_span([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        np.testing.assert_allclose(p.matrix, np.eye(2), atol=1e-14)

    def test_random_span_is_idempotent(self):
        rng = np.random.default_rng(24)
        vecs = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        p = projector_from_span(list(vecs))
        assert np.max(np.abs(p.matrix @ p.matrix - p.matrix)) < 1e-12

    def test_dependent_vectors_rejected_naming_rank(self):
        v = np.array([1.0, 2.0, 0.0])
        with pytest.raises(ValueError, match="rank 1"):
            projector_from_span([v, 2.0 * v])
