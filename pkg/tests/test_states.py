import numpy as np
import pytest
from numpy.testing import assert_allclose

from geamkit import (
    SeparableMixture,
    ValidationError,
    canonical_state,
    isotropic,
    kron,
    max_entangled,
    max_mixed,
    mix_separable,
    partial_trace,
    random_separable_mixture,
    random_state,
    require_density,
)


class TestCanonicalStates:
    def test_max_entangled_qubit(self):
        p = max_entangled(2)
        expected = np.zeros((4, 4))
        for m in (0, 3):
            for n in (0, 3):
                expected[m, n] = 0.5
        assert_allclose(p.real, expected, atol=1e-15)
        assert_allclose(np.trace(p).real, 1.0)
        assert np.linalg.matrix_rank(p) == 1

    def test_isotropic_limits(self):
        assert_allclose(isotropic(2, 0.0), np.eye(4) / 4, atol=1e-15)
        assert_allclose(isotropic(2, 1.0), max_entangled(2), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 1.0])
    def test_isotropic_overlap_identity(self, d, p):
        rho = isotropic(d, p)
        overlap = float(np.trace(max_entangled(d) @ rho).real)
        assert abs(overlap - (p + (1 - p) / d**2)) <= 1e-12

    def test_isotropic_out_of_range(self):
        with pytest.raises(ValidationError):
            isotropic(2, 1.2)
        with pytest.raises(ValidationError):
            isotropic(2, -0.1)

    def test_max_mixed_flag(self):
        assert max_mixed(3).shape == (3, 3)
        assert max_mixed(3, bipartite=True).shape == (9, 9)

    def test_dispatcher(self):
        assert_allclose(canonical_state("max_entangled", 2), max_entangled(2))
        assert_allclose(canonical_state("isotropic", 2, p=0.3), isotropic(2, 0.3))
        assert_allclose(canonical_state("max_mixed", 2), max_mixed(2, bipartite=True))
        with pytest.raises(ValidationError):
            canonical_state("thermal", 2)


class TestRandomState:
    def test_rank_one_is_pure(self):
        rho = random_state(3, 1, seed=11)
        assert abs(np.trace(rho @ rho).real - 1.0) <= 1e-12

    def test_deterministic_per_seed(self):
        a = random_state(2, 2, seed=42)
        b = random_state(2, 2, seed=42)
        assert np.array_equal(a, b)
        c = random_state(2, 2, seed=43)
        assert not np.array_equal(a, c)

    def test_every_draw_is_a_density_matrix(self):
        for seed in range(20):
            d = 2 + seed % 3
            rho = random_state(d, 1 + seed % d, seed=seed)
            require_density(rho)

    def test_mean_purity_in_range(self):
        purities = [
            float(np.trace((rho := random_state(3, 3, seed=500 + i)) @ rho).real)
            for i in range(40)
        ]
        assert 1 / 3 < float(np.mean(purities)) < 1.0

    def test_rank_out_of_range(self):
        with pytest.raises(ValidationError):
            random_state(2, 3, seed=0)
        with pytest.raises(ValidationError):
            random_state(2, 0, seed=0)


class TestSeparableMixture:
    def test_single_term_is_product(self):
        ra = random_state(2, 2, seed=1)
        rb = random_state(3, 1, seed=2)
        mixture = SeparableMixture((1.0,), (((ra, rb)),))
        assert_allclose(mix_separable(mixture), kron(ra, rb), atol=1e-15)

    def test_classically_correlated(self):
        k0 = np.diag([1.0, 0.0]).astype(complex)
        k1 = np.diag([0.0, 1.0]).astype(complex)
        mixture = SeparableMixture((0.5, 0.5), ((k0, k0), (k1, k1)))
        assert_allclose(mix_separable(mixture), np.diag([0.5, 0, 0, 0.5]).astype(complex), atol=1e-15)

    def test_marginals_match_mixture_average(self):
        mixture = random_separable_mixture(2, 3, 4, seed=77)
        rho = mix_separable(mixture)
        avg_a = sum(q * ra for q, (ra, _) in zip(mixture.weights, mixture.factors))
        avg_b = sum(q * rb for q, (_, rb) in zip(mixture.weights, mixture.factors))
        assert np.max(np.abs(partial_trace(rho, (2, 3), "A") - avg_a)) <= 1e-11
        assert np.max(np.abs(partial_trace(rho, (2, 3), "B") - avg_b)) <= 1e-11

    def test_rejects_bad_weights(self):
        ra = random_state(2, 1, seed=5)
        with pytest.raises(ValidationError):
            SeparableMixture((0.7, 0.7), ((ra, ra), (ra, ra)))
        with pytest.raises(ValidationError):
            SeparableMixture((1.5, -0.5), ((ra, ra), (ra, ra)))

    def test_rejects_invalid_factor(self):
        ra = random_state(2, 1, seed=5)
        with pytest.raises(ValidationError):
            SeparableMixture((1.0,), ((ra, 2.0 * ra),))
