import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from geamkit import (
    NumericalError,
    PositiveMapSpec,
    PremiseError,
    ValidationError,
    apply_map,
    apply_phi_alpha,
    build_map,
    choi_witness,
    detect,
    isotropic,
    kron,
    make_rotation,
    max_entangled,
    max_mixed,
    mehta_ratio,
    min_product_expectation,
    mix_separable,
    random_separable_mixture,
    random_state,
)
from geamkit.rng import PortableRng, derive_seed

KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


def random_projector(d, seed):
    v = PortableRng(seed).unit_vector(d)
    return np.outer(v, v.conj())


class TestMakeRotation:
    def test_identity(self):
        rot = make_rotation(4, "identity")
        assert_allclose(rot.matrix, np.eye(4))

    def test_cyclic_permutation(self):
        rot = make_rotation(3, [1, 2, 0])
        assert_allclose(rot.matrix, np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float))
        assert_allclose(rot.matrix.sum(axis=0), np.ones(3))
        assert_allclose(rot.matrix.sum(axis=1), np.ones(3))
        assert_allclose(rot.matrix.T @ rot.matrix, np.eye(3), atol=1e-15)

    def test_projected_exponential(self):
        gen = PortableRng(8).antisymmetric(4)
        rot = make_rotation(4, gen)
        m = rot.matrix
        assert np.max(np.abs(m.T @ m - np.eye(4))) <= 1e-10
        assert np.max(np.abs(m.sum(axis=0) - 1.0)) <= 1e-10
        assert np.max(np.abs(m.sum(axis=1) - 1.0)) <= 1e-10
        assert np.max(np.abs(m - np.eye(4))) > 1e-3

    def test_random_kind_deterministic(self):
        r1 = make_rotation(4, ("random", 9))
        r2 = make_rotation(4, ("random", 9))
        assert np.array_equal(r1.matrix, r2.matrix)

    def test_rejects_non_bijective_permutation(self):
        with pytest.raises(ValidationError):
            make_rotation(3, [0, 0, 2])

    def test_rejects_non_antisymmetric_generator(self):
        with pytest.raises(ValidationError, match="antisymmetric"):
            make_rotation(3, np.eye(3))


class TestPhiAlpha:
    def test_identity_input_collapses(self, qubit_geam):
        for alpha in range(3):
            out = apply_phi_alpha(qubit_geam, alpha, "identity", np.eye(2))
            assert_allclose(out, np.eye(2) / 9, atol=1e-14)

    def test_z_frame_on_ket0(self, qubit_geam):
        out = apply_phi_alpha(qubit_geam, 0, "identity", KET0)
        assert_allclose(out, KET0 / 9, atol=1e-14)

    def test_linearity_zero(self, qubit_geam):
        out = apply_phi_alpha(qubit_geam, 1, "identity", np.zeros((2, 2)))
        assert np.max(np.abs(out)) == 0.0

    def test_trace_scaling_any_rotation(self, reference_geams):
        for geam in reference_geams.values():
            x = PortableRng(17).complex_matrix(geam.dim, geam.dim)
            for alpha in range(geam.n_frames):
                m = geam.sizes[alpha]
                for spec in ("identity", list(np.roll(np.arange(m), 1)), ("random", 3)):
                    out = apply_phi_alpha(geam, alpha, spec, x)
                    expected = geam.a[alpha] * geam.gammas[alpha] * np.trace(x)
                    assert abs(np.trace(out) - expected) <= 1e-10


class TestBuildMap:
    def test_offset_full_reduction(self, qubit_geam):
        spec = build_map(qubit_geam, 3, 3, "identity")
        assert_allclose(spec.A, 4 / 9, atol=1e-14)

    def test_offset_mixed_signature(self, qubit_geam):
        spec = build_map(qubit_geam, 1, 3, "identity")
        assert_allclose(spec.A, 0.0, atol=1e-14)

    def test_offset_forms_agree_all_pairs(self, reference_geams):
        for geam in reference_geams.values():
            s = geam.design_constant()
            d = geam.dim
            for l in range(1, geam.n_frames + 1):
                for k in range(l, geam.n_frames + 1):
                    spec = build_map(geam, l, k, "identity")
                    alt = (d - 1) * s - d * (geam.mu(k) - 2 * geam.mu(l))
                    assert abs(spec.A - alt) <= 1e-12

    def test_rejects_bad_prefix_order(self, qubit_geam):
        with pytest.raises(ValidationError):
            build_map(qubit_geam, 2, 1, "identity")
        with pytest.raises(ValidationError):
            build_map(qubit_geam, 0, 1, "identity")

    def test_rejects_non_conical(self, non_conical_geam):
        with pytest.raises(PremiseError):
            build_map(non_conical_geam, 1, 3, "identity")

    def test_rejects_wrong_rotation_count(self, qubit_geam):
        with pytest.raises(ValidationError):
            build_map(qubit_geam, 1, 3, ["identity", "identity"])


class TestApplyMap:
    def test_reduction_on_ket0(self, qubit_geam):
        spec = build_map(qubit_geam, 3, 3, "identity")
        assert_allclose(apply_map(spec, KET0), KET1 / 9, atol=1e-13)

    def test_reduction_on_identity(self, qubit_geam):
        spec = build_map(qubit_geam, 3, 3, "identity")
        assert_allclose(apply_map(spec, np.eye(2)), np.eye(2) / 9, atol=1e-13)

    def test_zero(self, qubit_geam):
        spec = build_map(qubit_geam, 1, 2, "identity")
        assert np.max(np.abs(apply_map(spec, np.zeros((2, 2))))) == 0.0

    def test_trace_formula(self, reference_geams):
        for geam in reference_geams.values():
            d = geam.dim
            x = PortableRng(29).complex_matrix(d, d)
            for l in range(1, geam.n_frames + 1):
                for k in range(l, geam.n_frames + 1):
                    spec = build_map(geam, l, k, ("random", 5))
                    expected = (spec.A + d * geam.mu(k) - 2 * d * geam.mu(l)) * np.trace(x)
                    assert abs(np.trace(apply_map(spec, x)) - expected) <= 1e-10


class TestMehtaRatio:
    def test_reduction_saturates(self, qubit_geam):
        spec = build_map(qubit_geam, 3, 3, "identity")
        assert_allclose(mehta_ratio(spec, KET0), 1.0, atol=1e-12)

    def test_mixed_signature_within_bound(self, qubit_geam):
        spec = build_map(qubit_geam, 1, 3, "identity")
        for i in range(100):
            ratio = mehta_ratio(spec, random_projector(2, seed=derive_seed(71, i)))
            assert ratio <= 1.0 + 1e-9

    def test_rejects_non_projector(self, qubit_geam):
        spec = build_map(qubit_geam, 3, 3, "identity")
        with pytest.raises(ValidationError):
            mehta_ratio(spec, max_mixed(2))

    def test_degenerate_denominator(self, qubit_geam):
        # hand-built spec with the offset tuned so Tr Phi[P] = 0
        base = build_map(qubit_geam, 1, 1, "identity")
        d = qubit_geam.dim
        bad_a = 2 * d * qubit_geam.mu(1) - d * qubit_geam.mu(1)
        spec = PositiveMapSpec(qubit_geam, 1, 1, base.rotations, float(bad_a))
        with pytest.raises(NumericalError):
            mehta_ratio(spec, KET0)


class TestChoiWitness:
    def test_qubit_reduction_witness(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        expected = (np.eye(4) - 2 * max_entangled(2)) / 9
        assert np.max(np.abs(w.matrix - expected)) <= 1e-12
        assert_allclose(np.linalg.eigvalsh(w.matrix), [-1 / 9, 1 / 9, 1 / 9, 1 / 9], atol=1e-12)

    def test_sic_reduction_witness(self, sic_geam):
        w = choi_witness(build_map(sic_geam, 1, 1, "identity"))
        expected = (np.eye(4) - 2 * max_entangled(2)) / 6
        assert np.max(np.abs(w.matrix - expected)) <= 1e-12

    def test_two_route_equality_random_configs(self, reference_geams):
        for name in ("qubit", "qutrit"):
            geam = reference_geams[name]
            rng = PortableRng(derive_seed(2024, hash(name) % 1000))
            for trial in range(6):
                n = geam.n_frames
                l = 1 + int(rng.uniform() * n)
                k = l + int(rng.uniform() * (n - l + 1))
                rotations = []
                for alpha in range(k):
                    m = geam.sizes[alpha]
                    if rng.uniform() < 0.5:
                        rotations.append(rng.permutation(m))
                    else:
                        rotations.append(rng.antisymmetric(m))
                spec = build_map(geam, l, k, rotations)
                w = choi_witness(spec)
                # closed form recomputed here, independently of the Choi sum
                closed = spec.A / geam.dim * np.eye(geam.dim**2, dtype=complex)
                for alpha in range(k):
                    o = spec.rotations[alpha].matrix
                    frame = geam.operators[alpha]
                    j = sum(
                        o[a, b] * kron(frame[b].conj(), frame[a])
                        for a in range(len(frame))
                        for b in range(len(frame))
                    )
                    closed = closed + j if alpha >= l else closed - j
                assert np.max(np.abs(w.matrix - closed)) <= 1e-10
                assert np.max(np.abs(w.matrix - w.matrix.conj().T)) <= 1e-12

    def test_rotated_witness_hermitian(self, qutrit_geam_ref):
        spec = build_map(qutrit_geam_ref, 2, 4, ("random", 12))
        w = choi_witness(spec)
        assert np.max(np.abs(w.matrix - w.matrix.conj().T)) <= 1e-12


class TestSeeSaw:
    def test_reduction_witness_touches_zero(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        value, (a, b) = min_product_expectation(w, restarts=32, seed=0)
        assert abs(value) <= 1e-7
        ab = np.kron(a, b)
        assert abs(float((ab.conj() @ w.matrix @ ab).real) - value) <= 1e-10

    def test_identity_witness(self):
        value, _ = min_product_expectation(np.eye(4), dims=(2, 2), restarts=4, seed=1)
        assert_allclose(value, 1.0, atol=1e-10)

    def test_negated_max_entangled(self):
        value, _ = min_product_expectation(-max_entangled(2), dims=(2, 2), restarts=16, seed=2)
        assert_allclose(value, -0.5, atol=1e-9)

    def test_deterministic_per_seed(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 1, 3, "identity"))
        v1, _ = min_product_expectation(w, restarts=8, seed=5)
        v2, _ = min_product_expectation(w, restarts=8, seed=5)
        assert v1 == v2

    def test_rejects_zero_restarts(self):
        with pytest.raises(ValidationError):
            min_product_expectation(np.eye(4), dims=(2, 2), restarts=0)

    def test_block_positivity_of_constructed_witnesses(self, reference_geams):
        for geam in reference_geams.values():
            n = geam.n_frames
            for l, k in itertools.combinations_with_replacement(range(1, n + 1), 2):
                w = choi_witness(build_map(geam, l, k, "identity"))
                value, _ = min_product_expectation(w, restarts=32, seed=11)
                assert value >= -1e-7, (geam.dim, l, k, value)


class TestDetect:
    def test_max_entangled_detected(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        record = detect(w, max_entangled(2))
        assert_allclose(record.value, -1 / 9, atol=1e-12)
        assert record.verdict == "ENTANGLED"

    def test_isotropic_sign_change(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        s = 1 / 9
        for p in (0.0, 0.2, 1 / 3, 0.6, 1.0):
            record = detect(w, isotropic(2, p))
            expected = s * (2 - 1) * (1 - p * 3) / 2
            assert abs(record.value - expected) <= 1e-12
        assert detect(w, isotropic(2, 0.4)).verdict == "ENTANGLED"
        assert detect(w, isotropic(2, 0.3)).verdict == "INCONCLUSIVE"

    def test_maximally_mixed_inconclusive(self, reference_geams):
        for geam in reference_geams.values():
            w = choi_witness(build_map(geam, geam.n_frames, geam.n_frames, "identity"))
            assert float(np.trace(w.matrix).real) >= 0.0
            record = detect(w, max_mixed(geam.dim, bipartite=True))
            assert record.value >= 0.0
            assert record.verdict == "INCONCLUSIVE"

    def test_nonnegative_on_separable_samples(self, qubit_geam, qutrit_geam_ref):
        w2 = choi_witness(build_map(qubit_geam, 1, 3, ("random", 6)))
        w3 = choi_witness(build_map(qutrit_geam_ref, 2, 4, "identity"))
        for i in range(200):
            n_terms = 1 + i % 5
            rho2 = mix_separable(random_separable_mixture(2, 2, n_terms, seed=derive_seed(88, i)))
            assert detect(w2, rho2).value >= -1e-9
            rho3 = mix_separable(random_separable_mixture(3, 3, n_terms, seed=derive_seed(99, i)))
            assert detect(w3, rho3).value >= -1e-9

    def test_dimension_mismatch(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        with pytest.raises(Exception):
            detect(w, max_mixed(3, bipartite=True))
