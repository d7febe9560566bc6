import numpy as np
import pytest
from numpy.testing import assert_allclose

from geamkit import build_map, choi_witness, max_entangled, random_state
from geamkit.errors import SchemaError
from geamkit import io as gio
from geamkit.maps import make_rotation
from geamkit.rng import PortableRng


class TestMatrixCodec:
    def test_round_trip_complex(self):
        m = PortableRng(3).complex_matrix(3, 2)
        back = gio.decode_matrix(gio.encode_matrix(m))
        assert np.array_equal(back, m)

    def test_rejects_malformed(self):
        with pytest.raises(SchemaError):
            gio.decode_matrix([[1.0, 2.0]])
        with pytest.raises(SchemaError):
            gio.decode_matrix("nope")


class TestGeamDocument:
    def test_canonical_round_trip_is_identity(self, qubit_geam):
        doc = gio.geam_to_dict(qubit_geam)
        loaded = gio.geam_from_dict(doc)
        text1 = gio.canonical_dumps(gio.geam_to_dict(loaded))
        text2 = gio.canonical_dumps(gio.geam_to_dict(gio.geam_from_dict(gio.geam_to_dict(loaded))))
        assert text1 == text2

    def test_parameters_survive(self, qutrit_geam_ref):
        doc = gio.geam_to_dict(qutrit_geam_ref)
        loaded = gio.geam_from_dict(doc)
        assert loaded.dim == 3
        assert_allclose(loaded.gammas, qutrit_geam_ref.gammas, atol=1e-12)
        assert_allclose(loaded.a, qutrit_geam_ref.a, atol=1e-12)
        assert abs(loaded.design_constant() - 1 / 16) <= 1e-12

    def test_signs_preserved(self, qubit_geam):
        import dataclasses

        signed = dataclasses.replace(qubit_geam, signs=(-1, 1, 1))
        loaded = gio.geam_from_dict(gio.geam_to_dict(signed))
        assert loaded.signs == (-1, 1, 1)

    def test_declared_dim_checked(self, qubit_geam):
        doc = gio.geam_to_dict(qubit_geam)
        doc["dim"] = 3
        with pytest.raises(SchemaError):
            gio.geam_from_dict(doc)

    def test_hash_stable_and_discriminating(self, qubit_geam, sic_geam):
        assert gio.geam_hash(qubit_geam) == gio.geam_hash(qubit_geam)
        assert gio.geam_hash(qubit_geam) != gio.geam_hash(sic_geam)


class TestStateDocument:
    def test_round_trip(self):
        rho = random_state(4, 2, seed=9)
        back, dims = gio.state_from_dict(gio.state_to_dict(rho, (2, 2)))
        assert dims == [2, 2]
        assert np.max(np.abs(back - rho)) <= 1e-15

    def test_dims_shape_checked(self):
        doc = gio.state_to_dict(np.eye(4) / 4, (2, 3))
        with pytest.raises(SchemaError):
            gio.state_from_dict(doc)

    def test_density_validated(self):
        doc = {"dims": [2], "matrix": gio.encode_matrix(np.diag([2.0, -1.0]))}
        with pytest.raises(Exception):
            gio.state_from_dict(doc)


class TestWitnessDocument:
    def test_round_trip_with_provenance(self, qubit_geam):
        w = choi_witness(build_map(qubit_geam, 3, 3, "identity"))
        doc = gio.witness_to_dict(w)
        assert doc["provenance"]["L"] == 3
        assert doc["provenance"]["rotations"] == [{"kind": "identity"}] * 3
        loaded = gio.witness_from_dict(doc)
        assert np.max(np.abs(loaded.matrix - w.matrix)) <= 1e-15
        assert loaded.dims == (2, 2)


class TestRotationDocument:
    @pytest.mark.parametrize(
        "spec",
        ["identity", [2, 0, 1], ("random", 7)],
    )
    def test_round_trip(self, spec):
        rot = make_rotation(3, spec)
        doc = gio.rotation_to_dict(rot)
        again = make_rotation(3, gio.rotation_spec_from_dict(doc))
        assert np.array_equal(again.matrix, rot.matrix)

    def test_generator_round_trip(self):
        gen = PortableRng(4).antisymmetric(3)
        rot = make_rotation(3, gen)
        doc = gio.rotation_to_dict(rot)
        again = make_rotation(3, gio.rotation_spec_from_dict(doc))
        assert np.max(np.abs(again.matrix - rot.matrix)) <= 1e-15

    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            gio.rotation_spec_from_dict({"kind": "reflection"})
