"""Representation builders: octagon group, symmetric powers, sums, bending."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anosovlab.errors import ConstructionError, ValidationError
from anosovlab.reps import (
    Representation,
    bend,
    direct_sum,
    fuchsian_genus2,
    load_representation,
    save_representation,
    sym_lift_matrix,
    sym_power_lift,
    trivial_rep,
)
from anosovlab.surface_group import Word, presentation

gl2 = st.tuples(
    st.floats(-2, 2, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
).map(lambda t: np.array(t).reshape(2, 2)).filter(
    lambda m: abs(np.linalg.det(m)) > 0.1
)

vec2 = st.tuples(
    st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False)
).map(np.array)


def _nu(v, big_n=4):
    return np.array([v[0] ** (big_n - 1 - i) * v[1] ** i for i in range(big_n)])


class TestFuchsian:
    def test_generator_traces(self, rho0):
        for g in rho0.images:
            assert np.trace(g) == pytest.approx(2.0 + np.sqrt(2.0), abs=1e-12)

    def test_entries_stay_small(self, rho0):
        assert max(np.max(np.abs(g)) for g in rho0.images) < 4.0

    def test_certificates(self, rho0):
        assert rho0.relator_residual < 1e-12
        assert rho0.residuals["det"] < 1e-13
        assert rho0.symplectic_residual < 1e-12

    def test_shape(self, rho0):
        assert rho0.dim == 2 and rho0.n == 1 and rho0.genus == 2
        assert rho0.kind == "fuchsian_base"
        assert rho0.base_images is not None
        assert rho0.dedup_is_images

    def test_image_homomorphism(self, rho0):
        w1 = Word.from_string("abC")
        w2 = Word.from_string("cDa")
        np.testing.assert_allclose(
            rho0.image(w1.concat(w2)), rho0.image(w1) @ rho0.image(w2), atol=1e-12
        )

    def test_inverse_letters(self, rho0):
        for letter in range(0, 8, 2):
            prod = rho0.generator_image(letter) @ rho0.generator_image(letter + 1)
            np.testing.assert_allclose(prod, np.eye(2), atol=1e-14)


class TestSymLiftMatrix:
    def test_diagonal_oracle(self):
        lift = sym_lift_matrix(np.diag([2.0, 0.5]), 4)
        np.testing.assert_allclose(lift, np.diag([8.0, 2.0, 0.5, 0.125]), atol=1e-14)

    def test_unipotent_oracle(self):
        lift = sym_lift_matrix(np.array([[1.0, 1.0], [0.0, 1.0]]), 4)
        expected = np.array(
            [
                [1.0, 3.0, 3.0, 1.0],
                [0.0, 1.0, 2.0, 1.0],
                [0.0, 0.0, 1.0, 1.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        np.testing.assert_allclose(lift, expected, atol=1e-14)

    @given(gl2, vec2)
    def test_equivariance_on_pure_powers(self, m, v):
        lhs = sym_lift_matrix(m, 4) @ _nu(v)
        rhs = _nu(m @ v)
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    @given(gl2, gl2)
    def test_homomorphism(self, a, b):
        lhs = sym_lift_matrix(a, 4) @ sym_lift_matrix(b, 4)
        rhs = sym_lift_matrix(a @ b, 4)
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)


class TestSymPowerLift:
    def test_shape_and_certificates(self, sym4):
        assert sym4.dim == 4 and sym4.n == 2
        assert sym4.is_symplectic
        assert sym4.metadata["N"] == 4
        assert sym4.relator_residual < 1e-8
        assert sym4.symplectic_residual < 1e-8

    def test_images_are_corrected_lifts(self, rho0, sym4):
        t_corr = sym4.basis_correction
        t_inv = np.linalg.inv(t_corr)
        for base, img in zip(rho0.images, sym4.images):
            expected = t_inv @ sym_lift_matrix(np.asarray(base), 4) @ t_corr
            np.testing.assert_allclose(np.asarray(img), expected, atol=1e-10)

    def test_base_images_are_the_input(self, rho0, sym4):
        for base, orig in zip(sym4.base_images, rho0.images):
            np.testing.assert_array_equal(base, orig)

    def test_odd_power_not_symplectic(self, rho0):
        sym3 = sym_power_lift(rho0, 3)
        assert sym3.dim == 3
        assert sym3.n is None
        assert not sym3.is_symplectic
        assert sym3.relator_residual < 1e-8

    def test_n_two_is_passthrough(self, rho0):
        sym2 = sym_power_lift(rho0, 2)
        for a, b in zip(sym2.images, rho0.images):
            np.testing.assert_array_equal(a, b)

    def test_rejects_bad_input(self, rho0, sym4):
        with pytest.raises(ConstructionError):
            sym_power_lift(sym4, 4)
        with pytest.raises(ConstructionError):
            sym_power_lift(rho0, 1)


class TestDirectSum:
    def test_dimensions_and_flags(self, rho0, dsum_base):
        assert dsum_base.dim == 4
        assert dsum_base.is_symplectic
        assert dsum_base.kind == "direct_sum"
        assert dsum_base.metadata["factor_dims"] == [2, 2]

    def test_singular_values_are_union(self, rho0, dsum_base):
        for ga, gsum in zip(rho0.images, dsum_base.images):
            expected = np.sort(np.concatenate([np.linalg.svd(ga)[1]] * 2))
            got = np.sort(np.linalg.svd(gsum)[1])
            np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_equal_factors_keep_base(self, dsum_base):
        assert dsum_base.base_images is not None

    def test_mixed_dims(self, rho0, sym4):
        mixed = direct_sum(rho0, sym4)
        assert mixed.dim == 6 and mixed.is_symplectic
        # both factors ride on the same 2x2 octagon group
        assert mixed.base_images is not None

    def test_interleaving_preserves_standard_form(self, dsum_sym4):
        assert dsum_sym4.dim == 8
        assert dsum_sym4.symplectic_residual < 1e-8

    def test_non_symplectic_factor(self, rho0):
        pres = rho0.presentation
        summed = direct_sum(rho0, trivial_rep(pres, dim=2))
        assert not summed.is_symplectic
        assert summed.dim == 4


class TestTrivial:
    def test_certificates(self):
        rep = trivial_rep(presentation(2), dim=3)
        assert rep.relator_residual == 0.0
        assert rep.dim == 3
        with pytest.raises(ValidationError):
            trivial_rep(presentation(2), dim=0)


class TestBend:
    def test_zero_time_is_identity(self, sym4):
        bent = bend(sym4, 0.0)
        assert bent.kind == "bent"
        for a, b in zip(bent.images, sym4.images):
            np.testing.assert_array_equal(a, b)

    def test_nonzero_time_certified(self, sym4):
        bent = bend(sym4, 0.1)
        assert bent.relator_residual < 1e-8
        assert bent.symplectic_residual < 1e-8
        assert bent.metadata["t"] == 0.1
        assert bent.metadata["parent_kind"] == "sym_power"
        # the second handle is untouched
        for i in (2, 3):
            np.testing.assert_array_equal(bent.images[i], sym4.images[i])
        # the first handle genuinely moved
        assert np.max(np.abs(np.asarray(bent.images[0]) - sym4.images[0])) > 1e-3

    def test_separating_curve_image_is_fixed(self, sym4):
        bent = bend(sym4, 0.1)
        curve = Word.from_string("abAB")
        np.testing.assert_allclose(
            bent.image(curve), sym4.image(curve), atol=1e-9
        )

    def test_base_bends_coherently(self, rho0, sym4):
        bent4 = bend(sym4, 0.1)
        bent2 = bend(rho0, 0.1)
        for b4, b2 in zip(bent4.base_images, bent2.images):
            np.testing.assert_allclose(b4, b2, atol=1e-12)

    def test_lift_commutes_with_bending(self, sym4):
        # lifting the bent base and correcting by the stored basis matches
        # bending the lift directly
        bent = bend(sym4, 0.1)
        t_corr = bent.basis_correction
        t_inv = np.linalg.inv(t_corr)
        for base, img in zip(bent.base_images, bent.images):
            expected = t_inv @ sym_lift_matrix(np.asarray(base), 4) @ t_corr
            np.testing.assert_allclose(np.asarray(img), expected, atol=1e-8)

    def test_rejects_degenerate_curve_spectrum(self, dsum_base):
        with pytest.raises(ConstructionError):
            bend(dsum_base, 0.1)


class TestSerialization:
    def test_roundtrip(self, sym4, tmp_path):
        path = tmp_path / "rep.json"
        save_representation(sym4, path)
        back = load_representation(path)
        assert back.kind == sym4.kind
        assert back.is_symplectic == sym4.is_symplectic
        assert back.metadata["N"] == 4
        for a, b in zip(back.images, sym4.images):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(back.base_images, sym4.base_images):
            np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(back.basis_correction, sym4.basis_correction)

    def test_tampered_matrix_rejected(self, sym4, tmp_path):
        path = tmp_path / "rep.json"
        save_representation(sym4, path)
        data = json.loads(path.read_text())
        data["generators"][0][0][0] += 1e-3
        path.write_text(json.dumps(data))
        with pytest.raises(ValidationError):
            load_representation(path)

    def test_tampered_residual_field_is_ignored(self, sym4, tmp_path):
        # stored residuals are recomputed, not trusted
        path = tmp_path / "rep.json"
        save_representation(sym4, path)
        data = json.loads(path.read_text())
        data["residuals"]["relator"] = 0.0
        path.write_text(json.dumps(data))
        back = load_representation(path)
        assert back.relator_residual > 0.0

    def test_wrong_version_rejected(self, sym4, tmp_path):
        path = tmp_path / "rep.json"
        save_representation(sym4, path)
        data = json.loads(path.read_text())
        data["version"] = 99
        path.write_text(json.dumps(data))
        with pytest.raises(ValidationError):
            load_representation(path)

    def test_relator_mismatch_rejected(self, sym4, tmp_path):
        path = tmp_path / "rep.json"
        save_representation(sym4, path)
        data = json.loads(path.read_text())
        data["relator"] = "abAB"
        path.write_text(json.dumps(data))
        with pytest.raises(ValidationError):
            load_representation(path)

    def test_unreadable_file_rejected(self, tmp_path):
        path = tmp_path / "rep.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_representation(path)
        with pytest.raises(ValidationError):
            load_representation(tmp_path / "missing.json")


class TestRepresentationValidation:
    def test_wrong_generator_count(self):
        with pytest.raises(ValidationError):
            Representation(
                presentation=presentation(2),
                kind="test",
                images=(np.eye(2),) * 3,
                is_symplectic=False,
            )

    def test_relator_violation(self):
        # a and b do not commute, c = d = Id, so [a,b][c,d] != Id
        images = (
            np.diag([2.0, 0.5]),
            np.array([[1.0, 1.0], [0.0, 1.0]]),
            np.eye(2),
            np.eye(2),
        )
        with pytest.raises(ValidationError):
            Representation(
                presentation=presentation(2),
                kind="test",
                images=images,
                is_symplectic=False,
            )

    def test_images_are_readonly(self, rho0):
        with pytest.raises(ValueError):
            rho0.images[0][0, 0] = 5.0
