"""Boundary circle model, osculating flags, attracting subspaces, sampling."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import schur

import anosovlab as al
from anosovlab.errors import (
    FlagQualityError,
    NoAttractingPointError,
    ValidationError,
)
from anosovlab.flags import base_attracting_theta
from anosovlab.surface_group import Word

TWO_PI = 2.0 * np.pi

angles = st.floats(0.0, TWO_PI, exclude_max=True, allow_nan=False)


def _schur_dominant(m, k):
    """Reference dominant invariant subspace via ordered real Schur form."""
    moduli = np.sort(np.abs(np.linalg.eigvals(m)))[::-1]
    cut = np.sqrt(moduli[k - 1] * moduli[k])
    _, z, sdim = schur(
        m, output="real", sort=lambda re, im: np.hypot(re, im) > cut
    )
    assert sdim == k
    return al.Subspace.from_orthonormal(np.linalg.qr(z[:, :k])[0])


class TestCircleModel:
    @given(angles)
    def test_theta_roundtrip(self, theta):
        back = al.theta_from_direction(al.direction_from_circle(theta))
        gap = (back - theta) % TWO_PI
        assert min(gap, TWO_PI - gap) < 1e-9

    def test_reference_direction(self):
        np.testing.assert_allclose(al.direction_from_circle(0.0), [1.0, 0.0])

    @given(angles)
    def test_line_not_vector(self, theta):
        v = al.direction_from_circle(theta)
        assert al.theta_from_direction(-v) == pytest.approx(
            al.theta_from_direction(v), abs=1e-9
        )

    def test_positive_triple_examples(self):
        assert al.is_positive_triple(0.5, 1.5, 3.0)
        assert not al.is_positive_triple(0.5, 3.0, 1.5)
        # wraps around zero
        assert al.is_positive_triple(5.5, 0.5, 1.5)

    @given(angles, angles, angles, angles)
    def test_positive_triple_rotation_invariance(self, t1, t2, t3, shift):
        gaps = [(b - a) % TWO_PI for a, b in ((t1, t2), (t2, t3), (t3, t1))]
        if min(gaps) < 1e-6:  # degenerate or near-degenerate triple
            return
        before = al.is_positive_triple(t1, t2, t3)
        after = al.is_positive_triple(
            (t1 + shift) % TWO_PI, (t2 + shift) % TWO_PI, (t3 + shift) % TWO_PI
        )
        assert before == after

    def test_cyclic_reversal_flips_sign(self):
        assert al.is_positive_triple(0.2, 2.0, 4.0)
        assert not al.is_positive_triple(4.0, 2.0, 0.2)


class TestVeroneseFlag:
    def test_full_flag_shape(self, sym4):
        flag = al.veronese_flag(sym4, 1.0)
        assert flag.ks == (1, 2, 3)
        assert flag.method == "veronese"
        assert flag.quality["chain"] < 1e-10
        assert flag.quality["duality"] < 1e-10

    def test_isotropy_ladder(self, sym4):
        space = al.standard_form(2)
        flag = al.veronese_flag(sym4, 2.5)
        assert al.is_isotropic(space, flag.space(1))
        assert al.is_lagrangian(space, flag.space(2))
        dual = al.omega_orthogonal(space, flag.space(1))
        assert flag.space(3).same_subspace(dual).value < 1e-10

    def test_periodicity(self, sym4):
        a = al.veronese_flag(sym4, 0.75)
        b = al.veronese_flag(sym4, 0.75 + TWO_PI)
        for k in a.ks:
            assert a.space(k).same_subspace(b.space(k)).value < 1e-12

    def test_base_rep_line_matches_direction(self, rho0):
        theta = 1.234
        flag = al.veronese_flag(rho0, theta)
        assert flag.ks == (1,)
        line = al.Subspace.from_spanning(
            al.direction_from_circle(theta).reshape(2, 1)
        )
        assert flag.space(1).same_subspace(line).value < 1e-12

    def test_needs_basis_correction(self, dsum_base):
        with pytest.raises(ValidationError):
            al.veronese_flag(dsum_base, 1.0)

    def test_needs_circle_model(self):
        rep = al.trivial_rep(al.presentation(2), dim=4)
        with pytest.raises(ValidationError):
            al.veronese_flag(rep, 1.0)

    def test_missing_k_raises(self, rho0):
        flag = al.veronese_flag(rho0, 0.3)
        with pytest.raises(ValidationError):
            flag.space(2)


class TestAttractingSubspace:
    def test_diagonal_oracle(self):
        m = np.diag([8.0, 2.0, 0.5, 0.125])
        for k in (1, 2, 3):
            sub, ratio = al.attracting_subspace(m, k)
            expected = al.Subspace.from_orthonormal(np.eye(4)[:, :k])
            assert sub.same_subspace(expected).value < 1e-10
            assert ratio == pytest.approx(0.25)

    def test_rotated_oracle(self):
        rng = np.random.default_rng(11)
        q = np.linalg.qr(rng.standard_normal((5, 5)))[0]
        m = q @ np.diag([4.0, 2.0, 1.0, 0.5, 0.25]) @ q.T
        sub, _ = al.attracting_subspace(m, 2)
        expected = al.Subspace.from_orthonormal(q[:, :2])
        assert sub.same_subspace(expected).value < 1e-9

    def test_complex_dominant_pair(self):
        m = np.zeros((4, 4))
        m[0, 1], m[1, 0] = -2.0, 2.0  # spiral with modulus 2
        m[2, 2], m[3, 3] = 0.5, 0.1
        with pytest.raises(NoAttractingPointError):
            al.attracting_subspace(m, 1)
        sub, _ = al.attracting_subspace(m, 2)
        expected = al.Subspace.from_orthonormal(np.eye(4)[:, :2])
        assert sub.same_subspace(expected).value < 1e-10

    def test_insufficient_gap(self):
        with pytest.raises(NoAttractingPointError):
            al.attracting_subspace(np.diag([2.0, 1.0, 1.0, 0.5]), 2)

    def test_k_range_guard(self):
        m = np.diag([2.0, 1.0])
        with pytest.raises(ValidationError):
            al.attracting_subspace(m, 0)
        with pytest.raises(ValidationError):
            al.attracting_subspace(m, 2)

    def test_matches_schur_on_group_images(self, sym4):
        for text in ("a", "ab", "abC"):
            m = sym4.image(Word.from_string(text))
            for k in (1, 2, 3):
                sub, _ = al.attracting_subspace(m, k)
                assert sub.same_subspace(_schur_dominant(m, k)).value < 1e-8

    def test_block_sum_regression(self, dsum_base):
        # two identical factors double every eigenvalue: k = 1 has no gap,
        # and at k = 2 a structured start could converge to one factor's own
        # invariant plane; the dominant plane must match the Schur reference
        m = dsum_base.image(Word.from_string("ab"))
        with pytest.raises(NoAttractingPointError):
            al.attracting_subspace(m, 1)
        sub, _ = al.attracting_subspace(m, 2)
        assert sub.same_subspace(_schur_dominant(m, 2)).value < 1e-8


class TestBaseAttractingTheta:
    def test_generator_fixed_point(self, rho0):
        theta = base_attracting_theta(rho0, Word.from_string("a"))
        g = np.asarray(rho0.images[0])
        direction = al.direction_from_circle(theta)
        mapped = g @ direction
        # the direction is an eigenvector of the dominant eigenvalue
        assert abs(abs(mapped @ direction) - np.linalg.norm(mapped)) < 1e-10

    def test_identity_rejected(self, rho0):
        with pytest.raises(NoAttractingPointError):
            base_attracting_theta(rho0, Word.identity())

    def test_complex_spectrum_rejected(self):
        class _Rotation:
            base_images = (np.eye(2),) * 4
            kind = "stub"

            def base_value(self, word):
                c, s = np.cos(0.3), np.sin(0.3)
                return np.array([[c, -s], [s, c]])

        with pytest.raises(NoAttractingPointError):
            base_attracting_theta(_Rotation(), Word.from_string("a"))


class TestFlagFromWitness:
    def test_matches_veronese(self, sym4):
        word = Word.from_string("ab")
        witness = al.flag_from_witness(sym4, word)
        assert witness.method == "attracting"
        assert witness.point.witness == word
        reference = al.veronese_flag(sym4, witness.theta)
        for k in (1, 2, 3):
            assert witness.space(k).same_subspace(reference.space(k)).value < 1e-6

    def test_partial_ks(self, sym4):
        witness = al.flag_from_witness(sym4, Word.from_string("a"), ks=(2,))
        assert witness.ks == (2,)
        assert "gap_2" in witness.quality

    def test_base_rep_flag(self, rho0):
        witness = al.flag_from_witness(rho0, Word.from_string("a"))
        assert witness.ks == (1,)

    def test_block_sum_partial_flag(self, dsum_base):
        word = Word.from_string("ab")
        with pytest.raises(NoAttractingPointError):
            al.flag_from_witness(dsum_base, word)  # k=1 has no gap
        witness = al.flag_from_witness(dsum_base, word, ks=(2,))
        space = al.standard_form(2)
        assert al.is_lagrangian(space, witness.space(2))


class TestSampleBoundary:
    def test_veronese_count_and_order(self, sym4):
        flags = al.sample_boundary(sym4, 12, seed=5)
        assert len(flags) == 12
        thetas = [f.theta for f in flags]
        assert thetas == sorted(thetas)
        assert min(np.diff(thetas)) > 1e-3

    def test_veronese_deterministic(self, sym4):
        a = al.sample_boundary(sym4, 6, seed=9)
        b = al.sample_boundary(sym4, 6, seed=9)
        assert [f.theta for f in a] == [f.theta for f in b]
        c = al.sample_boundary(sym4, 6, seed=10)
        assert [f.theta for f in a] != [f.theta for f in c]

    def test_attracting_sorted_and_separated(self, sym4):
        with pytest.warns(UserWarning, match="partial"):
            flags = al.sample_boundary(
                sym4, 500, strategy="attracting", radius=2
            )
        assert len(flags) >= 10
        thetas = np.array([f.theta for f in flags])
        assert np.all(np.diff(thetas) >= 1e-4)
        assert all(f.method == "attracting" for f in flags)

    def test_attracting_partial_ks(self, dsum_base):
        with pytest.warns(UserWarning, match="partial"):
            flags = al.sample_boundary(
                dsum_base, 100, strategy="attracting", radius=2, ks=(2,)
            )
        assert len(flags) >= 10
        assert all(f.ks == (2,) for f in flags)

    def test_count_guard(self, sym4):
        with pytest.raises(ValidationError):
            al.sample_boundary(sym4, 2)

    def test_unknown_strategy(self, sym4):
        with pytest.raises(ValidationError):
            al.sample_boundary(sym4, 5, strategy="magic")


class TestTranslateFlag:
    def test_equivariance_with_veronese(self, sym4):
        theta = 0.8
        word = Word.from_string("a")
        pushed = al.translate_flag(sym4, word, al.veronese_flag(sym4, theta))
        direction = np.asarray(sym4.base_images[0]) @ al.direction_from_circle(theta)
        target = al.veronese_flag(sym4, al.theta_from_direction(direction))
        assert pushed.theta == pytest.approx(target.theta, abs=1e-12)
        for k in (1, 2, 3):
            assert pushed.space(k).same_subspace(target.space(k)).value < 1e-9

    def test_preserves_orientation(self, rho0):
        thetas = (0.3, 1.7, 4.0)
        word = Word.from_string("ba")
        m0 = rho0.base_value(word)
        pushed = [
            al.theta_from_direction(m0 @ al.direction_from_circle(t)) for t in thetas
        ]
        assert al.is_positive_triple(*thetas)
        assert al.is_positive_triple(*pushed)
