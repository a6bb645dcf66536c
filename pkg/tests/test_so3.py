import math

import numpy as np
import pytest

from so3pid.so3 import (
    NotRotation,
    NotSkewSymmetric,
    check_error_weights,
    check_rotation,
    exp_so3,
    hat,
    log_so3,
    morse_error,
    morse_gradient,
    principal_angle,
    vee,
)


def random_rotation(rng):
    """QR-based random rotation, independent of exp_so3."""
    a = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(a)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


class TestHatVee:
    def test_hat_zero(self):
        assert np.array_equal(hat([0.0, 0.0, 0.0]), np.zeros((3, 3)))

    def test_hat_matches_display(self):
        expected = np.array([[0, -3, 2], [3, 0, -1], [-2, 1, 0]], dtype=float)
        assert np.array_equal(hat([1.0, 2.0, 3.0]), expected)

    def test_hat_action_is_cross_product(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            v, w = rng.standard_normal(3), rng.standard_normal(3)
            assert np.allclose(hat(v) @ w, np.cross(v, w), atol=0.0)

    def test_hat_annihilates_own_vector(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            v = rng.standard_normal(3)
            assert np.allclose(hat(v) @ v, 0.0, atol=1e-15)

    def test_vee_round_trip(self):
        v = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(vee(hat(v)), v)

    def test_vee_zero(self):
        assert np.array_equal(vee(np.zeros((3, 3))), np.zeros(3))

    def test_vee_rejects_identity(self):
        with pytest.raises(NotSkewSymmetric):
            vee(np.eye(3))


class TestExp:
    def test_zero_gives_identity(self):
        assert np.array_equal(exp_so3([0.0, 0.0, 0.0]), np.eye(3))

    def test_quarter_turn_about_z(self):
        expected = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        assert np.allclose(exp_so3([0.0, 0.0, math.pi / 2]), expected,
                           atol=1e-15)

    def test_inverse(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            f = rng.uniform(-3, 3, 3)
            assert np.allclose(exp_so3(f) @ exp_so3(-f), np.eye(3), atol=1e-14)

    def test_output_is_orthonormal(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            r = exp_so3(rng.uniform(-math.pi, math.pi, 3))
            assert np.linalg.norm(r.T @ r - np.eye(3)) <= 1e-12
            assert abs(np.linalg.det(r) - 1.0) <= 1e-12

    def test_small_angle_branch_matches_series(self):
        # just above the branch threshold the closed form should agree with
        # a manual series evaluation to rounding
        axis = np.array([1.0, 2.0, -1.0]) / math.sqrt(6.0)
        f = 1.5e-6 * axis
        a2 = float(f @ f)
        fx = hat(f)
        series = (np.eye(3) + (1.0 - a2 / 6.0) * fx
                  + (0.5 - a2 / 24.0) * (fx @ fx))
        assert np.linalg.norm(exp_so3(f) - series) < 1e-14


class TestLog:
    def test_identity(self):
        assert np.array_equal(log_so3(np.eye(3)), np.zeros(3))

    def test_round_trip_simple(self):
        f = np.array([0.1, -0.2, 0.3])
        assert np.linalg.norm(log_so3(exp_so3(f)) - f) <= 1e-10

    def test_half_turn_about_x(self):
        r = np.diag([1.0, -1.0, -1.0])
        f = log_so3(r)
        assert np.allclose(f, [math.pi, 0.0, 0.0], atol=1e-12)
        assert np.allclose(exp_so3(f), r, atol=1e-9)

    def test_round_trip_sweep(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            f = rng.uniform(0.0, math.pi - 1e-3) * axis
            assert np.linalg.norm(log_so3(exp_so3(f)) - f) <= 1e-9

    def test_near_pi_branch(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            f = (math.pi - 1e-8) * axis
            r = exp_so3(f)
            # axis sign may flip; compare the rotations themselves
            assert np.linalg.norm(exp_so3(log_so3(r)) - r) <= 1e-7

    def test_magnitude_in_range(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            f = log_so3(random_rotation(rng))
            assert 0.0 <= np.linalg.norm(f) <= math.pi + 1e-12


class TestRotationCheck:
    def test_accepts_exp_output(self):
        check_rotation(exp_so3([0.2, 0.1, -0.4]))

    def test_rejects_scaled(self):
        with pytest.raises(NotRotation):
            check_rotation(1.001 * np.eye(3))

    def test_rejects_reflection(self):
        with pytest.raises(NotRotation):
            check_rotation(np.diag([1.0, 1.0, -1.0]))

    def test_rejects_bad_shape(self):
        with pytest.raises(NotRotation):
            check_rotation(np.eye(4))


class TestErrorWeights:
    def test_accepts_default(self):
        check_error_weights(np.array([1.0, 1.1, 1.2]))

    @pytest.mark.parametrize("bad", [
        [1.0, 1.0, 1.2],          # repeated
        [1.0, -1.1, 1.2],         # negative
        [0.0, 1.1, 1.2],          # zero
        [1.0, 1.0 + 5e-13, 1.2],  # distinct below tolerance
    ])
    def test_rejects_bad_weights(self, bad):
        with pytest.raises(ValueError):
            check_error_weights(np.array(bad))


class TestMorseError:
    K = np.array([1.0, 2.0, 3.0])

    def test_zero_at_identity(self):
        assert morse_error(np.eye(3), self.K) == 0.0

    def test_half_turn_value(self):
        assert morse_error(np.diag([1.0, -1.0, -1.0]), self.K) == pytest.approx(10.0)

    def test_nonnegative_and_zero_only_at_identity(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            q = random_rotation(rng)
            val = morse_error(q, self.K)
            assert val >= 0.0
            if val < 1e-12:
                assert np.linalg.norm(q - np.eye(3)) <= 1e-5


class TestMorseGradient:
    K = np.array([1.0, 1.1, 1.2])

    def test_zero_at_identity(self):
        assert np.allclose(morse_gradient(np.eye(3), self.K), 0.0, atol=0.0)

    def test_zero_at_half_turn_critical_points(self):
        for q in (np.diag([1.0, -1.0, -1.0]), np.diag([-1.0, 1.0, -1.0]),
                  np.diag([-1.0, -1.0, 1.0])):
            assert np.allclose(morse_gradient(q, self.K), 0.0, atol=1e-15)

    def test_z_rotation_closed_form(self):
        th = 0.7
        q = exp_so3([0.0, 0.0, th])
        expected = np.array([0.0, 0.0, (self.K[0] + self.K[1]) * math.sin(th)])
        assert np.allclose(morse_gradient(q, self.K), expected, atol=1e-14)

    def test_matches_defining_sum(self):
        rng = np.random.default_rng(15)
        eyes = np.eye(3)
        for _ in range(50):
            q = random_rotation(rng)
            brute = sum(self.K[i] * np.cross(q.T @ eyes[i], eyes[i])
                        for i in range(3))
            assert np.allclose(morse_gradient(q, self.K), brute, atol=1e-14)

    def test_differential_identity_first_order(self):
        # (phi(Q exp(h w)) - phi(Q)) / h should approach w . grad at O(h)
        rng = np.random.default_rng(16)
        errors = {}
        for h in (1e-4, 1e-5):
            acc = 0.0
            rng = np.random.default_rng(16)
            for _ in range(100):
                q = random_rotation(rng)
                w = rng.standard_normal(3)
                fd = (morse_error(q @ exp_so3(h * w), self.K)
                      - morse_error(q, self.K)) / h
                acc += abs(fd - float(w @ morse_gradient(q, self.K)))
            errors[h] = acc / 100
        ratio = errors[1e-4] / errors[1e-5]
        assert 5.0 <= ratio <= 20.0


def test_principal_angle():
    assert principal_angle(np.eye(3)) == 0.0
    assert principal_angle(np.diag([1.0, -1.0, -1.0])) == pytest.approx(math.pi)
    assert principal_angle(exp_so3([0.0, 0.3, 0.0])) == pytest.approx(0.3)
