"""Math kernel tests: quaternions, skew, bell curve, RK4, dual-number gradients."""

import math

import numpy as np
import pytest

from kpcalab.mathcore import (
    BellParams,
    NumericsError,
    Quaternion,
    bell,
    gradient,
    quat_to_rotation,
    rk4_step,
    rotation_to_quat,
    skew,
)
from kpcalab.mathcore import dual as dm


class TestQuaternion:
    def test_identity_rotation(self):
        r = quat_to_rotation(Quaternion.identity())
        np.testing.assert_allclose(r, np.eye(3), atol=1e-15)

    def test_quarter_turn_about_x(self):
        q = Quaternion(math.sqrt(0.5), [math.sqrt(0.5), 0.0, 0.0])
        out = q.rotate([0.0, 0.0, 1.0])
        np.testing.assert_allclose(out, [0.0, -1.0, 0.0], atol=1e-12)

    def test_random_unit_quaternions_give_rotations(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            q = Quaternion.from_array(rng.standard_normal(4)).normalize()
            r = quat_to_rotation(q)
            assert np.linalg.norm(r @ r.T - np.eye(3)) < 1e-10
            assert abs(np.linalg.det(r) - 1.0) < 1e-10

    def test_normalize_tolerance_and_zero_rejection(self):
        q = Quaternion(2.0, [1.0, -3.0, 0.5]).normalize()
        assert abs(q.norm() - 1.0) <= 1e-12
        with pytest.raises(ValueError):
            Quaternion(0.0, [0.0, 0.0, 0.0]).normalize()

    def test_non_unit_rejected_by_rotation(self):
        with pytest.raises(ValueError):
            quat_to_rotation(Quaternion(1.1, [0.0, 0.0, 0.0]))

    def test_rotation_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            q = Quaternion.from_array(rng.standard_normal(4)).normalize()
            r = quat_to_rotation(q)
            q2 = rotation_to_quat(r)
            # q and -q encode the same rotation; round trip fixes q0 >= 0
            np.testing.assert_allclose(
                quat_to_rotation(q2), r, atol=1e-12
            )
            assert q2.w >= 0.0

    def test_hamilton_product_composes_rotations(self):
        rng = np.random.default_rng(3)
        a = Quaternion.from_array(rng.standard_normal(4)).normalize()
        b = Quaternion.from_array(rng.standard_normal(4)).normalize()
        np.testing.assert_allclose(
            quat_to_rotation(a * b),
            quat_to_rotation(a) @ quat_to_rotation(b),
            atol=1e-12,
        )


class TestSkew:
    def test_zero(self):
        np.testing.assert_array_equal(skew([0, 0, 0]), np.zeros((3, 3)))

    def test_unit_x(self):
        expected = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float)
        np.testing.assert_array_equal(skew([1.0, 0.0, 0.0]), expected)

    def test_cross_product_identity(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            v, w = rng.standard_normal(3), rng.standard_normal(3)
            np.testing.assert_allclose(skew(v) @ w, np.cross(v, w), atol=1e-14)
            assert np.array_equal(skew(v).T, -skew(v))


class TestBell:
    def test_peak(self):
        assert bell(0.0, BellParams(3.0, 1.0)) == 3.0

    def test_symmetry(self):
        p = BellParams(2.0, 0.7)
        for x in [0.1, 0.5, 1.3, 4.0]:
            assert bell(x, p) == bell(-x, p)

    def test_unit_point(self):
        assert bell(1.0, BellParams(1.0, 1.0)) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_bounded_and_monotone(self):
        p = BellParams(5.0, 2.0)
        xs = np.linspace(0.0, 10.0, 101)
        ys = [bell(float(x), p) for x in xs]
        assert all(0.0 < y <= 5.0 for y in ys)
        assert all(a >= b for a, b in zip(ys, ys[1:]))

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            BellParams(1.0, 0.0)
        with pytest.raises(ValueError):
            BellParams(-1.0, 1.0)


class TestRk4:
    def test_constant_solution(self):
        out = rk4_step(lambda x, u: [0.0, 0.0], [1.0, 2.0], [], 0.1)
        assert out == [1.0, 2.0]

    def test_exponential_decay(self):
        out = rk4_step(lambda x, u: [-x[0]], [1.0], [], 0.1)
        assert out[0] == pytest.approx(math.exp(-0.1), abs=1e-7)

    def test_observed_order_at_least_3p8(self):
        # x' = -x + sin(t); exact solution from variation of constants
        def field(x, u):
            return [-x[0] + math.sin(x[1]), 1.0]

        def exact(t):
            return 0.5 * math.exp(-t) + 0.5 * (math.sin(t) - math.cos(t))

        errs = []
        for h in (0.1, 0.05):
            x = [0.0, 0.0]
            steps = round(2.0 / h)
            for _ in range(steps):
                x = rk4_step(field, x, [], h)
            errs.append(abs(x[0] - exact(2.0)))
        order = math.log2(errs[0] / errs[1])
        assert order >= 3.8

    def test_non_finite_field_raises(self):
        def field(x, u):
            return [math.inf]

        with pytest.raises(NumericsError):
            rk4_step(field, [1.0], [], 0.1)


class TestGradient:
    def test_quadratic(self):
        g = gradient(lambda z: z[0] * z[0] + z[1] * z[1], [1.0, 2.0])
        np.testing.assert_allclose(g, [2.0, 4.0], atol=1e-14)

    def test_sin_cos(self):
        g = gradient(lambda z: dm.sin(z[0]) * dm.cos(z[1]), [0.0, 0.0])
        np.testing.assert_allclose(g, [1.0, 0.0], atol=1e-14)

    def test_random_polynomial_matches_central_differences(self):
        rng = np.random.default_rng(17)
        coeffs = rng.standard_normal((4, 3))

        def f(z):
            total = 0.0
            for c in coeffs:
                total = total + c[0] * z[0] * z[0] * z[1] + c[1] * z[1] * z[2] + c[2] * z[2] ** 3
            return total

        worst = 0.0
        for _ in range(10):
            z = rng.standard_normal(3)
            g = gradient(f, z)
            h = 1e-6
            for i in range(3):
                zp, zm = z.copy(), z.copy()
                zp[i] += h
                zm[i] -= h
                fd = (f(list(zp)) - f(list(zm))) / (2 * h)
                rel = abs(g[i] - fd) / max(1.0, abs(g[i]), abs(fd))
                worst = max(worst, rel)
        assert worst <= 1e-6

    def test_chain_rule_through_composed_ops(self):
        def f(z):
            return dm.exp(dm.sin(z[0]) * z[1]) / dm.sqrt(1.0 + z[1] * z[1])

        z = [0.3, -0.8]
        g = gradient(f, z)
        s, c = math.sin(z[0]), math.cos(z[0])
        denom = math.sqrt(1.0 + z[1] ** 2)
        base = math.exp(s * z[1])
        expected = [
            base * c * z[1] / denom,
            base * s / denom - base * z[1] / denom**3,
        ]
        np.testing.assert_allclose(g, expected, rtol=1e-12)

    def test_atan2_and_abs(self):
        g = gradient(lambda z: dm.atan2(z[0], z[1]) + dm.fabs(z[0]), [1.0, 2.0])
        np.testing.assert_allclose(g, [2.0 / 5.0 + 1.0, -1.0 / 5.0], rtol=1e-12)
