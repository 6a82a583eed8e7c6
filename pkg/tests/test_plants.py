"""Plant model tests: dynamics, effective control, kernel families, linearization."""

import math

import numpy as np
import pytest

from kpcalab.mathcore import rk4_step
from kpcalab.plants import (
    restrict_inputs,
    EquilibriumError,
    InputBounds,
    PlantModel,
    Uav2dModel,
    Uav2dParams,
    Uav3dModel,
    Uav3dParams,
    VesselModel,
    VesselParams,
    controllability_rank,
    linearize,
)

UAV2D = Uav2dModel()
UAV3D = Uav3dModel()
VESSEL = VesselModel()


class TestDimensions:
    def test_overactuation_by_model(self):
        assert (UAV2D.m1 + UAV2D.n2, UAV2D.m_eff) == (3, 1)
        assert (UAV3D.m1 + UAV3D.n2, UAV3D.m_eff) == (8, 2)
        assert (VESSEL.m1 + VESSEL.n2, VESSEL.m_eff) == (6, 3)

    def test_not_overactuated_rejected(self):
        with pytest.raises(ValueError, match="overactuated"):
            PlantModel(n1=2, n2=1, m1=1, m2=1, m_eff=2, bounds=InputBounds([0, 0], [1, 1]))

    def test_param_positivity(self):
        with pytest.raises(ValueError):
            Uav2dParams(m_u=-1.0)
        with pytest.raises(ValueError):
            VesselParams(I_p=0.0)
        with pytest.raises(ValueError):
            Uav3dParams(I_o=[0.0, 1.0, 1.0])

    def test_derived_quantities(self):
        p = Uav2dParams()
        assert p.I_tilde == pytest.approx(0.03 * 1.25**2 / 4 + 2.0 + 0.1 * 1.25**2)
        assert p.m_tilde == pytest.approx(0.115)
        assert Uav3dParams().m_tilde == pytest.approx(0.1 / 4 + 0.15)


class TestUav2dDynamics:
    def test_thrust_cancels_gravity_torque(self):
        p = UAV2D.params
        u1 = p.m_tilde * p.g  # sin(pi/2 - 0) = 1, cos(0) = 1
        out = UAV2D.f1_dot([0.0, 0.0], [math.pi / 2, 0.0], u1)
        np.testing.assert_allclose(out, [0.0, 0.0], atol=1e-14)

    def test_upright_equilibrium_with_zero_thrust(self):
        out = UAV2D.f1_dot([math.pi / 2, 0.0], [0.3, 0.0], 0.0)
        np.testing.assert_allclose(out, [0.0, 0.0], atol=1e-15)

    def test_actuator_subsystem(self):
        np.testing.assert_array_equal(UAV2D.f2_dot([0.3, 0.0], 0.0), [0.0, 0.0])
        out = UAV2D.f2_dot([0.0, 0.1], 0.5)
        np.testing.assert_allclose(out, [0.1, 0.5 / 1.014])

    def test_effective_control_kernel_membership(self):
        assert UAV2D.effective_control([0.4, 0.0], [0.4, 1.0], 3.0)[0] == 0.0

    def test_f1_consistent_with_psi(self):
        rng = np.random.default_rng(2)
        p = UAV2D.params
        for _ in range(20):
            x1 = rng.standard_normal(2)
            x2 = rng.standard_normal(2)
            u1 = rng.uniform(0, 5)
            psi = UAV2D.effective_control(x1, x2, u1)[0]
            expected = p.ell * (psi - p.m_tilde * p.g * math.cos(x1[0])) / p.I_tilde
            assert UAV2D.f1_dot(x1, x2, u1)[1] == pytest.approx(expected, rel=1e-14)

    def test_energy_conservation_unforced(self):
        x = [0.3, 0.0, 0.0, 0.0]
        e0 = UAV2D.energy(UAV2D.split(np.array(x)))
        h = 1e-3
        for _ in range(10000):
            x = rk4_step(UAV2D.field, x, [0.0, 0.0], h)
        e1 = UAV2D.energy(UAV2D.split(np.array(x)))
        assert abs(e1 - e0) <= 1e-6


class TestUav3dDynamics:
    def test_principal_axis_spin(self):
        x2 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
        out = UAV3D.f2_dot(x2, [0.0, 0.0, 0.0])
        np.testing.assert_allclose(out, [0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0], atol=1e-15)

    def test_effective_control_vertical_identity_attitude(self):
        # thrust along +z, object vertical: radial alignment, no generalized force
        out = UAV3D.effective_control([math.pi / 2, 0.0, 0.0, 0.0], [1, 0, 0, 0, 0, 0, 0], 1.0)
        np.testing.assert_allclose(out, [0.0, 0.0], atol=1e-12)

    def test_effective_control_horizontal_identity_attitude(self):
        # object horizontal: vertical thrust is all phi-direction force
        out = UAV3D.effective_control([0.0, 0.0, 0.0, 0.0], [1, 0, 0, 0, 0, 0, 0], 2.0)
        np.testing.assert_allclose(out, [2.0, 0.0], atol=1e-14)

    def test_gravity_only_swing(self):
        # at phi=0, theta arbitrary: phi_dd = -G_phi / M11
        p = UAV3D.params
        x1 = [0.0, 0.7, 0.0, 0.0]
        x2 = UAV3D.kernel_point(x1)
        out = UAV3D.f1_dot(x1, x2, 0.0)
        m11 = p.I_o[1]  # sin(0) term drops
        g1 = p.g * p.ell * (p.m_o / 2 + p.m_u)
        np.testing.assert_allclose(out, [0.0, 0.0, -g1 / m11, 0.0], atol=1e-12)

    def test_quaternion_state_validation(self):
        with pytest.raises(ValueError, match="quaternion"):
            UAV3D.make_state([0, 0, 0, 0], [1.1, 0, 0, 0, 0, 0, 0])

    def test_normalize_state_restores_unit_norm(self):
        x = np.zeros(11)
        x[4:8] = [1.0 + 1e-7, 0.0, 1e-8, 0.0]
        out = UAV3D.normalize_state(x)
        assert abs(np.linalg.norm(out[4:8]) - 1.0) <= 1e-15


class TestVesselDynamics:
    def test_opposed_thrusters_cancel(self):
        x1 = [1.0, -2.0, 0.77, 0.0, 0.0, 0.0]
        out = VESSEL.effective_control(x1, [math.pi / 2, -math.pi / 2, 0.0, 0.0], [1000.0, 1000.0])
        np.testing.assert_allclose(out, [0.0, 0.0, 0.0], atol=1e-10)

    def test_steering_acceleration(self):
        out = VESSEL.f2_dot([0.0, 0.0, 0.0, 0.0], [700.0 * 2.0, 0.0])
        np.testing.assert_allclose(out, [0.0, 0.0, 2.0, 0.0])

    def test_wrench_scaling(self):
        x1 = np.zeros(6)
        out = VESSEL.f1_dot(x1, [0.0, 0.0, 0.0, 0.0], [500.0, 500.0])
        # both thrusters along the heading: pure surge force
        assert out[3] == pytest.approx(1000.0 / 11000.0)
        assert out[4] == pytest.approx(0.0, abs=1e-15)
        assert out[5] == pytest.approx(0.0, abs=1e-15)


class TestKernelFamilies:
    def test_uav2d_kernel_point(self):
        out = UAV2D.kernel_point([0.7, -0.2], 0, [0.0])
        np.testing.assert_array_equal(out, [0.7, 0.0])
        assert UAV2D.effective_control([0.7, -0.2], out, 3.0)[0] == 0.0

    def test_uav3d_kernel_identity_quaternion(self):
        out = UAV3D.kernel_point([math.pi / 2, 0.0, 0.0, 0.0], 0, [0.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(out, [1, 0, 0, 0, 0, 0, 0], atol=1e-15)

    def test_vessel_kernel_point(self):
        out = VESSEL.kernel_point([0, 0, 0.5, 0, 0, 0], 0, [0.0, 0.0])
        np.testing.assert_allclose(out, [math.pi / 2, -math.pi / 2, 0.0, 0.0])

    def test_bad_arity_rejected(self):
        with pytest.raises(ValueError, match="free"):
            UAV2D.kernel_point([0.0, 0.0], 0, [0.0, 1.0])

    @pytest.mark.parametrize(
        "model,thrust_builder",
        [
            (UAV2D, lambda rng: [rng.uniform(0.0, 5.0)]),
            (UAV3D, lambda rng: [rng.uniform(0.0, 5.0)]),
            (VESSEL, lambda rng: [rng.uniform(0.0, 5.0)] * 2),
        ],
        ids=["uav2d", "uav3d", "vessel"],
    )
    def test_kernel_identity_randomized(self, model, thrust_builder):
        rng = np.random.default_rng(23)
        worst = 0.0
        for _ in range(1000):
            x1 = rng.uniform(-2.0, 2.0, size=model.n1)
            branch = int(rng.integers(-2, 3))
            free = rng.uniform(-1.0, 1.0, size=model.kernel_free_dim)
            u1 = thrust_builder(rng)
            x2 = model.kernel_point(x1, branch, free)
            resid = np.max(np.abs(model.effective_control(x1, x2, u1)))
            worst = max(worst, resid)
        assert worst <= 1e-12

    def test_uav3d_kernel_quaternion_is_unit(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            x1 = rng.uniform(-3, 3, size=4)
            q = UAV3D.kernel_point(x1, int(rng.integers(-2, 3)), rng.uniform(-2, 2, 4))[:4]
            assert abs(np.linalg.norm(q) - 1.0) <= 1e-12


class TestLinearization:
    def test_uav2d_singular_equilibrium_matrices(self):
        p = UAV2D.params
        lin = linearize(UAV2D, [math.pi / 2, 0, math.pi / 2, 0], [0.0, 0.0])
        expected_a = np.zeros((4, 4))
        expected_a[0, 1] = 1.0
        expected_a[1, 0] = p.ell * p.m_tilde * p.g / p.I_tilde
        expected_a[2, 3] = 1.0
        expected_b = np.zeros((4, 2))
        expected_b[3, 1] = 1.0 / p.I_u
        np.testing.assert_allclose(lin.a, expected_a, atol=1e-12)
        np.testing.assert_allclose(lin.b, expected_b, atol=1e-12)

    def test_non_equilibrium_rejected(self):
        with pytest.raises(EquilibriumError):
            linearize(UAV2D, [0.3, 0, 0.3, 0], [0.0, 0.0])

    def test_jacobians_match_central_differences(self):
        x_bar = np.array([math.pi / 2, 0, math.pi / 2, 0])
        u_bar = np.zeros(2)
        lin = linearize(UAV2D, x_bar, u_bar)
        h = 1e-6

        def gamma(x, u):
            return np.array(UAV2D.field(list(x), list(u)))

        for j in range(4):
            dx = np.zeros(4)
            dx[j] = h
            fd = (gamma(x_bar + dx, u_bar) - gamma(x_bar - dx, u_bar)) / (2 * h)
            np.testing.assert_allclose(lin.a[:, j], fd, atol=1e-6)
        for j in range(2):
            du = np.zeros(2)
            du[j] = h
            fd = (gamma(x_bar, u_bar + du) - gamma(x_bar, u_bar - du)) / (2 * h)
            np.testing.assert_allclose(lin.b[:, j], fd, atol=1e-6)


class TestControllabilityRank:
    def test_double_integrator_fully_controllable(self):
        from kpcalab.plants.base import LinearizedSystem

        lin = LinearizedSystem(
            np.array([[0.0, 1.0], [0.0, 0.0]]),
            np.array([[0.0], [1.0]]),
            np.zeros(2),
            np.zeros(1),
        )
        assert controllability_rank(lin) == 2

    def test_uav2d_singular_equilibrium_rank_two(self):
        lin = linearize(UAV2D, [math.pi / 2, 0, math.pi / 2, 0], [0.0, 0.0])
        assert controllability_rank(lin) == 2

    def test_uav2d_generic_equilibrium_full_rank(self):
        p = UAV2D.params
        alpha = math.pi / 3
        beta = alpha + math.pi / 4
        u1 = p.m_tilde * p.g * math.cos(alpha) / math.sin(beta - alpha)
        lin = linearize(UAV2D, [alpha, 0, beta, 0], [u1, 0.0])
        assert controllability_rank(lin) == 4

    def test_vessel_singular_equilibrium_rank_eight(self):
        # with the kernel-admissible joint thrust command the rank drops to 8
        t_bar = 1000.0
        lin = linearize(
            VESSEL,
            [0.4, -1.0, 0.3, 0, 0, 0, math.pi / 2, -math.pi / 2, 0, 0],
            [t_bar, t_bar, 0.0, 0.0],
        )
        restricted = restrict_inputs(lin, VESSEL.kernel_input_map())
        assert controllability_rank(restricted) == 8
        # commanding each propeller thrust separately recovers the two missing
        # directions: the deficiency is a property of the joint-thrust command
        assert controllability_rank(lin) == 10

    def test_uav_models_have_identity_kernel_input_map(self):
        np.testing.assert_array_equal(UAV2D.kernel_input_map(), np.eye(2))
        np.testing.assert_array_equal(UAV3D.kernel_input_map(), np.eye(4))

    def test_uav3d_singular_equilibrium_rank_deficient(self):
        x1 = [math.pi / 2, 0.3, 0.0, 0.0]
        x2 = UAV3D.kernel_point(x1)
        lin = linearize(UAV3D, np.concatenate([x1, x2]), np.zeros(4))
        assert controllability_rank(lin) < 11
