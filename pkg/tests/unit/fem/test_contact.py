"""Tests for the drillsim.fem.contact module."""
import numpy as np
import pytest
from scipy.integrate import trapezoid

from drillsim.fem.contact import (
    ShockLog, bit_force, bit_torque, contact_scan, contact_state, friction_force_axial,
    friction_torque, normal_force, normal_stiffness, regularization)
from drillsim.model import BeamModel, BitRockParams, ContactParams


class TestNormalForce:

    def test_no_indentation(self):
        """Test that there is no force at zero indentation, whatever the rate."""
        # Run
        force = normal_force(0.0, 3.0, ContactParams())

        # Assert
        assert force == 0.0

    def test_static_indentation(self):
        """Test the spring part of the shock law.

        Input:
        - delta=1e-4 m, delta_dot=0.
        Output:
        - -(1e10 * 1e-4 + 1e16 * 1e-12) = -1.01e6 N.
        """
        # Run
        force = normal_force(1e-4, 0.0, ContactParams())

        # Assert
        assert force == pytest.approx(-1.01e6)

    def test_damping_term(self):
        """Test that a unit indentation rate adds ``-c |delta|^3`` = -1e-6 N."""
        # Run
        static = normal_force(1e-4, 0.0, ContactParams())
        moving = normal_force(1e-4, 1.0, ContactParams())

        # Assert
        assert moving - static == pytest.approx(-1e-6)

    def test_damping_is_dissipative(self):
        """Test that the damping force does negative work over a contact cycle."""
        # Setup
        contact = ContactParams(k_FS1=0.0, k_FS2=0.0)
        t = np.linspace(0, np.pi, 2001)
        delta = 1e-3 * np.sin(t)
        delta_dot = 1e-3 * np.cos(t)

        # Run
        power = normal_force(delta, delta_dot, contact) * delta_dot
        work = trapezoid(power, t)

        # Assert
        assert work <= 0


def test_friction_force_axial():
    """Test the magnitude convention of the axial friction.

    Input:
    - |F_n| = 1.01e6 N, mu=0.25.
    Output:
    - -2.525e5 N for positive velocity, opposite for negative, zero at rest.
    """
    # Setup
    contact = ContactParams()

    # Run
    forward = friction_force_axial(-1.01e6, 0.3, contact)
    backward = friction_force_axial(-1.01e6, -0.3, contact)
    still = friction_force_axial(-1.01e6, 0.0, contact)

    # Assert
    assert forward == pytest.approx(-2.525e5)
    assert backward == pytest.approx(2.525e5)
    assert still == 0


def test_friction_torque():
    """Test the friction torque magnitude ``mu |F_n| R_bh`` ~ 2.399e4 N m."""
    # Setup
    contact = ContactParams()

    # Run
    torque = friction_torque(-1.01e6, 6.0, 0.095, contact)
    doubled = friction_torque(-1.01e6, 6.0, 0.19, contact)

    # Assert
    assert torque == pytest.approx(-0.25 * 1.01e6 * 0.095)
    assert abs(torque) == pytest.approx(2.399e4, rel=1e-3)
    assert doubled == pytest.approx(2 * torque)
    assert friction_torque(-1.01e6, 0.0, 0.095, contact) == 0


class TestBitForce:

    def test_nominal_velocity(self):
        """Test the force at the nominal velocity 1/180 m/s, ~ -2.6749e4 N."""
        # Run
        force = bit_force(1 / 180, BitRockParams())

        # Assert
        assert force == pytest.approx(30e3 * (np.exp(-400 / 180) - 1))
        assert force == pytest.approx(-2.6749e4, rel=1e-4)

    def test_non_positive_velocity(self):
        """Test that the bit has no force when it does not move forward."""
        # Run
        force = bit_force(np.array([-1.0, 0.0, 1e-12]), BitRockParams())

        # Assert
        np.testing.assert_allclose(force, [0.0, 0.0, 0.0], atol=1e-4)

    def test_monotone_and_bounded(self):
        """Test that the force decreases with velocity and stays above ``-Gamma_BR``."""
        # Setup
        velocities = np.linspace(0.0, 0.1, 200)

        # Run
        force = bit_force(velocities, BitRockParams())

        # Assert
        assert np.all(np.diff(force) <= 0)
        assert force.min() >= -30e3


def test_regularization():
    """Test the smooth sign function.

    Output:
    - xi(0) = 0, xi(1) = tanh(1) + 1 ~ 1.76159, odd, bounded by 2.17 with its maximum
      close to 1.
    """
    # Setup
    grid = np.linspace(-10, 10, 20001)

    # Run
    values = regularization(grid)

    # Assert
    assert regularization(0.0) == 0
    assert regularization(1.0) == pytest.approx(1.76159, abs=1e-5)
    np.testing.assert_allclose(regularization(-grid), -values)
    assert np.abs(values).max() < 2.17
    assert abs(abs(grid[np.argmax(values)]) - 1) < 0.5


def test_bit_torque():
    """Test that the bit torque opposes the rotation and vanishes at rest."""
    # Setup
    bit_rock = BitRockParams()

    # Run
    torque = bit_torque(1.0, -2.6749e4, 0.095, bit_rock)

    # Assert
    assert torque == pytest.approx(-0.4 * 2.6749e4 * 0.095 * (np.tanh(1.0) + 1.0))
    assert bit_torque(0.0, -2.6749e4, 0.095, bit_rock) == 0


def test_contact_state_direction():
    """Test the lateral direction and indentation rate."""
    # Run
    state = contact_state(
        np.array([0.0, 0.03, 0.0]), np.array([0.0, 0.04, 0.01]),
        np.array([1.0, 0.3, 0.0]), np.array([0.0, 0.4, 0.0]), 0.015)

    # Assert
    np.testing.assert_allclose(state.r, [0.0, 0.05, 0.01])
    np.testing.assert_allclose(state.direction, [[0, 0], [0.6, 0.8], [0, 1]])
    np.testing.assert_allclose(state.delta_dot, [0.0, 0.5, 0.0])
    np.testing.assert_array_equal(state.in_contact, [False, True, False])


def test_normal_stiffness_only_active_nodes():
    """Test that the contact tangent is zero away from the wall."""
    # Setup
    state = contact_state(np.array([0.0, 0.0151]), np.zeros(2), np.zeros(2), np.zeros(2), 0.015)

    # Run
    stiffness = normal_stiffness(state, ContactParams(), a1=1.0)

    # Assert
    assert stiffness[0] == 0
    assert stiffness[1] == pytest.approx(1e10 + 3 * 1e16 * 1e-8 + 1e6 * 1e-12, rel=1e-6)


class TestContactScan:

    def test_all_nodes_inside_gap(self):
        """Test that nodes inside the gap get no wall efforts."""
        # Setup
        model = BeamModel()
        nodal = np.zeros((3, 6))
        nodal[:, 1] = 0.01
        rates = np.zeros((3, 6))

        # Run
        efforts = contact_scan(nodal, rates, model)

        # Assert
        assert efforts.state.n_active == 0
        assert not efforts.nodal_components().any()

    def test_single_node_in_contact(self):
        """Test the force of one node pushed against the wall along ``y``.

        Input:
        - node 1 with v = gap + 1e-4 and w = 0, rotating and moving forward.
        Output:
        - lateral force along -y with magnitude 1.01e6 N, friction opposing motion.
        """
        # Setup
        model = BeamModel()
        nodal = np.zeros((3, 6))
        nodal[1, 1] = model.gap + 1e-4
        rates = np.zeros((3, 6))
        rates[:, 0] = 1.0
        rates[:, 3] = 2.0

        # Run
        efforts = contact_scan(nodal, rates, model)

        # Assert
        components = efforts.nodal_components()
        assert components[1, 1] == pytest.approx(-1.01e6, rel=1e-6)
        assert components[1, 2] == 0
        assert components[1, 0] == pytest.approx(-0.25 * 1.01e6, rel=1e-6)
        assert components[1, 3] < 0
        assert not components[[0, 2]].any()

    def test_bit_efforts_on_last_node(self):
        """Test that the bit force and torque are read from the last node rates."""
        # Setup
        model = BeamModel()
        nodal = np.zeros((3, 6))
        rates = np.zeros((3, 6))
        rates[-1, 0] = 1 / 180
        rates[-1, 3] = 1.0

        # Run
        efforts = contact_scan(nodal, rates, model)

        # Assert
        assert efforts.bit_force == pytest.approx(-2.6749e4, rel=1e-4)
        assert efforts.bit_torque < 0


class TestShockLog:

    def test_two_episodes(self):
        """Test that two separate contact episodes of one node give two events."""
        # Setup
        log = ShockLog([0.0, 1.0])
        delta = [-1, 1, 1, -1, -1, 1, -1]

        # Run
        for step, value in enumerate(delta):
            log.update(0.1 * step, [False, value > 0])

        # Assert
        assert len(log.events) == 2
        assert log.events[0].entry == pytest.approx(0.1)
        assert log.events[0].exit == pytest.approx(0.3)
        assert all(event.node == 1 and event.x == 1.0 for event in log.events)

    def test_close_open_episodes(self):
        """Test that ``close`` ends the episodes still open at the final time."""
        # Setup
        log = ShockLog([0.0, 1.0, 2.0])
        log.update(0.0, [False, False, False])
        log.update(0.5, [True, False, True])

        # Run
        log.close(1.0)

        # Assert
        frame = log.to_frame()
        assert list(frame['node']) == [0, 2]
        assert list(frame['t_exit']) == [1.0, 1.0]
        assert log.n_open == 0
        np.testing.assert_array_equal(log.counts_per_node(), [1, 0, 1])
