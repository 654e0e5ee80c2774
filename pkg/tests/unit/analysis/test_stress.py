"""Tests for the drillsim.analysis.stress module."""
from unittest.mock import Mock, patch

import numpy as np
import pytest

from drillsim.analysis.stress import (
    StressRecovery, station_points, stress_field, von_mises_max, von_mises_stress)
from drillsim.fem.forces import section_strains
from drillsim.fem.mesh import THETA_X, U
from drillsim.model import BeamModel
from tests.utils import cached_reduced

MODEL = BeamModel()


def _section_state(field, value):
    values = np.zeros((1, 6))
    derivatives = np.zeros((1, 6))
    derivatives[0, field] = value
    return values, derivatives


def test_station_points():
    """Test the eight stations of the outer radius."""
    # Run
    y, z = station_points(0.08)

    # Assert
    assert len(y) == 8
    np.testing.assert_allclose(np.hypot(y, z), 0.08)
    np.testing.assert_allclose([y[0], z[0]], [0.08, 0.0])
    np.testing.assert_allclose([y[2], z[2]], [0.0, 0.08], atol=1e-15)


def test_von_mises_uniaxial():
    """Test that a pure axial strain gives ``E eps``."""
    # Run
    result = von_mises_stress(1e-3, 0.0, 0.0, MODEL)

    # Assert
    assert result == pytest.approx(203e9 * 1e-3)


def test_von_mises_shear():
    """Test that a pure shear strain gives ``sqrt(3) 2 kappa_s G eps``."""
    # Setup
    shear = 2 * MODEL.material.kappa_s * MODEL.moduli.G

    # Run
    result = von_mises_stress(0.0, 1e-4, 0.0, MODEL)

    # Assert
    assert result == pytest.approx(np.sqrt(3) * shear * 1e-4)


def test_uniform_extension_same_at_every_station():
    """Test that a uniform axial stretch loads every station the same way.

    Input:
        - ``u' = 1e-4`` and every other field zero
    Output:
        - ``sigma_vm = E (u' + u'^2 / 2)`` at the eight stations
    """
    # Setup
    y, z = station_points(MODEL.geometry.R_ext)
    values, derivatives = _section_state(U, 1e-4)

    # Run
    sigma_vm = von_mises_stress(*section_strains(values, derivatives, y, z), MODEL)

    # Assert
    np.testing.assert_allclose(sigma_vm, 203e9 * (1e-4 + 0.5e-8), rtol=1e-12)


def test_torsion_rotation_invariant():
    """Test that a pure twist gives the same stress around the circumference."""
    # Setup
    values, derivatives = _section_state(THETA_X, 1e-3)
    y, z = station_points(MODEL.geometry.R_ext)
    y_rotated, z_rotated = station_points(MODEL.geometry.R_ext, offset=0.3)

    # Run
    sigma_vm = von_mises_stress(*section_strains(values, derivatives, y, z), MODEL)
    rotated = von_mises_stress(
        *section_strains(values, derivatives, y_rotated, z_rotated), MODEL)

    # Assert
    np.testing.assert_allclose(sigma_vm, sigma_vm[0, 0], rtol=1e-12)
    np.testing.assert_allclose(rotated, sigma_vm, rtol=1e-12)


class TestStressRecovery:

    def test_zero_state(self):
        """Test that the undeformed column is free of stress."""
        # Setup
        recovery = StressRecovery(cached_reduced())

        # Run
        field = recovery.field(np.zeros(cached_reduced().n_red))

        # Assert
        assert field.sigma_vm.shape == (6, 4, 8)
        assert field.max == 0.0

    def test_max_history_matches_field(self):
        """Test that the chunked history agrees with the field of every state."""
        # Setup
        reduced = cached_reduced()
        recovery = StressRecovery(reduced)
        rng = np.random.default_rng(1)
        states = 1e-4 * rng.standard_normal((5, reduced.n_red))

        # Run
        with patch('drillsim.analysis.stress.TIME_CHUNK', 2):
            history = recovery.max_history(states)

        # Assert
        expected = [recovery.field(state).max for state in states]
        np.testing.assert_allclose(history, expected, rtol=1e-12)


def test_stress_field_of_trajectory():
    """Test the exported field of one output of a run at rest."""
    # Setup
    reduced = cached_reduced()
    trajectory = Mock(reduced=reduced, times=np.array([0.0, 0.5]))
    trajectory.q = np.zeros((2, reduced.n_red))

    # Run
    field = stress_field(trajectory, 1)
    frame = field.to_frame()

    # Assert
    assert field.t == 0.5
    assert list(frame.columns) == ['x', 'angle', 'sigma_xx', 'sigma_xy', 'sigma_xz', 'sigma_vm']
    assert len(frame) == 6 * 4 * 8
    assert von_mises_max(trajectory) == 0.0
