"""Tests for the drillsim.analysis.optimization module."""
import math
from unittest.mock import Mock, patch

import numpy as np
import pandas as pd
import pytest

from drillsim.analysis.optimization import (
    OperatingWindow, optimize_deterministic, optimize_robust, summarize_trajectory)
from drillsim.dynamics.errors import ConvergenceError
from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.simulation import simulate
from drillsim.errors import InfeasibleWindowError, ParameterError
from drillsim.model import OperatingPoint
from drillsim.uq.distributions import StochasticBitRock
from tests.utils import cached_reduced

PARAMS = NewmarkParams(dt_nominal=2e-4)
SMALL_WINDOW = OperatingWindow(V0_min=0.01, V0_max=0.03, Omega_min=1.0, Omega_max=3.0,
                               n_V0=3, n_Omega=3)


def _fake_summary(trajectory, model):
    """Rate of penetration equal to ``V0`` and stress growing with ``Omega``."""
    return {
        'rop': trajectory.V0,
        'rop_mean': trajectory.V0,
        'efficiency': 0.5,
        'sigma_vm_max': trajectory.Omega * 100e6,
    }


def _fake_simulate(reduced, op_point, **kwargs):
    return op_point


class TestOperatingWindow:

    def test_defaults(self):
        """Test the default window of imposed velocities."""
        # Run
        window = OperatingWindow()

        # Assert
        np.testing.assert_allclose(window.V0_grid[[0, -1]], [1 / 360, 1 / 90])
        np.testing.assert_allclose(window.Omega_grid[[0, -1]], [3 * math.pi / 2, 7 * math.pi / 3])
        assert len(window.points()) == 49

    def test_points_order(self):
        """Test that the points are listed row by row of ``V0``."""
        # Run
        points = SMALL_WINDOW.points()

        # Assert
        assert [(i, j) for i, j, _ in points[:4]] == [(0, 0), (0, 1), (0, 2), (1, 0)]
        assert points[3][2].V0 == pytest.approx(0.02)
        assert points[3][2].Omega == 1.0

    def test_single_point(self):
        """Test a window collapsed to one operating point."""
        # Run
        window = OperatingWindow(V0_min=0.01, V0_max=0.01, Omega_min=2.0, Omega_max=2.0,
                                 n_V0=1, n_Omega=1)

        # Assert
        assert window.points() == [(0, 0, OperatingPoint(V0=0.01, Omega=2.0))]

    def test_invalid(self):
        """Test that every violation of the window is reported at once."""
        # Run and Assert
        message = (
            'Invalid OperatingWindow:\n - V0_min must be >= 0\n'
            ' - n_Omega must be a positive integer'
        )
        with pytest.raises(ParameterError, match=message):
            OperatingWindow(V0_min=-1.0, n_Omega=0)

    def test_empty_range(self):
        """Test that a multi-point range needs distinct bounds."""
        # Run and Assert
        with pytest.raises(ParameterError, match='Omega_max must be greater than Omega_min'):
            OperatingWindow(Omega_min=2.0, Omega_max=2.0)


@patch('drillsim.analysis.optimization.summarize_trajectory', side_effect=_fake_summary)
@patch('drillsim.analysis.optimization.simulate', side_effect=_fake_simulate)
class TestOptimizeDeterministic:

    def test_optimum(self, simulate_mock, summarize_mock):
        """Test that the fastest point under the strength limit is selected.

        Input:
            - a 3 x 3 window where the stress is ``Omega * 100 MPa``
            - an ultimate strength of 250 MPa
        Output:
            - the largest ``V0`` with ``Omega`` at most 2
        """
        # Run
        result = optimize_deterministic(cached_reduced(), SMALL_WINDOW, uts=250e6)

        # Assert
        optimum = result.optimum
        assert optimum['V0'] == pytest.approx(0.03)
        assert optimum['Omega'] == pytest.approx(2.0)
        assert result.frame['admissible'].sum() == 6
        np.testing.assert_allclose(result.frame['margin'][:3], [150e6, 50e6, -50e6])
        assert simulate_mock.call_count == 9

    def test_maps(self, simulate_mock, summarize_mock):
        """Test the pivoted map and the contour data."""
        # Run
        result = optimize_deterministic(cached_reduced(), SMALL_WINDOW, uts=1e9)

        # Assert
        rop_map = result.map('rop')
        assert rop_map.shape == (3, 3)
        np.testing.assert_allclose(rop_map.iloc[1].to_numpy(), 0.02)
        contours = result.contours(['rop', 'sigma_vm_max'])
        assert list(contours.columns) == ['V0', 'Omega', 'rop', 'sigma_vm_max']
        assert result.summary()['n_admissible'] == 9

    def test_infeasible(self, simulate_mock, summarize_mock):
        """Test that a window without admissible point raises with the maps attached."""
        # Run and Assert
        with pytest.raises(InfeasibleWindowError) as error:
            optimize_deterministic(cached_reduced(), SMALL_WINDOW, uts=1e6)

        assert len(error.value.result.frame) == 9
        assert not error.value.result.frame['admissible'].any()

    def test_failed_point(self, simulate_mock, summarize_mock, caplog):
        """Test that a diverging run marks its point as failed and not admissible."""
        # Setup
        def flaky(reduced, op_point, **kwargs):
            if op_point.Omega == 1.0 and op_point.V0 == 0.03:
                raise ConvergenceError('no convergence')

            return op_point

        simulate_mock.side_effect = flaky

        # Run
        result = optimize_deterministic(cached_reduced(), SMALL_WINDOW, uts=250e6)

        # Assert
        failed = result.frame[result.frame['status'] == 'failed']
        assert len(failed) == 1
        assert not failed['admissible'].any()
        assert result.optimum['V0'] == pytest.approx(0.03)
        assert result.optimum['Omega'] == pytest.approx(2.0)
        assert 'failed' in caplog.text


def test_optimize_deterministic_single_run():
    """Test a one-point window on a short real run."""
    # Setup
    window = OperatingWindow(V0_min=0.05, V0_max=0.05, Omega_min=2.0, Omega_max=2.0,
                             n_V0=1, n_Omega=1)

    # Run
    result = optimize_deterministic(cached_reduced(), window, params=PARAMS, tf=2e-3)

    # Assert
    row = result.frame.iloc[0]
    assert row['status'] == 'ok'
    assert row['admissible']
    assert row['sigma_vm_max'] > 0
    assert row['margin'] == pytest.approx(650e6 - row['sigma_vm_max'])


def test_summarize_trajectory():
    """Test the scalar results of a short real run."""
    # Setup
    reduced = cached_reduced()
    trajectory = simulate(
        reduced, OperatingPoint(V0=0.05, Omega=2.0), params=PARAMS, tf=2e-3)

    # Run
    summary = summarize_trajectory(trajectory, reduced.model)

    # Assert
    assert set(summary) == {'rop', 'rop_mean', 'efficiency', 'sigma_vm_max'}
    assert summary['rop'] >= summary['rop_mean'] - 1e-12
    assert summary['sigma_vm_max'] > 0


def _fake_monte_carlo(reduced, stochastic, n_samples, op_point, **kwargs):
    stresses = np.linspace(0, 2, n_samples) * op_point.Omega * 100e6
    run = Mock(n_failed=0)
    run.successful = pd.DataFrame({
        'rop': np.full(n_samples, op_point.V0),
        'efficiency': np.full(n_samples, 0.2),
        'sigma_vm_max': stresses,
    })
    return run


@patch('drillsim.analysis.optimization.run_monte_carlo', side_effect=_fake_monte_carlo)
class TestOptimizeRobust:

    def test_probability_constraint(self, mc_mock):
        """Test that the admissible points reach the requested probability.

        Input:
            - 11 realizations per point with stresses spread on ``[0, 2 Omega] * 100 MPa``
            - an ultimate strength of 250 MPa and ``p_risk = 0.1``
        Output:
            - only ``Omega = 1`` is admissible, all of its realizations pass
        """
        # Run
        result = optimize_robust(
            cached_reduced(), StochasticBitRock(), 11, SMALL_WINDOW, p_risk=0.1, uts=250e6)

        # Assert
        frame = result.frame
        np.testing.assert_allclose(frame['probability'][:3], [1.0, 7 / 11, 5 / 11])
        assert frame['admissible'].sum() == 3
        assert result.optimum['V0'] == pytest.approx(0.03)
        assert result.optimum['Omega'] == pytest.approx(1.0)
        assert result.objective == 'expected_rop'
        assert mc_mock.call_args.kwargs['summarize'] is summarize_trajectory

    def test_larger_risk(self, mc_mock):
        """Test that accepting more risk opens the window."""
        # Run
        result = optimize_robust(
            cached_reduced(), StochasticBitRock(), 11, SMALL_WINDOW, p_risk=0.5, uts=250e6)

        # Assert
        assert result.frame['admissible'].sum() == 6
        assert result.optimum['V0'] == pytest.approx(0.03)

    def test_failed_realizations_count_as_exceedances(self, mc_mock):
        """Test that failed realizations lower the probability of staying under ``uts``.

        Input:
            - 6 successful realizations far below the strength and 5 failed ones
            - an ultimate strength of 250 MPa and ``p_risk = 0.1``
        Output:
            - probability ``6 / 11`` and no admissible point
        """
        # Setup
        def failing(reduced, stochastic, n_samples, op_point, **kwargs):
            run = Mock(n_failed=5)
            run.successful = pd.DataFrame({
                'rop': np.full(6, op_point.V0),
                'efficiency': np.full(6, 0.2),
                'sigma_vm_max': np.full(6, 1e6),
            })
            return run

        mc_mock.side_effect = failing

        # Run
        with pytest.raises(InfeasibleWindowError) as error:
            optimize_robust(
                cached_reduced(), StochasticBitRock(), 11, SMALL_WINDOW, p_risk=0.1, uts=250e6)

        # Assert
        frame = error.value.result.frame
        np.testing.assert_allclose(frame['probability'], 6 / 11)
        assert (frame['n_failed'] == 5).all()
        assert not frame['admissible'].any()

    @pytest.mark.parametrize('p_risk', [0.0, 1.0, 1.5])
    def test_invalid_risk(self, mc_mock, p_risk):
        """Test that the risk must be a probability strictly between 0 and 1."""
        # Run and Assert
        with pytest.raises(ParameterError, match='p_risk must satisfy 0 < p_risk < 1'):
            optimize_robust(cached_reduced(), StochasticBitRock(), 11, p_risk=p_risk)

        mc_mock.assert_not_called()


def test_optimize_robust_zero_dispersion_matches_deterministic():
    """Test that without dispersion the robust search reproduces the deterministic one."""
    # Setup
    window = OperatingWindow(V0_min=0.05, V0_max=0.05, Omega_min=2.0, Omega_max=2.0,
                             n_V0=1, n_Omega=1)
    stochastic = StochasticBitRock(delta_alpha=0.0, delta_Gamma=0.0, delta_mu=0.0)

    # Run
    deterministic = optimize_deterministic(cached_reduced(), window, params=PARAMS, tf=2e-3)
    robust = optimize_robust(
        cached_reduced(), stochastic, 2, window, params=PARAMS, tf=2e-3)

    # Assert
    expected = deterministic.frame.iloc[0]
    row = robust.frame.iloc[0]
    assert row['expected_rop'] == pytest.approx(expected['rop'], rel=1e-12)
    assert row['sigma_vm_mean'] == pytest.approx(expected['sigma_vm_max'], rel=1e-12)
    assert row['probability'] == 1.0
