"""Tests for the drillsim.dynamics.trajectory module."""
import numpy as np

from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.simulation import Integrator, imposed_state
from drillsim.dynamics.solver import SolverControls
from drillsim.model import OperatingPoint
from tests.utils import ConstantForceEvaluator, cached_reduced


def _rigid_run():
    reduced = cached_reduced()
    op_point = OperatingPoint(V0=0.2, Omega=1.5)
    evaluator = ConstantForceEvaluator(reduced)
    integrator = Integrator(
        reduced, evaluator, op_point, NewmarkParams(dt_nominal=1e-3), SolverControls())
    initial, efforts = integrator.start(*imposed_state(reduced, op_point, 0.0), 0.0)
    return integrator.run(initial, efforts, 0.01)


def test_to_frame():
    """Test the exported observables of a rigid drilling motion."""
    # Setup
    trajectory = _rigid_run()

    # Run
    frame = trajectory.to_frame(x_section=5.0)

    # Assert
    assert list(frame.columns) == [
        't', 'u_bit', 'u_dot_bit', 'theta_x_bit', 'theta_x_dot_bit', 'v', 'w', 'v_dot',
        'w_dot', 'lambda_1', 'lambda_4', 'n_contact',
    ]
    assert len(frame) == 11
    np.testing.assert_allclose(frame['u_dot_bit'], 0.2, rtol=1e-3)
    np.testing.assert_allclose(frame['theta_x_dot_bit'], 1.5, rtol=1e-3)
    assert not frame['n_contact'].any()


def test_nearest_node():
    """Test the node closest to an abscissa."""
    # Setup
    trajectory = _rigid_run()

    # Assert
    assert trajectory.nearest_node(0.0) == 0
    assert trajectory.nearest_node(5.1) == 3
    assert trajectory.nearest_node(10.0) == trajectory.mesh.n_nodes - 1


def test_kinetic_energy():
    """Test the kinetic energy of the rigid motion.

    Output:
    - ``(m V0^2 + J Omega^2) / 2`` with the mass and polar inertia of the column.
    """
    # Setup
    trajectory = _rigid_run()
    model = trajectory.reduced.model
    mass = model.material.rho * model.section.A * 10.0
    inertia = 2 * model.material.rho * model.section.I4 * 10.0

    # Run
    energy = trajectory.kinetic_energy()

    # Assert
    np.testing.assert_allclose(energy[0], 0.5 * (mass * 0.2 ** 2 + inertia * 1.5 ** 2))
