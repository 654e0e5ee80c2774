"""Utils for testing."""
import functools

import numpy as np

from drillsim.fem.assembly import assemble_constant_system
from drillsim.fem.contact import ContactState, NodalEfforts
from drillsim.fem.mesh import build_mesh
from drillsim.model import BeamModel, GeometryParams
from drillsim.reduction.modal import SelectionRule, build_reduction, classify_modes, solve_eigen


def build_reduced(length=10.0, n_elem=6, flexural_cutoff=200.0, model=None):
    """Reduced model of a short column with a generous flexural band."""
    model = model or BeamModel(geometry=GeometryParams(L=length))
    mesh = build_mesh(model.geometry, n_elem)
    system = assemble_constant_system(mesh, model)
    table = classify_modes(solve_eigen(system), system)
    return build_reduction(table, system, SelectionRule(flexural_cutoff=flexural_cutoff))


@functools.lru_cache(maxsize=None)
def cached_reduced(length=10.0, n_elem=6, flexural_cutoff=200.0):
    return build_reduced(length, n_elem, flexural_cutoff)


def quiet_efforts(n_nodes, contact_nodes=()):
    """Efforts without forces, flagging ``contact_nodes`` as touching the wall."""
    delta = -np.ones(n_nodes)
    delta[list(contact_nodes)] = 1e-6
    state = ContactState(
        r=np.zeros(n_nodes), delta=delta, delta_dot=np.zeros(n_nodes),
        direction=np.zeros((n_nodes, 2)))
    zeros = np.zeros(n_nodes)
    return NodalEfforts(state, zeros, zeros, zeros, 0.0, 0.0)


class ConstantForceEvaluator:
    """Force evaluator returning the same reduced force for every state.

    Args:
        reduced (ReducedSystem):
            Reduced model.
        force (numpy.ndarray or None):
            Reduced force. Zero if ``None``.
        contact (callable or None):
            Called with the reduced displacement, returns the nodes in contact.
    """

    def __init__(self, reduced, force=None, contact=None):
        self.reduced = reduced
        self.n_nodes = reduced.mesh.n_nodes
        self.force = np.zeros(reduced.n_red) if force is None else np.asarray(force)
        self.contact = contact
        self.calls = 0

    def __call__(self, q_r, q_dot_r, q_ddot_r, friction_sign=None):
        self.calls += 1
        nodes = self.contact(q_r) if self.contact else ()
        return self.force.copy(), quiet_efforts(self.n_nodes, nodes)

    def tangent(self, efforts, q_dot_r, a1):
        return np.zeros((self.reduced.n_red, self.reduced.n_red))

    def friction_sign(self, q_dot_r):
        return np.zeros((self.n_nodes, 2))
