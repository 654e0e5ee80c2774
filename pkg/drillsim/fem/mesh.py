"""Uniform one-dimensional mesh of the column and its degree-of-freedom numbering."""

import dataclasses
import logging

import numpy as np

from drillsim.errors import ParameterError

LOGGER = logging.getLogger(__name__)

DOFS_PER_NODE = 6
FIELDS = ('u', 'v', 'w', 'theta_x', 'theta_y', 'theta_z')
U, V, W, THETA_X, THETA_Y, THETA_Z = range(DOFS_PER_NODE)


@dataclasses.dataclass(frozen=True)
class Mesh:
    """Uniform mesh of ``n_elem`` two-node beam elements on ``[0, length]``.

    Node ``m`` owns the global degrees of freedom ``6 m .. 6 m + 5`` in the order
    ``u, v, w, theta_x, theta_y, theta_z``.

    Args:
        length (float):
            Length of the column in m.
        n_elem (int):
            Number of elements.
    """

    length: float
    n_elem: int

    @property
    def n_nodes(self):
        return self.n_elem + 1

    @property
    def n_dofs(self):
        return DOFS_PER_NODE * self.n_nodes

    @property
    def element_length(self):
        return self.length / self.n_elem

    @property
    def node_coords(self):
        """Node positions in m."""
        return np.linspace(0.0, self.length, self.n_nodes)

    @property
    def dof_map(self):
        """Array of shape ``(n_elem, 12)`` with the global DOFs of every element."""
        first = DOFS_PER_NODE * np.arange(self.n_elem)[:, None]
        return first + np.arange(2 * DOFS_PER_NODE)[None, :]

    def dof(self, node, field):
        """Global index of ``field`` (index or name) at ``node``.

        Negative node indices count from the end of the column.
        """
        if isinstance(field, str):
            field = FIELDS.index(field)

        node = node % self.n_nodes
        return DOFS_PER_NODE * node + field

    def field_dofs(self, field):
        """Global indices of ``field`` at every node, ordered along the column."""
        if isinstance(field, str):
            field = FIELDS.index(field)

        return DOFS_PER_NODE * np.arange(self.n_nodes) + field

    def nodal_field(self, q, field):
        """Extract the nodal values of ``field`` from one or many full state vectors.

        Args:
            q (numpy.ndarray):
                Array whose last axis has ``n_dofs`` entries.
            field (int or str):
                Field index or name.

        Returns:
            numpy.ndarray:
                Array whose last axis has ``n_nodes`` entries.
        """
        return np.asarray(q)[..., self.field_dofs(field)]

    def to_dict(self):
        return {'length': self.length, 'n_elem': self.n_elem}


def build_mesh(geom, n_elem):
    """Build the uniform mesh of the column.

    Args:
        geom (GeometryParams):
            Column geometry.
        n_elem (int):
            Number of elements.

    Returns:
        Mesh

    Raises:
        ParameterError:
            If ``n_elem`` is not an integer or is smaller than 2.
    """
    if isinstance(n_elem, bool) or int(n_elem) != n_elem:
        raise ParameterError(f'n_elem must be an integer, got {n_elem!r}')
    if n_elem < 2:
        raise ParameterError(f'n_elem must be >= 2, got {n_elem}')

    mesh = Mesh(float(geom.L), int(n_elem))
    LOGGER.debug('Built mesh with %s elements and %s DOFs', mesh.n_elem, mesh.n_dofs)
    return mesh
