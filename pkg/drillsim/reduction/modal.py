"""Normal modes of the free-free column and the reduced-order model built on them."""

import dataclasses
import logging
import math

import numpy as np
import pandas as pd
import scipy.linalg

from drillsim.errors import EigenSolverError, ParameterError
from drillsim.fem.assembly import rigid_body_modes
from drillsim.fem.mesh import THETA_X, THETA_Y, THETA_Z, U, V, W

LOGGER = logging.getLogger(__name__)

RIGID_OMEGA2_THRESHOLD = (2 * math.pi * 1e-3) ** 2
RIGID_NOISE = 1e-12
RIGID = 'rigid'
FLEXURAL = 'flexural'
TORSIONAL = 'torsional'
LONGITUDINAL = 'longitudinal'
CLASSES = (RIGID, FLEXURAL, TORSIONAL, LONGITUDINAL)
RIGID_FAMILIES = (LONGITUDINAL, TORSIONAL, FLEXURAL, FLEXURAL, FLEXURAL, FLEXURAL)

DEGENERACY_RTOL = 1e-6


@dataclasses.dataclass(frozen=True)
class ModeTable:
    """Mass-normalized normal modes sorted by increasing frequency.

    Args:
        omega2 (numpy.ndarray):
            Eigenvalues, squared circular frequencies in rad2/s2.
        shapes (numpy.ndarray):
            Mode shapes, one column per mode.
        length (float):
            Column length in m.
        c_L (float):
            Longitudinal wave speed in m/s.
        families (numpy.ndarray or None):
            Dominant DOF family of every mode.
        fractions (numpy.ndarray or None):
            Kinetic energy fractions of the axial, torsional and flexural DOFs,
            shape ``(n_modes, 3)``.
    """

    omega2: np.ndarray
    shapes: np.ndarray
    length: float
    c_L: float
    families: np.ndarray = None
    fractions: np.ndarray = None

    def __len__(self):
        return len(self.omega2)

    @property
    def omega(self):
        """Circular frequencies in rad/s, zero for rigid modes."""
        return np.sqrt(np.maximum(self.omega2, 0.0))

    @property
    def frequency(self):
        """Frequencies in Hz."""
        return self.omega / (2 * math.pi)

    @property
    def reduced_frequency(self):
        """Dimensionless frequencies ``f L / c_L``."""
        return self.frequency * self.length / self.c_L

    @property
    def is_rigid(self):
        return self.omega2 < RIGID_OMEGA2_THRESHOLD

    @property
    def classes(self):
        """Class of every mode: rigid or the dominant DOF family."""
        if self.families is None:
            raise ValueError('The modes have not been classified yet.')

        return np.where(self.is_rigid, RIGID, self.families)

    def to_frame(self, selected=None):
        """Get the table as a ``pandas.DataFrame``.

        Args:
            selected (numpy.ndarray or None):
                Indices of the modes kept in a reduced model. If given, a ``selected``
                column flags them.
        """
        frame = pd.DataFrame({
            'index': np.arange(len(self)),
            'f_n': self.frequency,
            'f_hat': self.reduced_frequency,
            'class': self.classes,
            'family': self.families,
        })
        if selected is not None:
            frame['selected'] = np.isin(frame['index'], selected).astype(int)

        return frame


def _normalize(shapes, mass):
    modal_mass = np.einsum('in,in->n', shapes, mass @ shapes)
    shapes = shapes / np.sqrt(modal_mass)
    largest = np.argmax(np.abs(shapes), axis=0)
    signs = np.sign(shapes[largest, np.arange(shapes.shape[1])])
    return shapes * np.where(signs == 0, 1.0, signs)


def solve_eigen(system, n_wanted=None, max_reduced_frequency=None):
    """Solve the generalized eigenproblem ``K phi = omega^2 M phi`` of the free column.

    The rigid-body eigenvectors returned by the solver are replaced with the exact rigid
    motions of the column, which span the same space.

    Args:
        system (AssembledSystem):
            Constant operators.
        n_wanted (int or None):
            Number of lowest modes to compute.
        max_reduced_frequency (float or None):
            Compute every mode with ``f L / c_L`` up to this value instead. Used when
            ``n_wanted`` is not given; if both are ``None`` every mode is computed.

    Returns:
        ModeTable

    Raises:
        EigenSolverError:
            If the solver fails.
    """
    mesh, model = system.mesh, system.model
    mass, stiffness = system.M.toarray(), system.K.toarray()
    options = {}
    if n_wanted is not None:
        if n_wanted < 1:
            raise ParameterError(f'n_wanted must be >= 1, got {n_wanted}')

        options['subset_by_index'] = [0, min(n_wanted, mesh.n_dofs) - 1]
    elif max_reduced_frequency is not None:
        omega_max = 2 * math.pi * max_reduced_frequency * model.moduli.c_L / mesh.length
        options['subset_by_value'] = [-np.inf, omega_max ** 2]

    try:
        omega2, shapes = scipy.linalg.eigh(stiffness, mass, **options)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise EigenSolverError(f'Generalized eigenproblem failed: {error}') from error

    # Round-off on the zero eigenvalues grows with the stiffest element mode.
    noise = RIGID_NOISE * np.max(np.diag(stiffness) / np.diag(mass))
    rigid = omega2 < max(RIGID_OMEGA2_THRESHOLD, noise)
    rigid_modes = rigid_body_modes(mesh)
    if np.count_nonzero(rigid) == rigid_modes.shape[1]:
        shapes[:, rigid] = rigid_modes
        omega2[rigid] = 0.0
    else:
        LOGGER.warning(
            'Found %s rigid-body modes instead of %s', np.count_nonzero(rigid),
            rigid_modes.shape[1])

    shapes = _normalize(shapes, mass)
    LOGGER.info('Computed %s modes of the free-free column', len(omega2))
    return ModeTable(omega2, shapes, mesh.length, model.moduli.c_L)


def energy_fractions(shapes, system):
    """Kinetic energy fractions of the axial, torsional and flexural DOF families.

    Returns:
        numpy.ndarray:
            Array of shape ``(n_modes, 3)`` whose rows add up to one.
    """
    mesh = system.mesh
    families = [
        [U],
        [THETA_X],
        [V, W, THETA_Y, THETA_Z],
    ]
    energies = []
    for fields in families:
        dofs = np.sort(np.concatenate([mesh.field_dofs(field) for field in fields]))
        block = system.M[dofs][:, dofs]
        part = shapes[dofs]
        energies.append(np.einsum('in,in->n', part, block @ part))

    energies = np.column_stack(energies)
    return energies / energies.sum(axis=1, keepdims=True)


def classify_modes(table, system):
    """Label every mode with its dominant DOF family.

    A family dominates when it holds more than half of the kinetic energy of the mode.
    Modes without a dominant family are labelled flexural.

    Args:
        table (ModeTable):
            Computed modes.
        system (AssembledSystem):
            Constant operators the modes were computed from.

    Returns:
        ModeTable:
            Copy of the table with ``families`` and ``fractions``.
    """
    fractions = energy_fractions(table.shapes, system)
    families = np.full(len(table), FLEXURAL, dtype=object)
    families[fractions[:, 0] > 0.5] = LONGITUDINAL
    families[fractions[:, 1] > 0.5] = TORSIONAL
    counts = {name: int(np.count_nonzero(families == name)) for name in CLASSES[1:]}
    LOGGER.debug('Mode families: %s', counts)
    return dataclasses.replace(table, families=families, fractions=fractions)


def degenerate_groups(frequency, is_rigid, rtol=DEGENERACY_RTOL):
    """Label runs of modes sharing one frequency with a common group number.

    Rigid modes form a single group. Elastic modes join the previous group when their
    frequencies agree within ``rtol``, which pairs the ``v`` and ``w`` bending modes of the
    axisymmetric section.

    Args:
        frequency (numpy.ndarray):
            Frequencies in Hz, sorted in increasing order.
        is_rigid (numpy.ndarray):
            Rigid flag of every mode.
        rtol (float):
            Relative tolerance on the frequencies.

    Returns:
        numpy.ndarray:
            Non-decreasing integer labels starting at 0.
    """
    labels = np.zeros(len(frequency), dtype=int)
    for position in range(1, len(frequency)):
        both_rigid = is_rigid[position] and is_rigid[position - 1]
        same = both_rigid or (
            not is_rigid[position] and not is_rigid[position - 1]
            and math.isclose(frequency[position], frequency[position - 1], rel_tol=rtol)
        )
        labels[position] = labels[position - 1] + (0 if same else 1)

    return labels


@dataclasses.dataclass(frozen=True)
class SelectionRule:
    """Which modes form the reduced basis.

    The basis holds the axial rigid-body modes, the torsional and longitudinal modes with
    ``0 < f L / c_L <= band_max``, and the flexural modes (transverse rigid-body motions
    included) with ``f L / c_L <= flexural_cutoff L / c_L``, that is up to ``flexural_cutoff``
    Hz. Flexural modes of equal frequency are kept or dropped together. When
    ``reduced_dimension`` is set, flexural groups are taken in increasing frequency until it is
    reached; a group straddling the target is kept whole.

    Args:
        band_max (float):
            Upper bound of the dimensionless band of axial and torsional modes.
        flexural_cutoff (float):
            Highest frequency of the flexural modes in Hz.
        reduced_dimension (int or None):
            Target dimension of the reduced basis.
        tolerance (float):
            Relative tolerance on the band bound.
    """

    band_max: float = 4.0
    flexural_cutoff: float = 5.0
    reduced_dimension: int = None
    tolerance: float = 1e-3

    def select(self, table):
        """Indices of the selected modes, in increasing frequency order.

        Raises:
            ParameterError:
                If the selection is empty or cannot reach ``reduced_dimension``.
        """
        classes, families = table.classes, table.families
        f_hat, frequency = table.reduced_frequency, table.frequency
        limit = self.band_max * (1 + self.tolerance)

        axial_rigid = (classes == RIGID) & (families != FLEXURAL)
        in_band = (classes != RIGID) & (families != FLEXURAL) & (f_hat > 0) & (f_hat <= limit)
        flexural = np.flatnonzero(families == FLEXURAL)
        fixed = np.flatnonzero(axial_rigid | in_band)
        groups = degenerate_groups(frequency[flexural], table.is_rigid[flexural])

        if self.reduced_dimension is None:
            kept = groups[frequency[flexural] <= self.flexural_cutoff]
        else:
            n_flexural = self.reduced_dimension - len(fixed)
            if n_flexural < 0 or n_flexural > len(flexural):
                raise ParameterError(
                    f'Cannot build a reduced basis of dimension {self.reduced_dimension}: '
                    f'{len(fixed)} axial and torsional modes and {len(flexural)} flexural '
                    'modes are available'
                )

            kept = groups[:n_flexural]

        chosen = flexural[np.isin(groups, kept)]
        n_red = len(fixed) + len(chosen)
        if self.reduced_dimension is not None and n_red != self.reduced_dimension:
            LOGGER.warning('Reduced dimension %s splits a pair of flexural modes, using %s',
                           self.reduced_dimension, n_red)

        selected = np.sort(np.concatenate([fixed, chosen]))
        if len(selected) == 0:
            raise ParameterError('The mode selection is empty')

        return selected

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class ReducedSystem:
    """Operators of the reduced-order model.

    The reduced mass is the identity, the reduced stiffness holds the squared frequencies on
    its diagonal and the reduced damping is ``c`` times the identity.

    Args:
        Phi (numpy.ndarray):
            Projection basis, shape ``(n_dofs, n_red)``.
        omega2 (numpy.ndarray):
            Squared frequencies of the basis vectors.
        table (ModeTable):
            Full mode table.
        selected (numpy.ndarray):
            Indices of the basis vectors in ``table``.
        system (AssembledSystem):
            Full-model operators.
    """

    Phi: np.ndarray
    omega2: np.ndarray
    table: ModeTable
    selected: np.ndarray
    system: object
    mass_projector: np.ndarray = dataclasses.field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'mass_projector', np.asarray((self.system.M @ self.Phi).T))

    @property
    def n_red(self):
        return self.Phi.shape[1]

    @property
    def mesh(self):
        return self.system.mesh

    @property
    def model(self):
        return self.system.model

    @property
    def m_r(self):
        return np.ones(self.n_red)

    @property
    def c_r(self):
        return self.model.material.c * np.ones(self.n_red)

    @property
    def k_r(self):
        return self.omega2

    @property
    def M_r(self):
        return np.diag(self.m_r)

    @property
    def C_r(self):
        return np.diag(self.c_r)

    @property
    def K_r(self):
        return np.diag(self.k_r)

    @property
    def B_r(self):
        return self.system.B_full @ self.Phi

    @property
    def F_g_r(self):
        return self.Phi.T @ self.system.F_g

    @property
    def classes(self):
        return self.table.classes[self.selected]

    def project(self, vector):
        """Reduced coordinates of a full nodal vector, ``Phi^T M vector``."""
        return self.mass_projector @ vector

    def expand(self, q_r):
        """Full nodal vector of reduced coordinates, ``Phi q_r``."""
        return q_r @ self.Phi.T if np.ndim(q_r) > 1 else self.Phi @ q_r


def build_reduction(table, system, rule=None):
    """Build the reduced-order model from a classified mode table.

    Args:
        table (ModeTable):
            Classified modes.
        system (AssembledSystem):
            Full-model operators.
        rule (SelectionRule or None):
            Selection of the basis. Defaults to ``SelectionRule()``.

    Returns:
        ReducedSystem
    """
    rule = rule or SelectionRule()
    selected = rule.select(table)
    reduced = ReducedSystem(
        Phi=table.shapes[:, selected],
        omega2=table.omega2[selected],
        table=table,
        selected=selected,
        system=system,
    )
    counts = pd.Series(reduced.classes).value_counts().to_dict()
    LOGGER.info('Reduced model with %s modes: %s', reduced.n_red, counts)
    return reduced


def constrained_frequencies(reduced):
    """Natural frequencies of the reduced model with the boundary constraints applied.

    Returns:
        numpy.ndarray:
            Frequencies in Hz sorted in increasing order.
    """
    basis = scipy.linalg.null_space(reduced.B_r)
    stiffness = basis.T @ (reduced.k_r[:, None] * basis)
    mass = basis.T @ basis
    try:
        omega2 = scipy.linalg.eigh(stiffness, mass, eigvals_only=True)
    except np.linalg.LinAlgError as error:
        raise EigenSolverError(f'Constrained eigenproblem failed: {error}') from error

    return np.sqrt(np.maximum(omega2, 0.0)) / (2 * math.pi)


def modal_density(table, band_max=4.0, bins=8):
    """Count the modes of every class in bins of dimensionless frequency.

    Args:
        table (ModeTable):
            Classified modes.
        band_max (float):
            Upper bound of the band ``[0, band_max]``.
        bins (int):
            Number of bins.

    Returns:
        pandas.DataFrame:
            One row per bin with its bounds and one count column per class.
    """
    edges = np.linspace(0.0, band_max, bins + 1)
    f_hat = table.reduced_frequency
    classes = table.classes
    counts = {'f_hat_min': edges[:-1], 'f_hat_max': edges[1:]}
    for name in CLASSES:
        values = f_hat[classes == name]
        counts[name] = np.histogram(values, bins=edges)[0]

    return pd.DataFrame(counts)


def modal_analysis(system, rule=None, n_wanted=None):
    """Solve, classify and select the modes of the column.

    The eigenproblem covers the axial and torsional band of ``rule``; ``n_wanted`` overrides
    the number of computed modes.

    Returns:
        ReducedSystem
    """
    rule = rule or SelectionRule()
    if n_wanted is None:
        table = solve_eigen(system, max_reduced_frequency=rule.band_max * (1 + 2 * rule.tolerance))
    else:
        table = solve_eigen(system, n_wanted=n_wanted)

    table = classify_modes(table, system)
    return build_reduction(table, system, rule)
