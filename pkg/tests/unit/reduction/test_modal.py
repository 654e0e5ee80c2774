"""Tests for the drillsim.reduction.modal module."""
import logging
import math

import numpy as np
import pytest

from drillsim.errors import ParameterError
from drillsim.fem.assembly import assemble_constant_system
from drillsim.fem.mesh import build_mesh
from drillsim.model import BeamModel, GeometryParams
from drillsim.reduction.modal import (
    FLEXURAL, LONGITUDINAL, RIGID, TORSIONAL, ModeTable, SelectionRule, build_reduction,
    classify_modes, constrained_frequencies, degenerate_groups, modal_density, solve_eigen)


def _system(length=10.0, n_elem=20):
    model = BeamModel(geometry=GeometryParams(L=length))
    mesh = build_mesh(model.geometry, n_elem)
    return assemble_constant_system(mesh, model)


def _synthetic_table():
    """Mode table with ``L = c_L = 1`` so that ``f_hat`` equals ``f``."""
    frequency = np.array([0, 0, 0, 0, 0, 0, 0.287, 0.5, 1.0, 3.0, 4.0, 4.01, 6.0])
    families = np.array([
        LONGITUDINAL, TORSIONAL, FLEXURAL, FLEXURAL, FLEXURAL, FLEXURAL,
        TORSIONAL, LONGITUDINAL, FLEXURAL, FLEXURAL, LONGITUDINAL, TORSIONAL, FLEXURAL,
    ], dtype=object)
    omega2 = (2 * math.pi * frequency) ** 2
    return ModeTable(omega2, np.eye(len(frequency)), 1.0, 1.0, families=families)


def _paired_table():
    """Synthetic table whose flexural modes come in pairs of equal frequency."""
    frequency = np.array([
        0, 0, 0, 0, 0, 0, 0.287, 0.5, 1.0, 1.0, 4.0, 5.0, 5.0 * (1 + 1e-9), 6.0, 6.0])
    families = np.array([
        LONGITUDINAL, TORSIONAL, FLEXURAL, FLEXURAL, FLEXURAL, FLEXURAL, TORSIONAL,
        LONGITUDINAL, FLEXURAL, FLEXURAL, LONGITUDINAL, FLEXURAL, FLEXURAL, FLEXURAL, FLEXURAL,
    ], dtype=object)
    omega2 = (2 * math.pi * frequency) ** 2
    return ModeTable(omega2, np.eye(len(frequency)), 1.0, 1.0, families=families)


def test_degenerate_groups():
    """Test that rigid modes and modes of equal frequency share a group."""
    # Setup
    frequency = np.array([0.0, 1e-7, 1.0, 1.0 + 1e-9, 2.0, 3.0, 3.0])
    is_rigid = np.array([True, True, False, False, False, False, False])

    # Run
    groups = degenerate_groups(frequency, is_rigid)

    # Assert
    np.testing.assert_array_equal(groups, [0, 0, 1, 1, 2, 3, 3])


class TestSolveEigen:

    def test_mass_normalized_and_sorted(self):
        """Test that the modes are mass-normalized, stiffness-orthogonal and sorted.

        Output:
        - ``Phi^T M Phi = I`` and ``Phi^T K Phi = diag(omega^2)``.
        """
        # Setup
        system = _system()

        # Run
        table = solve_eigen(system)

        # Assert
        shapes = table.shapes
        mass = shapes.T @ system.M @ shapes
        stiffness = shapes.T @ system.K @ shapes
        np.testing.assert_allclose(mass, np.eye(len(table)), atol=1e-9)
        scale = table.omega2.max()
        np.testing.assert_allclose(stiffness, np.diag(table.omega2), atol=1e-9 * scale)
        assert np.all(np.diff(table.omega2) >= 0)
        assert len(table) == system.n_dofs

    def test_six_rigid_modes(self):
        """Test that the free-free column has six exact rigid-body modes."""
        # Setup
        system = _system()

        # Run
        table = solve_eigen(system, n_wanted=10)

        # Assert
        assert len(table) == 10
        assert np.count_nonzero(table.is_rigid) == 6
        assert not table.omega2[:6].any()
        rigid = table.shapes[:, :6]
        assert np.abs(system.K @ rigid).max() <= 1e-6 * np.abs(system.K).max()

    def test_sign_normalization(self):
        """Test that the largest component of every mode is positive."""
        # Setup
        system = _system()

        # Run
        table = solve_eigen(system, n_wanted=20)

        # Assert
        shapes = table.shapes
        largest = shapes[np.argmax(np.abs(shapes), axis=0), np.arange(shapes.shape[1])]
        assert np.all(largest > 0)

    def test_subset_by_value(self):
        """Test that only modes up to the requested dimensionless frequency are returned."""
        # Setup
        system = _system()

        # Run
        table = solve_eigen(system, max_reduced_frequency=1.0)

        # Assert
        assert 6 < len(table) < system.n_dofs
        assert table.reduced_frequency.max() <= 1.0

    def test_invalid_n_wanted(self):
        """Test that a non-positive number of modes is rejected."""
        # Run and Assert
        with pytest.raises(ParameterError, match='n_wanted must be >= 1'):
            solve_eigen(_system(), n_wanted=0)


class TestClassifyModes:

    def test_band_counts_and_analytic_frequencies(self):
        """Test the axial and torsional families against the free-free rod and shaft.

        Input:
        - 10 m column with 240 elements, modes up to ``f_hat = 4``.

        Output:
        - 8 longitudinal modes at ``n / 2`` and 13 torsional modes at ``n c_T / (2 c_L)``,
          within 1%.
        """
        # Setup
        system = _system(length=10.0, n_elem=240)
        model = system.model
        c_T = math.sqrt(model.material.kappa_s * model.moduli.G / model.material.rho)
        table = solve_eigen(system, max_reduced_frequency=4.0 * (1 + 2e-3))

        # Run
        table = classify_modes(table, system)

        # Assert
        classes = table.classes
        f_hat = table.reduced_frequency
        longitudinal = f_hat[classes == LONGITUDINAL]
        torsional = f_hat[classes == TORSIONAL]
        assert len(longitudinal) == 8
        assert len(torsional) == 13
        np.testing.assert_allclose(longitudinal, np.arange(1, 9) / 2, rtol=1e-2)
        expected = np.arange(1, 14) * c_T / (2 * model.moduli.c_L)
        np.testing.assert_allclose(torsional, expected, rtol=1e-2)
        assert c_T == pytest.approx(2910.6, rel=1e-3)
        assert torsional[0] == pytest.approx(0.2871, rel=1e-2)

    def test_rigid_families(self):
        """Test that the rigid modes carry the family of the motion they describe."""
        # Setup
        system = _system()
        table = solve_eigen(system, n_wanted=6)

        # Run
        table = classify_modes(table, system)

        # Assert
        assert list(table.classes) == [RIGID] * 6
        assert list(table.families) == [
            LONGITUDINAL, TORSIONAL, FLEXURAL, FLEXURAL, FLEXURAL, FLEXURAL]
        np.testing.assert_allclose(table.fractions.sum(axis=1), 1.0)

    def test_pure_patterns(self):
        """Test the classification of hand-built axial and torsional shapes."""
        # Setup
        system = _system()
        mesh = system.mesh
        shapes = np.zeros((mesh.n_dofs, 3))
        shapes[mesh.field_dofs('u'), 0] = np.cos(np.pi * mesh.node_coords / mesh.length)
        shapes[mesh.field_dofs('theta_x'), 1] = np.cos(np.pi * mesh.node_coords / mesh.length)
        shapes[mesh.field_dofs('v'), 2] = 1.0
        shapes[mesh.field_dofs('u'), 2] = 0.1
        table = ModeTable(np.ones(3), shapes, mesh.length, 5000.0)

        # Run
        table = classify_modes(table, system)

        # Assert
        assert list(table.classes) == [LONGITUDINAL, TORSIONAL, FLEXURAL]

    def test_classes_requires_families(self):
        """Test that an unclassified table has no classes."""
        # Setup
        table = ModeTable(np.ones(2), np.eye(2), 1.0, 1.0)

        # Run and Assert
        with pytest.raises(ValueError, match='not been classified'):
            table.classes


class TestSelectionRule:

    def test_select_default(self):
        """Test the band rule.

        Output:
        - Rigid modes, the axial and torsional modes up to ``f_hat = 4 (1 + 1e-3)`` and the
          flexural modes up to 5 Hz.
        """
        # Run
        selected = SelectionRule().select(_synthetic_table())

        # Assert
        np.testing.assert_array_equal(selected, np.arange(11))

    def test_select_reduced_dimension(self):
        """Test that a target dimension keeps the lowest flexural modes."""
        # Run
        selected = SelectionRule(reduced_dimension=9).select(_synthetic_table())

        # Assert
        np.testing.assert_array_equal(selected, [0, 1, 2, 3, 4, 5, 6, 7, 10])

    def test_select_reduced_dimension_extends(self):
        """Test that a target dimension can add flexural modes above the cutoff."""
        # Run
        selected = SelectionRule(reduced_dimension=12).select(_synthetic_table())

        # Assert
        np.testing.assert_array_equal(selected, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12])

    @pytest.mark.parametrize('dimension', [4, 13])
    def test_select_unreachable_dimension(self, dimension):
        """Test that unreachable target dimensions are rejected."""
        # Run and Assert
        with pytest.raises(ParameterError, match='Cannot build a reduced basis'):
            SelectionRule(reduced_dimension=dimension).select(_synthetic_table())

    def test_select_keeps_pairs_at_cutoff(self):
        """Test that a pair whose members straddle the cutoff is kept whole."""
        # Run
        selected = SelectionRule().select(_paired_table())

        # Assert
        np.testing.assert_array_equal(selected, np.arange(13))

    def test_select_reduced_dimension_keeps_pairs(self, caplog):
        """Test that a target dimension inside a pair is raised to keep the pair."""
        # Run
        with caplog.at_level(logging.WARNING, logger='drillsim.reduction.modal'):
            selected = SelectionRule(reduced_dimension=10).select(_paired_table())

        # Assert
        np.testing.assert_array_equal(selected, np.arange(11))
        assert 'splits a pair of flexural modes' in caplog.text

    def test_select_column_pairs(self):
        """Test that the bending modes of a real column are selected in pairs.

        Output:
            - an even number of elastic flexural modes for the cutoff rule and for a target
              dimension one above the rigid-only selection
        """
        # Setup
        system = _system()
        table = classify_modes(solve_eigen(system), system)
        rigid_only = len(SelectionRule(flexural_cutoff=1.0).select(table))

        # Run
        by_cutoff = build_reduction(table, system, SelectionRule(flexural_cutoff=100.0))
        by_dimension = build_reduction(
            table, system, SelectionRule(reduced_dimension=rigid_only + 1))

        # Assert
        for reduced in (by_cutoff, by_dimension):
            elastic = np.count_nonzero(np.asarray(reduced.classes) == FLEXURAL)
            assert elastic > 0
            assert elastic % 2 == 0

        assert by_dimension.n_red == rigid_only + 2

    def test_to_dict(self):
        """Test the dict representation."""
        # Assert
        assert SelectionRule().to_dict() == {
            'band_max': 4.0,
            'flexural_cutoff': 5.0,
            'reduced_dimension': None,
            'tolerance': 1e-3,
        }


class TestReducedSystem:

    def _reduced(self):
        system = _system()
        table = classify_modes(solve_eigen(system), system)
        return build_reduction(table, system, SelectionRule(flexural_cutoff=100.0))

    def test_diagonal_operators(self):
        """Test the reduced mass, damping and stiffness."""
        # Run
        reduced = self._reduced()

        # Assert
        system = reduced.system
        mass = reduced.Phi.T @ system.M @ reduced.Phi
        np.testing.assert_allclose(mass, reduced.M_r, atol=1e-9)
        np.testing.assert_allclose(reduced.C_r, system.model.material.c * np.eye(reduced.n_red))
        np.testing.assert_allclose(np.diag(reduced.K_r), reduced.omega2)
        assert reduced.B_r.shape == (8, reduced.n_red)
        np.testing.assert_allclose(reduced.F_g_r, reduced.Phi.T @ system.F_g)

    def test_basis_content(self):
        """Test that the basis holds two axial rigid modes and four transverse ones."""
        # Run
        reduced = self._reduced()

        # Assert
        classes = reduced.classes
        families = reduced.table.families[reduced.selected]
        assert np.count_nonzero(classes == RIGID) == 6
        assert np.count_nonzero((classes == RIGID) & (families == FLEXURAL)) == 4
        assert np.count_nonzero(classes == FLEXURAL) > 0

    def test_project_expand(self):
        """Test that projecting an expanded vector gives back the reduced coordinates."""
        # Setup
        reduced = self._reduced()
        q_r = np.random.default_rng(0).normal(size=reduced.n_red)

        # Run
        result = reduced.project(reduced.expand(q_r))

        # Assert
        np.testing.assert_allclose(result, q_r, atol=1e-9)

    def test_constrained_frequencies(self):
        """Test that the boundary constraints remove every rigid-body motion."""
        # Setup
        reduced = self._reduced()

        # Run
        frequencies = constrained_frequencies(reduced)

        # Assert
        assert len(frequencies) == reduced.n_red - 8
        assert frequencies.min() > 0
        assert np.all(np.diff(frequencies) >= 0)

    def test_to_frame(self):
        """Test the exported mode table."""
        # Setup
        reduced = self._reduced()

        # Run
        frame = reduced.table.to_frame(selected=reduced.selected)

        # Assert
        assert list(frame.columns) == ['index', 'f_n', 'f_hat', 'class', 'family', 'selected']
        assert frame['selected'].sum() == reduced.n_red
        assert frame['f_hat'].iloc[-1] == pytest.approx(
            frame['f_n'].iloc[-1] * 10.0 / reduced.model.moduli.c_L)


def test_modal_density():
    """Test the counts per class and per bin of dimensionless frequency."""
    # Run
    density = modal_density(_synthetic_table(), band_max=4.0, bins=4)

    # Assert
    assert list(density.columns) == [
        'f_hat_min', 'f_hat_max', RIGID, FLEXURAL, TORSIONAL, LONGITUDINAL]
    np.testing.assert_array_equal(density[RIGID], [6, 0, 0, 0])
    np.testing.assert_array_equal(density[FLEXURAL], [0, 1, 0, 1])
    np.testing.assert_array_equal(density[TORSIONAL], [1, 0, 0, 0])
    np.testing.assert_array_equal(density[LONGITUDINAL], [1, 0, 0, 1])
