"""Tests for the drillsim.utils module."""

import importlib.metadata
import json
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from drillsim.utils import (
    column_header, get_package_versions, parallel_map, throw_version_mismatch_warning,
    write_json, write_table)


def _square(value):
    return value * value


@patch('drillsim.utils.importlib.metadata.version')
def test_get_package_versions(version_mock):
    """Test the ``get_package_versions`` method.

    Setup:
        - Patch the installed versions
    Output:
        - a dict mapping every library to its version.
    """
    # Setup
    version_mock.return_value = '1.0'

    # Run
    versions = get_package_versions()

    # Assert
    assert versions == {
        'drillsim': '1.0',
        'numpy': '1.0',
        'scipy': '1.0',
        'pandas': '1.0',
        'copulas': '1.0',
        'tqdm': '1.0',
    }


@patch('drillsim.utils.importlib.metadata.version')
def test_get_package_versions_missing(version_mock):
    """Test that the libraries which are not installed are skipped."""
    # Setup
    def version(package):
        if package == 'copulas':
            raise importlib.metadata.PackageNotFoundError(package)

        return '2.0'

    version_mock.side_effect = version

    # Run
    versions = get_package_versions()

    # Assert
    assert 'copulas' not in versions
    assert versions['numpy'] == '2.0'


@patch('drillsim.utils.warnings')
@patch('drillsim.utils.get_package_versions')
def test_throw_version_mismatch_warning(versions_mock, warnings_mock):
    """Test that a mismatch of versions is reported with the details."""
    # Setup
    versions_mock.return_value = {'drillsim': '0.2.0', 'numpy': '1.0'}

    # Run
    throw_version_mismatch_warning({'drillsim': '0.1.0', 'numpy': '1.0'})

    # Assert
    warnings_mock.warn.assert_called_once()
    message = warnings_mock.warn.call_args[0][0]
    assert 'drillsim used version `0.1.0`; current version is `0.2.0`' in message
    assert 'numpy' not in message


@patch('drillsim.utils.warnings')
@patch('drillsim.utils.get_package_versions')
def test_throw_version_mismatch_warning_no_mismatch(versions_mock, warnings_mock):
    """Test that matching versions raise no warning."""
    # Setup
    versions_mock.return_value = {'drillsim': '0.1.0'}

    # Run
    throw_version_mismatch_warning({'drillsim': '0.1.0'})

    # Assert
    warnings_mock.warn.assert_not_called()


def test_throw_version_mismatch_warning_unknown():
    """Test that unknown versions always warn."""
    # Run and Assert
    with pytest.warns(UserWarning, match='other versions'):
        throw_version_mismatch_warning(None)


@pytest.mark.parametrize('jobs', [1, 2])
def test_parallel_map(jobs):
    """Test that the results keep the order of the items whatever the number of jobs."""
    # Run
    results = list(parallel_map(_square, range(6), jobs=jobs))

    # Assert
    assert results == [0, 1, 4, 9, 16, 25]


def test_column_header():
    """Test the units of known and unknown columns."""
    # Run
    header = column_header(['t', 'u_dot_bit', 'status'])

    # Assert
    assert header == 't [s], u_dot_bit [m/s], status [-]'


def test_write_table(tmp_path):
    """Test the header lines and the fixed float format of a table.

    Input:
        - a two-row table and a configuration hash
    Output:
        - three comment lines followed by the comma separated table
    """
    # Setup
    path = tmp_path / 'conv.csv'
    frame = pd.DataFrame({'n_s': [1, 2], 'conv': [0.5, 1 / 3]})

    # Run
    write_table(path, frame, 'conv', config_hash='abc')

    # Assert
    lines = path.read_text().splitlines()
    assert lines == [
        '# drillsim conv',
        '# columns: n_s [-], conv [-]',
        '# config_hash: abc',
        'n_s,conv',
        '1,5.000000000000e-01',
        '2,3.333333333333e-01',
    ]
    read = pd.read_csv(path, comment='#')
    np.testing.assert_allclose(read['conv'], [0.5, 1 / 3], rtol=1e-12)


def test_write_json(tmp_path):
    """Test that numpy values are written as builtins with sorted keys."""
    # Setup
    path = tmp_path / 'manifest.json'

    # Run
    write_json(path, {'b': np.float64(1.5), 'a': np.arange(3)})

    # Assert
    text = path.read_text()
    assert json.loads(text) == {'a': [0, 1, 2], 'b': 1.5}
    assert text.index('"a"') < text.index('"b"')
