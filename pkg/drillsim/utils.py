"""Miscellaneous utility functions."""

import concurrent.futures
import importlib.metadata
import json
import logging
import warnings

LOGGER = logging.getLogger(__name__)

PACKAGES = ('drillsim', 'numpy', 'scipy', 'pandas', 'copulas', 'tqdm')
FLOAT_FORMAT = '%.12e'
UNITS = {
    't': 's',
    'x': 'm',
    'u_bit': 'm',
    'u_dot_bit': 'm/s',
    'theta_x_bit': 'rad',
    'theta_x_dot_bit': 'rad/s',
    'u': 'm',
    'v': 'm',
    'w': 'm',
    'v_dot': 'm/s',
    'w_dot': 'm/s',
    'r': 'm',
    'theta_x': 'rad',
    'theta_y': 'rad',
    'theta_z': 'rad',
    'angle': 'rad',
    'sigma_xx': 'Pa',
    'sigma_xy': 'Pa',
    'sigma_xz': 'Pa',
    'sigma_vm': 'Pa',
    'lambda_1': 'N',
    'lambda_4': 'N m',
    'f': 'Hz',
    'f_n': 'Hz',
    'psd_db': 'dB/Hz',
    'smoothed_db': 'dB/Hz',
    'V0': 'm/s',
    'Omega': 'rad/s',
    'rop': 'm/s',
    'rop_mean': 'm/s',
    'expected_rop': 'm/s',
    'sigma_vm_max': 'Pa',
    'sigma_vm_mean': 'Pa',
    'margin': 'Pa',
    't_entry': 's',
    't_exit': 's',
    'p_in': 'W',
    'p_out': 'W',
    'alpha_BR': '1/(m/s)',
    'Gamma_BR': 'N',
}


def get_package_versions():
    """Get the versions of drillsim and the libraries it computes with.

    Returns:
        dict:
            A mapping of library to current version, skipping the ones not installed.
    """
    versions = {}
    for package in PACKAGES:
        try:
            versions[package] = importlib.metadata.version(package)
        except importlib.metadata.PackageNotFoundError:
            pass

    return versions


def throw_version_mismatch_warning(package_versions):
    """Warn if the given package versions don't match the installed ones.

    Args:
        package_versions (dict[str, str] or None):
            A mapping from library to expected version.
    """
    warning_str = ('The libraries used to build the model have other versions '
                   'than your current setup. Results may differ.')

    if package_versions is None:
        warnings.warn(warning_str)
        return

    current = get_package_versions()
    mismatched_details = ''
    for lib, version in package_versions.items():
        current_version = current.get(lib, '')
        if current_version != version:
            mismatched_details += (f'\n{lib} used version `{version}`; '
                                   f'current version is `{current_version}`')

    if mismatched_details:
        warnings.warn(f'{warning_str}{mismatched_details}')


def parallel_map(worker, items, jobs=1):
    """Apply ``worker`` to every item, in order, with up to ``jobs`` processes.

    ``jobs=1`` runs in the calling process. Otherwise ``worker`` and the items must be
    picklable.
    """
    if jobs == 1:
        yield from map(worker, items)
        return

    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        yield from executor.map(worker, items)


def column_header(columns):
    """``name [unit]`` description of the columns of an artifact."""
    return ', '.join(f'{column} [{UNITS.get(column, "-")}]' for column in columns)


def write_table(path, frame, artifact, config_hash=None):
    """Write a ``pandas.DataFrame`` as a comma separated artifact with a comment header.

    The header names the artifact, the columns with their units and the configuration
    hash. Floats use a fixed format so identical runs give identical files.

    Args:
        path (str or pathlib.Path):
            Output file.
        frame (pandas.DataFrame):
            Table to write.
        artifact (str):
            Name of the artifact.
        config_hash (str or None):
            Hash of the configuration that produced the table.
    """
    lines = [f'# drillsim {artifact}', f'# columns: {column_header(frame.columns)}']
    if config_hash is not None:
        lines.append(f'# config_hash: {config_hash}')

    with open(path, 'w', encoding='utf-8', newline='') as output:
        output.write('\n'.join(lines) + '\n')
        frame.to_csv(output, index=False, float_format=FLOAT_FORMAT)

    LOGGER.debug('Wrote %s rows to %s', len(frame), path)


def write_json(path, content):
    """Write ``content`` as indented JSON with sorted keys."""
    with open(path, 'w', encoding='utf-8') as output:
        json.dump(content, output, indent=2, sort_keys=True, default=_to_builtin)
        output.write('\n')


def _to_builtin(value):
    if hasattr(value, 'tolist'):
        return value.tolist()
    if hasattr(value, 'item'):
        return value.item()

    raise TypeError(f'Object of type {type(value).__name__} is not JSON serializable')
