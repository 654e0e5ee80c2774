"""Power spectral density of uniformly sampled signals."""

import dataclasses
import logging

import numpy as np
import pandas as pd
import scipy.signal

from drillsim.errors import ParameterError

LOGGER = logging.getLogger(__name__)

MIN_SAMPLES = 64


@dataclasses.dataclass(frozen=True)
class SmoothingControls:
    """Savitzky-Golay smoothing of a spectrum.

    Args:
        window (int):
            Odd number of frequency bins of the filter window.
        order (int):
            Polynomial order, smaller than ``window``.
    """

    window: int = 31
    order: int = 3

    def __post_init__(self):
        violations = []
        if self.window < 3 or self.window % 2 == 0:
            violations.append('window must be an odd integer >= 3')
        if not 0 <= self.order < self.window:
            violations.append('order must satisfy 0 <= order < window')

        if violations:
            raise ParameterError.from_violations('SmoothingControls', violations)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class PsdEstimate:
    """One-sided power spectral density.

    Args:
        frequency (numpy.ndarray):
            Frequency grid in Hz, from 0 to the Nyquist frequency.
        power (numpy.ndarray):
            Periodogram in unit^2/Hz.
        power_db (numpy.ndarray):
            Periodogram in dB/Hz with unit reference intensity.
        smoothed_db (numpy.ndarray):
            Savitzky-Golay smoothed ``power_db``.
    """

    frequency: np.ndarray
    power: np.ndarray
    power_db: np.ndarray
    smoothed_db: np.ndarray

    @property
    def resolution(self):
        return float(self.frequency[1] - self.frequency[0])

    def dominant_frequency(self, min_frequency=0.0):
        """Frequency of the largest periodogram value above ``min_frequency``."""
        candidates = np.flatnonzero(self.frequency > min_frequency)
        if len(candidates) == 0:
            raise ParameterError(f'No frequency above {min_frequency} Hz')

        return float(self.frequency[candidates[np.argmax(self.power[candidates])]])

    def to_frame(self):
        """Get the spectrum as a ``pandas.DataFrame``.

        Returns:
            pandas.DataFrame:
                Columns ``f``, ``psd_db`` and ``smoothed_db``.
        """
        return pd.DataFrame({
            'f': self.frequency,
            'psd_db': self.power_db,
            'smoothed_db': self.smoothed_db,
        })


def to_decibels(power):
    """``10 log10(power)`` with unit reference, zero power mapped to the smallest float."""
    return 10 * np.log10(np.maximum(power, np.finfo(float).tiny))


def sampling_frequency(times):
    """Sampling frequency of a uniform time grid.

    Raises:
        ParameterError:
            If the grid is too short or not uniform.
    """
    times = np.asarray(times, dtype=float)
    if len(times) < MIN_SAMPLES:
        raise ParameterError(
            f'A spectrum needs at least {MIN_SAMPLES} samples, got {len(times)}')

    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=0):
        raise ParameterError('A spectrum needs a uniformly sampled signal')

    return 1.0 / steps[0]


def uniform_part(times, *signals):
    """Drop the last sample when the last interval of the grid is shortened."""
    times = np.asarray(times, dtype=float)
    if len(times) > 2 and not np.isclose(times[-1] - times[-2], times[1] - times[0],
                                         rtol=1e-6, atol=0):
        return (times[:-1], *(np.asarray(signal)[:-1] for signal in signals))

    return (times, *(np.asarray(signal) for signal in signals))


def psd(times, signal, smoothing=None, detrend=False):
    """Periodogram of a uniformly sampled signal and its smoothed curve.

    Args:
        times (numpy.ndarray):
            Uniform sampling times in s.
        signal (numpy.ndarray):
            Sampled values.
        smoothing (SmoothingControls or None):
            Smoothing of the dB curve. Defaults to ``SmoothingControls()``.
        detrend (bool):
            Whether to remove the mean before the estimate. Without it the periodogram
            integrates to the mean square of the signal.

    Returns:
        PsdEstimate
    """
    smoothing = smoothing or SmoothingControls()
    fs = sampling_frequency(times)
    signal = np.asarray(signal, dtype=float)
    if signal.shape != np.shape(times):
        raise ParameterError('times and signal must have the same length')

    frequency, power = scipy.signal.periodogram(
        signal, fs=fs, window='boxcar', detrend='constant' if detrend else False,
        scaling='density')
    power_db = to_decibels(power)

    window = min(smoothing.window, len(power_db) - (1 - len(power_db) % 2))
    if window > smoothing.order:
        smoothed = scipy.signal.savgol_filter(power_db, window, smoothing.order)
    else:
        smoothed = power_db.copy()

    LOGGER.debug('Periodogram of %s samples at %.6g Hz', len(signal), fs)
    return PsdEstimate(frequency, power, power_db, smoothed)
