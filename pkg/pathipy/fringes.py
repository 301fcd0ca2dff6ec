# -*- coding: utf-8 -*-
"""Visibility of two-crystal interference fringes"""
import logging
import math
from typing import NamedTuple, Sequence, Tuple

import numpy as np
from scipy import optimize

from . import defaults
from . import exceptions

__all__ = ('FringeFit', 'fit_fringe', 'visibility', 'raw_visibility', 'fringe_model')

logger = logging.getLogger(__name__)


class FringeFit(NamedTuple):
    amplitude: float
    visibility: float
    phase: float
    amplitude_err: float
    visibility_err: float
    phase_err: float
    residual: float


def fringe_model(phi, amplitude: float, vis: float, phase: float):
    """A (1 + V cos(phi + phi0))"""
    return amplitude * (1. + vis * np.cos(np.asarray(phi) + phase))


def raw_visibility(counts: Sequence[float]) -> float:
    """(max - min) / (max + min) of the recorded counts"""
    counts = np.asarray(counts, dtype=float)
    total = counts.max() + counts.min()
    if total <= 0.:
        raise exceptions.FitError('No counts recorded')
    return float((counts.max() - counts.min()) / total)


def _check_samples(phis: np.ndarray, counts: np.ndarray):
    if phis.shape != counts.shape or phis.ndim != 1:
        raise ValueError('Phases and counts must be 1d sequences of equal length')
    if len(phis) < defaults.MIN_FRINGE_POINTS:
        raise ValueError('Need at least {} phase samples, got {}'.format(
            defaults.MIN_FRINGE_POINTS, len(phis)))
    if phis.max() - phis.min() < 2. * math.pi - 1e-9:
        raise ValueError('Phase samples must span at least 2 pi, got {}'.format(
            phis.max() - phis.min()))
    if np.any(counts < 0.):
        raise ValueError('Counts must be non-negative')


def fit_fringe(fringe: Sequence[Tuple[float, float]]) -> FringeFit:
    """Least squares fit of A (1 + V cos(phi + phi0)) with an analytic Jacobian, started from the
    discrete extrema of the data"""
    if len(fringe) == 0:
        raise ValueError('Empty fringe')
    phis, counts = (np.asarray(column, dtype=float) for column in zip(*fringe))
    _check_samples(phis, counts)

    mean = counts.mean()
    if mean <= 0.:
        raise exceptions.FitError('Fringe has no counts, amplitude must be positive')
    start = np.array([mean, raw_visibility(counts), -phis[np.argmax(counts)]])

    def residuals(params):
        return fringe_model(phis, *params) - counts

    def jacobian(params):
        amplitude, vis, phase = params
        cos, sin = np.cos(phis + phase), np.sin(phis + phase)
        return np.column_stack((1. + vis * cos, amplitude * cos, -amplitude * vis * sin))

    result = optimize.least_squares(residuals, start, jac=jacobian, method='lm')
    if not result.success:
        logger.warning('Fringe fit did not converge: %s', result.message)
    amplitude, vis, phase = result.x
    if amplitude <= 0.:
        raise exceptions.FitError('Degenerate fringe fit, amplitude {}'.format(amplitude))
    if vis < 0.:
        vis, phase = -vis, phase + math.pi

    dof = max(len(phis) - 3, 1)
    variance = float(np.sum(result.fun**2)) / dof
    covariance = variance * np.linalg.pinv(result.jac.T @ result.jac)
    errors = np.sqrt(np.clip(np.diag(covariance), 0., None))
    logger.debug('Fringe fit: A=%g V=%g phi0=%g (nfev %i)', amplitude, vis, phase, result.nfev)

    return FringeFit(float(amplitude), float(vis), float(math.remainder(phase, 2. * math.pi)),
                     *map(float, errors), math.sqrt(variance))


def visibility(fringe: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Fitted visibility of a phase scan and its standard error

    :param fringe: (phi, counts) pairs, at least 8 of them spanning 2 pi
    """
    fit = fit_fringe(fringe)
    return fit.visibility, fit.visibility_err
