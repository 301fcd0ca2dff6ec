# -*- coding: utf-8 -*-
"""Maximum-likelihood reconstruction of two-photon density operators from coincidence counts.

The counts of setting k are modelled as Poisson with mean ``N t_k Tr(P_k rho)`` where the overall
rate N is unknown.  Maximising over N leaves a multinomial likelihood for the rescaled operators
``G^-1/2 t_k P_k G^-1/2`` (G = sum_k t_k P_k), which sum to the identity.  The reconstruction
iterates on the rescaled state ``sigma ~ G^1/2 rho G^1/2`` and maps back at the end.
"""
import functools
import logging
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from . import constants
from . import defaults
from . import exceptions
from . import measurements
from . import states
from . import utils
from . import workers

__all__ = ('ReconstructionResult', 'mle_reconstruct', 'bootstrap_fidelity', 'reconstruct',
           'linear_inversion', 'result_to_dict', 'density_to_json', 'fidelity_table')

logger = logging.getLogger(__name__)


class ReconstructionResult(NamedTuple):
    rho: states.DensityOperator
    iterations: int
    log_likelihood: float
    fidelity_mean: Optional[float] = None
    fidelity_stddev: Optional[float] = None
    converged: bool = True
    history: Tuple[float, ...] = ()


def _tally(records: Sequence[measurements.CountRecord],
           design: measurements.TomographyDesign) -> Tuple[np.ndarray, np.ndarray]:
    """Counts and integration times per design setting"""
    counts = np.zeros(len(design))
    times = np.zeros(len(design))
    for record in records:
        idx = design.index(record.setting)
        counts[idx] += record.counts
        times[idx] += record.integration_time
    return counts, times


def _rescaled_vectors(design: measurements.TomographyDesign,
                      times: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rows w_k = G^-1/2 sqrt(t_k) v_k together with G^1/2 and G^-1/2"""
    vectors = design.vectors * np.sqrt(times)[:, np.newaxis]
    eigvals, eigvecs = linalg.eigh(vectors.T @ vectors.conj())
    if eigvals[0] <= constants.OPERATOR_TOL * eigvals[-1]:
        raise exceptions.CompletenessError('The design projectors do not cover the subspace')
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.conj().T
    inv_root = (eigvecs / np.sqrt(eigvals)) @ eigvecs.conj().T
    return vectors @ inv_root.T, root, inv_root


def _probabilities(rescaled: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    return np.real(np.sum(rescaled.conj() * (rescaled @ sigma.T), axis=1))


def _log_likelihood(freqs: np.ndarray, probs: np.ndarray) -> float:
    mask = freqs > 0.
    with np.errstate(divide='ignore'):
        return float(np.sum(freqs[mask] * np.log(probs[mask])))


def _r_operator(rescaled: np.ndarray, freqs: np.ndarray, probs: np.ndarray) -> np.ndarray:
    # Settings never observed, or with no overlap with the current estimate, do not contribute
    mask = (freqs > 0.) & (probs > 0.)
    weights = np.zeros_like(freqs)
    weights[mask] = freqs[mask] / probs[mask]
    return (rescaled.T * weights) @ rescaled.conj()


def _inversion_matrix(counts: np.ndarray, times: np.ndarray,
                      design: measurements.TomographyDesign) -> np.ndarray:
    """Hermitian, unnormalized pseudo-inverse estimate on the design subspace"""
    dim = design.subspace_dim
    flat = np.linalg.pinv(design.measurement_matrix()) @ (counts / times)
    matrix = flat.reshape(dim, dim)
    return 0.5 * (matrix + matrix.conj().T)


def _starting_state(counts: np.ndarray, times: np.ndarray, design: measurements.TomographyDesign,
                    start: str) -> np.ndarray:
    dim = design.subspace_dim
    mixed = np.eye(dim) / dim
    if start == 'mixed':
        return mixed
    if start != 'inversion':
        raise ValueError("Unknown starting point '{}', use 'inversion' or 'mixed'".format(start))
    matrix = _inversion_matrix(counts, times, design)
    trace = np.trace(matrix).real
    if not trace > 0.:
        return mixed
    eigvals, eigvecs = linalg.eigh(matrix / trace)
    # Full rank so that no direction is locked at zero by the multiplicative update
    eigvals = np.clip(eigvals, defaults.MLE_START_FLOOR, None)
    start_rho = (eigvecs * eigvals) @ eigvecs.conj().T
    return start_rho / np.trace(start_rho).real


def mle_reconstruct(records: Sequence[measurements.CountRecord],
                    design: measurements.TomographyDesign,
                    max_iter: int = defaults.MLE_MAX_ITER,
                    tol: float = defaults.MLE_TOL,
                    dilution: float = defaults.MLE_DILUTION,
                    target: states.BiphotonKet = None,
                    start: str = 'inversion') -> ReconstructionResult:
    """Diluted R rho R iteration, sigma <- (I + eps R) sigma (I + eps R) / Tr.  The dilution
    starts at ``dilution``, doubles after every accepted step (up to a cap) and is halved while a
    step would lower the likelihood, so the likelihood never decreases.  Iteration stops once the
    largest entry of the update is below ``tol`` or after ``max_iter`` steps, in which case the
    result is flagged as not converged.

    :param target: if given the fidelity of the estimate with this state is reported
    :param start: 'inversion' starts from the pseudo-inverse estimate with its eigenvalues
        clipped to a small positive floor, 'mixed' from the maximally mixed state
    """
    design.check_complete()
    if not dilution > 0.:
        raise ValueError('The dilution must be positive, got {}'.format(dilution))
    counts, times = _tally(records, design)
    total = counts.sum()
    if total <= 0.:
        raise ValueError('Cannot reconstruct a state from zero counts')
    freqs = counts / total

    measured = times > 0.
    if not np.all(measured):
        raise exceptions.CompletenessError('{} design settings have no records'.format(
            int(np.sum(~measured))))
    rescaled, root, inv_root = _rescaled_vectors(design, times)

    dim = design.subspace_dim
    identity = np.eye(dim)
    sigma = root @ _starting_state(counts, times, design, start) @ root
    sigma /= np.trace(sigma).real

    probs = _probabilities(rescaled, sigma)
    likelihood = _log_likelihood(freqs, probs)
    history = [likelihood]
    converged = False
    iteration = 0
    eps = dilution
    while iteration < max_iter:
        iteration += 1
        step = _r_operator(rescaled, freqs, probs)
        accepted_first = True
        while True:
            update = identity + eps * step
            candidate = update @ sigma @ update.conj().T
            candidate = candidate / np.trace(candidate).real
            candidate = 0.5 * (candidate + candidate.conj().T)
            candidate_probs = _probabilities(rescaled, candidate)
            candidate_likelihood = _log_likelihood(freqs, candidate_probs)
            if candidate_likelihood >= likelihood or eps <= defaults.MLE_MIN_DILUTION:
                break
            eps *= 0.5
            accepted_first = False
            logger.debug('Iteration %i: halving dilution to %g', iteration, eps)

        if candidate_likelihood < likelihood:
            # Even the smallest step loses likelihood, we are at the optimum up to rounding
            converged = True
            break

        change = np.max(np.abs(candidate - sigma))
        sigma, probs, likelihood = candidate, candidate_probs, candidate_likelihood
        history.append(likelihood)
        if accepted_first:
            eps = min(2. * eps, defaults.MLE_MAX_DILUTION)
        if iteration % 1000 == 0:
            logger.debug('Iteration %i: log likelihood %.12g, change %.3g, dilution %g', iteration,
                         likelihood, change, eps)
        if change < tol:
            converged = True
            break

    if not converged:
        logger.warning('Maximum likelihood iteration did not converge in %i iterations', max_iter)

    rho = inv_root @ sigma @ inv_root.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    estimate = states.DensityOperator.embed(design.space, rho, design.signal_modes,
                                            design.idler_modes)

    fidelity = None if target is None else states.fidelity(target, estimate)
    return ReconstructionResult(estimate,
                                iteration,
                                likelihood * total,
                                fidelity_mean=fidelity,
                                fidelity_stddev=None if target is None else 0.,
                                converged=converged,
                                history=tuple(history))


def _resample_fidelity(resample: int, records, design, target, seed, max_iter, tol,
                       dilution) -> float:
    rng = utils.generator(seed, constants.STREAM_BOOTSTRAP, resample)
    redrawn = [
        measurements.CountRecord(record.setting, int(rng.poisson(record.counts)),
                                 record.integration_time, record.rate_scale) for record in records
    ]
    result = mle_reconstruct(redrawn, design, max_iter=max_iter, tol=tol, dilution=dilution)
    return states.fidelity(target, result.rho)


def bootstrap_fidelity(records: Sequence[measurements.CountRecord],
                       design: measurements.TomographyDesign,
                       target: states.BiphotonKet,
                       resamples: int = defaults.BOOTSTRAP_RESAMPLES,
                       seed: int = 0,
                       max_iter: int = defaults.MLE_MAX_ITER,
                       tol: float = defaults.MLE_TOL,
                       dilution: float = defaults.MLE_DILUTION,
                       max_workers: int = 1) -> Tuple[float, float]:
    """Mean and standard deviation of the fidelity with ``target`` over reconstructions from counts
    re-drawn as Poisson(observed).  Resample r uses its own generator stream."""
    if resamples < defaults.MIN_RESAMPLES:
        raise ValueError('Need at least {} resamples, got {}'.format(defaults.MIN_RESAMPLES,
                                                                     resamples))
    job = functools.partial(_resample_fidelity,
                            records=records,
                            design=design,
                            target=target,
                            seed=seed,
                            max_iter=max_iter,
                            tol=tol,
                            dilution=dilution)
    fidelities = np.array(workers.run(job, range(resamples), max_workers=max_workers))
    return float(fidelities.mean()), float(fidelities.std(ddof=1))


def reconstruct(records: Sequence[measurements.CountRecord],
                design: measurements.TomographyDesign,
                target: states.BiphotonKet,
                resamples: int = 0,
                seed: int = 0,
                max_iter: int = defaults.MLE_MAX_ITER,
                tol: float = defaults.MLE_TOL,
                dilution: float = defaults.MLE_DILUTION,
                max_workers: int = 1) -> ReconstructionResult:
    """Reconstruct and attach the fidelity with ``target``, with bootstrap uncertainties if
    ``resamples`` is nonzero.  The reported mean is the fidelity of the estimate itself."""
    result = mle_reconstruct(records,
                             design,
                             max_iter=max_iter,
                             tol=tol,
                             dilution=dilution,
                             target=target)
    if resamples:
        _, stddev = bootstrap_fidelity(records,
                                       design,
                                       target,
                                       resamples=resamples,
                                       seed=seed,
                                       max_iter=max_iter,
                                       tol=tol,
                                       dilution=dilution,
                                       max_workers=max_workers)
        result = result._replace(fidelity_stddev=stddev)
    return result


def linear_inversion(records: Sequence[measurements.CountRecord],
                     design: measurements.TomographyDesign) -> states.DensityOperator:
    """Unconstrained estimate from the pseudo-inverse of the measurement matrix.  The result is
    Hermitian and has unit trace but need not be positive."""
    counts, times = _tally(records, design)
    if np.any(times <= 0.):
        raise exceptions.CompletenessError('Every design setting needs a record')
    design.check_complete()
    matrix = _inversion_matrix(counts, times, design)
    trace = np.trace(matrix).real
    if trace <= 0.:
        raise exceptions.ZeroStateError('Linear inversion produced a non-positive trace')
    return states.DensityOperator.embed(design.space,
                                        matrix / trace,
                                        design.signal_modes,
                                        design.idler_modes,
                                        validate=False)


def density_to_json(rho: states.DensityOperator, signal_modes: Sequence[int],
                    idler_modes: Sequence[int] = None) -> dict:
    """The block of rho on a mode subspace as a row-major matrix of [re, im] pairs"""
    idler_modes = signal_modes if idler_modes is None else idler_modes
    return {
        'truncation': rho.space.truncation,
        'signal_modes': list(signal_modes),
        'idler_modes': list(idler_modes),
        'matrix': utils.to_json(rho.restrict(signal_modes, idler_modes)),
    }


def result_to_dict(result: ReconstructionResult, design: measurements.TomographyDesign) -> dict:
    return {
        'rho': density_to_json(result.rho, design.signal_modes, design.idler_modes),
        'iterations': result.iterations,
        'converged': result.converged,
        'log_likelihood': result.log_likelihood,
        'fidelity_mean': result.fidelity_mean,
        'fidelity_stddev': result.fidelity_stddev,
        'purity': result.rho.purity(),
    }


def fidelity_table(results: Mapping[str, ReconstructionResult]) -> List[Tuple[str, float, float]]:
    """(name, fidelity, uncertainty) rows for results that carry a fidelity"""
    return [(name, result.fidelity_mean, result.fidelity_stddev or 0.)
            for name, result in results.items()
            if result.fidelity_mean is not None]
