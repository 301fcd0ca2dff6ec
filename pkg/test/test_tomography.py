# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from pathipy import chains
from pathipy import exceptions
from pathipy import measurements
from pathipy import states
from pathipy import tomography

MAX_ITER = 5000


def noiseless_records(space, name, modes, rate=1000.):
    rho = states.ket_to_density(states.target_state(name, space))
    design = measurements.default_design(space, modes)
    return measurements.simulate_counts(rho, design, rate, 1., 0, noiseless=True), design


def test_noiseless_pure_state(space):
    records, design = noiseless_records(space, 'psi1', (-2, 0, 2))
    target = states.target_state('psi1', space)
    result = tomography.mle_reconstruct(records, design, max_iter=MAX_ITER, target=target)
    assert result.fidelity_mean >= 0.999
    assert states.fidelity(target, result.rho) == pytest.approx(result.fidelity_mean)


def test_reconstruction_invariants(space):
    records, design = noiseless_records(space, 'psi2', (-2, 0, 2))
    result = tomography.mle_reconstruct(records, design, max_iter=500)
    matrix = result.rho.matrix
    assert np.max(np.abs(matrix - matrix.conj().T)) <= 1e-10
    assert result.rho.trace == pytest.approx(1., abs=1e-10)
    assert result.rho.eigenvalues()[0] >= -1e-10
    # Nothing leaks out of the design subspace
    outside = space.index(1, 1)
    assert abs(matrix[outside, outside]) == 0.


def test_likelihood_history_monotonic(space):
    rho = chains.build_density(chains.path_identity_chain((1., 1., 1.), (0.3, 0.8)),
                               chains.DistinguishabilityModel.uniform(3, 0.9))
    design = measurements.default_design(space, (-2, 0, 2))
    records = measurements.simulate_counts(rho, design, 2000., 1., 17)
    result = tomography.mle_reconstruct(records, design, max_iter=300)
    history = result.history
    assert len(history) >= 2
    assert all(later >= earlier - 1e-12 for earlier, later in zip(history, history[1:]))


def test_poisson_bell_state(space):
    design = measurements.default_design(space, (0, 2))
    rho = states.ket_to_density(states.target_state('phi+', space))
    records = measurements.simulate_counts(rho, design, 20000., 1., 3)
    target = states.target_state('phi+', space)
    result = tomography.reconstruct(records,
                                    design,
                                    target,
                                    resamples=10,
                                    seed=3,
                                    max_iter=1000,
                                    tol=1e-8)
    assert result.fidelity_mean > 0.95
    assert 0. < result.fidelity_stddev < 0.05


def test_not_converged_is_flagged(space):
    records, design = noiseless_records(space, 'psi1', (-2, 0, 2))
    result = tomography.mle_reconstruct(records, design, max_iter=2, tol=1e-15)
    assert not result.converged
    assert result.iterations == 2


def test_linear_inversion_two_modes(space):
    """With a complete design and exact frequencies linear inversion is exact"""
    records, design = noiseless_records(space, 'phi-', (0, 2))
    estimate = tomography.linear_inversion(records, design)
    expected = states.ket_to_density(states.target_state('phi-', space))
    assert np.allclose(estimate.matrix, expected.matrix, atol=1e-10)

    mle = tomography.mle_reconstruct(records, design, max_iter=MAX_ITER)
    assert states.trace_distance(mle.rho, estimate) < 1e-2


def test_incomplete_design(space):
    settings = [measurements.product_setting(space, signal, idler)
                for signal in (0, 2) for idler in (0, 2)]
    design = measurements.TomographyDesign(settings, (0, 2))
    rho = states.ket_to_density(states.target_state('phi+', space))
    records = measurements.simulate_counts(rho, design, 100., 1., 0)
    with pytest.raises(exceptions.CompletenessError):
        tomography.mle_reconstruct(records, design)


def test_missing_settings(space):
    records, design = noiseless_records(space, 'phi+', (0, 2))
    with pytest.raises(exceptions.CompletenessError):
        tomography.mle_reconstruct(records[:-1], design)
    with pytest.raises(exceptions.CompletenessError):
        tomography.linear_inversion(records[:-1], design)


def test_zero_counts(space):
    design = measurements.default_design(space, (0, 2))
    records = [measurements.CountRecord(setting, 0) for setting in design]
    with pytest.raises(ValueError):
        tomography.mle_reconstruct(records, design)


def test_bootstrap_needs_resamples(space):
    records, design = noiseless_records(space, 'phi+', (0, 2))
    with pytest.raises(ValueError):
        tomography.bootstrap_fidelity(records, design, states.target_state('phi+', space),
                                      resamples=5)


def test_bootstrap_deterministic(space):
    rho = states.ket_to_density(states.target_state('phi+', space))
    design = measurements.default_design(space, (0, 2))
    records = measurements.simulate_counts(rho, design, 5000., 1., 8)
    target = states.target_state('phi+', space)
    first = tomography.bootstrap_fidelity(records, design, target, resamples=10, seed=1, max_iter=200)
    second = tomography.bootstrap_fidelity(records,
                                           design,
                                           target,
                                           resamples=10,
                                           seed=1,
                                           max_iter=200,
                                           max_workers=2)
    assert first == pytest.approx(second)


def test_orthogonal_target(space):
    records, design = noiseless_records(space, 'phi+', (0, 2))
    result = tomography.mle_reconstruct(records,
                                        design,
                                        max_iter=MAX_ITER,
                                        target=states.target_state('phi-', space))
    assert result.fidelity_mean < 0.05


def test_result_to_dict(space):
    records, design = noiseless_records(space, 'phi+', (0, 2))
    result = tomography.reconstruct(records, design, states.target_state('phi+', space), max_iter=200)
    data = tomography.result_to_dict(result, design)
    assert data['rho']['signal_modes'] == [0, 2]
    assert data['rho']['truncation'] == space.truncation
    matrix = data['rho']['matrix']
    assert len(matrix) == 4 and all(len(row) == 4 for row in matrix)
    assert matrix[0][0][0] == pytest.approx(0.5, abs=1e-2)
    assert data['fidelity_stddev'] == 0.
    assert 0. < data['purity'] <= 1. + 1e-12

    table = tomography.fidelity_table({'a': result, 'b': result._replace(fidelity_mean=None)})
    assert [row[0] for row in table] == ['a']
    assert math.isfinite(table[0][1])


@pytest.mark.parametrize('name', ['phi+', 'phi-', 'psi1', 'psi2', 'psi3', 'psi4', 'psi5'])
def test_noiseless_catalog(space, name):
    modes = (0, 2) if name.startswith('phi') else (-2, 0, 2)
    records, design = noiseless_records(space, name, modes)
    target = states.target_state(name, space)
    result = tomography.mle_reconstruct(records, design, target=target)
    assert result.fidelity_mean >= 0.999


def test_noiseless_cross_fidelities(space):
    names = ('psi1', 'psi2', 'psi3')
    kets = [states.target_state(name, space) for name in names]
    for name in names:
        records, design = noiseless_records(space, name, (-2, 0, 2))
        rho = tomography.mle_reconstruct(records, design).rho
        for ket in kets:
            expected = abs(states.inner_product(ket, states.target_state(name, space)))**2
            assert abs(states.fidelity(ket, rho) - expected) <= 0.02


def test_maximally_mixed(space):
    mixed = states.maximally_mixed(space, (-2, 0, 2))
    design = measurements.default_design(space, (-2, 0, 2))
    # About 2e4 counts per setting, the statistical trace distance is then near 0.02
    records = measurements.simulate_counts(mixed, design, 2e5, 1., 21)
    assert sum(record.counts for record in records) > 1e6
    result = tomography.mle_reconstruct(records, design, max_iter=2000)
    assert states.trace_distance(result.rho, mixed) < 0.05


def test_linear_inversion_oracle(space):
    """Noiseless MLE agrees with the pseudo-inverse on full rank two-mode states"""
    rng = np.random.default_rng(6)
    modes = (0, 2)
    design = measurements.default_design(space, modes)
    for _ in range(20):
        ginibre = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        block = ginibre @ ginibre.conj().T
        rho = states.DensityOperator.embed(space, block / np.trace(block).real, modes)
        records = measurements.simulate_counts(rho, design, 1000., 1., 0, noiseless=True)
        oracle = tomography.linear_inversion(records, design)
        mle = tomography.mle_reconstruct(records, design)
        assert mle.converged
        assert states.trace_distance(mle.rho, oracle) < 1e-4


def test_bootstrap_spread_noiseless(space):
    records, design = noiseless_records(space, 'phi+', (0, 2), rate=40000.)
    mean, stddev = tomography.bootstrap_fidelity(records,
                                                 design,
                                                 states.target_state('phi+', space),
                                                 resamples=10,
                                                 seed=2,
                                                 max_iter=2000)
    assert stddev < 0.005
    assert mean > 0.98


def test_mixed_start_converges(space):
    """Starting from I/d the growing dilution still reaches the optimum"""
    rng = np.random.default_rng(9)
    modes = (0, 2)
    design = measurements.default_design(space, modes)
    for _ in range(5):
        ginibre = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        block = ginibre @ ginibre.conj().T
        rho = states.DensityOperator.embed(space, block / np.trace(block).real, modes)
        records = measurements.simulate_counts(rho, design, 1000., 1., 0, noiseless=True)
        mle = tomography.mle_reconstruct(records, design, start='mixed')
        assert states.trace_distance(mle.rho, rho) < 1e-3
    with pytest.raises(ValueError):
        tomography.mle_reconstruct(records, design, start='guess')
    with pytest.raises(ValueError):
        tomography.mle_reconstruct(records, design, dilution=0.)


def check_density(rho: states.DensityOperator):
    matrix = rho.matrix
    assert np.max(np.abs(matrix - matrix.conj().T)) <= 1e-10
    assert rho.trace == pytest.approx(1., abs=1e-10)
    assert rho.eigenvalues()[0] >= -1e-10


@pytest.mark.parametrize('start', ['inversion', 'mixed'])
def test_invariants_random_counts(space, start):
    rng = np.random.default_rng(10)
    design = measurements.default_design(space, (0, 2))
    for _ in range(50):
        counts = rng.integers(0, 50, size=len(design))
        counts[rng.random(len(design)) < 0.3] = 0
        counts[0] += 1
        records = [measurements.CountRecord(setting, int(count)) for setting, count in zip(design, counts)]
        result = tomography.mle_reconstruct(records, design, max_iter=300, start=start)
        check_density(result.rho)
        assert all(later >= earlier - 1e-12 for earlier, later in zip(result.history, result.history[1:]))


@pytest.mark.parametrize('name, modes, rate, threshold', [
    ('phi+', (0, 2), 4e4, 0.98),
    ('psi1', (-2, 0, 2), 9e4, 0.97),
])
def test_fidelity_percentile(space, name, modes, rate, threshold):
    """About 1e4 counts per setting, 100 seeds"""
    target = states.target_state(name, space)
    rho = states.ket_to_density(target)
    design = measurements.default_design(space, modes)
    fidelities = []
    for seed in range(100):
        records = measurements.simulate_counts(rho, design, rate, 1., seed)
        result = tomography.mle_reconstruct(records, design, max_iter=1000, tol=1e-8, target=target)
        check_density(result.rho)
        fidelities.append(result.fidelity_mean)
    assert np.percentile(fidelities, 5) >= threshold


def test_bootstrap_resample_stability(space):
    target = states.target_state('phi+', space)
    design = measurements.default_design(space, (0, 2))
    records = measurements.simulate_counts(states.ket_to_density(target), design, 4e4, 1., 11)
    few = tomography.bootstrap_fidelity(records, design, target, resamples=10, seed=4, max_iter=500)
    many = tomography.bootstrap_fidelity(records, design, target, resamples=100, seed=4, max_iter=500)
    assert abs(few[0] - many[0]) <= 2. * math.sqrt(few[1]**2 + many[1]**2)
