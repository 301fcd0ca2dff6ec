# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from pathipy import chains
from pathipy import exceptions
from pathipy import fringes
from pathipy import measurements

PHASES = np.linspace(0., 2 * math.pi, 24)


def synthetic(amplitude, vis, phase=0.):
    return list(zip(PHASES, fringes.fringe_model(PHASES, amplitude, vis, phase)))


def test_noiseless_full_visibility():
    vis, vis_err = fringes.visibility(synthetic(100., 1.))
    assert vis == pytest.approx(1., abs=1e-6)
    assert vis_err < 1e-6


@pytest.mark.parametrize('gamma', [0.25, 0.5, 0.75, 0.971, 1.])
def test_noiseless_fit_recovers_parameters(gamma):
    fit = fringes.fit_fringe(synthetic(100., gamma, 0.4))
    assert fit.visibility == pytest.approx(gamma, abs=1e-6)
    assert fit.amplitude == pytest.approx(100., abs=1e-6)
    assert fit.phase == pytest.approx(0.4, abs=1e-6)


def test_zero_visibility():
    counts = [(phi, 100.) for phi in PHASES]
    vis, _ = fringes.visibility(counts)
    assert vis == pytest.approx(0., abs=1e-6)


def test_negative_visibility_is_flipped():
    fit = fringes.fit_fringe(synthetic(50., 0.6, math.pi))
    assert fit.visibility == pytest.approx(0.6, abs=1e-6)
    assert abs(math.remainder(fit.phase - math.pi, 2 * math.pi)) < 1e-6


@pytest.mark.parametrize('gamma', [0., 0.25, 0.5, 0.75, 0.971, 1.])
def test_two_crystal_visibility_is_overlap(two_crystals, gamma):
    setting = measurements.product_setting(two_crystals.space, 0, 0)
    fringe = measurements.phase_scan(two_crystals,
                                     chains.DistinguishabilityModel.uniform(2, gamma),
                                     1,
                                     PHASES,
                                     setting,
                                     500.,
                                     1.,
                                     0,
                                     noiseless=True)
    vis, _ = fringes.visibility(fringe)
    assert vis == pytest.approx(gamma, abs=1e-6)


def test_poisson_visibility(two_crystals):
    setting = measurements.product_setting(two_crystals.space, 0, 0)
    disting = chains.DistinguishabilityModel.uniform(2, 0.971)
    for seed in range(5):
        fringe = measurements.phase_scan(two_crystals, disting, 1, PHASES, setting, 500., 1., seed)
        vis, vis_err = fringes.visibility(fringe)
        assert vis_err > 0.
        assert abs(vis - 0.971) <= 3. * vis_err + 0.01


def test_raw_visibility():
    assert fringes.raw_visibility([50., 150.]) == pytest.approx(0.5)
    with pytest.raises(exceptions.FitError):
        fringes.raw_visibility([0., 0.])


def test_sample_checks():
    with pytest.raises(ValueError):
        fringes.visibility(synthetic(100., 0.5)[:5])
    with pytest.raises(ValueError):
        # Only half a period
        fringes.visibility([(phi / 2, 100.) for phi in PHASES])
    with pytest.raises(exceptions.FitError):
        fringes.visibility([(phi, 0.) for phi in PHASES])
