# -*- coding: utf-8 -*-
import os

import pytest

import pathipy
from pathipy import chains
from pathipy import states

# Display this as this is the way fixtures work! pylint: disable=redefined-outer-name


@pytest.fixture(autouse=True)
def settings_file(tmp_path):
    """Keep every test away from the user's settings"""
    previous = os.environ.get(pathipy.ENV_PATHIPY_SETTINGS)
    os.environ[pathipy.ENV_PATHIPY_SETTINGS] = str(tmp_path / 'settings.json')
    yield tmp_path / 'settings.json'
    if previous is None:
        del os.environ[pathipy.ENV_PATHIPY_SETTINGS]
    else:
        os.environ[pathipy.ENV_PATHIPY_SETTINGS] = previous


@pytest.fixture
def space():
    return states.ModeSpace(4)


@pytest.fixture
def three_crystals():
    """Equal weight three crystal chain emitting psi1"""
    return chains.path_identity_chain((1., 1., 1.), (0., 0.))


@pytest.fixture
def two_crystals():
    """Two crystals emitting into the same zero OAM mode with a phase shifter in between"""
    return chains.ChainConfig((chains.Crystal(), chains.PhaseShifter(0.), chains.Crystal()),
                              states.ModeSpace(2))
