# -*- coding: utf-8 -*-
import click.testing
import pytest

# Display this as this is the way fixtures work! pylint: disable=redefined-outer-name

THREE_CRYSTALS = """\
# pump-shifted three crystal source
truncation 4
crystal amp=1.0 pump_oam=0 alpha=[1.0]
phase 0.0rad
spp +4
crystal amp=1.0 pump_oam=0 alpha=[1.0]
phase 0.0rad
mirror
crystal amp=1.0 pump_oam=0 alpha=[1.0]
"""

TWO_CRYSTALS = """\
truncation 2
crystal amp=1.0 pump_oam=0 alpha=[1.0]
phase 0.0rad
crystal amp=1.0 pump_oam=0 alpha=[1.0]
"""


@pytest.fixture
def cli_runner():
    runner = click.testing.CliRunner(mix_stderr=False)
    yield runner


@pytest.fixture
def three_crystal_file(tmp_path):
    path = tmp_path / 'three.setup'
    path.write_text(THREE_CRYSTALS)
    return path


@pytest.fixture
def two_crystal_file(tmp_path):
    path = tmp_path / 'two.setup'
    path.write_text(TWO_CRYSTALS)
    return path
