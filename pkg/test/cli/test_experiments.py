# -*- coding: utf-8 -*-
import json

import click.testing
import pytest

from pathipy.cli import main


def invoke(runner: click.testing.CliRunner, *args):
    return runner.invoke(main.pathi, [str(arg) for arg in args])


def test_tomography_noiseless(cli_runner, three_crystal_file):
    result = invoke(cli_runner, 'tomography', three_crystal_file, '--modes=-2,0,2', '--target', 'psi1',
                    '--noiseless', '--max-iter', '5000')
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data['fidelity_mean'] >= 0.999
    assert data['rho']['signal_modes'] == [-2, 0, 2]
    assert len(data['rho']['matrix']) == 9


def test_tomography_needs_seed(cli_runner, three_crystal_file):
    result = invoke(cli_runner, 'tomography', three_crystal_file)
    assert result.exit_code == main.EXIT_USAGE
    assert 'seed' in result.stderr


def test_tomography_table(cli_runner, three_crystal_file):
    result = invoke(cli_runner, 'tomography', three_crystal_file, '--noiseless', '-f', 'table')
    assert result.exit_code == 0, result.stderr
    assert "tomography 'tomography':" in result.stdout
    assert 'fidelity' in result.stdout
    assert '0.999' in result.stdout or '1.000' in result.stdout


def test_tomography_bad_modes(cli_runner, three_crystal_file):
    result = invoke(cli_runner, 'tomography', three_crystal_file, '--modes', 'a,b', '--noiseless')
    assert result.exit_code == main.EXIT_USAGE

    # Modes must be distinct, a numerical problem with the request
    result = invoke(cli_runner, 'tomography', three_crystal_file, '--modes', '0,0', '--noiseless')
    assert result.exit_code == main.EXIT_NUMERIC


def test_phase_scan(cli_runner, two_crystal_file):
    result = invoke(cli_runner, 'phase-scan', two_crystal_file, '--overlap', '0.5', '--noiseless')
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data['visibility'] == pytest.approx(0.5, abs=1e-6)
    assert len(data['phases']) == 24


def test_phase_scan_deterministic(cli_runner, two_crystal_file):
    first = invoke(cli_runner, 'phase-scan', two_crystal_file, '--seed', '12', '-f', 'csv')
    second = invoke(cli_runner, 'phase-scan', two_crystal_file, '--seed', '12', '-f', 'csv')
    assert first.exit_code == 0, first.stderr
    assert first.stdout == second.stdout
    assert first.stdout.splitlines()[0] == 'phi,counts'


def test_phase_scan_no_phase_shifter(cli_runner, tmp_path):
    path = tmp_path / 'single.setup'
    path.write_text('crystal\n')
    result = invoke(cli_runner, 'phase-scan', path, '--noiseless')
    assert result.exit_code == main.EXIT_NUMERIC


def test_spiral_spectrum(cli_runner, tmp_path):
    path = tmp_path / 'spectrum.setup'
    path.write_text('truncation 2\ncrystal alpha=[1.0, 0.22360679774997896]\n')
    result = invoke(cli_runner, 'spiral-spectrum', path)
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data['dominance_ratio'] == pytest.approx(20.)
    assert len(data['matrix']) == 5


def test_stability_trace(cli_runner, two_crystal_file):
    result = invoke(cli_runner, 'stability-trace', two_crystal_file, '--steps', '20', '--seed', '1')
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data['locked'] is True
    assert len(data['counts']) == 20

    result = invoke(cli_runner, 'stability-trace', two_crystal_file, '--steps', '20')
    assert result.exit_code == main.EXIT_USAGE


def test_coherence_check(cli_runner):
    result = invoke(cli_runner, 'coherence-check', '--lpa', 0, '--lpb', 650, '--lspdc', 600,
                    '--lcoh', 20)
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout) == {'satisfied': False, 'imbalance': 50., 'margin': 30.}

    result = invoke(cli_runner, 'coherence-check', '--lpa', -1, '--lpb', 650, '--lspdc', 600,
                    '--lcoh', 20)
    assert result.exit_code == main.EXIT_USAGE


def test_qhq_solve(cli_runner):
    result = invoke(cli_runner, 'qhq-solve', '--input', 'H', '--target', 90)
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data['relative_phase_deg'] == pytest.approx(90., abs=1e-6)
    assert data['q_out_deg'] == pytest.approx(45.)

    result = invoke(cli_runner, 'qhq-solve', '--input', 'D', '--target', 180, '--beta', 10, '-f',
                    'csv')
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == 'plate,kind,angle_deg'
    assert [line.split(',')[0] for line in lines[1:]] == ['q_in', 'h_extra', 'h_mid', 'q_out']

    result = invoke(cli_runner, 'qhq-solve', '--input', '[0, 0]', '--target', 10)
    assert result.exit_code == main.EXIT_USAGE
    result = invoke(cli_runner, 'qhq-solve', '--input', 'H')
    assert result.exit_code == main.EXIT_USAGE
