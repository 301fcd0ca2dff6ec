# -*- coding: utf-8 -*-
import json
import math

import click.testing

from pathipy.cli import main


def test_build_state_json(cli_runner: click.testing.CliRunner, three_crystal_file):
    result = cli_runner.invoke(main.pathi, ['build-state', str(three_crystal_file)])
    assert result.exit_code == 0, result.stderr

    data = json.loads(result.stdout)
    assert data['truncation'] == 4
    amplitudes = {(sig, idl): complex(*amp) for sig, idl, amp in data['amplitudes']}
    assert set(amplitudes) == {(-2, -2), (0, 0), (2, 2)}
    for amp in amplitudes.values():
        assert abs(amp - 1. / math.sqrt(3.)) < 1e-12


def test_build_state_csv(cli_runner: click.testing.CliRunner, two_crystal_file):
    result = cli_runner.invoke(main.pathi, ['build-state', str(two_crystal_file), '-f', 'csv'])
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == 'signal,idler,re,im'
    assert lines[1] == '0,0,1.0,0.0'


def test_build_state_table(cli_runner: click.testing.CliRunner, three_crystal_file):
    result = cli_runner.invoke(main.pathi, ['build-state', str(three_crystal_file), '-f', 'table'])
    assert result.exit_code == 0, result.stderr
    assert '-2' in result.stdout


def test_build_state_out(cli_runner: click.testing.CliRunner, three_crystal_file, tmp_path):
    out = tmp_path / 'state.json'
    result = cli_runner.invoke(main.pathi,
                               ['build-state', str(three_crystal_file), '--out',
                                str(out)])
    assert result.exit_code == 0, result.stderr
    assert result.stdout == ''
    assert len(json.loads(out.read_text())['amplitudes']) == 3


def test_bad_setup(cli_runner: click.testing.CliRunner, tmp_path):
    path = tmp_path / 'bad.setup'
    path.write_text('truncation 2\nlens 2\n')
    result = cli_runner.invoke(main.pathi, ['build-state', str(path)])
    assert result.exit_code == main.EXIT_SETUP
    assert 'line 2, column 1' in result.stderr

    path.write_text('truncation 4\nspp +1\ncrystal\n')
    result = cli_runner.invoke(main.pathi, ['build-state', str(path)])
    assert result.exit_code == main.EXIT_SETUP
    assert 'line 3' in result.stderr


def test_missing_file(cli_runner: click.testing.CliRunner, tmp_path):
    result = cli_runner.invoke(main.pathi, ['build-state', str(tmp_path / 'nothing.setup')])
    assert result.exit_code == main.EXIT_USAGE
