# -*- coding: utf-8 -*-
import json

from pathipy import settings
from pathipy.cli import main


def test_settings_path(cli_runner, settings_file):
    result = cli_runner.invoke(main.pathi, ['settings', 'path'])
    assert result.exit_code == 0
    assert str(settings_file) in result.stdout


def test_settings_show(cli_runner):
    result = cli_runner.invoke(main.pathi, ['settings', 'show'])
    assert result.exit_code == 0
    assert "'max_iter': {}".format(settings.DEFAULT_SETTINGS['max_iter']) in result.stdout


def test_settings_set(cli_runner, settings_file):
    result = cli_runner.invoke(main.pathi, ['settings', 'set', 'resamples', '25'])
    assert result.exit_code == 0, result.stderr
    assert json.loads(settings_file.read_text())['resamples'] == 25

    result = cli_runner.invoke(main.pathi, ['settings', 'set', 'tol', '1'])
    assert result.exit_code == 0, result.stderr
    assert settings.get_setting('tol') == 1.

    result = cli_runner.invoke(main.pathi, ['settings', 'set', 'log_level', 'INFO'])
    assert result.exit_code == 0, result.stderr
    assert settings.get_setting('log_level') == 'INFO'

    result = cli_runner.invoke(main.pathi, ['settings', 'set', 'max_iter', 'many'])
    assert result.exit_code == main.EXIT_USAGE
    result = cli_runner.invoke(main.pathi, ['settings', 'set', 'colour', 'red'])
    assert result.exit_code == main.EXIT_USAGE


def test_default_truncation_setting(cli_runner, tmp_path):
    path = tmp_path / 'plain.setup'
    path.write_text('crystal\n')
    cli_runner.invoke(main.pathi, ['settings', 'set', 'truncation', '1'])
    result = cli_runner.invoke(main.pathi, ['build-state', str(path)])
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)['truncation'] == 1
