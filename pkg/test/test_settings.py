# -*- coding: utf-8 -*-
"""Tests of the settings module"""
import json
import shutil

from pathipy import settings


def test_saving_settings(tmp_path):
    settings_dict = settings.read_settings()
    assert settings_dict == settings.DEFAULT_SETTINGS

    # Now, make sure that even if the folder is not present saving settings will still work
    # (by creating the folder first)
    shutil.rmtree(str(tmp_path))

    # This should succeed
    settings_dict['max_iter'] = 50
    settings.write_settings(settings_dict)

    assert settings_dict == settings.read_settings()
    assert settings.get_setting('max_iter') == 50


def test_partial_settings(settings_file):
    """Values missing from the file fall back to the defaults, unknown ones are ignored"""
    settings_file.write_text(json.dumps({'truncation': 6, 'colour': 'red'}))
    loaded = settings.read_settings()
    assert loaded['truncation'] == 6
    assert loaded['resamples'] == settings.DEFAULT_SETTINGS['resamples']
    assert 'colour' not in loaded


def test_settings_path(monkeypatch):
    """Test that settings fall back to reasonable value even if the environmental variable
    isn't set"""
    monkeypatch.delenv(settings.ENV_PATHIPY_SETTINGS)
    assert settings.settings_path()
    assert settings.settings_path().name == 'settings.json'
