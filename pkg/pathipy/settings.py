# -*- coding: utf-8 -*-
import json
import logging
import os
import pathlib

import click

from . import defaults

__all__ = 'read_settings', 'write_settings', 'settings_path', 'get_setting', 'ENV_PATHIPY_SETTINGS'

logger = logging.getLogger(__name__)

ENV_PATHIPY_SETTINGS = 'PATHIPY_SETTINGS'
DEFAULT_SETTINGS = {
    'truncation': defaults.TRUNCATION,
    'max_iter': defaults.MLE_MAX_ITER,
    'tol': defaults.MLE_TOL,
    'dilution': defaults.MLE_DILUTION,
    'resamples': defaults.BOOTSTRAP_RESAMPLES,
    'log_level': defaults.LOG_LEVEL,
}


def read_settings() -> dict:
    """Read the current settings dictionary from disk, stored values take precedence over the
    defaults"""
    path = settings_path()
    if not path.exists():
        write_settings(DEFAULT_SETTINGS)
        return dict(DEFAULT_SETTINGS)

    with open(str(path), 'r') as file:
        stored = json.load(file)

    unknown = set(stored) - set(DEFAULT_SETTINGS)
    if unknown:
        logger.warning("Ignoring unknown settings in '%s': %s", path, sorted(unknown))

    settings = dict(DEFAULT_SETTINGS)
    settings.update({key: value for key, value in stored.items() if key in DEFAULT_SETTINGS})
    return settings


def write_settings(settings: dict):
    """Write a settings dictionary to the standard settings path"""
    path = settings_path()
    if not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)

    with open(str(path), 'w') as file:
        json.dump(settings, file, indent=4)


def get_setting(key: str):
    return read_settings()[key]


def settings_path() -> pathlib.Path:
    """Get the path to the settings file.  This will check the environment variable
    ENV_PATHIPY_SETTINGS for the settings and if this is not found will fall back to a sensible
    default."""
    try:
        return pathlib.Path(os.environ[ENV_PATHIPY_SETTINGS])
    except KeyError:
        app_dir = pathlib.Path(click.get_app_dir('pathipy', roaming=False))
        return app_dir / 'settings.json'
