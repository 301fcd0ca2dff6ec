# -*- coding: utf-8 -*-
import json
import pprint

import click

from pathipy import settings
from . import main

pretty = pprint.PrettyPrinter(depth=4)  # pylint: disable=invalid-name


@main.pathi.group('settings')
def settings_():
    """Show or change the user settings"""


@settings_.command()
def show():
    """Show the current settings"""
    click.echo(pretty.pformat(settings.read_settings()))


@settings_.command()
def path():
    """Show where the settings are stored"""
    click.echo(str(settings.settings_path()))


@settings_.command('set')
@click.argument('key', type=click.Choice(tuple(settings.DEFAULT_SETTINGS)))
@click.argument('value', type=str)
def set_(key, value):
    """Set a value, given as JSON (strings may be given bare)"""
    current = settings.read_settings()
    try:
        parsed = json.loads(value)
    except ValueError:
        parsed = value

    expected = type(settings.DEFAULT_SETTINGS[key])
    if expected is float and isinstance(parsed, int) and not isinstance(parsed, bool):
        parsed = float(parsed)
    if not isinstance(parsed, expected) or isinstance(parsed, bool) != (expected is bool):
        raise click.BadParameter("'{}' needs a value of type {}".format(key, expected.__name__),
                                 param_hint='value')

    current[key] = parsed
    settings.write_settings(current)
    click.echo('{} = {!r}'.format(key, parsed))
