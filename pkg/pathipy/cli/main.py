# -*- coding: utf-8 -*-
import contextlib
import csv
import io
import logging
import math
import sys

import click

from pathipy import chains
from pathipy import exceptions
from pathipy import experiments
from pathipy import polarization
from pathipy import reports
from pathipy import settings
from pathipy import setups
from pathipy import states
from pathipy import utils

__all__ = 'pathi', 'EXIT_OK', 'EXIT_USAGE', 'EXIT_SETUP', 'EXIT_NUMERIC'

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SETUP = 2
EXIT_NUMERIC = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
FORMATS = ('json', 'csv', 'table')


class PathiGroup(click.Group):
    """Command group that reports failures on stderr and maps them to the documented exit codes"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):  # pylint: disable=arguments-differ
        try:
            super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
            code = EXIT_OK
        except click.exceptions.Exit as exc:
            code = exc.exit_code
        except click.UsageError as exc:
            exc.show()
            code = EXIT_USAGE
        except click.ClickException as exc:
            exc.show()
            code = exc.exit_code
        except click.exceptions.Abort:
            click.echo('Aborted!', err=True)
            code = EXIT_USAGE
        except exceptions.SeedError as exc:
            click.echo('Error: {}'.format(exc), err=True)
            code = EXIT_USAGE
        except exceptions.SetupError as exc:
            click.echo('Error: {}'.format(exc), err=True)
            code = EXIT_SETUP
        except ValueError as exc:
            # PathipyError value errors included
            click.echo('Error: {}'.format(exc), err=True)
            code = EXIT_NUMERIC
        except exceptions.PathipyError as exc:
            click.echo('Error: {}'.format(exc), err=True)
            code = EXIT_NUMERIC

        if standalone_mode:
            sys.exit(code)
        return code


@contextlib.contextmanager
def _capture_log(level: str):
    """Send log messages at or above ``level`` to stderr for the duration of the context"""
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    previous = root.level
    root.addHandler(handler)
    root.setLevel(level)
    try:
        yield handler
    finally:
        root.removeHandler(handler)
        root.setLevel(previous)


@click.group(cls=PathiGroup)
@click.option('--log-level',
              type=click.Choice(LOG_LEVELS, case_sensitive=False),
              default=None,
              help='Logging level, defaults to the log_level setting')
@click.pass_context
def pathi(ctx, log_level):
    """Simulate and analyse path identity sources of OAM entangled photon pairs"""
    config = settings.read_settings()
    level = (log_level or config['log_level']).upper()
    stack = contextlib.ExitStack()
    stack.enter_context(_capture_log(level))
    ctx.call_on_close(stack.close)
    ctx.obj = config


# region Helpers


def _output_options(func):
    func = click.option('--out',
                        '-o',
                        type=click.Path(dir_okay=False, writable=True),
                        default=None,
                        help='Write the result to this file instead of stdout')(func)
    func = click.option('--format',
                        '-f',
                        'fmt',
                        type=click.Choice(FORMATS),
                        default='json',
                        show_default=True,
                        help='Output format')(func)
    return func


def _seed_option(func):
    return click.option('--seed',
                        type=click.IntRange(min=0),
                        default=None,
                        help='Seed of the simulated counting statistics')(func)


def _load_document(setup_file: str, config: dict) -> setups.SetupDocument:
    document = setups.load_setup(setup_file, default_truncation=config['truncation'])
    logger.info("Loaded setup '%s' with %i stages", setup_file, len(document.stages))
    return document


def _params(**kwargs) -> dict:
    """Experiment parameters from options, unset options take the experiment defaults"""
    return {key: value for key, value in kwargs.items() if value is not None}


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_value(value) for value in row])
    return buffer.getvalue()


def _csv_value(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return value


def _render(result: experiments.ExperimentResult, fmt: str) -> str:
    if fmt == 'json':
        return utils.dumps(result.data) + '\n'
    if fmt == 'csv':
        return _csv_text(result.header, result.rows)
    lines = list(reports.experiment_table(result))
    if result.data.get('fidelity_mean') is not None:
        lines.extend(
            reports.fidelity_report([(result.data['target'], result.data['fidelity_mean'],
                                      result.data['fidelity_stddev'] or 0.)]))
    return '\n'.join(lines) + '\n'


def _emit(text: str, out: str = None):
    if out is None:
        click.echo(text, nl=False)
        return
    with utils.atomic_write(out) as file:
        file.write(text)
    logger.info("Wrote '%s'", out)


def _run_experiment(ctx, kind: str, chain, params: dict, seed, fmt: str, out: str):
    exp = experiments.experiment(kind, chain, params, seed=seed, config=ctx.obj)
    _emit(_render(exp.run(), fmt), out)


# endregion


@pathi.command('build-state')
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@_output_options
@click.pass_context
def build_state(ctx, setup_file, fmt, out):
    """Print the biphoton state emitted by the chain of a setup file"""
    chain = _load_document(setup_file, ctx.obj).chain()
    ket = chains.build_state(chain)
    items = sorted(ket.items())
    if fmt == 'json':
        text = utils.dumps({
            'truncation': chain.space.truncation,
            'amplitudes': [[sig, idl, amp] for (sig, idl), amp in items],
        }) + '\n'
    elif fmt == 'csv':
        text = _csv_text(('signal', 'idler', 're', 'im'),
                         [(sig, idl, amp.real, amp.imag) for (sig, idl), amp in items])
    else:
        text = '\n'.join(reports.state_table(ket)) + '\n'
    _emit(text, out)


@pathi.command('phase-scan')
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--stage', type=click.IntRange(min=0), default=None,
              help='Index of the phase shifter to scan, defaults to the first one')
@click.option('--points', type=click.IntRange(min=1), default=None, help='Number of phases')
@click.option('--rate', type=float, default=None, help='Mean counts per second per unit pair rate')
@click.option('--time', type=float, default=None, help='Integration time per point (s)')
@click.option('--overlap', type=click.FloatRange(0., 1.), default=None,
              help='Overlap between the crystal emissions')
@click.option('--signal', type=int, default=None, help='Signal OAM projected on')
@click.option('--idler', type=int, default=None, help='Idler OAM projected on')
@click.option('--noiseless', is_flag=True, default=None, help='Report exact mean counts')
@_seed_option
@_output_options
@click.pass_context
def phase_scan(ctx, setup_file, stage, points, rate, time, overlap, signal, idler, noiseless, seed,
               fmt, out):  # pylint: disable=too-many-arguments
    """Scan a phase shifter and fit the visibility of the coincidence fringe"""
    chain = _load_document(setup_file, ctx.obj).chain()
    params = _params(stage=stage,
                     points=points,
                     rate=rate,
                     time=time,
                     overlap=overlap,
                     signal=signal,
                     idler=idler,
                     noiseless=noiseless or None)
    _run_experiment(ctx, 'phase-scan', chain, params, seed, fmt, out)


@pathi.command()
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--modes', type=str, default=None, help='Comma separated OAM values to reconstruct on')
@click.option('--target', type=click.Choice(('ideal',) + states.TARGET_NAMES),
              default=None, help='State to report the fidelity with')
@click.option('--rate', type=float, default=None, help='Pairs per second')
@click.option('--time', type=float, default=None, help='Integration time per setting (s)')
@click.option('--resamples', type=click.IntRange(min=0), default=None,
              help='Bootstrap resamples, 0 to skip')
@click.option('--overlap', type=click.FloatRange(0., 1.), default=None,
              help='Overlap between the crystal emissions')
@click.option('--max-iter', type=click.IntRange(min=1), default=None, help='MLE iteration limit')
@click.option('--tol', type=float, default=None, help='MLE convergence tolerance')
@click.option('--noiseless', is_flag=True, default=None, help='Use exact mean counts')
@_seed_option
@_output_options
@click.pass_context
def tomography(ctx, setup_file, modes, target, rate, time, resamples, overlap, max_iter, tol,
               noiseless, seed, fmt, out):  # pylint: disable=too-many-arguments
    """Simulate a tomography of the chain output and reconstruct the state"""
    chain = _load_document(setup_file, ctx.obj).chain()
    if modes is not None:
        try:
            modes = tuple(int(part) for part in modes.split(','))
        except ValueError:
            raise click.BadParameter("'{}' is not a list of integers".format(modes),
                                     param_hint='--modes') from None
    params = _params(modes=modes,
                     target=target,
                     rate=rate,
                     time=time,
                     resamples=resamples,
                     overlap=overlap,
                     max_iter=max_iter,
                     tol=tol,
                     noiseless=noiseless or None)
    _run_experiment(ctx, 'tomography', chain, params, seed, fmt, out)


@pathi.command('spiral-spectrum')
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--crystal', type=click.IntRange(min=0), default=None, help='Crystal index')
@click.option('--modes', type=str, default=None, help='Comma separated OAM values')
@_output_options
@click.pass_context
def spiral_spectrum(ctx, setup_file, crystal, modes, fmt, out):
    """Computational basis crosstalk of one crystal"""
    chain = _load_document(setup_file, ctx.obj).chain()
    if modes is not None:
        try:
            modes = tuple(int(part) for part in modes.split(','))
        except ValueError:
            raise click.BadParameter("'{}' is not a list of integers".format(modes),
                                     param_hint='--modes') from None
    _run_experiment(ctx, 'spiral-spectrum', chain, _params(crystal=crystal, modes=modes), None,
                    fmt, out)


@pathi.command('qhq-solve')
@click.option('--input', 'input_', type=str, default='H', show_default=True,
              help='Input polarization: H, V, D, A, R, L or a JSON pair of amplitudes')
@click.option('--target', type=float, required=True, help='Target relative phase (deg)')
@click.option('--beta', type=float, default=None,
              help='Angle of the extra half-wave plate (deg), solves the QHHQ variant')
@_output_options
@click.pass_context
def qhq_solve(ctx, input_, target, beta, fmt, out):
    """Waveplate angles (deg) that give the locking beam a target relative phase"""
    try:
        vector = setups.parse_jones(input_).normalized()
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint='--input') from None
    target = setups.parse_angle(repr(target), 'deg')
    if beta is None:
        _run_experiment(ctx, 'qhq', None, {'input': vector, 'target': target}, None, fmt, out)
        return

    plates = polarization.solve_qhhq(vector, target, setups.parse_angle(repr(beta), 'deg'))
    labels = ('q_in', 'h_extra', 'h_mid', 'q_out')
    result = experiments.ExperimentResult(
        'qhhq', 'qhhq', {
            'input': [vector.h, vector.v],
            'target_deg': math.degrees(target),
            'plates': {label: plate.degrees for label, plate in zip(labels, plates)},
        }, ('plate', 'kind', 'angle_deg'),
        [(label, plate.kind.value, plate.degrees) for label, plate in zip(labels, plates)])
    _emit(_render(result, fmt), out)


@pathi.command('coherence-check')
@click.option('--lpa', type=click.FloatRange(min=0.), required=True, help='Pump path A (mm)')
@click.option('--lpb', type=click.FloatRange(min=0.), required=True, help='Pump path B (mm)')
@click.option('--lspdc', type=click.FloatRange(min=0.), required=True,
              help='Down-converted path between the crystals (mm)')
@click.option('--lcoh', type=click.FloatRange(min=0.), required=True,
              help='Pump coherence length (mm)')
@_output_options
@click.pass_context
def coherence_check(ctx, lpa, lpb, lspdc, lcoh, fmt, out):
    """Check that the path imbalance lies within the pump coherence length"""
    params = {'lpa': lpa, 'lpb': lpb, 'lspdc': lspdc, 'lcoh': lcoh}
    _run_experiment(ctx, 'coherence', None, params, None, fmt, out)


@pathi.command('stability-trace')
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--stage', type=click.IntRange(min=0), default=None,
              help='Index of the phase shifter, defaults to the first one')
@click.option('--steps', type=click.IntRange(min=1), default=None, help='Number of points')
@click.option('--time', type=float, default=None, help='Integration time per point (s)')
@click.option('--rate', type=float, default=None, help='Mean counts per second per unit pair rate')
@click.option('--overlap', type=click.FloatRange(0., 1.), default=None,
              help='Overlap between the crystal emissions')
@click.option('--drift', type=click.FloatRange(min=0.), default=None,
              help='Phase drift per step without the lock (rad)')
@click.option('--locked/--unlocked', default=None, help='Whether the phase lock is engaged')
@click.option('--signal', type=int, default=None, help='Signal OAM projected on')
@click.option('--idler', type=int, default=None, help='Idler OAM projected on')
@_seed_option
@_output_options
@click.pass_context
def stability_trace(ctx, setup_file, stage, steps, time, rate, overlap, drift, locked, signal,
                    idler, seed, fmt, out):  # pylint: disable=too-many-arguments
    """Coincidence trace at a fixed phase, with or without the phase lock"""
    chain = _load_document(setup_file, ctx.obj).chain()
    params = _params(stage=stage,
                     steps=steps,
                     time=time,
                     rate=rate,
                     overlap=overlap,
                     drift=drift,
                     locked=locked,
                     signal=signal,
                     idler=idler)
    _run_experiment(ctx, 'stability-trace', chain, params, seed, fmt, out)


@pathi.command()
@click.argument('setup_file', type=click.Path(exists=True, dir_okay=False))
@_seed_option
@_output_options
@click.pass_context
def run(ctx, setup_file, seed, fmt, out):
    """Run every experiment block of a setup file"""
    document = _load_document(setup_file, ctx.obj)
    chain = document.chain()
    results = []
    for block in document.experiments:
        exp = experiments.experiment(block.kind, chain, block.params, name=block.name, seed=seed,
                                     config=ctx.obj)
        results.append(exp.run())

    if fmt == 'json':
        text = utils.dumps({
            result.name: dict(kind=result.kind, **result.data) for result in results
        }) + '\n'
    elif fmt == 'csv':
        text = '\n'.join('# {} {}\n{}'.format(result.kind, result.name,
                                             _csv_text(result.header, result.rows))
                         for result in results)
    else:
        text = ''.join(_render(result, 'table') for result in results)
    _emit(text, out)
