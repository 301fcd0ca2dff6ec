# -*- coding: utf-8 -*-
"""Line oriented setup descriptions.

A document lists the stages of a source chain, one per line, followed by optional experiment
blocks::

    # Three crystals in the pump-shifted arrangement
    truncation 4
    crystal amp=1.0 pump_oam=0 alpha=[1.0]
    phase 0.0rad
    spp +4
    crystal amp=1.0 pump_oam=0 alpha=[1.0]
    phase 0.0rad
    mirror
    crystal amp=1.0 pump_oam=0 alpha=[1.0]

    [experiment tomography psi1]
    modes = -2,0,2
    target = psi1
    noiseless = true

``#`` starts a comment, blank lines are ignored.  Phases without a unit are in radians,
``modeshift a [b]`` adds a quanta to the signal photon and b (default a) to the idler.
"""
import cmath
import dataclasses
import json
import math
import re
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

from . import chains
from . import defaults
from . import exceptions
from . import polarization
from . import states
from . import utils

__all__ = ('SetupDocument', 'ExperimentBlock', 'parse_setup', 'format_setup', 'load_setup',
           'parse_angle', 'parse_jones', 'EXPERIMENT_KINDS')

STAGE_KEYWORDS = ('truncation', 'crystal', 'spp', 'mirror', 'phase', 'modeshift', '[experiment')
CRYSTAL_KEYS = ('amp', 'pump_oam', 'alpha')

_NUMBER = r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_ANGLE_RE = re.compile(r'^(?P<value>{})(?P<unit>rad|deg)?$'.format(_NUMBER))
_INT_RE = re.compile(r'^[+-]?\d+$')
_HEADER_RE = re.compile(r'^\[\s*experiment\s+(?P<kind>\S+)\s+(?P<name>\S+)\s*\]$')
_NAME_RE = re.compile(r'^[A-Za-z0-9_.-]+$')
_KEY_RE = re.compile(r'^(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<value>.*)$')


@dataclasses.dataclass
class ExperimentBlock:
    kind: str
    name: str
    params: Dict[str, Any]
    line: int = dataclasses.field(default=0, compare=False)
    key_lines: Dict[str, int] = dataclasses.field(default_factory=dict, compare=False)


@dataclasses.dataclass
class SetupDocument:
    truncation: int
    stages: Tuple[chains.ChainStage, ...]
    experiments: Tuple[ExperimentBlock, ...] = ()
    stage_lines: Tuple[int, ...] = dataclasses.field(default=(), compare=False)

    @property
    def space(self) -> states.ModeSpace:
        return states.ModeSpace(self.truncation)

    def chain(self) -> chains.ChainConfig:
        return chains.ChainConfig(self.stages, self.space)

    def experiment(self, name: str) -> ExperimentBlock:
        for block in self.experiments:
            if block.name == name:
                return block
        raise ValueError("No experiment named '{}', have {}".format(
            name, [block.name for block in self.experiments]))


# region Parameter types


class _ParamType(NamedTuple):
    parse: Callable[[str], Any]
    format: Callable[[Any], str]
    description: str


def _parse_int(text: str) -> int:
    if not _INT_RE.match(text):
        raise ValueError("'{}' is not an integer".format(text))
    return int(text)


def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("'{}' is not a finite number".format(text))
    return value


def _checked(parse: Callable[[str], Any], check: Callable[[Any], bool], what: str):

    def wrapped(text: str):
        value = parse(text)
        if not check(value):
            raise ValueError('{} must be {}'.format(text, what))
        return value

    return wrapped


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('true', 'yes', 'on', '1'):
        return True
    if lowered in ('false', 'no', 'off', '0'):
        return False
    raise ValueError("'{}' is not a boolean".format(text))


def _parse_modes(text: str) -> Tuple[int, ...]:
    modes = tuple(_parse_int(part.strip()) for part in text.split(','))
    if len(set(modes)) != len(modes):
        raise ValueError('Modes must be distinct')
    return modes


def _parse_target(text: str) -> str:
    if text != 'ideal' and text not in states.TARGET_NAMES:
        raise ValueError("Unknown target '{}'".format(text))
    return text


def parse_angle(text: str, default_unit: str = 'rad') -> float:
    """'<number>rad' or '<number>deg' in radians, bare numbers are taken in ``default_unit``"""
    match = _ANGLE_RE.match(text)
    if match is None:
        raise ValueError("'{}' is not an angle".format(text))
    value = _parse_float(match.group('value'))
    unit = match.group('unit') or default_unit
    return math.radians(value) if unit == 'deg' else value


_NAMED_POLARIZATIONS = {
    'H': (1., 0.),
    'V': (0., 1.),
    'D': (1. / math.sqrt(2.), 1. / math.sqrt(2.)),
    'A': (1. / math.sqrt(2.), -1. / math.sqrt(2.)),
    'R': (1. / math.sqrt(2.), -1j / math.sqrt(2.)),
    'L': (1. / math.sqrt(2.), 1j / math.sqrt(2.)),
}


def parse_jones(text: str) -> polarization.JonesVector:
    """A named polarization (H, V, D, A, R, L) or a JSON pair of complex amplitudes"""
    if text in _NAMED_POLARIZATIONS:
        return polarization.JonesVector(*_NAMED_POLARIZATIONS[text])
    components = json.loads(text)
    if not isinstance(components, list) or len(components) != 2:
        raise ValueError('A Jones vector needs two components')
    vector = polarization.JonesVector(*map(utils.decode_complex, components))
    if not (cmath.isfinite(vector.h) and cmath.isfinite(vector.v)):
        raise ValueError('Jones vector components must be finite')
    if vector.norm() == 0.:
        raise ValueError('The Jones vector must be nonzero')
    return vector


def _format_float(value: float) -> str:
    return repr(float(value))


def _format_jones(vector: polarization.JonesVector) -> str:
    return json.dumps(utils.to_json([vector.h, vector.v]))


_INT = _ParamType(_parse_int, str, 'an integer')
_NONNEG_INT = _ParamType(_checked(_parse_int, lambda val: val >= 0, 'non-negative'), str,
                         'a non-negative integer')
_POS_INT = _ParamType(_checked(_parse_int, lambda val: val > 0, 'positive'), str,
                      'a positive integer')
_POS_FLOAT = _ParamType(_checked(_parse_float, lambda val: val > 0., 'positive'), _format_float,
                        'a positive number')
_NONNEG_FLOAT = _ParamType(_checked(_parse_float, lambda val: val >= 0., 'non-negative'),
                           _format_float, 'a non-negative number')
_OVERLAP = _ParamType(_checked(_parse_float, lambda val: 0. <= val <= 1., 'in [0, 1]'),
                      _format_float, 'a number in [0, 1]')
_BOOL = _ParamType(_parse_bool, lambda val: 'true' if val else 'false', 'true or false')
_MODES = _ParamType(_parse_modes, lambda val: ','.join(map(str, val)),
                    'a comma separated list of OAM values')
_TARGET = _ParamType(_parse_target, str, 'ideal or one of {}'.format(', '.join(states.TARGET_NAMES)))
_ANGLE_DEG = _ParamType(lambda text: parse_angle(text, 'deg'), lambda val: '{!r}rad'.format(val),
                        'an angle (bare numbers in degrees)')
_JONES = _ParamType(parse_jones, _format_jones,
                    'one of H, V, D, A, R, L or a JSON pair of complex amplitudes')

EXPERIMENT_KINDS = {
    'tomography': {
        'modes': _MODES,
        'target': _TARGET,
        'rate': _POS_FLOAT,
        'time': _POS_FLOAT,
        'seed': _NONNEG_INT,
        'resamples': _NONNEG_INT,
        'overlap': _OVERLAP,
        'noiseless': _BOOL,
        'max_iter': _POS_INT,
        'tol': _POS_FLOAT,
    },
    'phase-scan': {
        'stage': _NONNEG_INT,
        'points': _POS_INT,
        'rate': _POS_FLOAT,
        'time': _POS_FLOAT,
        'seed': _NONNEG_INT,
        'overlap': _OVERLAP,
        'signal': _INT,
        'idler': _INT,
        'noiseless': _BOOL,
    },
    'spiral-spectrum': {
        'crystal': _NONNEG_INT,
        'modes': _MODES,
    },
    'qhq': {
        'input': _JONES,
        'target': _ANGLE_DEG,
    },
    'stability-trace': {
        'stage': _NONNEG_INT,
        'steps': _POS_INT,
        'time': _POS_FLOAT,
        'rate': _POS_FLOAT,
        'seed': _NONNEG_INT,
        'overlap': _OVERLAP,
        'drift': _NONNEG_FLOAT,
        'locked': _BOOL,
        'signal': _INT,
        'idler': _INT,
    },
    'coherence': {
        'lpa': _NONNEG_FLOAT,
        'lpb': _NONNEG_FLOAT,
        'lspdc': _NONNEG_FLOAT,
        'lcoh': _NONNEG_FLOAT,
    },
}  # type: Dict[str, Dict[str, _ParamType]]

REQUIRED_KEYS = {
    'qhq': ('target',),
    'coherence': ('lpa', 'lpb', 'lspdc', 'lcoh'),
}

# endregion


class _Token(NamedTuple):
    column: int
    text: str


class _Parser:

    def __init__(self, default_truncation: int = None):
        self._truncation = None  # type: Optional[int]
        self._truncation_line = None  # type: Optional[int]
        self._default_truncation = defaults.TRUNCATION if default_truncation is None else default_truncation
        self._stages = []  # type: List[chains.ChainStage]
        self._stage_lines = []  # type: List[int]
        self._experiments = []  # type: List[ExperimentBlock]
        self._last_line = 1

    def parse(self, text: str) -> SetupDocument:
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].rstrip()
            self._last_line = number
            if not line.strip():
                continue
            if self._experiments:
                self._block_line(number, line)
            else:
                self._stage_line(number, line)
        return self._finish()

    # region Stages

    def _stage_line(self, number: int, line: str):
        tokens = _tokenize(number, line)
        keyword = tokens[0]
        handler = {
            'truncation': self._truncation_stmt,
            'crystal': self._crystal,
            'spp': self._spp,
            'mirror': self._mirror,
            'phase': self._phase,
            'modeshift': self._modeshift,
        }.get(keyword.text)
        if handler is not None:
            handler(number, tokens)
            return
        if keyword.text.startswith('['):
            self._header(number, line)
            return
        raise exceptions.SetupSyntaxError("Unknown statement '{}'".format(keyword.text), number,
                                          keyword.column, STAGE_KEYWORDS)

    def _add_stage(self, number: int, stage: chains.ChainStage):
        self._stages.append(stage)
        self._stage_lines.append(number)

    def _truncation_stmt(self, number: int, tokens: List[_Token]):
        value = _single_argument(number, tokens, '<integer>')
        truncation = _convert(number, value, _NONNEG_INT.parse, '<non-negative integer>')
        if self._truncation is not None:
            raise exceptions.SetupSemanticError(
                'Truncation already set on line {}'.format(self._truncation_line), number)
        self._truncation = truncation
        self._truncation_line = number

    def _crystal(self, number: int, tokens: List[_Token]):
        params = {}  # type: Dict[str, Any]
        for token in tokens[1:]:
            key, sep, value = token.text.partition('=')
            if not sep or key not in CRYSTAL_KEYS:
                raise exceptions.SetupSyntaxError("Unexpected '{}'".format(token.text), number,
                                                  token.column,
                                                  tuple('{}='.format(key) for key in CRYSTAL_KEYS))
            if key in params:
                raise exceptions.SetupSemanticError("Duplicate crystal key '{}'".format(key), number,
                                                    token.column)
            value_column = token.column + len(key) + 1
            value_token = _Token(value_column, value)
            if key == 'amp':
                params[key] = _convert(number, value_token,
                                       _checked(_parse_float, lambda val: val >= 0., 'non-negative'),
                                       '<non-negative number>')
            elif key == 'pump_oam':
                params[key] = _convert(number, value_token, _parse_int, '<integer>')
            else:
                params[key] = _convert(number, value_token, _parse_alpha, '<JSON list of amplitudes>')

        try:
            spec = chains.CrystalSpec(pump_amplitude=params.get('amp', 1.),
                                      pump_oam=params.get('pump_oam', 0),
                                      spiral_coefficients=params.get('alpha', (1.,)))
        except (ValueError, OverflowError) as exc:
            raise exceptions.SetupSemanticError(str(exc), number, tokens[0].column) from None
        self._add_stage(number, chains.Crystal(spec))

    def _spp(self, number: int, tokens: List[_Token]):
        value = _single_argument(number, tokens, '<integer>')
        self._add_stage(number, chains.PumpModeShifter(_convert(number, value, _parse_int, '<integer>')))

    def _mirror(self, number: int, tokens: List[_Token]):
        if len(tokens) > 1:
            raise exceptions.SetupSyntaxError('mirror takes no arguments', number, tokens[1].column,
                                              ('<end of line>',))
        self._add_stage(number, chains.Mirror())

    def _phase(self, number: int, tokens: List[_Token]):
        value = _single_argument(number, tokens, '<number>rad', '<number>deg')
        phi = _convert(number, value, parse_angle, '<number>rad', '<number>deg')
        self._add_stage(number, chains.PhaseShifter(phi))

    def _modeshift(self, number: int, tokens: List[_Token]):
        if len(tokens) not in (2, 3):
            column = tokens[3].column if len(tokens) > 3 else tokens[0].column + len(tokens[0].text)
            raise exceptions.SetupSyntaxError('modeshift takes one or two integers', number, column,
                                              ('<integer>',))
        deltas = [_convert(number, token, _parse_int, '<integer>') for token in tokens[1:]]
        self._add_stage(number, chains.mode_shifter(*deltas))

    # endregion

    # region Experiments

    def _header(self, number: int, line: str):
        stripped = line.strip()
        column = line.index(stripped[0]) + 1
        match = _HEADER_RE.match(stripped)
        if match is None:
            raise exceptions.SetupSyntaxError('Malformed experiment header', number, column,
                                              ('[experiment <kind> <name>]',))
        kind, name = match.group('kind'), match.group('name')
        if kind not in EXPERIMENT_KINDS:
            raise exceptions.SetupSyntaxError("Unknown experiment kind '{}'".format(kind), number,
                                              line.index(kind) + 1, EXPERIMENT_KINDS)
        if not _NAME_RE.match(name):
            raise exceptions.SetupSyntaxError("Invalid experiment name '{}'".format(name), number,
                                              line.rindex(name) + 1, ('<name>',))
        for block in self._experiments:
            if block.name == name:
                raise exceptions.SetupSemanticError(
                    "Experiment '{}' already defined on line {}".format(name, block.line), number,
                    column)
        self._experiments.append(ExperimentBlock(kind, name, {}, line=number))

    def _block_line(self, number: int, line: str):
        stripped = line.strip()
        column = line.index(stripped[0]) + 1
        if stripped.startswith('['):
            self._header(number, line)
            return
        match = _KEY_RE.match(stripped)
        if match is None:
            raise exceptions.SetupSyntaxError('Expected a key = value pair', number, column,
                                              ('<key> = <value>', '[experiment'))
        block = self._experiments[-1]
        schema = EXPERIMENT_KINDS[block.kind]
        key, value = match.group('key'), match.group('value').strip()
        if key not in schema:
            raise exceptions.SetupSyntaxError(
                "Unknown key '{}' for {} experiments".format(key, block.kind), number, column,
                schema)
        if key in block.params:
            raise exceptions.SetupSemanticError(
                "Duplicate key '{}' (first set on line {})".format(key, block.key_lines[key]),
                number, column)
        value_column = column + stripped.index(value) if value else column + len(stripped)
        block.params[key] = _convert(number, _Token(value_column, value), schema[key].parse,
                                     '<{}>'.format(schema[key].description))
        block.key_lines[key] = number

    # endregion

    def _finish(self) -> SetupDocument:
        truncation = self._default_truncation if self._truncation is None else self._truncation
        document = SetupDocument(truncation, tuple(self._stages), tuple(self._experiments),
                                 tuple(self._stage_lines))
        if not self._stages or not any(isinstance(stage, chains.Crystal) for stage in self._stages):
            raise exceptions.SetupSemanticError('The setup has no crystal stage', self._last_line, 1)

        space = document.space
        odd = chains.find_odd_pump(document.stages)
        if odd is not None:
            raise exceptions.SetupSemanticError('This crystal is pumped with odd OAM',
                                                self._stage_lines[odd])
        overflow = chains.find_overflow(document.stages, space)
        if overflow is not None:
            raise exceptions.SetupSemanticError(
                'OAM leaves the truncation |ell| <= {} here'.format(space.truncation),
                self._stage_lines[overflow])

        for block in document.experiments:
            self._check_block(document, block)
        return document

    def _check_block(self, document: SetupDocument, block: ExperimentBlock):
        for key in REQUIRED_KEYS.get(block.kind, ()):
            if key not in block.params:
                raise exceptions.SetupSemanticError(
                    "Experiment '{}' needs the key '{}'".format(block.name, key), block.line)

        space = document.space
        params = block.params
        for key in ('modes', 'signal', 'idler'):
            if key in params:
                values = params[key] if key == 'modes' else (params[key],)
                if not all(space.contains(value) for value in values):
                    raise exceptions.SetupSemanticError(
                        "'{}' leaves the truncation |ell| <= {}".format(key, space.truncation),
                        block.key_lines[key])
        if 'stage' in params:
            stage = params['stage']
            if stage >= len(document.stages) or not isinstance(document.stages[stage],
                                                               chains.PhaseShifter):
                raise exceptions.SetupSemanticError('Stage {} is not a phase shifter'.format(stage),
                                                    block.key_lines['stage'])
        if 'crystal' in params:
            num_crystals = sum(isinstance(stage, chains.Crystal) for stage in document.stages)
            if params['crystal'] >= num_crystals:
                raise exceptions.SetupSemanticError(
                    'There are only {} crystals'.format(num_crystals), block.key_lines['crystal'])


def _tokenize(number: int, line: str) -> List[_Token]:
    """Split on whitespace, keeping bracketed groups together"""
    tokens = []
    start = None
    depth = 0
    opened = None
    for idx, char in enumerate(line):
        if char.isspace() and depth == 0:
            if start is not None:
                tokens.append(_Token(start + 1, line[start:idx]))
                start = None
            continue
        if start is None:
            start = idx
        if char == '[':
            if depth == 0:
                opened = idx
            depth += 1
        elif char == ']':
            depth -= 1
            if depth < 0:
                raise exceptions.SetupSyntaxError("Unbalanced ']'", number, idx + 1, ('<value>',))
    if depth > 0:
        raise exceptions.SetupSyntaxError("Unclosed '['", number, opened + 1, (']',))
    if start is not None:
        tokens.append(_Token(start + 1, line[start:]))
    return tokens


def _single_argument(number: int, tokens: List[_Token], *expected: str) -> _Token:
    if len(tokens) != 2:
        column = tokens[2].column if len(tokens) > 2 else tokens[0].column + len(tokens[0].text)
        raise exceptions.SetupSyntaxError('{} takes exactly one argument'.format(tokens[0].text),
                                          number, column, expected)
    return tokens[1]


def _convert(number: int, token: _Token, parse: Callable[[str], Any], *expected: str):
    try:
        return parse(token.text)
    except (ValueError, TypeError, OverflowError, RecursionError) as exc:
        raise exceptions.SetupSyntaxError('Invalid value: {}'.format(exc), number, token.column,
                                          expected) from None


def _parse_alpha(text: str) -> Tuple[complex, ...]:
    entries = json.loads(text)
    if not isinstance(entries, list) or not entries:
        raise ValueError('alpha must be a non-empty list')
    coeffs = tuple(utils.decode_complex(entry) for entry in entries)
    if not all(cmath.isfinite(coeff) for coeff in coeffs):
        raise ValueError('alpha entries must be finite')
    return coeffs


def parse_setup(text: str, default_truncation: int = None) -> SetupDocument:
    """Parse a setup description.  Syntax problems raise a SetupSyntaxError carrying the line,
    column and the tokens that were expected there, physically invalid chains raise a
    SetupSemanticError pointing at the offending line."""
    return _Parser(default_truncation).parse(text)


def load_setup(path, default_truncation: int = None) -> SetupDocument:
    with open(str(path), 'r', encoding='utf-8') as file:
        return parse_setup(file.read(), default_truncation)


def _format_complex(value: complex):
    return value.real if value.imag == 0. else [value.real, value.imag]


def _format_stage(stage: chains.ChainStage) -> str:
    if isinstance(stage, chains.Crystal):
        spec = stage.spec
        alpha = json.dumps([_format_complex(coeff) for coeff in spec.spiral_coefficients])
        return 'crystal amp={!r} pump_oam={} alpha={}'.format(spec.pump_amplitude, spec.pump_oam,
                                                              alpha)
    if isinstance(stage, chains.PumpModeShifter):
        return 'spp {:+d}'.format(stage.delta_oam)
    if isinstance(stage, chains.Mirror):
        return 'mirror'
    if isinstance(stage, chains.PhaseShifter):
        return 'phase {!r}rad'.format(stage.phi)
    if isinstance(stage, chains.DownconversionModeShifter):
        if stage.signal_delta == stage.idler_delta:
            return 'modeshift {}'.format(stage.signal_delta)
        return 'modeshift {} {}'.format(stage.signal_delta, stage.idler_delta)
    raise TypeError('Unknown stage type: {}'.format(type(stage).__name__))


def format_setup(document: SetupDocument) -> str:
    """Canonical text of a document, parsing it gives back an equal document"""
    lines = ['truncation {}'.format(document.truncation)]
    lines.extend(_format_stage(stage) for stage in document.stages)
    for block in document.experiments:
        schema = EXPERIMENT_KINDS[block.kind]
        lines.append('')
        lines.append('[experiment {} {}]'.format(block.kind, block.name))
        for key in schema:
            if key in block.params:
                lines.append('{} = {}'.format(key, schema[key].format(block.params[key])))
    return '\n'.join(lines) + '\n'

