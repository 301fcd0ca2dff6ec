# -*- coding: utf-8 -*-
"""Projective coincidence measurements: settings, designs and simulated count records"""
import csv
import dataclasses
import itertools
import json
import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from . import chains
from . import constants
from . import exceptions
from . import states
from . import utils

__all__ = ('MeasurementSetting', 'CountRecord', 'TomographyDesign', 'FringePoint', 'TracePoint',
           'product_setting', 'default_design', 'simulate_counts', 'crosstalk_matrix',
           'dominance_ratio', 'phase_scan', 'stability_trace', 'write_records_csv',
           'read_records_csv')

logger = logging.getLogger(__name__)

RECORD_FIELDS = ('setting_id', 'signal_ket', 'idler_ket', 'counts', 'integration_time')


@dataclasses.dataclass(frozen=True)
class MeasurementSetting:
    """A product projection, one hologram per photon"""
    signal_ket: states.PhotonKet
    idler_ket: states.PhotonKet

    def __post_init__(self):
        if self.signal_ket.space != self.idler_ket.space:
            raise exceptions.DimensionError('Signal and idler kets live in different mode spaces')
        for ket in (self.signal_ket, self.idler_ket):
            if abs(ket.norm() - 1.) > constants.NORM_TOL:
                raise ValueError('Setting kets must be normalized, got norm {}'.format(ket.norm()))

    @property
    def space(self) -> states.ModeSpace:
        return self.signal_ket.space

    def vector(self) -> np.ndarray:
        return states.tensor(self.signal_ket, self.idler_ket)

    def label(self) -> str:

        def describe(ket):
            return '+'.join('({:.3g})|{}>'.format(amp, ell) for ell, amp in ket.items())

        return '{} x {}'.format(describe(self.signal_ket), describe(self.idler_ket))


def product_setting(space: states.ModeSpace, signal: Union[int, dict], idler: Union[int, dict]):
    """Setting from two OAM values or two {ell: amplitude} maps"""

    def ket(spec):
        if isinstance(spec, dict):
            return states.photon_ket(space, spec)
        return states.basis_ket(space, spec)

    return MeasurementSetting(ket(signal), ket(idler))


@dataclasses.dataclass(frozen=True)
class CountRecord:
    setting: MeasurementSetting
    counts: Union[int, float]
    integration_time: float = 1.
    rate_scale: Optional[float] = None

    def __post_init__(self):
        if not self.counts >= 0:
            raise ValueError('Counts must be non-negative, got {}'.format(self.counts))


class FringePoint(NamedTuple):
    phi: float
    counts: Union[int, float]


class TracePoint(NamedTuple):
    time: float
    counts: int
    sigma: float


class TomographyDesign:
    """An ordered set of product settings whose projectors span the operators of the product
    subspace of ``signal_modes`` x ``idler_modes``"""

    def __init__(self,
                 settings: Sequence[MeasurementSetting],
                 signal_modes: Sequence[int],
                 idler_modes: Sequence[int] = None):
        settings = tuple(settings)
        if not settings:
            raise exceptions.CompletenessError('A design needs at least one setting')
        space = settings[0].space
        idler_modes = signal_modes if idler_modes is None else idler_modes
        self._space = space
        self._settings = settings
        self._signal_modes = tuple(signal_modes)
        self._idler_modes = tuple(idler_modes)
        self._indices = np.array(space.subspace_indices(self._signal_modes, self._idler_modes))

        vectors = []
        outside = np.ones(space.dim, dtype=bool)
        outside[self._indices] = False
        for idx, setting in enumerate(settings):
            if setting.space != space:
                raise exceptions.DimensionError('Setting {} uses a different mode space'.format(idx))
            vector = setting.vector()
            if np.any(np.abs(vector[outside]) > constants.NORM_TOL):
                raise ValueError('Setting {} has support outside the design modes'.format(idx))
            vectors.append(vector[self._indices])
        self._vectors = np.array(vectors)
        self._vectors.setflags(write=False)

    def __len__(self) -> int:
        return len(self._settings)

    def __iter__(self):
        return iter(self._settings)

    def __getitem__(self, item) -> MeasurementSetting:
        return self._settings[item]

    @property
    def space(self) -> states.ModeSpace:
        return self._space

    @property
    def settings(self) -> Tuple[MeasurementSetting, ...]:
        return self._settings

    @property
    def signal_modes(self) -> Tuple[int, ...]:
        return self._signal_modes

    @property
    def idler_modes(self) -> Tuple[int, ...]:
        return self._idler_modes

    @property
    def subspace_dim(self) -> int:
        return len(self._indices)

    @property
    def vectors(self) -> np.ndarray:
        """Setting vectors restricted to the subspace, one per row"""
        return self._vectors

    def projectors(self) -> np.ndarray:
        return np.einsum('ka,kb->kab', self._vectors, self._vectors.conj())

    def measurement_matrix(self) -> np.ndarray:
        """Rows map a row-major flattened subspace operator X to <v|X|v>"""
        return np.einsum('ka,kb->kab', self._vectors.conj(), self._vectors).reshape(len(self), -1)

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.measurement_matrix(), tol=1e-9))

    def is_complete(self) -> bool:
        return self.rank() == self.subspace_dim**2

    def check_complete(self):
        rank = self.rank()
        if rank != self.subspace_dim**2:
            raise exceptions.CompletenessError(
                'Design spans {} of the {} operator dimensions of the subspace'.format(
                    rank, self.subspace_dim**2))

    def index(self, setting: MeasurementSetting) -> int:
        for idx, candidate in enumerate(self._settings):
            if candidate is setting:
                return idx
        vector = setting.vector()[self._indices]
        for idx, candidate in enumerate(self._vectors):
            if np.allclose(candidate, vector, rtol=0., atol=constants.NORM_TOL):
                return idx
        raise ValueError('Setting {} is not part of the design'.format(setting.label()))


def _photon_design_kets(space: states.ModeSpace, modes: Sequence[int]) -> List[states.PhotonKet]:
    kets = [states.basis_ket(space, ell) for ell in modes]
    for first, second in itertools.combinations(modes, 2):
        for theta in (0., math.pi / 2):
            kets.append(states.photon_ket(space, {first: 1., second: np.exp(1j * theta)}))
    return kets


def default_design(space: states.ModeSpace,
                   signal_modes: Sequence[int],
                   idler_modes: Sequence[int] = None) -> TomographyDesign:
    """Computational kets plus the two-mode superpositions (|l> + e^{i theta}|l'>)/sqrt(2),
    theta in {0, pi/2}, for each photon and every product of the two photon sets"""
    idler_modes = signal_modes if idler_modes is None else idler_modes
    for modes in (signal_modes, idler_modes):
        if len(set(modes)) != len(modes) or not modes:
            raise ValueError('Design modes must be distinct and non-empty, got {}'.format(modes))
        space.check(*modes)
    settings = [
        MeasurementSetting(signal, idler)
        for signal, idler in itertools.product(_photon_design_kets(space, signal_modes),
                                               _photon_design_kets(space, idler_modes))
    ]
    design = TomographyDesign(settings, signal_modes, idler_modes)
    design.check_complete()
    return design


def _poisson(rng: np.random.Generator, mean: float, noiseless: bool):
    if noiseless:
        return float(mean)
    return int(rng.poisson(mean))


def simulate_counts(rho: states.DensityOperator,
                    design: Iterable[MeasurementSetting],
                    rate_scale: float,
                    time: float,
                    seed: int,
                    noiseless: bool = False,
                    brightness: float = 1.) -> List[CountRecord]:
    """Coincidence counts for each setting drawn from Poisson(rate_scale * time * brightness * p).
    Record k uses its own generator stream so the result does not depend on evaluation order.

    :param noiseless: report the exact means instead of sampled counts
    """
    if not rate_scale > 0. or not time > 0.:
        raise ValueError('Rate and integration time must be positive, got {} and {}'.format(
            rate_scale, time))
    records = []
    for idx, setting in enumerate(design):
        mean = rate_scale * time * brightness * states.projection_probability(rho, setting)
        rng = None if noiseless else utils.generator(seed, constants.STREAM_COUNTS, idx)
        records.append(CountRecord(setting, _poisson(rng, mean, noiseless), time, rate_scale))
    logger.debug('Simulated %i records (seed %s, noiseless=%s)', len(records), seed, noiseless)
    return records


def crosstalk_matrix(rho: states.DensityOperator, ell_range: Sequence[int]) -> np.ndarray:
    """Computational-basis coincidence probabilities, entry (i, j) for |ell_i>|ell_j>, scaled so
    that the largest entry is 1"""
    space = rho.space
    matrix = np.zeros((len(ell_range), len(ell_range)))
    for row, signal in enumerate(ell_range):
        for col, idler in enumerate(ell_range):
            matrix[row, col] = rho.matrix[space.index(signal, idler), space.index(signal, idler)].real
    matrix = np.clip(matrix, 0., None)
    largest = matrix.max() if matrix.size else 0.
    if largest > 0.:
        matrix /= largest
    return matrix


def dominance_ratio(matrix) -> float:
    """Ratio of the largest entry to the next highest one, inf when all others vanish"""
    entries = np.sort(np.asarray(matrix, dtype=float).ravel())[::-1]
    if entries.size < 2 or entries[1] <= 0.:
        return math.inf
    return float(entries[0] / entries[1])


def _check_phase_stage(chain: chains.ChainConfig, stage_index: int):
    try:
        stage = chain.stages[stage_index]
    except IndexError:
        raise exceptions.ChainError('Stage {} is outside the chain of {} stages'.format(
            stage_index, len(chain.stages))) from None
    if not isinstance(stage, chains.PhaseShifter):
        raise exceptions.ChainError('Stage {} is a {}, not a phase shifter'.format(
            stage_index,
            type(stage).__name__))
    return stage


def _mean_counts(chain, disting, setting, rate_scale, time) -> float:
    rho = chains.build_density(chain, disting)
    brightness = chains.pair_rate(chain, disting)
    return rate_scale * time * brightness * states.projection_probability(rho, setting)


def phase_scan(chain: chains.ChainConfig,
               disting: Optional[chains.DistinguishabilityModel],
               stage_index: int,
               phases: Sequence[float],
               setting: MeasurementSetting,
               rate_scale: float,
               time: float,
               seed: int,
               noiseless: bool = False) -> List[FringePoint]:
    """Scan the phase shifter at ``stage_index`` over ``phases`` recording coincidences in
    ``setting``.  The mean count at each phase is rate * time * pair_rate * p."""
    _check_phase_stage(chain, stage_index)
    fringe = []
    for idx, phi in enumerate(phases):
        scanned = chain.replace_stage(stage_index, chains.PhaseShifter(float(phi)))
        mean = _mean_counts(scanned, disting, setting, rate_scale, time)
        rng = None if noiseless else utils.generator(seed, constants.STREAM_COUNTS, idx)
        fringe.append(FringePoint(float(phi), _poisson(rng, mean, noiseless)))
    return fringe


def stability_trace(chain: chains.ChainConfig,
                    disting: Optional[chains.DistinguishabilityModel],
                    stage_index: int,
                    setting: MeasurementSetting,
                    rate_scale: float,
                    steps: int,
                    seed: int,
                    step_time: float = 1.,
                    drift: float = 0.,
                    locked: bool = True) -> List[TracePoint]:
    """Coincidences recorded repeatedly at the phase currently set on ``stage_index``.  Without
    the lock the phase performs a Gaussian random walk of ``drift`` rad per step, with it the
    phase stays put.  Each point carries the one standard deviation Poisson band sqrt(counts)."""
    stage = _check_phase_stage(chain, stage_index)
    if steps < 1:
        raise ValueError('Need at least one step, got {}'.format(steps))
    if drift < 0.:
        raise ValueError('Drift must be non-negative, got {}'.format(drift))

    if locked:
        offsets = np.zeros(steps)
    else:
        walk = utils.generator(seed, constants.STREAM_STABILITY, 0)
        offsets = np.cumsum(walk.normal(0., drift, size=steps))

    trace = []
    for step, offset in enumerate(offsets):
        scanned = chain.replace_stage(stage_index, chains.PhaseShifter(stage.phi + float(offset)))
        mean = _mean_counts(scanned, disting, setting, rate_scale, step_time)
        counts = int(utils.generator(seed, constants.STREAM_COUNTS, step).poisson(mean))
        trace.append(TracePoint(step * step_time, counts, math.sqrt(counts)))
    return trace


def _encode_ket(ket: states.PhotonKet) -> str:
    return json.dumps([[ell, amp.real, amp.imag] for ell, amp in ket.items()])


def _decode_ket(space: states.ModeSpace, text: str) -> states.PhotonKet:
    entries = json.loads(text)
    return states.photon_ket(space, {int(ell): complex(re, im) for ell, re, im in entries})


def write_records_csv(records: Sequence[CountRecord], stream: TextIO, design: TomographyDesign = None):
    """Write records with columns setting_id, signal_ket, idler_ket, counts, integration_time.
    Kets are JSON lists of [ell, re, im].  The setting id is the index in ``design`` if given,
    otherwise the record position."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(RECORD_FIELDS)
    for idx, record in enumerate(records):
        setting_id = design.index(record.setting) if design is not None else idx
        writer.writerow((setting_id, _encode_ket(record.setting.signal_ket),
                         _encode_ket(record.setting.idler_ket), record.counts,
                         record.integration_time))


def read_records_csv(stream: TextIO, space: states.ModeSpace = None) -> List[CountRecord]:
    space = space or states.ModeSpace()
    reader = csv.DictReader(stream)
    missing = set(RECORD_FIELDS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError('Record file is missing the columns {}'.format(sorted(missing)))
    records = []
    for row in reader:
        setting = MeasurementSetting(_decode_ket(space, row['signal_ket']),
                                     _decode_ket(space, row['idler_ket']))
        counts = float(row['counts'])
        if counts.is_integer() and '.' not in row['counts']:
            counts = int(counts)
        records.append(CountRecord(setting, counts, float(row['integration_time'])))
    return records
