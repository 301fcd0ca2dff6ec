# -*- coding: utf-8 -*-
"""Biphoton states emitted by a chain of coherently pumped crystals.

A chain is walked from the first stage to the last.  Pump-side stages (spiral phase plates and
mirrors) change the OAM of the pump reaching later crystals, down-conversion stages (mode and
phase shifters) act on the photons of every crystal placed before them.
"""
import cmath
import dataclasses
import logging
import math
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import defaults
from . import exceptions
from . import states

__all__ = ('CrystalSpec', 'Crystal', 'PumpModeShifter', 'DownconversionModeShifter', 'PhaseShifter',
           'Mirror', 'ChainConfig', 'CoherenceGeometry', 'DistinguishabilityModel', 'mode_shifter',
           'crystal_emission', 'contributions', 'build_state', 'build_density', 'pair_rate',
           'accumulated_phases', 'coherence_satisfied', 'path_imbalance', 'canonical_chain',
           'path_identity_chain', 'splitter_amplitudes', 'splitter_reflectivities', 'find_odd_pump',
           'find_overflow')

logger = logging.getLogger(__name__)

Contribution = Tuple[complex, states.BiphotonKet]


@dataclasses.dataclass(frozen=True)
class CrystalSpec:
    """An SPDC crystal.

    :param pump_amplitude: square root of the relative pump power reaching the crystal
    :param pump_oam: local pump OAM offset, added to whatever the chain has imprinted on the pump
    :param spiral_coefficients: alpha_k for k = 0..K, alpha_k applies to both the +k and -k orders.
        Normalized on construction so that |alpha_0|^2 + 2 sum_k>0 |alpha_k|^2 = 1
    """
    pump_amplitude: float = 1.
    pump_oam: int = 0
    spiral_coefficients: Tuple[complex, ...] = (1.,)

    def __post_init__(self):
        if not (self.pump_amplitude >= 0. and math.isfinite(self.pump_amplitude)):
            raise ValueError('Pump amplitude must be finite and non-negative, got {}'.format(
                self.pump_amplitude))
        coeffs = tuple(complex(coeff) for coeff in self.spiral_coefficients)
        try:
            power = float(self.pump_amplitude)**2
            weight = sum((1 if order == 0 else 2) * abs(coeff)**2 for order, coeff in enumerate(coeffs))
        except OverflowError:
            raise ValueError('Crystal amplitudes are too large to square') from None
        if not (math.isfinite(power) and math.isfinite(weight)):
            raise ValueError('Spiral coefficients must be finite')
        if weight == 0.:
            raise exceptions.ZeroStateError('Spiral spectrum has no nonzero coefficient')
        if abs(weight - 1.) > 1e-14:
            # Already normalized coefficients are kept bit for bit
            coeffs = tuple(coeff / math.sqrt(weight) for coeff in coeffs)
        object.__setattr__(self, 'pump_amplitude', float(self.pump_amplitude))
        object.__setattr__(self, 'pump_oam', int(self.pump_oam))
        object.__setattr__(self, 'spiral_coefficients', coeffs)

    @property
    def max_order(self) -> int:
        return len(self.spiral_coefficients) - 1


@dataclasses.dataclass(frozen=True)
class Crystal:
    spec: CrystalSpec = CrystalSpec()


@dataclasses.dataclass(frozen=True)
class PumpModeShifter:
    """Spiral phase plate in the pump beam"""
    delta_oam: int


@dataclasses.dataclass(frozen=True)
class DownconversionModeShifter:
    """Adds OAM quanta to the down-converted photons passing through it"""
    signal_delta: int
    idler_delta: int


@dataclasses.dataclass(frozen=True)
class PhaseShifter:
    phi: float


@dataclasses.dataclass(frozen=True)
class Mirror:
    """Inverts the sign of the pump OAM"""


ChainStage = Union[Crystal, PumpModeShifter, DownconversionModeShifter, PhaseShifter, Mirror]


def mode_shifter(delta: int, idler_delta: int = None) -> DownconversionModeShifter:
    """Mode shifter acting on both photons, by default adding the same OAM to each"""
    return DownconversionModeShifter(int(delta), int(delta if idler_delta is None else idler_delta))


@dataclasses.dataclass(frozen=True)
class ChainConfig:
    stages: Tuple[ChainStage, ...]
    space: states.ModeSpace = states.ModeSpace()

    def __post_init__(self):
        object.__setattr__(self, 'stages', tuple(self.stages))
        if not self.crystal_indices:
            raise exceptions.ChainError('The chain has no crystal stage')
        odd = find_odd_pump(self.stages)
        if odd is not None:
            raise exceptions.UnsupportedPumpError('Crystal at stage {} is pumped with odd OAM'.format(odd))
        overflow = find_overflow(self.stages, self.space)
        if overflow is not None:
            raise exceptions.BoundError('Stage {} drives OAM outside the truncation |ell| <= {}'.format(
                overflow, self.space.truncation))

    @property
    def crystal_indices(self) -> Tuple[int, ...]:
        return tuple(idx for idx, stage in enumerate(self.stages) if isinstance(stage, Crystal))

    @property
    def crystals(self) -> Tuple[CrystalSpec, ...]:
        return tuple(self.stages[idx].spec for idx in self.crystal_indices)

    @property
    def num_crystals(self) -> int:
        return len(self.crystal_indices)

    def replace_stage(self, index: int, stage: ChainStage) -> 'ChainConfig':
        stages = list(self.stages)
        stages[index] = stage
        return ChainConfig(tuple(stages), self.space)


@dataclasses.dataclass(frozen=True)
class CoherenceGeometry:
    """Path lengths (mm) of the two-crystal interferometer and the pump coherence length"""
    l_pump_a: float
    l_pump_b: float
    l_spdc: float
    l_coherence: float

    def __post_init__(self):
        for field in dataclasses.fields(self):
            if getattr(self, field.name) < 0.:
                raise ValueError("Length '{}' must be non-negative".format(field.name))


class DistinguishabilityModel:
    """Pairwise overlap gamma(i, j) of the emission processes of crystals i and j"""

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise exceptions.ModelError('Overlap matrix must be square, got shape {}'.format(
                matrix.shape))
        if not np.allclose(matrix, matrix.T, rtol=0., atol=1e-12):
            raise exceptions.ModelError('Overlap matrix must be symmetric')
        if not np.allclose(np.diag(matrix), 1., rtol=0., atol=1e-12):
            raise exceptions.ModelError('A crystal must fully overlap with itself')
        if np.any(matrix < 0.) or np.any(matrix > 1.):
            raise exceptions.ModelError('Overlaps must lie in [0, 1]')
        smallest = np.linalg.eigvalsh(matrix)[0]
        if smallest < -1e-12:
            raise exceptions.ModelError(
                'Overlap matrix is not positive semi-definite (eigenvalue {})'.format(smallest))
        matrix.setflags(write=False)
        self._matrix = matrix

    @classmethod
    def coherent(cls, num_crystals: int) -> 'DistinguishabilityModel':
        return cls(np.ones((num_crystals, num_crystals)))

    @classmethod
    def from_matrix(cls, matrix) -> 'DistinguishabilityModel':
        return cls(matrix)

    @classmethod
    def uniform(cls, num_crystals: int, overlap: float) -> 'DistinguishabilityModel':
        matrix = np.full((num_crystals, num_crystals), float(overlap))
        np.fill_diagonal(matrix, 1.)
        return cls(matrix)

    @classmethod
    def from_pairs(cls, num_crystals: int,
                   overlaps: Mapping[Tuple[int, int], float]) -> 'DistinguishabilityModel':
        """Unlisted pairs are fully coherent"""
        matrix = np.ones((num_crystals, num_crystals))
        for (first, second), value in overlaps.items():
            matrix[first, second] = matrix[second, first] = value
        return cls(matrix)

    def __repr__(self) -> str:
        return 'DistinguishabilityModel({})'.format(self._matrix.tolist())

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def num_crystals(self) -> int:
        return self._matrix.shape[0]

    def overlap(self, first: int, second: int) -> float:
        return float(self._matrix[first, second])


def _emission_terms(spec: CrystalSpec, pump_oam: int) -> dict:
    if pump_oam % 2:
        raise exceptions.UnsupportedPumpError(
            'Pump OAM {} is odd and cannot be shared symmetrically by the photons'.format(pump_oam))
    centre = pump_oam // 2
    terms = {}
    for order, coeff in enumerate(spec.spiral_coefficients):
        if order == 0:
            terms[(centre, centre)] = coeff
        else:
            terms[(centre + order, centre - order)] = coeff
            terms[(centre - order, centre + order)] = coeff
    return terms


def crystal_emission(spec: CrystalSpec,
                     space: states.ModeSpace = None,
                     pump_oam: int = None) -> states.BiphotonKet:
    """The normalized pair state emitted by a single crystal.

    :param spec: the crystal
    :param space: the mode space, defaults to the default truncation
    :param pump_oam: effective pump OAM, defaults to the crystal's own ``pump_oam``
    """
    space = space or states.ModeSpace()
    pump_oam = spec.pump_oam if pump_oam is None else pump_oam
    return states.normalize(states.BiphotonKet(space, _emission_terms(spec, pump_oam)))


def _walk_pump(stages: Sequence[ChainStage]):
    """Yield (stage index, crystal spec, effective pump OAM) for each crystal"""
    pump_oam = 0
    for idx, stage in enumerate(stages):
        if isinstance(stage, PumpModeShifter):
            pump_oam += stage.delta_oam
        elif isinstance(stage, Mirror):
            pump_oam = -pump_oam
        elif isinstance(stage, Crystal):
            yield idx, stage.spec, pump_oam + stage.spec.pump_oam


def find_odd_pump(stages: Sequence[ChainStage]) -> Optional[int]:
    """Index of the first crystal pumped with odd OAM, or None"""
    for idx, _, pump_oam in _walk_pump(stages):
        if pump_oam % 2:
            return idx
    return None


def find_overflow(stages: Sequence[ChainStage], space: states.ModeSpace) -> Optional[int]:
    """Index of the first stage at which some photon OAM leaves the truncation, or None"""
    crystal_at = {idx: (spec, pump_oam) for idx, spec, pump_oam in _walk_pump(stages)}
    pairs = set()
    for idx, stage in enumerate(stages):
        if idx in crystal_at:
            spec, pump_oam = crystal_at[idx]
            if pump_oam % 2:
                continue
            pairs.update(_emission_terms(spec, pump_oam))
        elif isinstance(stage, DownconversionModeShifter):
            pairs = {(sig + stage.signal_delta, idl + stage.idler_delta) for sig, idl in pairs}
        else:
            continue
        if any(not (space.contains(sig) and space.contains(idl)) for sig, idl in pairs):
            return idx
    return None


def contributions(chain: ChainConfig) -> List[Contribution]:
    """Per crystal (weight, ket) in chain order.  The ket is the unit-norm emission after all
    downstream mode shifts, the weight is the pump amplitude times all downstream phase factors."""
    crystal_at = {idx: pump_oam for idx, _, pump_oam in _walk_pump(chain.stages)}
    weights = []  # type: List[complex]
    kets = []  # type: List[states.BiphotonKet]
    for idx, stage in enumerate(chain.stages):
        if isinstance(stage, Crystal):
            weights.append(complex(stage.spec.pump_amplitude))
            kets.append(
                states.BiphotonKet(chain.space, _emission_terms(stage.spec, crystal_at[idx])))
        elif isinstance(stage, DownconversionModeShifter):
            kets = [ket.shifted(stage.signal_delta, stage.idler_delta) for ket in kets]
        elif isinstance(stage, PhaseShifter):
            factor = cmath.exp(1j * stage.phi)
            weights = [weight * factor for weight in weights]
    return list(zip(weights, kets))


def build_state(chain: ChainConfig) -> states.BiphotonKet:
    """The coherent superposition of all crystal emissions, normalized"""
    amplitudes = {}
    for weight, ket in contributions(chain):
        for pair, amp in ket.amplitudes.items():
            amplitudes[pair] = amplitudes.get(pair, 0j) + weight * amp
    try:
        return states.normalize(states.BiphotonKet(chain.space, amplitudes))
    except exceptions.ZeroStateError:
        raise exceptions.ZeroStateError(
            'The emission amplitudes of the chain interfere to zero') from None


def _unnormalized_density(chain: ChainConfig,
                          disting: DistinguishabilityModel = None) -> Tuple[np.ndarray, float]:
    contribs = contributions(chain)
    if disting is None:
        disting = DistinguishabilityModel.coherent(len(contribs))
    if disting.num_crystals != len(contribs):
        raise exceptions.ModelError('Model describes {} crystals but the chain has {}'.format(
            disting.num_crystals, len(contribs)))

    weighted = np.array([weight * ket.vector() for weight, ket in contribs]).T  # dim x n
    matrix = weighted @ disting.matrix @ weighted.conj().T
    incoherent = sum(abs(weight)**2 for weight, _ in contribs)
    return matrix, incoherent


def build_density(chain: ChainConfig,
                  disting: DistinguishabilityModel = None) -> states.DensityOperator:
    """Mixed output state of a chain whose crystals are partially distinguishable:
    rho = sum_ij gamma(i, j) w_i w_j^* |e_i><e_j| renormalized to unit trace"""
    matrix, _ = _unnormalized_density(chain, disting)
    trace = np.trace(matrix).real
    if trace <= 0.:
        raise exceptions.ZeroStateError('The chain emits no pairs')
    matrix = matrix / trace
    return states.DensityOperator(chain.space, 0.5 * (matrix + matrix.conj().T))


def pair_rate(chain: ChainConfig, disting: DistinguishabilityModel = None) -> float:
    """Pair emission rate relative to the incoherent sum of the crystal rates.  For two crystals
    emitting into the same mode this is 1 + gamma cos(phi)."""
    matrix, incoherent = _unnormalized_density(chain, disting)
    if incoherent == 0.:
        return 0.
    return float(np.trace(matrix).real / incoherent)


def accumulated_phases(chain: ChainConfig) -> List[float]:
    """Relative phases phi_bar_i = sum_{j=d-i}^{d-1} phi_j of the |i,i> terms of a canonical chain,
    i.e. d crystals with exactly one phase shifter between each neighbouring pair"""
    crystals = chain.crystal_indices
    phases = []
    for start, stop in zip(crystals[:-1], crystals[1:]):
        gap = [stage for stage in chain.stages[start + 1:stop] if isinstance(stage, PhaseShifter)]
        if len(gap) != 1:
            raise exceptions.ShapeError(
                'Expected one phase shifter between stages {} and {}, found {}'.format(
                    start, stop, len(gap)))
        phases.append(gap[0].phi)
    outside = chain.stages[:crystals[0]] + chain.stages[crystals[-1] + 1:]
    if any(isinstance(stage, PhaseShifter) for stage in outside):
        raise exceptions.ShapeError('Phase shifters must sit between crystals')

    dim = len(crystals)
    return [math.fsum(phases[dim - i - 1:]) for i in range(1, dim)]


def coherence_satisfied(geom: CoherenceGeometry) -> bool:
    """|L_pB - L_pA - L_SPDC| <= L_coh"""
    return path_imbalance(geom) <= geom.l_coherence


def path_imbalance(geom: CoherenceGeometry) -> float:
    return abs(geom.l_pump_b - geom.l_pump_a - geom.l_spdc)


def canonical_chain(phases: Sequence[float],
                    amplitudes: Sequence[float] = None,
                    shift: int = 1,
                    space: states.ModeSpace = None) -> ChainConfig:
    """The stacked chain of d = len(phases) + 1 crystals, each gap holding a mode shifter and a
    phase shifter, emitting sum_l c_l |l*shift, l*shift>"""
    dim = len(phases) + 1
    if amplitudes is None:
        amplitudes = [1.] * dim
    if len(amplitudes) != dim:
        raise exceptions.ChainError('{} phases need {} amplitudes, got {}'.format(
            len(phases), dim, len(amplitudes)))
    if space is None:
        space = states.ModeSpace(max(defaults.TRUNCATION, abs(shift) * (dim - 1)))

    stages = []
    for idx, amplitude in enumerate(amplitudes):
        stages.append(Crystal(CrystalSpec(pump_amplitude=amplitude)))
        if idx < dim - 1:
            stages.append(mode_shifter(shift))
            stages.append(PhaseShifter(phases[idx]))
    return ChainConfig(tuple(stages), space)


def path_identity_chain(magnitudes: Sequence[float],
                        phases: Sequence[float] = None,
                        spiral_coefficients: Sequence[complex] = (1.,),
                        pump_shift: int = 4,
                        space: states.ModeSpace = None) -> ChainConfig:
    """The pump-shifted chain: crystal A, a spiral phase plate on the pump, crystal B and, for three
    magnitudes, a mirror before crystal C.  It emits
    alpha|0,0> + beta e^{i phi1}|m,m> + gamma e^{i phi2}|-m,-m> (m = pump_shift / 2) up to a
    global phase, the phase shifters being set to produce the requested relative phases."""
    if len(magnitudes) not in (2, 3):
        raise exceptions.ChainError('Expected two or three magnitudes, got {}'.format(len(magnitudes)))
    if phases is None:
        phases = [0.] * (len(magnitudes) - 1)
    if len(phases) != len(magnitudes) - 1:
        raise exceptions.ChainError('{} magnitudes need {} phases'.format(
            len(magnitudes), len(magnitudes) - 1))

    def crystal(amplitude):
        return Crystal(CrystalSpec(pump_amplitude=amplitude, spiral_coefficients=spiral_coefficients))

    stages = [crystal(magnitudes[0]), PhaseShifter(-phases[0]), PumpModeShifter(pump_shift),
              crystal(magnitudes[1])]
    if len(magnitudes) == 3:
        stages.extend([PhaseShifter(phases[0] - phases[1]), Mirror(), crystal(magnitudes[2])])
    return ChainConfig(tuple(stages), space or states.ModeSpace())


def splitter_amplitudes(reflectivities: Sequence[float]) -> List[float]:
    """Pump amplitudes delivered by a cascade of variable beam splitters.  Splitter i taps the
    fraction reflectivities[i] of the remaining power into crystal i, the last crystal gets what
    is left."""
    remaining = 1.
    powers = []
    for reflectivity in reflectivities:
        if not 0. <= reflectivity <= 1.:
            raise ValueError('Reflectivity must lie in [0, 1], got {}'.format(reflectivity))
        powers.append(remaining * reflectivity)
        remaining -= powers[-1]
    powers.append(remaining)
    return [math.sqrt(max(power, 0.)) for power in powers]


def splitter_reflectivities(amplitudes: Sequence[float]) -> List[float]:
    """Inverse of :func:`splitter_amplitudes` for the given (relative) pump amplitudes"""
    powers = np.abs(np.asarray(amplitudes, dtype=float))**2
    total = powers.sum()
    if total == 0.:
        raise exceptions.ZeroStateError('At least one crystal must be pumped')
    powers = powers / total
    reflectivities = []
    remaining = 1.
    for power in powers[:-1]:
        reflectivities.append(float(power / remaining) if remaining > 0. else 0.)
        remaining -= power
    return reflectivities
