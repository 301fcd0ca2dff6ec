# -*- coding: utf-8 -*-
"""Runnable experiments on a source chain, one class per experiment kind of a setup document"""
from abc import ABCMeta, abstractmethod
import logging
import math
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import chains
from . import defaults
from . import exceptions
from . import fringes
from . import measurements
from . import polarization
from . import states
from . import tomography

__all__ = ('ExperimentResult', 'Experiment', 'TomographyExperiment', 'PhaseScanExperiment',
           'SpiralSpectrumExperiment', 'QhqExperiment', 'CoherenceExperiment',
           'StabilityTraceExperiment', 'experiment', 'KINDS')

logger = logging.getLogger(__name__)


class ExperimentResult(NamedTuple):
    """The outcome of an experiment: JSON-ready data plus a tabular view of it"""
    kind: str
    name: str
    data: Dict[str, Any]
    header: Tuple[str, ...]
    rows: List[Sequence]


class Experiment(metaclass=ABCMeta):
    """An experiment on a chain, configured by the parameters of a setup document block"""
    KIND = None  # type: str

    def __init__(self,
                 chain: Optional[chains.ChainConfig],
                 params: Mapping[str, Any] = None,
                 name: str = None,
                 seed: int = None,
                 config: Mapping[str, Any] = None):
        """
        :param chain: the source chain, experiments that do not need one accept None
        :param params: the block parameters, missing ones take their defaults
        :param name: the experiment name
        :param seed: seed used when the parameters do not carry one
        :param config: user settings (MLE iterations, tolerances, resamples)
        """
        self._chain = chain
        self._params = dict(params or {})
        self._name = name or self.KIND
        self._seed = seed
        self._config = dict(config or {})

    @property
    def name(self) -> str:
        return self._name

    @property
    def params(self) -> Dict[str, Any]:
        return self._params

    def param(self, key: str, default=None):
        return self._params.get(key, default)

    def seed(self, required: bool = True) -> Optional[int]:
        seed = self._params.get('seed', self._seed)
        if seed is None and required:
            raise exceptions.SeedError(
                "Experiment '{}' simulates counts and needs a seed".format(self._name))
        return seed

    def _setting(self, key: str, default):
        return self._config.get(key, default)

    def _disting(self, chain: chains.ChainConfig) -> chains.DistinguishabilityModel:
        return chains.DistinguishabilityModel.uniform(chain.num_crystals, self.param('overlap', 1.))

    def _require_chain(self) -> chains.ChainConfig:
        if self._chain is None:
            raise exceptions.ChainError("Experiment '{}' needs a source chain".format(self._name))
        return self._chain

    def _result(self, data: Dict[str, Any], header: Sequence[str], rows: List[Sequence]):
        return ExperimentResult(self.KIND, self._name, data, tuple(header), rows)

    def run(self) -> ExperimentResult:
        logger.info("Running %s experiment '%s'", self.KIND, self._name)
        result = self._run()
        logger.info("Finished %s experiment '%s'", self.KIND, self._name)
        return result

    @abstractmethod
    def _run(self) -> ExperimentResult:
        """Carry out the experiment"""


def _state_modes(ket: states.BiphotonKet) -> Tuple[int, ...]:
    return tuple(sorted({ell for pair in ket.amplitudes for ell in pair}))


def _first_phase_stage(chain: chains.ChainConfig) -> int:
    for idx, stage in enumerate(chain.stages):
        if isinstance(stage, chains.PhaseShifter):
            return idx
    raise exceptions.ChainError('The chain has no phase shifter to scan')


class TomographyExperiment(Experiment):
    """Simulate the counts of the default design on the chain output and reconstruct the state"""
    KIND = 'tomography'

    def _run(self) -> ExperimentResult:
        chain = self._require_chain()
        ideal = chains.build_state(chain)
        target_name = self.param('target', 'ideal')
        target = ideal if target_name == 'ideal' else states.target_state(target_name, chain.space)
        modes = self.param('modes') or _state_modes(ideal)
        noiseless = self.param('noiseless', False)
        seed = self.seed(required=not noiseless) or 0
        max_iter = self.param('max_iter', self._setting('max_iter', defaults.MLE_MAX_ITER))
        tol = self.param('tol', self._setting('tol', defaults.MLE_TOL))
        dilution = self._setting('dilution', defaults.MLE_DILUTION)
        resamples = 0 if noiseless else self.param(
            'resamples', self._setting('resamples', defaults.BOOTSTRAP_RESAMPLES))

        rho = chains.build_density(chain, self._disting(chain))
        design = measurements.default_design(chain.space, modes)
        records = measurements.simulate_counts(rho,
                                               design,
                                               self.param('rate', defaults.TOMOGRAPHY_RATE),
                                               self.param('time', 1.),
                                               seed,
                                               noiseless=noiseless)
        result = tomography.reconstruct(records,
                                        design,
                                        target,
                                        resamples=resamples,
                                        seed=seed,
                                        max_iter=max_iter,
                                        tol=tol,
                                        dilution=dilution)

        data = tomography.result_to_dict(result, design)
        data.update({
            'target': target_name,
            'modes': list(modes),
            'settings': len(design),
            'source_fidelity': states.fidelity(target, rho),
        })
        rows = [(design.index(record.setting), record.setting.label(), record.counts)
                for record in records]
        return self._result(data, ('setting_id', 'setting', 'counts'), rows)


class PhaseScanExperiment(Experiment):
    """Coincidences in one setting while a phase shifter is scanned over [0, 2 pi]"""
    KIND = 'phase-scan'

    def _run(self) -> ExperimentResult:
        chain = self._require_chain()
        stage = self.param('stage')
        stage = _first_phase_stage(chain) if stage is None else stage
        noiseless = self.param('noiseless', False)
        setting = measurements.product_setting(chain.space, self.param('signal', 0),
                                               self.param('idler', 0))
        phases = np.linspace(0., 2. * math.pi, self.param('points', defaults.PHASE_SCAN_POINTS))

        fringe = measurements.phase_scan(chain,
                                         self._disting(chain),
                                         stage,
                                         phases,
                                         setting,
                                         self.param('rate', defaults.PHASE_SCAN_RATE),
                                         self.param('time', 1.),
                                         self.seed(required=not noiseless) or 0,
                                         noiseless=noiseless)
        fit = fringes.fit_fringe(fringe)
        data = {
            'stage': stage,
            'phases': [point.phi for point in fringe],
            'counts': [point.counts for point in fringe],
            'visibility': fit.visibility,
            'visibility_err': fit.visibility_err,
            'amplitude': fit.amplitude,
            'phase_offset': fit.phase,
            'raw_visibility': fringes.raw_visibility([point.counts for point in fringe]),
        }
        return self._result(data, ('phi', 'counts'), [tuple(point) for point in fringe])


class SpiralSpectrumExperiment(Experiment):
    """Computational-basis crosstalk of a single crystal of the chain.

    The spectrum is that of the crystal's emission as it leaves the chain, after any mode shifters
    downstream of it, which is what the detectors record with only that crystal pumped.
    """
    KIND = 'spiral-spectrum'

    def _run(self) -> ExperimentResult:
        chain = self._require_chain()
        crystal = self.param('crystal', 0)
        contribs = chains.contributions(chain)
        if crystal >= len(contribs):
            raise exceptions.ChainError('The chain has {} crystals, no crystal {}'.format(
                len(contribs), crystal))
        modes = self.param('modes')
        if modes is None:
            modes = tuple(ell for ell in defaults.SPECTRUM_MODES if chain.space.contains(ell))

        rho = states.ket_to_density(contribs[crystal][1])
        matrix = measurements.crosstalk_matrix(rho, modes)
        ratio = measurements.dominance_ratio(matrix)
        data = {
            'crystal': crystal,
            'modes': list(modes),
            'matrix': matrix,
            'dominance_ratio': ratio if math.isfinite(ratio) else None,
        }
        header = ('signal',) + tuple(str(ell) for ell in modes)
        rows = [(ell,) + tuple(row) for ell, row in zip(modes, matrix.tolist())]
        return self._result(data, header, rows)


class QhqExperiment(Experiment):
    """Waveplate angles that set the relative phase of the locking beam"""
    KIND = 'qhq'

    def _run(self) -> ExperimentResult:
        vector = self.param('input', polarization.JonesVector(1., 0.)).normalized()
        target = self.param('target', 0.)
        plates = polarization.solve_qhq(vector, target)
        output = polarization.apply_waveplates(plates, vector)
        data = {
            'input': [vector.h, vector.v],
            'target_deg': math.degrees(target),
            'q_in_deg': plates[0].degrees,
            'h_mid_deg': plates[1].degrees,
            'q_out_deg': plates[2].degrees,
            'output': [output.h, output.v],
            'relative_phase_deg': math.degrees(polarization.relative_phase(output)),
        }
        rows = [(label, plate.kind.value, plate.degrees)
                for label, plate in zip(('q_in', 'h_mid', 'q_out'), plates)]
        return self._result(data, ('plate', 'kind', 'angle_deg'), rows)


class CoherenceExperiment(Experiment):
    """Whether the pump coherence length covers the path imbalance of the interferometer"""
    KIND = 'coherence'

    def _run(self) -> ExperimentResult:
        geom = chains.CoherenceGeometry(self.param('lpa'), self.param('lpb'), self.param('lspdc'),
                                        self.param('lcoh'))
        imbalance = chains.path_imbalance(geom)
        satisfied = chains.coherence_satisfied(geom)
        data = {
            'satisfied': satisfied,
            'imbalance': imbalance,
            'margin': abs(geom.l_coherence - imbalance),
        }
        return self._result(data, ('satisfied', 'imbalance', 'margin'),
                            [(satisfied, imbalance, data['margin'])])


class StabilityTraceExperiment(Experiment):
    """Repeated coincidence counting at a fixed phase setting, with or without the phase lock"""
    KIND = 'stability-trace'

    def _run(self) -> ExperimentResult:
        chain = self._require_chain()
        stage = self.param('stage')
        stage = _first_phase_stage(chain) if stage is None else stage
        setting = measurements.product_setting(chain.space, self.param('signal', 0),
                                               self.param('idler', 0))
        locked = self.param('locked', True)
        trace = measurements.stability_trace(chain,
                                             self._disting(chain),
                                             stage,
                                             setting,
                                             self.param('rate', defaults.PHASE_SCAN_RATE),
                                             self.param('steps', defaults.STABILITY_STEPS),
                                             self.seed(),
                                             step_time=self.param('time', 1.),
                                             drift=self.param('drift', defaults.STABILITY_DRIFT),
                                             locked=locked)
        counts = np.array([point.counts for point in trace], dtype=float)
        data = {
            'locked': locked,
            'times': [point.time for point in trace],
            'counts': counts.astype(int),
            'sigma': [point.sigma for point in trace],
            'mean': float(counts.mean()),
            'stddev': float(counts.std(ddof=1)) if len(counts) > 1 else 0.,
        }
        return self._result(data, ('time', 'counts', 'sigma'), [tuple(point) for point in trace])


KINDS = {
    cls.KIND: cls for cls in (TomographyExperiment, PhaseScanExperiment, SpiralSpectrumExperiment,
                              QhqExperiment, CoherenceExperiment, StabilityTraceExperiment)
}


def experiment(kind: str,
               chain: Optional[chains.ChainConfig],
               params: Mapping[str, Any] = None,
               name: str = None,
               seed: int = None,
               config: Mapping[str, Any] = None) -> Experiment:
    """Experiment creation factory.

    :param kind: one of the experiment kinds of a setup document
    :param chain: the source chain the experiment runs on
    :param params: the experiment parameters
    :param name: name of the experiment, defaults to the kind
    :param seed: seed for stochastic simulation if the parameters do not carry one
    :param config: user settings, see :mod:`pathipy.settings`
    """
    try:
        cls = KINDS[kind]
    except KeyError:
        raise ValueError("Unknown experiment kind '{}'".format(kind)) from None
    return cls(chain, params, name=name, seed=seed, config=config)
