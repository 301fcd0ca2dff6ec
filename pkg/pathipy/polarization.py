# -*- coding: utf-8 -*-
"""Jones calculus for the quarter, half, quarter-wave plate phase control of the locking beam.

Angles are in radians and measured from the reference (vertical) axis of the plates.  Jones
vectors are (h, v) amplitude pairs and phases are those of the numeric components, so a beam of
the form H + e^{i omega} V has ``relative_phase == omega``.
"""
import cmath
import dataclasses
import enum
import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy import optimize

from . import constants
from . import exceptions

__all__ = ('JonesVector', 'WaveplateKind', 'WaveplateSetting', 'rotation', 'quarter_wave',
           'half_wave', 'sigma_z', 'is_unitary', 'qwp_phase_transfer', 'qhq_reduction_check',
           'solve_qhq', 'solve_qhhq', 'apply_waveplates', 'relative_phase')

logger = logging.getLogger(__name__)

SOLVER_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class JonesVector:
    h: complex
    v: complex

    def __post_init__(self):
        object.__setattr__(self, 'h', complex(self.h))
        object.__setattr__(self, 'v', complex(self.v))

    @classmethod
    def from_array(cls, array) -> 'JonesVector':
        h, v = np.asarray(array, dtype=complex).reshape(2)
        return JonesVector(h, v)

    @classmethod
    def linear(cls, angle: float) -> 'JonesVector':
        """Linear polarization at ``angle`` to the first axis"""
        return JonesVector(math.cos(angle), math.sin(angle))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.h, self.v])

    def norm(self) -> float:
        return math.sqrt(abs(self.h)**2 + abs(self.v)**2)

    def normalized(self) -> 'JonesVector':
        norm = self.norm()
        if norm == 0.:
            raise exceptions.ZeroStateError('Cannot normalize the zero Jones vector')
        return JonesVector(self.h / norm, self.v / norm)

    def is_normalized(self) -> bool:
        return abs(self.norm() - 1.) <= constants.JONES_TOL

    def stokes(self) -> Tuple[float, float, float, float]:
        cross = self.h.conjugate() * self.v
        return (abs(self.h)**2 + abs(self.v)**2, abs(self.h)**2 - abs(self.v)**2, 2. * cross.real,
                2. * cross.imag)


class WaveplateKind(enum.Enum):
    QUARTER = 'quarter'
    HALF = 'half'


@dataclasses.dataclass(frozen=True)
class WaveplateSetting:
    kind: WaveplateKind
    angle: float

    def __post_init__(self):
        object.__setattr__(self, 'kind', WaveplateKind(self.kind))
        object.__setattr__(self, 'angle', _normalize_angle(self.angle))

    def matrix(self) -> np.ndarray:
        if self.kind is WaveplateKind.QUARTER:
            return quarter_wave(self.angle)
        return half_wave(self.angle)

    @property
    def degrees(self) -> float:
        return math.degrees(self.angle)


def _normalize_angle(angle: float) -> float:
    angle = float(angle) % math.pi
    # Rounding can land exactly on pi
    return 0. if angle >= math.pi else angle


def rotation(alpha: float) -> np.ndarray:
    cos, sin = math.cos(alpha), math.sin(alpha)
    return np.array([[cos, -sin], [sin, cos]], dtype=complex)


def sigma_z() -> np.ndarray:
    return np.diag([1., -1.]).astype(complex)


def quarter_wave(alpha: float) -> np.ndarray:
    """Q(alpha) = R(alpha) diag(1, i) R(-alpha)"""
    return rotation(alpha) @ np.diag([1., 1j]) @ rotation(-alpha)


def half_wave(alpha: float) -> np.ndarray:
    """H(alpha) = R(alpha) sigma_z R(-alpha)"""
    return rotation(alpha) @ sigma_z() @ rotation(-alpha)


def is_unitary(matrix, tol: float = constants.JONES_TOL) -> bool:
    matrix = np.asarray(matrix)
    return bool(np.max(np.abs(matrix.conj().T @ matrix - np.eye(len(matrix)))) <= tol)


def relative_phase(vector: JonesVector) -> float:
    """arg(v) - arg(h) wrapped to (-pi, pi]"""
    if vector.h == 0. or vector.v == 0.:
        raise ValueError('The relative phase needs both components to be nonzero')
    return _wrap(cmath.phase(vector.v) - cmath.phase(vector.h))


def _wrap(phase: float) -> float:
    wrapped = math.remainder(phase, 2. * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def qwp_phase_transfer(phi: float) -> Tuple[float, float]:
    """Relative and global phase of Q(pi/4) applied to the linear polarization (cos phi, sin phi).
    The output is e^{i(pi/4 - phi)} / sqrt(2) (1, e^{i(2 phi - pi/2)}): the polarization angle
    becomes a relative phase between equally weighted H and V components."""
    return _wrap(2. * phi - math.pi / 2.), _wrap(math.pi / 4. - phi)


def qhq_reduction_check(alpha: float, beta: float, gamma: float) -> float:
    """Largest deviation between Q(pi/4) H(alpha) H(beta) Q(gamma) and
    Q(pi/4) H(alpha - beta) Q(-gamma) sigma_z"""
    lhs = quarter_wave(math.pi / 4.) @ half_wave(alpha) @ half_wave(beta) @ quarter_wave(gamma)
    rhs = quarter_wave(math.pi / 4.) @ half_wave(alpha - beta) @ quarter_wave(-gamma) @ sigma_z()
    return float(np.max(np.abs(lhs - rhs)))


def apply_waveplates(settings: Sequence[WaveplateSetting], vector: JonesVector) -> JonesVector:
    """Propagate through the plates in order, the first setting acting first"""
    field = vector.array
    for setting in settings:
        field = setting.matrix() @ field
    return JonesVector.from_array(field)


def _linear_angle(vector: JonesVector) -> float:
    """Angle of a linear polarization, after removing the global phase"""
    reference = vector.h if abs(vector.h) >= abs(vector.v) else vector.v
    field = vector.array * cmath.exp(-1j * cmath.phase(reference))
    return math.atan2(field[1].real, field[0].real)


def _qhq_residual(vector: JonesVector, target: float) -> float:
    cross = 2. * vector.h.conjugate() * vector.v
    return abs(cross - cmath.exp(1j * target))


def _check_input(vector: JonesVector):
    if vector.norm() == 0.:
        raise exceptions.ZeroStateError('The input polarization is the zero vector')
    if not vector.is_normalized():
        raise ValueError('The input polarization must be normalized, norm is {}'.format(
            vector.norm()))


def solve_qhq(vector: JonesVector, target: float) -> Tuple[WaveplateSetting, ...]:
    """Waveplate angles (gamma, alpha, pi/4) such that Q(pi/4) H(alpha) Q(gamma) maps ``vector`` to
    (1, e^{i target}) / sqrt(2) up to a global phase.

    Q(gamma) with gamma along the major axis of the polarization ellipse makes the beam linear,
    H(alpha) rotates it to the angle that Q(pi/4) turns into the target phase.  For fixed gamma
    the phase then changes as +4 alpha.
    """
    _check_input(vector)
    _, stokes1, stokes2, _ = vector.stokes()
    gamma = 0.5 * math.atan2(stokes2, stokes1)
    linear = JonesVector.from_array(quarter_wave(gamma) @ vector.array)
    wanted = (target + math.pi / 2.) / 2.
    alpha = (wanted + _linear_angle(linear)) / 2.

    settings = _qhq_settings(gamma, alpha)
    residual = _qhq_residual(apply_waveplates(settings, vector), target)
    if residual > SOLVER_TOL:
        logger.warning('QHQ analytic solution is off by %g, refining numerically', residual)
        settings = _refine_qhq(vector, target, gamma, alpha)
    return settings


def _qhq_settings(gamma: float, alpha: float) -> Tuple[WaveplateSetting, ...]:
    return (WaveplateSetting(WaveplateKind.QUARTER, gamma), WaveplateSetting(WaveplateKind.HALF, alpha),
            WaveplateSetting(WaveplateKind.QUARTER, math.pi / 4.))


def _refine_qhq(vector: JonesVector, target: float, gamma: float,
                alpha: float) -> Tuple[WaveplateSetting, ...]:

    def residuals(params):
        out = JonesVector.from_array(
            quarter_wave(math.pi / 4.) @ half_wave(params[1]) @ quarter_wave(params[0]) @ vector.array)
        diff = 2. * out.h.conjugate() * out.v - cmath.exp(1j * target)
        return [diff.real, diff.imag]

    result = optimize.least_squares(residuals, [gamma, alpha], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    settings = _qhq_settings(*result.x)
    residual = _qhq_residual(apply_waveplates(settings, vector), target)
    if residual > SOLVER_TOL:
        raise exceptions.FitError('No QHQ setting reaches phase {} (residual {})'.format(
            target, residual))
    return settings


def solve_qhhq(vector: JonesVector, target: float, beta: float = 0.) -> Tuple[WaveplateSetting, ...]:
    """Settings (Q(gamma), H(beta), H(alpha), Q(pi/4)) in the order the beam meets them.  Uses
    Q(pi/4) H(alpha) H(beta) Q(gamma) = Q(pi/4) H(alpha - beta) Q(-gamma) sigma_z to reduce the
    problem to a QHQ solution for the input with its V component flipped."""
    _check_input(vector)
    flipped = JonesVector(vector.h, -vector.v)
    q_in, h_mid, q_out = solve_qhq(flipped, target)
    return (WaveplateSetting(WaveplateKind.QUARTER, -q_in.angle),
            WaveplateSetting(WaveplateKind.HALF, beta),
            WaveplateSetting(WaveplateKind.HALF, h_mid.angle + beta), q_out)
