# -*- coding: utf-8 -*-
"""Exact linear algebra for truncated two-photon OAM states.

Single photons live in the modes ``ell = -L, ..., L`` of a :class:`ModeSpace` and pairs in the
tensor product, flattened signal-major: ``index = (ell_s + L) * (2L + 1) + (ell_i + L)``.
"""
import cmath
import math
import types
from typing import Dict, Iterator, Mapping, Sequence, Tuple

import numpy as np

from . import constants
from . import defaults
from . import exceptions

__all__ = ('ModeSpace', 'PhotonKet', 'BiphotonKet', 'DensityOperator', 'photon_ket', 'basis_ket',
           'biphoton_ket', 'tensor', 'normalize', 'inner_product', 'ket_to_density', 'fidelity',
           'projection_probability', 'trace_distance', 'maximally_mixed', 'target_state',
           'TARGET_NAMES')

ModePair = Tuple[int, int]


class ModeSpace:
    """Truncated single-photon OAM basis ``ell in [-L, L]`` and its two-photon product"""

    def __init__(self, truncation: int = defaults.TRUNCATION):
        truncation = int(truncation)
        if truncation < 0:
            raise ValueError("Truncation must be non-negative, got '{}'".format(truncation))
        self._truncation = truncation

    def __repr__(self) -> str:
        return 'ModeSpace({})'.format(self._truncation)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModeSpace):
            return NotImplemented
        return self._truncation == other._truncation

    def __hash__(self):
        return hash((ModeSpace, self._truncation))

    @property
    def truncation(self) -> int:
        return self._truncation

    @property
    def photon_dim(self) -> int:
        return 2 * self._truncation + 1

    @property
    def dim(self) -> int:
        return self.photon_dim**2

    @property
    def modes(self) -> Tuple[int, ...]:
        return tuple(range(-self._truncation, self._truncation + 1))

    def contains(self, ell: int) -> bool:
        return -self._truncation <= ell <= self._truncation

    def check(self, *ells: int):
        for ell in ells:
            if not self.contains(ell):
                raise exceptions.BoundError("OAM value {} outside the truncation |ell| <= {}".format(
                    ell, self._truncation))

    def photon_index(self, ell: int) -> int:
        self.check(ell)
        return ell + self._truncation

    def index(self, ell_signal: int, ell_idler: int) -> int:
        """Flat joint index of the pair |ell_signal, ell_idler>"""
        return self.photon_index(ell_signal) * self.photon_dim + self.photon_index(ell_idler)

    def pair(self, index: int) -> ModePair:
        """Inverse of :meth:`index`"""
        if not 0 <= index < self.dim:
            raise exceptions.BoundError('Joint index {} outside [0, {})'.format(index, self.dim))
        signal, idler = divmod(index, self.photon_dim)
        return signal - self._truncation, idler - self._truncation

    def subspace_indices(self, signal_modes: Sequence[int],
                         idler_modes: Sequence[int] = None) -> Tuple[int, ...]:
        """Joint indices of the product subspace spanned by the given modes, ordered to match
        ``np.kron(signal, idler)`` of vectors restricted to those modes"""
        if idler_modes is None:
            idler_modes = signal_modes
        return tuple(self.index(sig, idl) for sig in signal_modes for idl in idler_modes)


class PhotonKet:
    """Single-photon OAM ket stored as a dense vector over the modes of the space"""

    def __init__(self, space: ModeSpace, vector, normalize: bool = True):  # pylint: disable=redefined-outer-name
        vector = np.array(vector, dtype=complex).reshape(-1)
        if vector.shape != (space.photon_dim,):
            raise exceptions.DimensionError('Photon ket needs {} amplitudes, got {}'.format(
                space.photon_dim, vector.shape[0]))
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0.:
                raise exceptions.ZeroStateError('Photon ket has no nonzero amplitude')
            vector = vector / norm
        vector.setflags(write=False)
        self._space = space
        self._vector = vector

    def __repr__(self) -> str:
        terms = ' + '.join('({:.4g})|{}>'.format(amp, ell) for ell, amp in self.items())
        return 'PhotonKet({})'.format(terms or '0')

    @property
    def space(self) -> ModeSpace:
        return self._space

    @property
    def vector(self) -> np.ndarray:
        return self._vector

    def amplitude(self, ell: int) -> complex:
        return complex(self._vector[self._space.photon_index(ell)])

    def items(self) -> Iterator[Tuple[int, complex]]:
        """Iterate over the nonzero (ell, amplitude) pairs"""
        for ell, amp in zip(self._space.modes, self._vector):
            if amp != 0.:
                yield ell, complex(amp)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(ell for ell, _ in self.items())

    def norm(self) -> float:
        return float(np.linalg.norm(self._vector))


class BiphotonKet:
    """Sparse two-photon ket: a map from (ell_signal, ell_idler) to complex amplitude"""

    def __init__(self, space: ModeSpace, amplitudes: Mapping[ModePair, complex]):
        stored = {}
        for (signal, idler), amp in amplitudes.items():
            space.check(signal, idler)
            amp = complex(amp)
            if amp != 0.:
                stored[(int(signal), int(idler))] = amp
        self._space = space
        self._amplitudes = types.MappingProxyType(stored)

    @classmethod
    def from_vector(cls, space: ModeSpace, vector, cutoff: float = 1e-15) -> 'BiphotonKet':
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if vector.shape != (space.dim,):
            raise exceptions.DimensionError('Joint vector needs {} entries, got {}'.format(
                space.dim, vector.shape[0]))
        return BiphotonKet(space, {
            space.pair(idx): vector[idx] for idx in np.flatnonzero(np.abs(vector) > cutoff)
        })

    def __repr__(self) -> str:
        terms = ' + '.join('({:.4g})|{},{}>'.format(amp, *pair) for pair, amp in self.items())
        return 'BiphotonKet({})'.format(terms or '0')

    @property
    def space(self) -> ModeSpace:
        return self._space

    @property
    def amplitudes(self) -> Mapping[ModePair, complex]:
        return self._amplitudes

    def amplitude(self, signal: int, idler: int) -> complex:
        return self._amplitudes.get((signal, idler), 0j)

    def items(self) -> Iterator[Tuple[ModePair, complex]]:
        """Nonzero terms in ascending (signal, idler) order"""
        for pair in sorted(self._amplitudes):
            yield pair, self._amplitudes[pair]

    def vector(self) -> np.ndarray:
        vec = np.zeros(self._space.dim, dtype=complex)
        for (signal, idler), amp in self._amplitudes.items():
            vec[self._space.index(signal, idler)] = amp
        return vec

    def norm(self) -> float:
        return math.sqrt(sum(abs(amp)**2 for amp in self._amplitudes.values()))

    def scaled(self, factor: complex) -> 'BiphotonKet':
        return BiphotonKet(self._space, {pair: factor * amp for pair, amp in self._amplitudes.items()})

    def shifted(self, signal_delta: int, idler_delta: int) -> 'BiphotonKet':
        """Add OAM quanta to each photon of every term"""
        return BiphotonKet(self._space, {(sig + signal_delta, idl + idler_delta): amp
                                         for (sig, idl), amp in self._amplitudes.items()})

    def allclose(self, other: 'BiphotonKet', atol: float = constants.NORM_TOL) -> bool:
        _check_same_space(self.space, other.space)
        return bool(np.allclose(self.vector(), other.vector(), rtol=0., atol=atol))


class DensityOperator:
    """Hermitian, unit-trace, positive semi-definite operator on the two-photon space"""

    def __init__(self, space: ModeSpace, matrix, validate: bool = True):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise exceptions.DimensionError('Density matrix must be {0}x{0}, got {1}'.format(
                space.dim, matrix.shape))
        if validate:
            _validate_density(matrix)
        matrix.setflags(write=False)
        self._space = space
        self._matrix = matrix

    @classmethod
    def embed(cls,
              space: ModeSpace,
              sub_matrix,
              signal_modes: Sequence[int],
              idler_modes: Sequence[int] = None,
              validate: bool = True) -> 'DensityOperator':
        """Place an operator given on a mode subspace into the full space"""
        indices = space.subspace_indices(signal_modes, idler_modes)
        sub_matrix = np.asarray(sub_matrix, dtype=complex)
        if sub_matrix.shape != (len(indices), len(indices)):
            raise exceptions.DimensionError('Subspace operator must be {0}x{0}, got {1}'.format(
                len(indices), sub_matrix.shape))
        full = np.zeros((space.dim, space.dim), dtype=complex)
        full[np.ix_(indices, indices)] = sub_matrix
        return DensityOperator(space, full, validate=validate)

    def __repr__(self) -> str:
        return 'DensityOperator({}, rank={})'.format(self._space, self.rank())

    @property
    def space(self) -> ModeSpace:
        return self._space

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self._matrix)

    def purity(self) -> float:
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def rank(self, tol: float = constants.OPERATOR_TOL) -> int:
        return int(np.sum(self.eigenvalues() > tol))

    def restrict(self, signal_modes: Sequence[int], idler_modes: Sequence[int] = None) -> np.ndarray:
        """The block of the matrix on a product mode subspace"""
        indices = self._space.subspace_indices(signal_modes, idler_modes)
        return self._matrix[np.ix_(indices, indices)].copy()

    def expectation(self, vector) -> float:
        """<v|rho|v> for a dense joint vector"""
        vector = np.asarray(vector, dtype=complex)
        return float(np.real(np.vdot(vector, self._matrix @ vector)))


def photon_ket(space: ModeSpace, amplitudes: Mapping[int, complex], normalize: bool = True) -> PhotonKet:  # pylint: disable=redefined-outer-name
    """Create a single photon ket from a map of ell -> amplitude"""
    vector = np.zeros(space.photon_dim, dtype=complex)
    for ell, amp in amplitudes.items():
        vector[space.photon_index(ell)] += amp
    return PhotonKet(space, vector, normalize=normalize)


def basis_ket(space: ModeSpace, ell: int) -> PhotonKet:
    return photon_ket(space, {ell: 1.})


def biphoton_ket(space: ModeSpace, amplitudes: Mapping[ModePair, complex]) -> BiphotonKet:
    return BiphotonKet(space, amplitudes)


def tensor(signal: PhotonKet, idler: PhotonKet) -> np.ndarray:
    """Dense joint vector of the product |signal>|idler>"""
    _check_same_space(signal.space, idler.space)
    return np.kron(signal.vector, idler.vector)


def _phase_reference_order(pair: ModePair):
    return abs(pair[0]) + abs(pair[1]), pair[0], pair[1]


def normalize(ket: BiphotonKet) -> BiphotonKet:
    """Scale the ket to unit norm and fix the global phase so that the largest amplitude is real
    and positive.  Ties in magnitude go to the lowest order term (|ell_s| + |ell_i|, then ell_s,
    then ell_i)."""
    norm = ket.norm()
    if not math.isfinite(norm):
        raise ValueError('Cannot normalize a ket with non-finite amplitudes')
    if norm == 0.:
        raise exceptions.ZeroStateError('Cannot normalize a ket with no nonzero amplitude')

    largest = max(abs(amp) for amp in ket.amplitudes.values())
    candidates = [
        pair for pair, amp in ket.amplitudes.items()
        if abs(amp) >= largest * (1. - constants.PHASE_TIE_RTOL)
    ]
    reference = min(candidates, key=_phase_reference_order)
    phase = cmath.exp(-1j * cmath.phase(ket.amplitudes[reference]))

    amplitudes = dict(ket.scaled(phase / norm).amplitudes)
    # Exactly real, the rotation leaves a rounding residue in the imaginary part
    amplitudes[reference] = complex(abs(ket.amplitudes[reference]) / norm)
    return BiphotonKet(ket.space, amplitudes)


def inner_product(bra: BiphotonKet, ket: BiphotonKet) -> complex:
    """<bra|ket>, conjugate-linear in the first argument"""
    _check_same_space(bra.space, ket.space)
    return sum((amp.conjugate() * ket.amplitude(*pair) for pair, amp in bra.amplitudes.items()), 0j)


def ket_to_density(ket: BiphotonKet) -> DensityOperator:
    """The projector |ket><ket| of a normalized ket"""
    _check_normalized(ket)
    vector = ket.vector()
    return DensityOperator(ket.space, np.outer(vector, vector.conj()))


def fidelity(target: BiphotonKet, rho: DensityOperator) -> float:
    """F = Tr(|target><target| rho) = <target|rho|target>"""
    _check_same_space(target.space, rho.space)
    _check_normalized(target)
    vector = target.vector()
    value = np.vdot(vector, rho.matrix @ vector)
    if abs(value.imag) > constants.OPERATOR_TOL:
        raise exceptions.InvalidStateError('Fidelity has imaginary residue {}'.format(value.imag))
    return _clamp_probability(value.real)


def projection_probability(state: DensityOperator, setting) -> float:
    """Probability of the product projection <a|<b| rho |a>|b> where the setting provides
    ``signal_ket`` and ``idler_ket`` photon kets"""
    signal, idler = setting.signal_ket, setting.idler_ket
    _check_same_space(state.space, signal.space)
    vector = tensor(signal, idler)
    return _clamp_probability(state.expectation(vector))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Half the trace norm of the difference"""
    _check_same_space(rho.space, sigma.space)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho.matrix - sigma.matrix))))


def maximally_mixed(space: ModeSpace, modes: Sequence[int]) -> DensityOperator:
    """The identity on the product subspace of the given modes, normalized to unit trace"""
    size = len(modes)**2
    return DensityOperator.embed(space, np.eye(size) / size, modes)


_OMEGA = cmath.exp(2j * math.pi / 3)
_TARGETS = {
    'phi+': {(0, 0): 1, (2, 2): 1},
    'phi-': {(0, 0): 1, (2, 2): -1},
    'psi1': {(0, 0): 1, (2, 2): 1, (-2, -2): 1},
    'psi2': {(0, 0): 1, (2, 2): _OMEGA, (-2, -2): _OMEGA.conjugate()},
    'psi3': {(0, 0): 1, (2, 2): _OMEGA.conjugate(), (-2, -2): _OMEGA},
    'psi4': {(0, 0): 1, (2, 2): -1, (-2, -2): -1},
    'psi5': {(0, 0): 2, (2, 2): 3, (-2, -2): 3},
}  # type: Dict[str, Dict[ModePair, complex]]
TARGET_NAMES = tuple(_TARGETS)


def target_state(name: str, space: ModeSpace = None) -> BiphotonKet:
    """One of the reference states of the fidelity table, normalized"""
    try:
        amplitudes = _TARGETS[name]
    except KeyError:
        raise ValueError("Unknown target state '{}', choose from {}".format(name,
                                                                          TARGET_NAMES)) from None
    return normalize(BiphotonKet(space or ModeSpace(), amplitudes))


def _check_same_space(first: ModeSpace, second: ModeSpace):
    if first != second:
        raise exceptions.DimensionError('Mode spaces differ: {} vs {}'.format(first, second))


def _check_normalized(ket: BiphotonKet):
    if abs(ket.norm() - 1.) > constants.NORM_TOL:
        raise ValueError('Ket is not normalized (norm={})'.format(ket.norm()))


def _validate_density(matrix: np.ndarray):
    tol = constants.OPERATOR_TOL
    if np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise exceptions.InvalidStateError('Density matrix is not Hermitian')
    trace = np.trace(matrix)
    if abs(trace - 1.) > tol:
        raise exceptions.InvalidStateError('Density matrix trace is {}, not 1'.format(trace.real))
    smallest = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0]
    if smallest < -tol:
        raise exceptions.InvalidStateError(
            'Density matrix is not positive (smallest eigenvalue {})'.format(smallest))


def _clamp_probability(value: float) -> float:
    """Clip values that leave [0, 1] only through rounding"""
    tol = constants.OPERATOR_TOL
    if -tol <= value < 0.:
        return 0.
    if 1. < value <= 1. + tol:
        return 1.
    return float(value)