# -*- coding: utf-8 -*-
from typing import Iterable

__all__ = ('PathipyError', 'ZeroStateError', 'DimensionError', 'BoundError', 'InvalidStateError',
           'UnsupportedPumpError', 'ChainError', 'ShapeError', 'ModelError', 'CompletenessError',
           'FitError', 'SeedError', 'SetupError', 'SetupSyntaxError', 'SetupSemanticError')


class PathipyError(Exception):
    """Base for all pathipy errors"""


class ZeroStateError(PathipyError, ValueError):
    """A state with no nonzero amplitude (or a chain with zero emission rate)"""


class DimensionError(PathipyError, ValueError):
    """Objects living in different mode spaces were combined"""


class BoundError(PathipyError, ValueError):
    """An OAM value falls outside the truncation of the mode space"""


class InvalidStateError(PathipyError, ValueError):
    """A density operator violates hermiticity, unit trace or positivity"""


class UnsupportedPumpError(PathipyError, ValueError):
    """Odd pump OAM, which cannot be split symmetrically between the two photons"""


class ChainError(PathipyError, ValueError):
    """A malformed source chain"""


class ShapeError(ChainError):
    """The chain is not in the canonical crystal/phase-shifter interleaved form"""


class ModelError(PathipyError, ValueError):
    """The distinguishability model is not a valid (PSD) overlap matrix"""


class CompletenessError(PathipyError, ValueError):
    """The tomography design is not informationally complete"""


class FitError(PathipyError, ValueError):
    """The fringe fit is degenerate"""


class SeedError(PathipyError, ValueError):
    """A stochastic simulation was requested without a seed"""


class SetupError(PathipyError, ValueError):
    """Problem with a setup description document"""

    def __init__(self, message: str, line: int = None, column: int = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self._describe())

    def _describe(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return 'line {}: {}'.format(self.line, self.message)
        return 'line {}, column {}: {}'.format(self.line, self.column, self.message)


class SetupSyntaxError(SetupError):

    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.expected = frozenset(expected)
        super().__init__(message, line, column)

    def _describe(self) -> str:
        desc = super()._describe()
        if self.expected:
            desc += ' (expected one of: {})'.format(', '.join(sorted(self.expected)))
        return desc


class SetupSemanticError(SetupError):
    """Well formed but physically invalid (odd pump OAM, truncation overflow, ...)"""
