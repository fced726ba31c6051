"""Exception hierarchy shared across the package.

Numeric failures (root finding, minimax iteration, shift-trace truncation)
share the ``NumericError`` base so the CLI can map them to a single exit
code; configuration problems raise ``ConfigError`` with field-level
messages.
"""

from __future__ import annotations


class JuliachebError(Exception):
    """Base class for package-specific failures."""


class NumericError(JuliachebError):
    """A numerical routine failed to meet its contract."""


class CompositionTooLarge(NumericError):
    """A polynomial composition would exceed the coefficient cap."""


class NonConvergence(NumericError):
    """Simultaneous root iteration did not converge within the sweep cap."""


class GeneratorFailure(JuliachebError):
    """A sequence rule could not produce the requested map."""


class NoAdmissibleRadius(NumericError):
    """No escape radius satisfies the strict coefficient inequality."""


class EmptyGrid(NumericError):
    """No grid point survived escape classification."""


class RankDeficient(NumericError):
    """The weighted sample cannot support the requested degree."""


class SolverStalled(NumericError):
    """Minimax iteration hit its cap without meeting the stop criterion."""

    def __init__(self, message, solution=None, gap=None):
        super().__init__(message)
        self.solution = solution
        self.gap = gap


class NoConvergence(NumericError):
    """Center-shift trace hit its depth cap; carries the partial trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class ConfigError(JuliachebError):
    """Invalid run configuration; carries one message per offending field."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
