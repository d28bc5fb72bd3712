# mimo_dos/errors.py
from typing import Optional


class DosError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(DosError, ValueError):
    """Invalid scenario or experiment configuration."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = ""
        if field is not None:
            location = f"[{field}" + (f", line {line}" if line is not None else "") + "] "
        super().__init__(f"{location}{message}")


class EmptyGroupError(ConfigError):
    """A contention group has no links."""


class UnachievableTargetError(ConfigError):
    """Requested success probability exceeds what K symmetric links can reach."""


class SolverError(DosError, RuntimeError):
    """Numerical solver failure."""


class NoSignChangeError(SolverError):
    """Fixed-point bracket has no sign change (zero-reward scenario)."""


class QuadratureBudgetError(SolverError):
    """Tabulated distribution cannot meet the requested tail tolerance."""


class OutputError(DosError, OSError):
    """Result files could not be written."""
