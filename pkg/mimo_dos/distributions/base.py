# mimo_dos/distributions/base.py
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional
import logging

import numpy as np
import pandas as pd

from ..errors import ConfigError, QuadratureBudgetError

logger = logging.getLogger(__name__)

# Eigenvalue (and channel power gain) cut-off; the mass beyond it is < 1e-17.
LAMBDA_BAR = 45.0

DEFAULT_TAIL_TOLERANCE = 1e-6
CELL_TOLERANCE = 1e-6
# per-link grid doublings allowed when a two-link sum misses its tail budget
SUM_REFINEMENTS = 3


@dataclass
class InvariantReport:
    """Structured outcome of a distribution invariant check."""
    is_valid: bool
    errors: List[str]
    warnings: List[str]
    metadata: Dict[str, Any]


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid and quadrature sizes for tabulating a rate distribution.

    `upper_rate=None` lets each distribution pick a cut-off that meets
    `tail_tolerance`.
    """
    grid_points: int = 2048
    upper_rate: Optional[float] = None
    inner_points: int = 512
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    def __post_init__(self):
        if int(self.grid_points) < 64:
            raise ConfigError(f"grid_points must be >= 64, got {self.grid_points}", field='grid_points')
        if int(self.inner_points) < 1:
            raise ConfigError(f"inner_points must be positive, got {self.inner_points}", field='inner_points')
        if self.upper_rate is not None and not self.upper_rate > 0:
            raise ConfigError(f"upper_rate must be positive, got {self.upper_rate}", field='upper_rate')
        if not 0 < self.tail_tolerance < 1:
            raise ConfigError(f"tail_tolerance must be in (0, 1), got {self.tail_tolerance}",
                              field='tail_tolerance')

    def grid(self, default_upper: float) -> np.ndarray:
        upper = self.upper_rate if self.upper_rate is not None else default_upper
        return np.linspace(0.0, upper, int(self.grid_points))


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RateDistribution:
    """Tabulated CDF/PDF of a nonnegative rate variable (nats/sec/Hz).

    Arrays are read-only after construction, so instances can be shared
    between threads.
    """
    grid: np.ndarray
    cdf: np.ndarray
    pdf: np.ndarray
    tail_mass: float
    label: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'grid', _frozen(self.grid))
        object.__setattr__(self, 'cdf', _frozen(self.cdf))
        object.__setattr__(self, 'pdf', _frozen(self.pdf))
        if not (self.grid.shape == self.cdf.shape == self.pdf.shape) or self.grid.ndim != 1:
            raise ConfigError("grid, cdf and pdf must be 1-D arrays of equal length")
        if self.grid.size < 2 or self.grid[0] != 0.0 or np.any(np.diff(self.grid) <= 0):
            raise ConfigError("grid must start at 0 and be strictly increasing")

    @classmethod
    def from_cdf_pdf(cls, grid, cdf, pdf, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
                     label: str = "", metadata: Optional[Dict[str, Any]] = None) -> "RateDistribution":
        """Build from an analytic (or quadrature) CDF/PDF pair.

        Round-off is cleaned (CDF clipped to [0, 1] and made nondecreasing, PDF
        clipped at zero). Raises QuadratureBudgetError when the mass beyond the
        grid exceeds `tail_tolerance`; other invariant failures are logged.
        """
        cdf = np.maximum.accumulate(np.clip(np.asarray(cdf, dtype=float), 0.0, 1.0))
        pdf = np.maximum(np.asarray(pdf, dtype=float), 0.0)
        missing = 1.0 - cdf[-1]
        if missing > tail_tolerance:
            raise QuadratureBudgetError(
                f"{label or 'distribution'}: mass beyond grid {missing:.3e} exceeds "
                f"tail tolerance {tail_tolerance:.1e}; raise upper_rate"
            )
        dist = cls(grid=grid, cdf=cdf, pdf=pdf, tail_mass=tail_tolerance,
                   label=label, metadata=dict(metadata or {}))
        report = dist.check_invariants()
        if not report.is_valid:
            logger.error(f"{label or 'distribution'}: invariant check failed: {'; '.join(report.errors)}")
        return dist

    @classmethod
    def from_pdf(cls, grid, pdf, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
                 label: str = "", metadata: Optional[Dict[str, Any]] = None) -> "RateDistribution":
        """Build from a PDF alone; the CDF is its cumulative trapezoid."""
        grid = np.asarray(grid, dtype=float)
        pdf = np.maximum(np.asarray(pdf, dtype=float), 0.0)
        cells = 0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid)
        cdf = np.concatenate(([0.0], np.cumsum(cells)))
        return cls.from_cdf_pdf(grid, cdf, pdf, tail_tolerance, label, metadata)

    @property
    def upper_rate(self) -> float:
        return float(self.grid[-1])

    def cdf_at(self, x):
        """Monotone piecewise-linear CDF interpolation (vectorised)."""
        return np.interp(x, self.grid, self.cdf)

    def tail_prob(self, x: float) -> float:
        """1 - F(x)."""
        return float(1.0 - self.cdf_at(float(x)))

    def truncated_mean(self, x: float) -> float:
        """Integral of r dF(r) over [x, inf), by trapezoid on r * pdf."""
        x = float(x)
        g, f = self.grid, self.pdf
        if x <= g[0]:
            return float(np.trapezoid(g * f, g))
        if x >= g[-1]:
            return 0.0
        k = int(np.searchsorted(g, x, side='right'))
        fx = float(np.interp(x, g, f))
        head = 0.5 * (x * fx + g[k] * f[k]) * (g[k] - x)
        rest = float(np.trapezoid(g[k:] * f[k:], g[k:])) if k < g.size - 1 else 0.0
        return head + rest

    def mean(self) -> float:
        return self.truncated_mean(0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-CDF draws using the tabulated CDF."""
        u = rng.uniform(self.cdf[0], self.cdf[-1], size)
        return np.interp(u, self.cdf, self.grid)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'rate_nats': self.grid, 'cdf': self.cdf})

    def describe(self) -> Dict[str, Any]:
        """Grid metadata for JSON sidecars."""
        info = {
            'label': self.label,
            'grid_points': int(self.grid.size),
            'upper_rate': self.upper_rate,
            'tail_mass': self.tail_mass,
            'final_cdf': float(self.cdf[-1]),
            'mean': self.mean(),
        }
        info.update({k: v for k, v in self.metadata.items() if np.isscalar(v) or v is None})
        return info

    def check_invariants(self) -> InvariantReport:
        """Check the tabulation against the distribution invariants."""
        report = InvariantReport(is_valid=True, errors=[], warnings=[], metadata={})
        cdf, pdf, grid = self.cdf, self.pdf, self.grid

        if np.any(np.diff(cdf) < 0):
            report.errors.append("CDF is not nondecreasing")
        if cdf.min() < 0 or cdf.max() > 1:
            report.errors.append("CDF leaves [0, 1]")
        if cdf[-1] < 1.0 - self.tail_mass:
            report.errors.append(f"final CDF {cdf[-1]:.9f} below 1 - tail_mass")
        if np.any(pdf < 0):
            report.errors.append("PDF has negative entries")

        mass = float(np.trapezoid(pdf, grid))
        report.metadata['pdf_mass'] = mass
        if abs(mass - 1.0) > 2.0 * self.tail_mass:
            report.errors.append(f"PDF integrates to {mass:.9f}")

        cell_err = np.abs(np.diff(cdf) - 0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))
        kink = self.metadata.get('kink_rate')
        if kink is not None:
            report.warnings.append(
                f"printed CDF repaired to its monotone envelope "
                f"(deficit {self.metadata.get('repair_deficit', 0.0):.3e}, kink at r={kink:.4f})"
            )
        worst = float(cell_err.max()) if cell_err.size else 0.0
        report.metadata['max_cell_error'] = worst
        if worst > CELL_TOLERANCE:
            report.errors.append(f"CDF/PDF cell mismatch {worst:.3e}")

        report.is_valid = not report.errors
        return report


def convolve_sum(per_link: RateDistribution, label: str = "") -> RateDistribution:
    """Distribution of the sum of two independent copies of `per_link`.

    Requires a uniform per-link grid; the sum lives on the same spacing over
    twice the range.
    """
    grid = per_link.grid
    h = float(grid[1] - grid[0])
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0.0):
        raise ConfigError("convolution needs a uniform grid")
    pdf_sum = h * np.convolve(per_link.pdf, per_link.pdf)
    sum_grid = h * np.arange(pdf_sum.size)
    sum_grid[-1] = 2.0 * grid[-1]
    return RateDistribution.from_pdf(
        sum_grid, pdf_sum, per_link.tail_mass, label=label,
        metadata={'per_link_label': per_link.label, 'per_link_points': int(grid.size)},
    )


def refined_sum(build_link: Callable[[QuadratureSpec], RateDistribution], spec: QuadratureSpec,
                label: str = "") -> RateDistribution:
    """Two-link sum of `build_link(spec)`, refining the per-link grid as needed.

    The trapezoid error in the per-link PDF mass roughly doubles in the sum, so
    narrow low-SNR rate ranges can miss the tail budget. Each retry doubles
    `grid_points`, which cuts that error about fourfold.

    Args:
        build_link: Tabulates the per-link distribution for a quadrature spec
        spec: Starting quadrature spec
        label: Label of the sum distribution

    Returns:
        RateDistribution of the sum on twice the per-link range
    """
    current = spec
    for attempt in range(SUM_REFINEMENTS + 1):
        per_link = build_link(current)
        try:
            return convolve_sum(per_link, label=label)
        except QuadratureBudgetError:
            if attempt == SUM_REFINEMENTS:
                raise
            current = replace(current, grid_points=2 * int(current.grid_points))
            logger.info(f"{label}: refining per-link grid to {current.grid_points} points")


def tail_prob(dist: RateDistribution, x: float) -> float:
    return dist.tail_prob(x)


def truncated_mean(dist: RateDistribution, x: float) -> float:
    return dist.truncated_mean(x)
