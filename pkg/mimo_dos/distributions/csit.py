# mimo_dos/distributions/csit.py
"""Rate distributions with transmit-side CSI (eigen-beamforming)."""
import logging
from typing import Optional

import numpy as np

from ..channel.model import LinkSnrConfig
from .base import LAMBDA_BAR, QuadratureSpec, RateDistribution, refined_sum

logger = logging.getLogger(__name__)

ROW_CHUNK = 256


def joint_eig_pdf(l1, l2):
    """Joint density of the two (unordered) eigenvalues of H^H H, H 2x2 Rayleigh."""
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    return 0.5 * np.exp(-(l1 + l2)) * (l1 - l2) ** 2


def default_upper_rate(rho: float) -> float:
    # (1 + rho*l1)(1 + rho*l2) <= (1 + rho*trace/2)^2
    return 2.0 * np.log1p(rho * LAMBDA_BAR / 2.0)


def _eigen_rate_table(grid: np.ndarray, rho: float, inner_points: int):
    """CDF and PDF of ln(1 + rho*l1) + ln(1 + rho*l2) on `grid`.

    For each rate r the region {rate <= r} is swept in l1 by Gauss-Legendre;
    the l2 integral up to the level curve
    v(l1) = (e^r / (1 + rho*l1) - 1) / rho is taken in closed form.
    """
    nodes, weights = np.polynomial.legendre.leggauss(int(inner_points))
    cdf = np.empty_like(grid)
    pdf = np.empty_like(grid)
    for start in range(0, grid.size, ROW_CHUNK):
        r = grid[start:start + ROW_CHUNK, None]
        er = np.exp(r)
        span = np.minimum(np.expm1(r) / rho, LAMBDA_BAR)
        x = 0.5 * span * (nodes + 1.0)
        w = 0.5 * span * weights
        v = np.maximum((er / (1.0 + rho * x) - 1.0) / rho, 0.0)
        d = v - x
        ev = np.exp(-v)
        inner = (x * x - 2.0 * x + 2.0) - ev * (d * d + 2.0 * d + 2.0)
        cdf[start:start + ROW_CHUNK] = np.sum(w * 0.5 * np.exp(-x) * inner, axis=1)
        jac = er / (rho * (1.0 + rho * x))
        pdf[start:start + ROW_CHUNK] = np.sum(w * 0.5 * np.exp(-x) * ev * d * d * jac, axis=1)
    return cdf, pdf


def _eigen_rate_distribution(rho: float, spec: QuadratureSpec, label: str) -> RateDistribution:
    grid = spec.grid(default_upper_rate(rho))
    logger.info(f"Tabulating {label} (rho={rho:.4g}, {grid.size} points, upper={grid[-1]:.4f})")
    cdf, pdf = _eigen_rate_table(grid, rho, spec.inner_points)
    return RateDistribution.from_cdf_pdf(grid, cdf, pdf, spec.tail_tolerance, label=label,
                                         metadata={'rho': rho})


def cdf_sl_csit(rho_s: float, spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    """Single-link eigen-beamforming rate distribution."""
    return _eigen_rate_distribution(rho_s, spec or QuadratureSpec(), 'sl-csit')


def cdf_tl_csit_link(rho_s: float, rho_n: float,
                     spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    """Per-link two-link rate: interference folded into the noise, SNR rho_s / (1 + rho_n)."""
    snr = LinkSnrConfig(rho_s, rho_n)
    return _eigen_rate_distribution(snr.rho_eff, spec or QuadratureSpec(), 'tl-csit-link')


def cdf_tl_csit_sum(rho_s: float, rho_n: float,
                    spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    """Sum rate of two simultaneously active links (independent channels)."""
    return refined_sum(lambda link_spec: cdf_tl_csit_link(rho_s, rho_n, link_spec),
                       spec or QuadratureSpec(), label='tl-csit-sum')
