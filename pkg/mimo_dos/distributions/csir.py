# mimo_dos/distributions/csir.py
"""Rate distributions with receive-side CSI only (single stream, MRC / OC)."""
import logging
from typing import Optional, Union

import numpy as np
from scipy.special import roots_genlaguerre

from ..channel import paper_forms
from ..channel.model import LinkSnrConfig
from ..protocols import CsirMode
from .base import LAMBDA_BAR, QuadratureSpec, RateDistribution, refined_sum

logger = logging.getLogger(__name__)

MAX_LAGUERRE_NODES = 160
PAPER_SL_OVERSAMPLE = 4
# relative width of the cell that carries the density jump at the repair kink
KINK_GAP = 1e-9
# below this 1 - c the hypoexponential terms use their equal-rate limit
EQUAL_RATE_GAP = 1e-8


def _mode(mode: Union[CsirMode, str]) -> CsirMode:
    return mode if isinstance(mode, CsirMode) else CsirMode(mode)


def sl_csir_physical_cdf(rates, rho_s: float) -> np.ndarray:
    """1 - (1 + g) e^-g with g = (e^r - 1) / rho_s (two-branch MRC power gain)."""
    g = np.expm1(np.asarray(rates, dtype=float)) / rho_s
    return -np.expm1(-g) - g * np.exp(-g)


def sl_csir_physical_pdf(rates, rho_s: float) -> np.ndarray:
    rates = np.asarray(rates, dtype=float)
    g = np.expm1(rates) / rho_s
    return g * np.exp(-g) * np.exp(rates) / rho_s


def cdf_sl_csir(rho_s: float, mode: Union[CsirMode, str] = CsirMode.PHYSICAL,
                spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    spec = spec or QuadratureSpec()
    mode = _mode(mode)
    if mode is CsirMode.PHYSICAL:
        grid = spec.grid(np.log1p(LAMBDA_BAR * rho_s))
        return RateDistribution.from_cdf_pdf(
            grid, sl_csir_physical_cdf(grid, rho_s), sl_csir_physical_pdf(grid, rho_s),
            spec.tail_tolerance, label='sl-csir', metadata={'mode': mode.value, 'rho': rho_s})

    t_bar = LAMBDA_BAR + np.log1p(LAMBDA_BAR * rho_s)
    # the printed form packs its mass into a narrow band near the top of the range
    points = PAPER_SL_OVERSAMPLE * int(spec.grid_points)
    upper = spec.upper_rate if spec.upper_rate is not None else float(np.log1p(2.0 * rho_s ** 2 * t_bar))
    repair = paper_forms.sl_csir_repair(rho_s)
    kink = repair['kink_rate']
    if kink is None or kink >= upper:
        grid = np.linspace(0.0, upper, points)
        pdf = paper_forms.sl_csir_paper_pdf(grid, rho_s)
    else:
        logger.warning(f"Printed SL-CSIR CDF dips to {-repair['repair_deficit']:.4f} at rho_s={rho_s:.4g}; "
                       f"using its monotone envelope")
        # the envelope is flat below the kink and its density jumps there:
        # bracket the jump with two nodes and spend the grid above it
        grid = np.concatenate(([0.0, kink * (1.0 - KINK_GAP)], np.linspace(kink, upper, points - 2)))
        pdf = np.where(grid >= kink, np.maximum(paper_forms.sl_csir_printed_pdf(grid, rho_s), 0.0), 0.0)
    metadata = {'mode': mode.value, 'rho': rho_s}
    metadata.update(repair)
    return RateDistribution.from_cdf_pdf(
        grid, paper_forms.sl_csir_paper_cdf(grid, rho_s), pdf,
        spec.tail_tolerance, label='sl-csir', metadata=metadata)


def _oc_physical_table(grid: np.ndarray, snr: LinkSnrConfig, nodes_count: int):
    """Exact OC rate CDF/PDF conditioned on the interferer gain G = ||g||^2.

    Given G the SINR is rho_s (B + c A), A, B ~ Exp(1), c = 1 / (1 + rho_n G);
    the conditional law is hypoexponential and is averaged over G ~ Gamma(2, 1)
    with generalised Gauss-Laguerre nodes.
    """
    nodes, weights = roots_genlaguerre(nodes_count, 1.0)
    c = 1.0 / (1.0 + snr.rho_n * nodes)[None, :]
    gap = 1.0 - c
    equal = gap < EQUAL_RATE_GAP
    safe_gap = np.where(equal, 1.0, gap)
    safe_c = np.where(equal, 1.0, c)

    t = (np.expm1(grid) / snr.rho_s)[:, None]
    et = np.exp(-t)
    etc = np.exp(-t / safe_c)
    cond_sf = np.where(equal, (1.0 + t) * et, (et - c * etc) / safe_gap)
    cond_pdf = np.where(equal, t * et, (et - etc) / safe_gap)

    cdf = 1.0 - cond_sf @ weights
    pdf = (cond_pdf @ weights) * np.exp(grid) / snr.rho_s
    return cdf, pdf


def cdf_tl_csir_link(rho_s: float, rho_n: float, mode: Union[CsirMode, str] = CsirMode.PAPER,
                     spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    spec = spec or QuadratureSpec()
    mode = _mode(mode)
    snr = LinkSnrConfig(rho_s, rho_n)
    if mode is CsirMode.PAPER:
        a = 1.0 / (2.0 * rho_n) if rho_n > 0 else 0.0
        grid = spec.grid(np.log1p(rho_s * (LAMBDA_BAR + np.log1p(a))))
        cdf = paper_forms.tl_csir_paper_cdf(grid, snr)
        pdf = paper_forms.tl_csir_paper_pdf(grid, snr)
    else:
        grid = spec.grid(np.log1p(LAMBDA_BAR * rho_s))
        cdf, pdf = _oc_physical_table(grid, snr, min(int(spec.inner_points), MAX_LAGUERRE_NODES))
    return RateDistribution.from_cdf_pdf(grid, cdf, pdf, spec.tail_tolerance, label='tl-csir-link',
                                         metadata={'mode': mode.value, 'rho': rho_s, 'rho_n': rho_n})


def cdf_tl_csir_sum(rho_s: float, rho_n: float, mode: Union[CsirMode, str] = CsirMode.PAPER,
                    spec: Optional[QuadratureSpec] = None) -> RateDistribution:
    """Two-link OC sum rate; the per-link rates are independent."""
    return refined_sum(lambda link_spec: cdf_tl_csir_link(rho_s, rho_n, mode, link_spec),
                       spec or QuadratureSpec(), label='tl-csir-sum')
