# mimo_dos/channel/paper_forms.py
"""CSIR rate statistics exactly as printed in closed form, with 2^r read as e^r.

The printed single-link MRC CDF is not monotone for rho_s > 1: it dips below
zero before rising to one. It is replaced here by its monotone envelope
max(F, 0), which is exact because the printed curve has a single minimum.
"""
import logging
from typing import Callable

import numpy as np

from ..errors import ConfigError
from .model import LinkSnrConfig

logger = logging.getLogger(__name__)

BISECTION_STEPS = 100


def _bisect_increasing(fn: Callable[[np.ndarray], np.ndarray], target: np.ndarray,
                       lo: float, hi: float) -> np.ndarray:
    """Vectorised bisection for fn(t) = target on [lo, hi], fn increasing there."""
    target = np.asarray(target, dtype=float)
    lo_arr = np.full(target.shape, lo, dtype=float)
    hi_arr = np.full(target.shape, hi, dtype=float)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo_arr + hi_arr)
        below = fn(mid) < target
        lo_arr = np.where(below, mid, lo_arr)
        hi_arr = np.where(below, hi_arr, mid)
    return 0.5 * (lo_arr + hi_arr)


# -- single-link MRC (printed in the variable t = (e^r - 1) / (2 rho_s^2)) --

def _sl_t(rates, rho_s: float) -> np.ndarray:
    return np.expm1(np.asarray(rates, dtype=float)) / (2.0 * rho_s ** 2)


def sl_csir_printed_cdf(rates, rho_s: float) -> np.ndarray:
    """Printed single-link CSIR CDF, before repair (may be negative)."""
    t = _sl_t(rates, rho_s)
    return 1.0 - (1.0 + rho_s * t) * np.exp(-t)


def sl_csir_paper_cdf(rates, rho_s: float) -> np.ndarray:
    return np.clip(sl_csir_printed_cdf(rates, rho_s), 0.0, 1.0)


def sl_csir_printed_pdf(rates, rho_s: float) -> np.ndarray:
    """Derivative of the printed CDF in r (negative where that CDF dips)."""
    rates = np.asarray(rates, dtype=float)
    t = _sl_t(rates, rho_s)
    dcdf_dt = np.exp(-t) * (rho_s * t + 1.0 - rho_s)
    return dcdf_dt * np.exp(rates) / (2.0 * rho_s ** 2)


def sl_csir_paper_pdf(rates, rho_s: float) -> np.ndarray:
    pdf = sl_csir_printed_pdf(rates, rho_s)
    return np.where(sl_csir_printed_cdf(rates, rho_s) > 0.0, np.maximum(pdf, 0.0), 0.0)


def sl_csir_repair(rho_s: float) -> dict:
    """Size and location of the monotone repair of the printed CDF."""
    if rho_s <= 1.0:
        return {'repair_deficit': 0.0, 'kink_rate': None}
    t_min = (rho_s - 1.0) / rho_s
    deficit = -float(1.0 - (1.0 + rho_s * t_min) * np.exp(-t_min))
    t_cross = float(_bisect_increasing(
        lambda t: 1.0 - (1.0 + rho_s * t) * np.exp(-t),
        np.array(0.0), t_min, 60.0 + np.log1p(60.0 * rho_s)))
    return {'repair_deficit': deficit, 'kink_rate': float(np.log1p(2.0 * rho_s ** 2 * t_cross))}


def sl_csir_rates_paper(rng: np.random.Generator, rho_s: float, size: int) -> np.ndarray:
    """Inverse-CDF draws from the repaired printed single-link CDF."""
    u = rng.random(size)
    t_lo = max(0.0, (rho_s - 1.0) / rho_s)
    t_hi = 60.0 + np.log1p(60.0 * rho_s)
    t = _bisect_increasing(lambda t: 1.0 - (1.0 + rho_s * t) * np.exp(-t), u, t_lo, t_hi)
    return np.log1p(2.0 * rho_s ** 2 * t)


# -- two-link optimal combining (printed in s = gamma / rho_s) --

def _tl_params(snr: LinkSnrConfig):
    if snr.rho_n <= 0:
        raise ConfigError("paper-mode TL-CSIR forms need rho_n > 0", field='rho_n')
    a = 1.0 / (2.0 * snr.rho_n)
    b = 1.0 + 2.0 * snr.rho_n
    return a, b


def _tl_cdf_s(s, a: float, b: float) -> np.ndarray:
    return -(1.0 + a) * np.expm1(-s) + a * np.expm1(-b * s)


def tl_csir_paper_sinr_cdf(gamma, snr: LinkSnrConfig) -> np.ndarray:
    a, b = _tl_params(snr)
    return _tl_cdf_s(np.asarray(gamma, dtype=float) / snr.rho_s, a, b)


def tl_csir_paper_cdf(rates, snr: LinkSnrConfig) -> np.ndarray:
    return tl_csir_paper_sinr_cdf(np.expm1(np.asarray(rates, dtype=float)), snr)


def tl_csir_paper_pdf(rates, snr: LinkSnrConfig) -> np.ndarray:
    """Exact derivative of the printed per-link CDF (Jacobian e^r / rho_s)."""
    a, b = _tl_params(snr)
    rates = np.asarray(rates, dtype=float)
    s = np.expm1(rates) / snr.rho_s
    density_s = (1.0 + a) * (np.exp(-s) - np.exp(-b * s))
    return np.maximum(density_s, 0.0) * np.exp(rates) / snr.rho_s


def tl_csir_sinrs_paper(rng: np.random.Generator, snr: LinkSnrConfig, size: int) -> np.ndarray:
    """Inverse-CDF draws of the OC SINR from the printed closed form."""
    a, b = _tl_params(snr)
    u = rng.random(size)
    s = _bisect_increasing(lambda s: _tl_cdf_s(s, a, b), u, 0.0, 60.0 + np.log1p(a))
    return snr.rho_s * s


def tl_csir_rates_paper(rng: np.random.Generator, snr: LinkSnrConfig, size: int) -> np.ndarray:
    return np.log1p(tl_csir_sinrs_paper(rng, snr, size))
