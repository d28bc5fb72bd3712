# mimo_dos/channel/model.py
"""2x2 Rayleigh MIMO channel draws and per-realization instantaneous rates.

All rates are in nats/sec/Hz (natural logarithm throughout).
"""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from ..errors import ConfigError


class RateKind(Enum):
    SL_CSIT = "sl_csit"
    TL_CSIT_PER_LINK = "tl_csit_per_link"
    TL_CSIT_SUM = "tl_csit_sum"
    SL_CSIR = "sl_csir"
    TL_CSIR_PER_LINK = "tl_csir_per_link"
    TL_CSIR_SUM = "tl_csir_sum"


@dataclass(frozen=True)
class LinkSnrConfig:
    """Homogeneous network SNRs: rho_s on desired links, rho_n on interfering ones (linear)."""
    rho_s: float
    rho_n: float

    def __post_init__(self):
        if not np.isfinite(self.rho_s) or self.rho_s <= 0:
            raise ConfigError(f"rho_s must be positive, got {self.rho_s}", field='rho_s')
        # rho_n = 0 is the interference-free limit
        if not np.isfinite(self.rho_n) or self.rho_n < 0:
            raise ConfigError(f"rho_n must be nonnegative, got {self.rho_n}", field='rho_n')

    @classmethod
    def from_db(cls, snr_db: float, rho_n: float) -> "LinkSnrConfig":
        return cls(rho_s=float(10.0 ** (snr_db / 10.0)), rho_n=float(rho_n))

    @property
    def rho_eff(self) -> float:
        """Effective SNR with the interferer treated as Gaussian noise."""
        return self.rho_s / (1.0 + self.rho_n)


@dataclass(frozen=True)
class ChannelRealization:
    """One 2x2 channel matrix with the eigenvalues of H^H H, lambda1 >= lambda2 >= 0."""
    entries: np.ndarray
    eigenvalues: Tuple[float, float]

    @classmethod
    def from_matrix(cls, matrix) -> "ChannelRealization":
        entries = np.array(matrix, dtype=complex)
        if entries.shape != (2, 2):
            raise ConfigError(f"Channel matrix must be 2x2, got shape {entries.shape}")
        entries.setflags(write=False)
        l1, l2 = eigenvalues_2x2(entries)
        return cls(entries=entries, eigenvalues=(float(l1), float(l2)))


@dataclass(frozen=True)
class RateSample:
    value: float
    kind: RateKind


def eigenvalues_2x2(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form eigenvalues of H^H H for one matrix (2, 2) or a stack (..., 2, 2).

    Uses trace = ||H||_F^2 and det = |det H|^2; the smaller root is taken as
    det / lambda1 to avoid cancellation.
    """
    h = np.asarray(h)
    trace = np.sum(np.abs(h) ** 2, axis=(-2, -1))
    det = np.abs(h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] * h[..., 1, 0]) ** 2
    half = 0.5 * trace
    disc = np.sqrt(np.maximum(half * half - det, 0.0))
    l1 = half + disc
    with np.errstate(divide='ignore', invalid='ignore'):
        l2 = np.where(l1 > 0, det / np.where(l1 > 0, l1, 1.0), 0.0)
    return l1, np.minimum(l2, l1)


def sample_channels(rng: np.random.Generator, size: int) -> np.ndarray:
    """Stack of `size` 2x2 matrices with i.i.d. CN(0, 1) entries."""
    scale = np.sqrt(0.5)
    real = rng.standard_normal((size, 2, 2))
    imag = rng.standard_normal((size, 2, 2))
    return scale * (real + 1j * imag)


def sample_vectors(rng: np.random.Generator, size: int) -> np.ndarray:
    """Stack of `size` 2-vectors with i.i.d. CN(0, 1) entries."""
    scale = np.sqrt(0.5)
    return scale * (rng.standard_normal((size, 2)) + 1j * rng.standard_normal((size, 2)))


def sample_channel(rng: np.random.Generator) -> ChannelRealization:
    return ChannelRealization.from_matrix(sample_channels(rng, 1)[0])


def sl_csit_rates(l1, l2, rho_s: float) -> np.ndarray:
    """Eigen-beamforming rate sum_m ln(1 + rho * lambda_m)."""
    return np.log1p(rho_s * np.asarray(l1)) + np.log1p(rho_s * np.asarray(l2))


def tl_csit_rates(l1, l2, snr: LinkSnrConfig) -> np.ndarray:
    return sl_csit_rates(l1, l2, snr.rho_eff)


def rate_sl_csit(ch: ChannelRealization, snr: LinkSnrConfig) -> RateSample:
    value = sl_csit_rates(ch.eigenvalues[0], ch.eigenvalues[1], snr.rho_s)
    return RateSample(float(value), RateKind.SL_CSIT)


def rate_tl_csit(ch: ChannelRealization, snr: LinkSnrConfig) -> RateSample:
    value = tl_csit_rates(ch.eigenvalues[0], ch.eigenvalues[1], snr)
    return RateSample(float(value), RateKind.TL_CSIT_PER_LINK)


def mrc_gains(vectors: np.ndarray) -> np.ndarray:
    """Post-MRC power gain ||h||^2 along the last axis."""
    return np.sum(np.abs(np.asarray(vectors)) ** 2, axis=-1)


def oc_sinrs(desired: np.ndarray, interferer: np.ndarray, snr: LinkSnrConfig) -> np.ndarray:
    """Optimal-combining SINR against one rank-one interferer.

    rho_s d^H (I + rho_n g g^H)^-1 d, expanded with the rank-one inverse.
    """
    desired = np.asarray(desired)
    interferer = np.asarray(interferer)
    d_norm = mrc_gains(desired)
    g_norm = mrc_gains(interferer)
    cross = np.abs(np.sum(np.conj(interferer) * desired, axis=-1)) ** 2
    sinr = snr.rho_s * (d_norm - snr.rho_n * cross / (1.0 + snr.rho_n * g_norm))
    return np.maximum(sinr, 0.0)


def gain_mrc(ch_vector) -> float:
    return float(mrc_gains(np.asarray(ch_vector, dtype=complex)))


def sinr_oc(desired, interferer, snr: LinkSnrConfig) -> float:
    return float(oc_sinrs(np.asarray(desired, dtype=complex),
                          np.asarray(interferer, dtype=complex), snr))


def rate_sl_csir(gamma: float, snr: LinkSnrConfig) -> RateSample:
    """MRC rate ln(1 + rho_s * gamma) with gamma the channel power gain."""
    return RateSample(float(np.log1p(snr.rho_s * gamma)), RateKind.SL_CSIR)


def rate_tl_csir(gamma: float) -> RateSample:
    """OC rate ln(1 + gamma); gamma already includes rho_s."""
    return RateSample(float(np.log1p(gamma)), RateKind.TL_CSIR_PER_LINK)
