# mimo_dos/contention.py
"""Group-based splitting contention: one mini-slot per group in every meta-slot."""
from dataclasses import dataclass
from typing import Optional, Tuple
import logging

import numpy as np

from .channel.model import LinkSnrConfig
from .errors import ConfigError, EmptyGroupError, UnachievableTargetError

logger = logging.getLogger(__name__)

CALIBRATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ContentionConfig:
    """Per-link contention probabilities, group membership (1 or 2), delta = tau / T and SNRs."""
    link_probs: Tuple[float, ...]
    group_of: Tuple[int, ...]
    delta: float
    snr: LinkSnrConfig

    def __post_init__(self):
        object.__setattr__(self, 'link_probs', tuple(float(p) for p in self.link_probs))
        object.__setattr__(self, 'group_of', tuple(int(g) for g in self.group_of))
        if not self.link_probs:
            raise ConfigError("at least one link is required", field='link_probs')
        if len(self.link_probs) != len(self.group_of):
            raise ConfigError("link_probs and group_of differ in length", field='group_of')
        bad = [p for p in self.link_probs if not 0.0 < p <= 1.0]
        if bad:
            raise ConfigError(f"contention probabilities must lie in (0, 1]: {bad}", field='link_probs')
        if set(self.group_of) - {1, 2}:
            raise ConfigError(f"groups must be 1 or 2: {sorted(set(self.group_of))}", field='group_of')
        if not np.isfinite(self.delta) or self.delta <= 0:
            raise ConfigError(f"delta must be positive, got {self.delta}", field='delta')

    @classmethod
    def two_group(cls, links_per_group: int, target_ps: float, delta: float,
                  snr: LinkSnrConfig) -> "ContentionConfig":
        """Equal groups of `links_per_group` links, each group reaching success probability `target_ps`."""
        p = calibrate_probs(target_ps, links_per_group)
        return cls(link_probs=tuple(p) * 2,
                   group_of=(1,) * links_per_group + (2,) * links_per_group,
                   delta=delta, snr=snr)

    @classmethod
    def single_group(cls, num_links: int, target_ps: float, delta: float,
                     snr: LinkSnrConfig) -> "ContentionConfig":
        p = calibrate_probs(target_ps, num_links)
        return cls(link_probs=tuple(p), group_of=(1,) * num_links, delta=delta, snr=snr)

    @property
    def num_links(self) -> int:
        return len(self.link_probs)

    @property
    def is_single_group(self) -> bool:
        return set(self.group_of) == {1}

    def links_in(self, group: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.group_of) == group)


@dataclass(frozen=True)
class ChannelState:
    """Outcome of one meta-slot; winner_i is set iff c_i == 1."""
    c1: int
    c2: int
    winner1: Optional[int] = None
    winner2: Optional[int] = None

    @property
    def key(self) -> str:
        return f"{self.c1}{self.c2}"


def success_prob(config: ContentionConfig, group: int) -> float:
    """Probability that exactly one link of `group` contends."""
    members = config.links_in(group)
    if members.size == 0:
        raise EmptyGroupError(f"group {group} has no links", field='group_of')
    p = np.asarray(config.link_probs)[members]
    total = 0.0
    for idx in range(p.size):
        others = np.delete(p, idx)
        total += p[idx] * float(np.prod(1.0 - others))
    return float(total)


def state_probabilities(p1s: float, p2s: float) -> dict:
    """Probabilities of the four meta-slot states keyed '00', '01', '10', '11'."""
    return {
        '00': (1.0 - p1s) * (1.0 - p2s),
        '01': (1.0 - p1s) * p2s,
        '10': p1s * (1.0 - p2s),
        '11': p1s * p2s,
    }


def _group_outcome(config: ContentionConfig, group: int, rng: np.random.Generator,
                   size: int) -> Tuple[np.ndarray, np.ndarray]:
    members = config.links_in(group)
    if members.size == 0:
        return np.zeros(size, dtype=np.int8), np.full(size, -1, dtype=np.int64)
    p = np.asarray(config.link_probs)[members]
    contend = rng.random((size, members.size)) < p
    success = contend.sum(axis=1) == 1
    winner = np.where(success, members[np.argmax(contend, axis=1)], -1)
    return success.astype(np.int8), winner


def draw_meta_slots(config: ContentionConfig, rng: np.random.Generator, size: int):
    """Vectorised meta-slots: arrays (c1, c2, winner1, winner2), winner -1 when c_i == 0."""
    c1, w1 = _group_outcome(config, 1, rng, size)
    c2, w2 = _group_outcome(config, 2, rng, size)
    return c1, c2, w1, w2


def draw_meta_slot(config: ContentionConfig, rng: np.random.Generator) -> ChannelState:
    c1, c2, w1, w2 = draw_meta_slots(config, rng, 1)
    return ChannelState(
        c1=int(c1[0]), c2=int(c2[0]),
        winner1=int(w1[0]) if c1[0] else None,
        winner2=int(w2[0]) if c2[0] else None,
    )


def _symmetric_success(p: float, k: int) -> float:
    return k * p * (1.0 - p) ** (k - 1)


def calibrate_probs(target_ps: float, num_links: int) -> np.ndarray:
    """Symmetric per-link probability p with K p (1 - p)^(K - 1) = target_ps.

    Solved by bisection on the increasing branch p in (0, 1/K].
    """
    k = int(num_links)
    if k < 1:
        raise ConfigError(f"num_links must be positive, got {num_links}", field='links_per_group')
    if not 0.0 < target_ps <= 1.0:
        raise ConfigError(f"target_ps must lie in (0, 1], got {target_ps}", field='target_ps')
    if k == 1:
        return np.array([float(target_ps)])

    ceiling = _symmetric_success(1.0 / k, k)
    if target_ps > ceiling + CALIBRATION_TOLERANCE:
        raise UnachievableTargetError(
            f"target_ps={target_ps:.6g} exceeds the maximum {ceiling:.6g} reachable by {k} links",
            field='target_ps')
    lo, hi = 0.0, 1.0 / k
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _symmetric_success(mid, k) < target_ps:
            lo = mid
        else:
            hi = mid
        if hi - lo < CALIBRATION_TOLERANCE:
            break
    p = 0.5 * (lo + hi)
    logger.debug(f"Calibrated p={p:.12f} for K={k}, target_ps={target_ps:.6g}")
    return np.full(k, p)
