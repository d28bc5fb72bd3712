# mimo_dos/threshold.py
"""Pure-threshold fixed point: the maximal rate of return of a stopping policy."""
from dataclasses import dataclass
from typing import Optional, Tuple, Union
import logging

from .contention import ContentionConfig, success_prob
from .distributions import (
    QuadratureSpec,
    RateDistribution,
    cdf_sl_csir,
    cdf_sl_csit,
    cdf_tl_csir_sum,
    cdf_tl_csit_sum,
)
from .errors import ConfigError, NoSignChangeError, SolverError
from .protocols import CsirMode, ProtocolKind

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
WEIGHT_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class CompoundReward:
    """Per-slot reward law: state weights, rate distributions and the slot cost.

    Two-group protocols use weight_sl_1 = p1s(1 - p2s), weight_sl_2 = p2s(1 - p1s),
    weight_tl = p1s p2s and slot_cost = 2 delta. The single-group protocol uses
    weight_sl_1 = p's, no two-link term and slot_cost = delta.
    """
    weight_sl_1: float
    weight_sl_2: float
    weight_tl: float
    dist_sl: RateDistribution
    dist_tl_sum: Optional[RateDistribution]
    slot_cost: float

    def __post_init__(self):
        weights = (self.weight_sl_1, self.weight_sl_2, self.weight_tl)
        if any(not 0.0 <= w <= 1.0 for w in weights):
            raise ConfigError(f"state weights must lie in [0, 1]: {weights}")
        if sum(weights) > 1.0 + WEIGHT_SLACK:
            raise ConfigError(f"state weights sum to {sum(weights):.12f} > 1")
        if self.weight_tl > 0 and self.dist_tl_sum is None:
            raise ConfigError("two-link weight given without a two-link distribution")
        if not self.slot_cost > 0:
            raise ConfigError(f"slot cost must be positive (delta > 0), got {self.slot_cost}",
                              field='delta')

    @property
    def weight_sl(self) -> float:
        return self.weight_sl_1 + self.weight_sl_2

    @property
    def upper_rate(self) -> float:
        upper = self.dist_sl.upper_rate
        if self.dist_tl_sum is not None:
            upper = max(upper, self.dist_tl_sum.upper_rate)
        return upper


@dataclass(frozen=True)
class ThresholdSolution:
    x_max: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]


def return_map(reward: CompoundReward, x: float) -> float:
    """Rate of return of the threshold policy at threshold x."""
    numerator = reward.weight_sl * reward.dist_sl.truncated_mean(x)
    denominator = reward.slot_cost + reward.weight_sl * reward.dist_sl.tail_prob(x)
    if reward.dist_tl_sum is not None and reward.weight_tl > 0:
        numerator += reward.weight_tl * reward.dist_tl_sum.truncated_mean(x)
        denominator += reward.weight_tl * reward.dist_tl_sum.tail_prob(x)
    return numerator / denominator


def solve_threshold(reward: CompoundReward, tol: float = DEFAULT_TOL,
                    max_iter: int = 200) -> ThresholdSolution:
    """Bisection on g(x) = return_map(x) - x over [0, grid maximum]."""
    if not tol > 0:
        raise ConfigError(f"tolerance must be positive, got {tol}", field='tol')
    if not reward.slot_cost > 0:
        raise ConfigError("slot cost must be positive", field='delta')

    lo, hi = 0.0, reward.upper_rate
    g_lo = return_map(reward, lo) - lo
    if g_lo <= 0:
        raise NoSignChangeError(f"return map at zero is {g_lo:.3e}; nothing to gain from any threshold")
    g_hi = return_map(reward, hi) - hi
    if g_hi > 0:
        raise NoSignChangeError(f"return map exceeds the grid maximum {hi:.4f}")

    for iteration in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        g_mid = return_map(reward, mid) - mid
        if abs(g_mid) <= tol:
            logger.debug(f"Threshold solved: x_max={mid:.10f} after {iteration} iterations")
            return ThresholdSolution(x_max=mid, residual=abs(g_mid), iterations=iteration, bracket=(lo, hi))
        if g_mid > 0:
            lo = mid
        else:
            hi = mid
    raise SolverError(f"bisection did not reach tol={tol:g} in {max_iter} iterations "
                      f"(bracket [{lo:.10f}, {hi:.10f}])")


def compound_reward_for(kind: Union[ProtocolKind, str], config: ContentionConfig,
                        csir_mode: Union[CsirMode, str] = CsirMode.PAPER,
                        spec: Optional[QuadratureSpec] = None) -> CompoundReward:
    """Build the reward law of a protocol from its contention scenario."""
    kind = kind if isinstance(kind, ProtocolKind) else ProtocolKind.parse(kind)
    csir_mode = csir_mode if isinstance(csir_mode, CsirMode) else CsirMode(csir_mode)
    snr = config.snr

    if kind is ProtocolKind.SG_CSIT:
        ps = success_prob(config, 1) if config.is_single_group else _merged_success(config)
        return CompoundReward(weight_sl_1=ps, weight_sl_2=0.0, weight_tl=0.0,
                              dist_sl=cdf_sl_csit(snr.rho_s, spec), dist_tl_sum=None,
                              slot_cost=config.delta)

    if config.is_single_group:
        raise ConfigError(f"{kind.value} needs links in both groups", field='group_of')
    p1s = success_prob(config, 1)
    p2s = success_prob(config, 2)
    if kind is ProtocolKind.TG_CSIT:
        dist_sl = cdf_sl_csit(snr.rho_s, spec)
        dist_tl = cdf_tl_csit_sum(snr.rho_s, snr.rho_n, spec)
    else:
        dist_sl = cdf_sl_csir(snr.rho_s, csir_mode, spec)
        dist_tl = cdf_tl_csir_sum(snr.rho_s, snr.rho_n, csir_mode, spec)
    return CompoundReward(weight_sl_1=p1s * (1.0 - p2s), weight_sl_2=p2s * (1.0 - p1s),
                          weight_tl=p1s * p2s, dist_sl=dist_sl, dist_tl_sum=dist_tl,
                          slot_cost=2.0 * config.delta)


def _merged_success(config: ContentionConfig) -> float:
    merged = ContentionConfig(config.link_probs, (1,) * config.num_links, config.delta, config.snr)
    return success_prob(merged, 1)
