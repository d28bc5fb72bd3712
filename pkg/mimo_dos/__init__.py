# mimo_dos/__init__.py
from .protocols import CsirMode, DecisionRule, ProtocolKind
from .channel import LinkSnrConfig
from .contention import ContentionConfig, calibrate_probs, success_prob
from .distributions import QuadratureSpec, RateDistribution
from .threshold import CompoundReward, ThresholdSolution, compound_reward_for, return_map, solve_threshold
from .simulate import (
    PolicySpec,
    ScenarioSpec,
    SimReport,
    run_protocol,
    run_protocol_sharded,
    stream_for,
    sweep_snr,
    sweep_threshold
)

__all__ = [
    'CsirMode',
    'DecisionRule',
    'ProtocolKind',
    'LinkSnrConfig',
    'ContentionConfig',
    'calibrate_probs',
    'success_prob',
    'QuadratureSpec',
    'RateDistribution',
    'CompoundReward',
    'ThresholdSolution',
    'compound_reward_for',
    'return_map',
    'solve_threshold',
    'PolicySpec',
    'ScenarioSpec',
    'SimReport',
    'run_protocol',
    'run_protocol_sharded',
    'stream_for',
    'sweep_snr',
    'sweep_threshold'
]
