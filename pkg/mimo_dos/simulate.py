# mimo_dos/simulate.py
"""Renewal-reward Monte Carlo of the three scheduling protocols."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union
import hashlib
import logging
import math

import numpy as np
import pandas as pd
from scipy import stats
from tqdm import tqdm

from .channel.model import (
    LinkSnrConfig,
    eigenvalues_2x2,
    mrc_gains,
    oc_sinrs,
    sample_channels,
    sample_vectors,
    sl_csit_rates,
    tl_csit_rates,
)
from .channel.paper_forms import sl_csir_rates_paper, tl_csir_rates_paper
from .contention import ContentionConfig, draw_meta_slots
from .distributions import QuadratureSpec
from .errors import ConfigError
from .protocols import CsirMode, DecisionRule, ProtocolKind
from .threshold import compound_reward_for, solve_threshold

STATE_KEYS = ('00', '01', '10', '11')
CHUNK_LIMIT = 65536
DEFAULT_BATCHES = 20


@dataclass(frozen=True)
class PolicySpec:
    """Threshold policy; `decision_rule` only matters in state {1,1}."""
    threshold: float
    decision_rule: DecisionRule = DecisionRule.APPROX_SUM

    def __post_init__(self):
        if not np.isfinite(self.threshold) or self.threshold < 0:
            raise ConfigError(f"threshold must be finite and >= 0, got {self.threshold}", field='threshold')
        if not isinstance(self.decision_rule, DecisionRule):
            object.__setattr__(self, 'decision_rule', DecisionRule(self.decision_rule))


@dataclass(frozen=True)
class ScenarioSpec:
    """Scenario shared by all protocols of an SNR sweep.

    Two-group protocols calibrate each group of `links_per_group` links to
    `target_ps`; the single-group protocol puts all 2 * links_per_group links in
    one group calibrated to the same target.
    """
    links_per_group: int
    target_ps: float
    delta: float
    rho_n: float

    def contention_for(self, kind: ProtocolKind, snr_db: float) -> ContentionConfig:
        snr = LinkSnrConfig.from_db(snr_db, self.rho_n)
        if kind.two_group:
            return ContentionConfig.two_group(self.links_per_group, self.target_ps, self.delta, snr)
        return ContentionConfig.single_group(2 * self.links_per_group, self.target_ps, self.delta, snr)


@dataclass
class SimReport:
    """Accumulated renewal-reward totals of one simulation run.

    Time is normalised to a data transmission of duration 1; each meta-slot
    costs `slot_cost` (2 delta for two groups, delta for a single group).
    `elapsed_time` is summed slot by slot during the run.
    """
    protocol: str
    threshold: float
    slot_cost: float
    total_reward_time: float
    rounds: int
    state_counts: Dict[str, int]
    transmit_counts: Dict[str, int]
    elapsed_time: float
    cycle_rewards: np.ndarray = field(repr=False)
    cycle_slots: np.ndarray = field(repr=False)
    num_batches: int = DEFAULT_BATCHES
    truncated: bool = False

    @property
    def meta_slots(self) -> int:
        return int(sum(self.state_counts.values()))

    @property
    def transmissions(self) -> int:
        return int(sum(self.transmit_counts.values()))

    @property
    def total_time(self) -> float:
        return self.slot_cost * self.meta_slots + self.transmissions

    @property
    def throughput(self) -> float:
        total = self.total_time
        return self.total_reward_time / total if total > 0 else 0.0

    @property
    def ci_halfwidth(self) -> float:
        """95% batch-means half-width over contiguous groups of renewal cycles."""
        n = self.cycle_rewards.size
        batches = min(self.num_batches, n)
        if batches < 2:
            return float('nan')
        times = self.slot_cost * self.cycle_slots + 1.0
        ratios = np.array([r.sum() / t.sum() for r, t in zip(np.array_split(self.cycle_rewards, batches),
                                                              np.array_split(times, batches))])
        quantile = stats.t.ppf(0.975, batches - 1)
        return float(quantile * ratios.std(ddof=1) / np.sqrt(batches))

    def time_identity_holds(self, rel_tol: float = 1e-9) -> bool:
        """Slot-by-slot elapsed time agrees with the state and transmission counts."""
        return math.isclose(self.elapsed_time, self.total_time, rel_tol=rel_tol)

    def merge(self, other: "SimReport") -> "SimReport":
        """Associative combination of two independent runs of the same scenario."""
        if (self.protocol, self.threshold, self.slot_cost) != (other.protocol, other.threshold, other.slot_cost):
            raise ConfigError("cannot merge reports of different scenarios")
        return SimReport(
            protocol=self.protocol,
            threshold=self.threshold,
            slot_cost=self.slot_cost,
            total_reward_time=self.total_reward_time + other.total_reward_time,
            rounds=self.rounds + other.rounds,
            state_counts={k: self.state_counts[k] + other.state_counts[k] for k in STATE_KEYS},
            transmit_counts={k: self.transmit_counts[k] + other.transmit_counts[k] for k in self.transmit_counts},
            elapsed_time=self.elapsed_time + other.elapsed_time,
            cycle_rewards=np.concatenate((self.cycle_rewards, other.cycle_rewards)),
            cycle_slots=np.concatenate((self.cycle_slots, other.cycle_slots)),
            num_batches=self.num_batches,
            truncated=self.truncated or other.truncated,
        )

    def summary(self) -> Dict:
        return {
            'protocol': self.protocol,
            'threshold': self.threshold,
            'throughput': self.throughput,
            'ci95': self.ci_halfwidth,
            'total_reward_time': self.total_reward_time,
            'total_time': self.total_time,
            'rounds': self.rounds,
            'state_counts': dict(self.state_counts),
            'transmit_counts': dict(self.transmit_counts),
            'truncated': self.truncated,
        }


class ProtocolSimulator:
    """Draws rates and applies the threshold decision for one protocol."""

    def __init__(self, kind: ProtocolKind, config: ContentionConfig, policy: PolicySpec,
                 csir_mode: CsirMode = CsirMode.PAPER):
        self.kind = kind
        self.config = _as_single_group(config) if kind is ProtocolKind.SG_CSIT else config
        if kind.two_group and self.config.is_single_group:
            raise ConfigError(f"{kind.value} needs links in both groups", field='group_of')
        self.policy = policy
        self.csir_mode = csir_mode
        self.snr: LinkSnrConfig = config.snr
        self.slot_cost = config.delta * (2.0 if kind.two_group else 1.0)
        self.logger = logging.getLogger(f"mimo_dos.{self.__class__.__name__}")

    def _single_rates(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0:
            return np.empty(0)
        if self.kind.uses_csit:
            l1, l2 = eigenvalues_2x2(sample_channels(rng, n))
            return sl_csit_rates(l1, l2, self.snr.rho_s)
        if self.csir_mode is CsirMode.PAPER:
            return sl_csir_rates_paper(rng, self.snr.rho_s, n)
        return np.log1p(self.snr.rho_s * mrc_gains(sample_vectors(rng, n)))

    def _pair_rates(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, ...]:
        """(sl_1, sl_2, tl_1, tl_2) for n slots in state {1,1}."""
        if self.kind.uses_csit:
            a1, a2 = eigenvalues_2x2(sample_channels(rng, n))
            b1, b2 = eigenvalues_2x2(sample_channels(rng, n))
            return (sl_csit_rates(a1, a2, self.snr.rho_s), sl_csit_rates(b1, b2, self.snr.rho_s),
                    tl_csit_rates(a1, a2, self.snr), tl_csit_rates(b1, b2, self.snr))
        if self.csir_mode is CsirMode.PAPER:
            return (sl_csir_rates_paper(rng, self.snr.rho_s, n), sl_csir_rates_paper(rng, self.snr.rho_s, n),
                    tl_csir_rates_paper(rng, self.snr, n), tl_csir_rates_paper(rng, self.snr, n))
        d1, d2 = sample_vectors(rng, n), sample_vectors(rng, n)
        # g21: source 2 -> destination 1, g12: source 1 -> destination 2
        g21, g12 = sample_vectors(rng, n), sample_vectors(rng, n)
        return (np.log1p(self.snr.rho_s * mrc_gains(d1)), np.log1p(self.snr.rho_s * mrc_gains(d2)),
                np.log1p(oc_sinrs(d1, g21, self.snr)), np.log1p(oc_sinrs(d2, g12, self.snr)))

    def decide(self, c1: np.ndarray, c2: np.ndarray, rng: np.random.Generator):
        """Per-slot reward, transmit flag and two-link flag for one chunk of meta-slots."""
        x = self.policy.threshold
        reward = np.zeros(c1.size)
        two_link = np.zeros(c1.size, dtype=bool)

        single = (c1 + c2) == 1
        reward[single] = self._single_rates(rng, int(single.sum()))
        transmit = single & (reward >= x)

        pair = (c1 == 1) & (c2 == 1)
        n_pair = int(pair.sum())
        if n_pair:
            sl1, sl2, tl1, tl2 = self._pair_rates(rng, n_pair)
            tl_sum = tl1 + tl2
            if self.policy.decision_rule is DecisionRule.EXACT_MAX:
                options = np.stack((sl1, sl2, tl_sum))
                best = options.max(axis=0)
                use_two = options.argmax(axis=0) == 2
            else:
                best = tl_sum
                use_two = np.ones(n_pair, dtype=bool)
            go = best >= x
            reward[pair] = best
            transmit[pair] = go
            two_link[pair] = go & use_two
        reward[~transmit] = 0.0
        return reward, transmit, two_link

    def run(self, num_renewals: int, rng: np.random.Generator,
            max_meta_slots: Optional[int] = None, num_batches: int = DEFAULT_BATCHES) -> SimReport:
        if num_renewals < 1:
            raise ConfigError(f"num_renewals must be >= 1, got {num_renewals}", field='renewals')
        if max_meta_slots is None:
            max_meta_slots = 50 * num_renewals + 100_000
        contention_rng, channel_rng = rng.spawn(2)
        chunk = int(min(max(4 * num_renewals, 1024), CHUNK_LIMIT))

        states = dict.fromkeys(STATE_KEYS, 0)
        tx_counts = {'single': 0, 'two_link': 0}
        rounds = 0
        total_reward = 0.0
        elapsed = 0.0
        rewards: List[np.ndarray] = []
        slots: List[np.ndarray] = []
        done = 0
        used = 0
        last_tx = -1

        while done < num_renewals and used < max_meta_slots:
            n = min(chunk, max_meta_slots - used)
            c1, c2, _, _ = draw_meta_slots(self.config, contention_rng, n)
            reward, transmit, two_link = self.decide(c1, c2, channel_rng)

            tx_idx = np.flatnonzero(transmit)
            need = num_renewals - done
            if tx_idx.size >= need:
                tx_idx = tx_idx[:need]
                n = int(tx_idx[-1]) + 1
            c1, c2 = c1[:n], c2[:n]
            elapsed += float(np.sum(self.slot_cost + transmit[:n]))

            codes = 2 * c1.astype(np.int64) + c2
            for code, key in enumerate(STATE_KEYS):
                states[key] += int(np.count_nonzero(codes == code))
            rounds += int(np.count_nonzero(codes))

            positions = used + tx_idx
            slots.append(np.diff(np.concatenate(([last_tx], positions))))
            if positions.size:
                last_tx = int(positions[-1])
            chunk_rewards = reward[tx_idx]
            rewards.append(chunk_rewards)
            total_reward += float(chunk_rewards.sum())
            n_two = int(np.count_nonzero(two_link[tx_idx]))
            tx_counts['two_link'] += n_two
            tx_counts['single'] += int(tx_idx.size) - n_two

            done += int(tx_idx.size)
            used += n

        truncated = done < num_renewals
        if truncated:
            self.logger.warning(f"{self.kind.value}: only {done}/{num_renewals} transmissions "
                                f"in {used} meta-slots at threshold {self.policy.threshold:.4f}")
        return SimReport(
            protocol=self.kind.value,
            threshold=self.policy.threshold,
            slot_cost=self.slot_cost,
            total_reward_time=total_reward,
            rounds=rounds,
            state_counts=states,
            transmit_counts=tx_counts,
            elapsed_time=elapsed,
            cycle_rewards=np.concatenate(rewards) if rewards else np.empty(0),
            cycle_slots=np.concatenate(slots).astype(np.int64) if slots else np.empty(0, dtype=np.int64),
            num_batches=num_batches,
            truncated=truncated,
        )


def stream_for(seed: int, *names: str) -> np.random.Generator:
    """Named substream of a 64-bit master seed; stable across processes and platforms."""
    if not 0 <= int(seed) < 2 ** 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}", field='seed')
    digest = hashlib.sha256("/".join(names).encode("utf-8")).digest()
    spawn_key = tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


def _as_single_group(config: ContentionConfig) -> ContentionConfig:
    if config.is_single_group:
        return config
    return replace(config, group_of=(1,) * config.num_links)


def _kind(kind: Union[ProtocolKind, str]) -> ProtocolKind:
    return kind if isinstance(kind, ProtocolKind) else ProtocolKind.parse(kind)


def run_protocol(kind: Union[ProtocolKind, str], config: ContentionConfig, policy: PolicySpec,
                 num_renewals: int, rng: np.random.Generator,
                 csir_mode: Union[CsirMode, str] = CsirMode.PAPER,
                 max_meta_slots: Optional[int] = None,
                 num_batches: int = DEFAULT_BATCHES) -> SimReport:
    """
    Simulate a protocol until `num_renewals` transmissions have completed.

    Args:
        kind: Protocol to simulate
        config: Contention scenario (a two-group config is merged for SG-CSIT)
        policy: Threshold and decision rule
        num_renewals: Number of transmissions (renewal cycles) to complete
        rng: Generator; split into contention and channel substreams
        csir_mode: Rate law used for CSIR draws
        max_meta_slots: Guard on the run length; defaults to 50 * num_renewals + 100000
        num_batches: Batch count for the confidence interval

    Returns:
        SimReport with totals, per-cycle arrays and the truncation flag
    """
    simulator = ProtocolSimulator(_kind(kind), config, policy, CsirMode(csir_mode))
    return simulator.run(num_renewals, rng, max_meta_slots, num_batches)


def run_protocol_sharded(kind: Union[ProtocolKind, str], config: ContentionConfig, policy: PolicySpec,
                         num_renewals: int, rng: np.random.Generator, shards: int = 8,
                         workers: int = 4, csir_mode: Union[CsirMode, str] = CsirMode.PAPER,
                         num_batches: int = DEFAULT_BATCHES) -> SimReport:
    """Split the renewals over independent substreams and merge in shard order.

    The result depends on `shards` but not on `workers`.
    """
    if num_renewals < 1:
        raise ConfigError(f"num_renewals must be >= 1, got {num_renewals}", field='renewals')
    if shards < 1:
        raise ConfigError(f"shards must be >= 1, got {shards}", field='shards')
    sizes = [len(part) for part in np.array_split(np.arange(num_renewals), shards) if len(part)]
    streams = rng.spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(run_protocol, kind, config, policy, size, stream, csir_mode,
                                   None, num_batches)
                   for size, stream in zip(sizes, streams)]
        reports = [future.result() for future in futures]
    merged = reports[0]
    for report in reports[1:]:
        merged = merged.merge(report)
    return merged


def sweep_threshold(kind: Union[ProtocolKind, str], config: ContentionConfig, thresholds: Sequence[float],
                    num_renewals: int, rng: np.random.Generator,
                    decision_rule: DecisionRule = DecisionRule.APPROX_SUM,
                    csir_mode: Union[CsirMode, str] = CsirMode.PAPER,
                    workers: int = 1, num_batches: int = DEFAULT_BATCHES) -> pd.DataFrame:
    """Throughput as a function of an imposed threshold, one substream per grid point."""
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.ndim != 1 or thresholds.size == 0 or np.any(np.diff(thresholds) <= 0):
        raise ConfigError("thresholds must be a nonempty strictly increasing array", field='thresholds')
    kind = _kind(kind)
    streams = rng.spawn(thresholds.size)
    reports: List[Optional[SimReport]] = [None] * thresholds.size

    def _one(index: int) -> SimReport:
        policy = PolicySpec(float(thresholds[index]), decision_rule)
        return run_protocol(kind, config, policy, num_renewals, streams[index], csir_mode,
                            num_batches=num_batches)

    desc = f"{kind.value} threshold sweep"
    if workers > 1 and thresholds.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_one, i): i for i in range(thresholds.size)}
            with tqdm(total=len(futures), desc=desc, leave=False) as pbar:
                for future in futures:
                    reports[futures[future]] = future.result()
                    pbar.update(1)
    else:
        for i in tqdm(range(thresholds.size), desc=desc, leave=False):
            reports[i] = _one(i)

    return pd.DataFrame({
        'threshold_nats': thresholds,
        'throughput_nats': [r.throughput for r in reports],
        'ci95': [r.ci_halfwidth for r in reports],
    })


def sweep_snr(kinds: Sequence[Union[ProtocolKind, str]], snr_db_grid: Sequence[float], base: ScenarioSpec,
              num_renewals: int, rng: np.random.Generator,
              csir_mode: Union[CsirMode, str] = CsirMode.PAPER,
              decision_rule: DecisionRule = DecisionRule.APPROX_SUM,
              spec: Optional[QuadratureSpec] = None,
              num_batches: int = DEFAULT_BATCHES) -> pd.DataFrame:
    """Solved maximal throughput and its simulated check for each (protocol, SNR)."""
    kinds = [_kind(k) for k in kinds]
    snr_db_grid = [float(s) for s in snr_db_grid]
    if not kinds or not snr_db_grid:
        raise ConfigError("protocol list and SNR grid must be nonempty", field='snr_db')
    logger = logging.getLogger(__name__)
    streams = rng.spawn(len(kinds) * len(snr_db_grid))

    rows = []
    for i, snr_db in enumerate(tqdm(snr_db_grid, desc="SNR sweep", leave=False)):
        for j, kind in enumerate(kinds):
            config = base.contention_for(kind, snr_db)
            solution = solve_threshold(compound_reward_for(kind, config, csir_mode, spec))
            report = run_protocol(kind, config, PolicySpec(solution.x_max, decision_rule), num_renewals,
                                  streams[i * len(kinds) + j], csir_mode, num_batches=num_batches)
            logger.info(f"{kind.value} @ {snr_db:g} dB: x_max={solution.x_max:.6f}, "
                        f"simulated={report.throughput:.6f}")
            rows.append({'protocol': kind.value, 'snr_db': snr_db, 'x_max': solution.x_max,
                         'sim_throughput': report.throughput, 'ci95': report.ci_halfwidth})

    table = pd.DataFrame(rows, columns=['protocol', 'snr_db', 'x_max', 'sim_throughput', 'ci95'])
    reference = table[table['protocol'] == ProtocolKind.SG_CSIT.value].set_index('snr_db')['x_max']
    table['ratio_vs_sg_csit'] = table['x_max'] / table['snr_db'].map(reference)
    return table
