# mimo_dos/tests/test_contention.py
import math

import numpy as np
import pytest

from mimo_dos.channel import LinkSnrConfig
from mimo_dos.contention import (
    ContentionConfig,
    calibrate_probs,
    draw_meta_slot,
    draw_meta_slots,
    state_probabilities,
    success_prob,
)
from mimo_dos.errors import ConfigError, EmptyGroupError, UnachievableTargetError

from .conftest import MC_DRAWS

SNR = LinkSnrConfig(10.0, 1.0)


def _group(*probs):
    return ContentionConfig(probs, (1,) * len(probs), 0.1, SNR)


@pytest.mark.parametrize("probs, expected", [
    ((1.0,), 1.0),
    ((0.5, 0.5), 0.5),
    ((0.3, 0.2, 0.1), 0.398),
])
def test_success_prob_examples(probs, expected):
    assert success_prob(_group(*probs), 1) == pytest.approx(expected, abs=1e-12)


def test_success_prob_matches_enumeration():
    probs = (0.3, 0.2, 0.1, 0.45)
    total = 0.0
    for mask in range(1 << len(probs)):
        bits = [(mask >> i) & 1 for i in range(len(probs))]
        weight = np.prod([p if b else 1 - p for p, b in zip(probs, bits)])
        if sum(bits) == 1:
            total += weight
    assert success_prob(_group(*probs), 1) == pytest.approx(total, abs=1e-12)


def test_empty_group_raises():
    with pytest.raises(EmptyGroupError):
        success_prob(_group(0.3, 0.2), 2)


def test_config_validation():
    with pytest.raises(ConfigError):
        ContentionConfig((0.5,), (1,), 0.0, SNR)
    with pytest.raises(ConfigError):
        ContentionConfig((1.5,), (1,), 0.1, SNR)
    with pytest.raises(ConfigError):
        ContentionConfig((0.5, 0.5), (1, 3), 0.1, SNR)
    with pytest.raises(ConfigError):
        ContentionConfig((0.5,), (1, 2), 0.1, SNR)


def test_forced_collision(rng):
    c1, c2, w1, w2 = draw_meta_slots(_group(1.0, 1.0), rng, 1000)
    assert not c1.any()
    assert not c2.any()
    assert np.all(w1 == -1)


def test_single_link_per_group_always_succeeds(rng):
    config = ContentionConfig((1.0, 1.0), (1, 2), 0.1, SNR)
    for _ in range(20):
        state = draw_meta_slot(config, rng)
        assert state.key == '11'
        assert (state.winner1, state.winner2) == (0, 1)


def test_winner_belongs_to_group(rng):
    config = ContentionConfig.two_group(4, math.exp(-1.0), 0.1, SNR)
    c1, c2, w1, w2 = draw_meta_slots(config, rng, 5000)
    groups = np.asarray(config.group_of)
    assert np.all(groups[w1[c1 == 1]] == 1)
    assert np.all(groups[w2[c2 == 1]] == 2)
    assert np.all(w1[c1 == 0] == -1)


def test_empirical_success_frequency(rng):
    config = ContentionConfig((0.3, 0.2, 0.1, 0.4, 0.4), (1, 1, 1, 2, 2), 0.1, SNR)
    c1, c2, _, _ = draw_meta_slots(config, rng, MC_DRAWS)
    assert c1.mean() == pytest.approx(0.398, abs=0.005)
    assert c2.mean() == pytest.approx(0.48, abs=0.005)


def test_state_frequencies_within_three_sigma(rng):
    config = ContentionConfig.two_group(5, math.exp(-1.0), 0.1, SNR)
    c1, c2, _, _ = draw_meta_slots(config, rng, MC_DRAWS)
    expected = state_probabilities(success_prob(config, 1), success_prob(config, 2))
    assert sum(expected.values()) == pytest.approx(1.0)
    codes = 2 * c1.astype(int) + c2
    for code, key in enumerate(('00', '01', '10', '11')):
        p = expected[key]
        sigma = math.sqrt(p * (1 - p) / MC_DRAWS)
        assert abs(np.mean(codes == code) - p) <= 3 * sigma


def test_calibrate_examples():
    assert calibrate_probs(math.exp(-1.0), 1)[0] == pytest.approx(0.36788, abs=1e-5)
    assert calibrate_probs(0.5, 2) == pytest.approx([0.5, 0.5], abs=1e-9)
    p = calibrate_probs(math.exp(-1.0), 10)[0]
    assert 10 * p * (1 - p) ** 9 == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert p <= 0.1


def test_calibrate_rejects_unreachable_target():
    with pytest.raises(UnachievableTargetError):
        calibrate_probs(0.9, 2)
    with pytest.raises(ConfigError):
        calibrate_probs(0.0, 3)


def test_two_group_constructor():
    config = ContentionConfig.two_group(5, math.exp(-1.0), 0.1, SNR)
    assert config.num_links == 10
    assert not config.is_single_group
    assert success_prob(config, 1) == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert success_prob(config, 2) == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert list(config.links_in(2)) == [5, 6, 7, 8, 9]
