# mimo_dos/tests/test_distributions.py
import math

import numpy as np
import pytest
from scipy import stats

from mimo_dos.channel import (
    eigenvalues_2x2,
    mrc_gains,
    oc_sinrs,
    sample_channels,
    sample_vectors,
    sl_csit_rates,
    tl_csit_rates,
)
from mimo_dos.channel.paper_forms import tl_csir_rates_paper
from mimo_dos.distributions import (
    QuadratureSpec,
    RateDistribution,
    cdf_sl_csir,
    cdf_sl_csit,
    cdf_tl_csir_link,
    cdf_tl_csir_sum,
    cdf_tl_csit_link,
    cdf_tl_csit_sum,
    joint_eig_pdf,
    tail_prob,
    truncated_mean,
)
from mimo_dos.distributions.csir import sl_csir_physical_cdf
from mimo_dos.errors import ConfigError, QuadratureBudgetError

from .conftest import MC_DRAWS


def test_joint_pdf_zeros():
    assert joint_eig_pdf(1.0, 1.0) == 0.0
    assert joint_eig_pdf(0.0, 0.0) == 0.0


def test_joint_pdf_normalisation():
    nodes, weights = np.polynomial.legendre.leggauss(256)
    x = 20.0 * (nodes + 1.0)
    w = 20.0 * weights
    mass = w @ joint_eig_pdf(x[:, None], x[None, :]) @ w
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_exponential_tail_and_truncated_mean(exponential_dist):
    assert tail_prob(exponential_dist, 0.0) == pytest.approx(1.0)
    assert tail_prob(exponential_dist, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-6)
    assert truncated_mean(exponential_dist, 1.0) == pytest.approx(2 * math.exp(-1.0), abs=1e-6)
    assert truncated_mean(exponential_dist, 0.0) == pytest.approx(exponential_dist.mean())
    assert exponential_dist.mean() == pytest.approx(1.0, abs=1e-6)


def test_tail_is_complement_of_cdf(exponential_dist):
    for x in (0.0, 0.123456, 1.0, 3.7, 39.99):
        assert exponential_dist.tail_prob(x) + exponential_dist.cdf_at(x) == pytest.approx(1.0, abs=1e-12)


def test_beyond_grid(exponential_dist):
    upper = exponential_dist.upper_rate
    assert exponential_dist.tail_prob(upper) <= exponential_dist.tail_mass
    assert exponential_dist.truncated_mean(upper + 1.0) <= upper * exponential_dist.tail_mass


def test_arrays_are_read_only(exponential_dist):
    with pytest.raises(ValueError):
        exponential_dist.cdf[0] = 0.5


def test_grid_must_start_at_zero():
    grid = np.linspace(1.0, 2.0, 10)
    with pytest.raises(ConfigError):
        RateDistribution(grid=grid, cdf=np.zeros(10), pdf=np.zeros(10), tail_mass=1e-6)


def test_quadrature_spec_validation():
    with pytest.raises(ConfigError):
        QuadratureSpec(grid_points=10)
    with pytest.raises(ConfigError):
        QuadratureSpec(upper_rate=-1.0)


def test_inverse_cdf_sampling(exponential_dist, rng):
    samples = exponential_dist.sample(rng, MC_DRAWS)
    assert stats.kstest(samples, 'expon').statistic < 0.01


def test_sl_csit_boundaries_and_invariants():
    dist = cdf_sl_csit(10.0)
    assert dist.cdf[0] == 0.0
    assert dist.cdf[-1] >= 1.0 - 1e-6
    assert np.all(np.diff(dist.cdf) >= 0)
    report = dist.check_invariants()
    assert report.is_valid, report.errors


def test_sl_csit_matches_monte_carlo(rng):
    dist = cdf_sl_csit(10.0)
    l1, l2 = eigenvalues_2x2(sample_channels(rng, MC_DRAWS))
    assert stats.kstest(sl_csit_rates(l1, l2, 10.0), dist.cdf_at).statistic < 0.01


def test_narrow_grid_raises_budget_error():
    with pytest.raises(QuadratureBudgetError):
        cdf_sl_csit(10.0, QuadratureSpec(upper_rate=2.0))


def test_tl_csit_link_without_interference_is_sl_csit():
    np.testing.assert_allclose(cdf_tl_csit_link(10.0, 0.0).cdf, cdf_sl_csit(10.0).cdf, atol=1e-9)


def test_tl_csit_sum_mean_and_monte_carlo(rng, snr_10db):
    link = cdf_tl_csit_link(snr_10db.rho_s, snr_10db.rho_n)
    total = cdf_tl_csit_sum(snr_10db.rho_s, snr_10db.rho_n)
    assert total.mean() == pytest.approx(2.0 * link.mean(), rel=1e-6)
    assert total.upper_rate == pytest.approx(2.0 * link.upper_rate)

    a1, a2 = eigenvalues_2x2(sample_channels(rng, MC_DRAWS))
    b1, b2 = eigenvalues_2x2(sample_channels(rng, MC_DRAWS))
    samples = tl_csit_rates(a1, a2, snr_10db) + tl_csit_rates(b1, b2, snr_10db)
    assert stats.kstest(samples, total.cdf_at).statistic < 0.01


def test_sl_csir_physical_closed_form():
    assert sl_csir_physical_cdf(math.log(2.0), 1.0) == pytest.approx(1.0 - 2.0 * math.exp(-1.0))
    dist = cdf_sl_csir(1.0, 'physical')
    assert dist.cdf[0] == 0.0
    assert dist.cdf_at(math.log(2.0)) == pytest.approx(0.26424, abs=1e-5)
    assert dist.check_invariants().is_valid


def test_sl_csir_physical_matches_monte_carlo(rng, snr_10db):
    dist = cdf_sl_csir(snr_10db.rho_s, 'physical')
    samples = np.log1p(snr_10db.rho_s * mrc_gains(sample_vectors(rng, MC_DRAWS)))
    assert stats.kstest(samples, dist.cdf_at).statistic < 0.01


@pytest.mark.parametrize("rho_s", [10.0, 100.0])
def test_sl_csir_paper_records_repair(rho_s):
    dist = cdf_sl_csir(rho_s, 'paper')
    assert dist.cdf[0] == 0.0
    kink = dist.metadata['kink_rate']
    assert kink is not None
    assert dist.metadata['repair_deficit'] > 0
    assert kink in dist.grid
    report = dist.check_invariants()
    assert report.is_valid, report.errors
    assert report.warnings
    assert report.metadata['max_cell_error'] <= 1e-6

    # PDF and CDF describe the same law: mean by r f(r) equals the integral of 1 - F
    survival_mean = float(np.trapezoid(1.0 - dist.cdf, dist.grid))
    assert dist.mean() == pytest.approx(survival_mean, rel=1e-5)


def test_tl_csir_physical_link_matches_monte_carlo(rng, snr_10db):
    dist = cdf_tl_csir_link(snr_10db.rho_s, snr_10db.rho_n, 'physical')
    samples = np.log1p(oc_sinrs(sample_vectors(rng, MC_DRAWS), sample_vectors(rng, MC_DRAWS), snr_10db))
    assert stats.kstest(samples, dist.cdf_at).statistic < 0.01


def test_tl_csir_paper_sum_self_consistency(rng, snr_10db):
    link = cdf_tl_csir_link(snr_10db.rho_s, snr_10db.rho_n, 'paper')
    total = cdf_tl_csir_sum(snr_10db.rho_s, snr_10db.rho_n, 'paper')
    assert link.cdf[0] == pytest.approx(0.0, abs=1e-15)
    assert total.mean() == pytest.approx(2.0 * link.mean(), rel=1e-6)

    samples = tl_csir_rates_paper(rng, snr_10db, MC_DRAWS) + tl_csir_rates_paper(rng, snr_10db, MC_DRAWS)
    assert stats.kstest(samples, total.cdf_at).statistic < 0.01


def test_describe_and_frame(snr_10db):
    dist = cdf_tl_csir_link(snr_10db.rho_s, snr_10db.rho_n, 'physical', QuadratureSpec(grid_points=256))
    frame = dist.to_frame()
    assert list(frame.columns) == ['rate_nats', 'cdf']
    assert len(frame) == 256
    info = dist.describe()
    assert info['grid_points'] == 256
    assert info['mode'] == 'physical'
    assert info['tail_mass'] == pytest.approx(1e-6)


@pytest.mark.parametrize("build", [
    lambda: cdf_sl_csit(1.0),
    lambda: cdf_tl_csit_sum(1.0, 1.0),
    lambda: cdf_sl_csir(1.0, 'physical'),
    lambda: cdf_sl_csir(1.0, 'paper'),
    lambda: cdf_tl_csir_sum(1.0, 1.0, 'physical'),
    lambda: cdf_tl_csir_sum(1.0, 1.0, 'paper'),
    lambda: cdf_sl_csir(10.0 ** 0.1, 'paper'),
], ids=['sl-csit', 'tl-csit-sum', 'sl-csir-physical', 'sl-csir-paper', 'tl-csir-sum-physical',
        'tl-csir-sum-paper', 'sl-csir-paper-1db'])
def test_low_snr_tables_meet_invariants(build):
    dist = build()
    assert dist.cdf[-1] >= 1.0 - dist.tail_mass
    report = dist.check_invariants()
    assert report.is_valid, report.errors


def test_low_snr_sum_refines_link_grid():
    total = cdf_tl_csir_sum(1.0, 1.0, 'physical', QuadratureSpec(grid_points=2048))
    assert total.metadata['per_link_points'] > 2048
    assert total.upper_rate == pytest.approx(2.0 * cdf_tl_csir_link(1.0, 1.0, 'physical').upper_rate)


def test_higher_snr_dominates_stochastically():
    low, high = cdf_sl_csit(10.0), cdf_sl_csit(100.0)
    rates = np.linspace(0.0, high.upper_rate, 1001)
    assert np.all(high.cdf_at(rates) <= low.cdf_at(rates) + 1e-9)


@pytest.mark.parametrize("name", ['exponential', 'sl-csit'])
def test_truncated_mean_is_nonincreasing(name, exponential_dist):
    dist = exponential_dist if name == 'exponential' else cdf_sl_csit(10.0)
    xs = np.linspace(0.0, dist.upper_rate, 257)
    means = np.array([dist.truncated_mean(x) for x in xs])
    assert np.all(np.diff(means) <= 1e-12)
    assert means[0] == pytest.approx(dist.mean(), abs=1e-9)
