"""
Tests for analytic_rates
"""

import math

import numpy as np
import pytest

from erasure_rate_kit.analytic_rates import (
    erasure_free_upper_bound,
    finite_rate_bounds,
    high_snr_rate,
    high_snr_two_tap,
    log_block_det,
    log_block_dets,
    markov_two_tap_rate,
    mean_run_length,
    one_tap_rate,
    run_length_pmf,
    steady_state_erasure_rate,
    two_tap_rate_iid,
)
from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import DegenerateChainError, ParameterError
from erasure_rate_kit.models import (
    ChannelParams,
    ErasurePattern,
    IidErasures,
    MarkovErasures,
    RateKind,
    SeriesConfig,
)
from erasure_rate_kit.simulation import sample_erasure_pattern

# ============================================================================
# Block determinants
# ============================================================================


def test_log_block_det_small_blocks(fig2_channel):
    """D_1 = a, det D_2 = a^2 - b^2, det D_3 = a^3 - 2ab^2."""
    dq = derive(fig2_channel)

    assert log_block_det(1, dq) == pytest.approx(math.log(11.0), rel=1e-13)
    assert log_block_det(2, dq) == pytest.approx(math.log(105.0), rel=1e-13)
    assert log_block_det(3, dq) == pytest.approx(math.log(979.0), rel=1e-13)


def test_log_block_det_matches_root_form(fig2_channel):
    """log((r^11 - s^11) / (r - s)) at n = 10."""
    dq = derive(fig2_channel)
    expected = math.log((dq.r**11 - dq.s**11) / (dq.r - dq.s))

    assert log_block_det(10, dq) == pytest.approx(expected, rel=1e-13)


def test_log_block_det_huge_block_is_finite(fig2_channel):
    """No overflow for very long blocks."""
    dq = derive(fig2_channel)
    value = log_block_det(100_000, dq)

    assert math.isfinite(value)
    assert value == pytest.approx(100_000 * math.log(dq.r), rel=1e-5)


def test_log_block_det_rejects_empty_block(fig2_channel):
    with pytest.raises(ParameterError, match="block length"):
        log_block_det(0, derive(fig2_channel))


def test_log_block_dets_vectorized(fig2_channel):
    """Array form agrees with the scalar form."""
    dq = derive(fig2_channel)
    ns = np.arange(1, 50)

    np.testing.assert_allclose(
        log_block_dets(ns, dq), [log_block_det(int(n), dq) for n in ns], rtol=1e-14
    )


# ============================================================================
# i.i.d. rates
# ============================================================================


def test_two_tap_rate_fig2_point(fig2_channel):
    """Converged series at q = 0.2 sits strictly between the limits."""
    result = two_tap_rate_iid(fig2_channel, 0.2)

    assert result.kind == RateKind.TRUNCATED_SERIES
    assert result.error_bound < 1e-12
    assert 0.0 < result.rate < erasure_free_upper_bound(fig2_channel)
    assert result.meta["terms"] <= 200


def test_two_tap_rate_endpoints(fig2_channel):
    """q = 0 gives log r and q = 1 gives 0."""
    dq = derive(fig2_channel)

    assert two_tap_rate_iid(fig2_channel, 0.0).rate == pytest.approx(math.log(dq.r))
    assert two_tap_rate_iid(fig2_channel, 1.0).rate == 0.0


def test_two_tap_rate_memoryless_reduction():
    """g1 = 0 reduces to the one-tap rate (1 - q) log(1 + P g0)."""
    params = ChannelParams(g0=0.7, g1=0.0, snr=4.0)

    for q in (0.1, 0.5, 0.9):
        assert two_tap_rate_iid(params, q).rate == pytest.approx(
            one_tap_rate(0.7, 4.0, q), rel=1e-14
        )


def test_two_tap_rate_below_memoryless_bound(fig2_channel):
    """Filter memory never helps: R <= (1 - q) log(1 + P (g0 + g1))."""
    for q in np.linspace(0.05, 0.95, 19):
        rate = two_tap_rate_iid(fig2_channel, float(q)).rate
        assert rate <= one_tap_rate(1.0, 10.0, float(q)) + 1e-12


def test_two_tap_rate_above_memory_floor(fig2_channel):
    """det D_n >= r^n gives R >= (1 - q) log r."""
    log_r = math.log(derive(fig2_channel).r)
    for q in np.linspace(0.05, 0.95, 19):
        assert two_tap_rate_iid(fig2_channel, float(q)).rate >= (1.0 - q) * log_r - 1e-12


def test_two_tap_rate_decreasing_in_q(fig2_channel):
    rates = [two_tap_rate_iid(fig2_channel, float(q)).rate for q in np.linspace(0, 1, 21)]

    assert all(b <= a + 1e-12 for a, b in zip(rates, rates[1:], strict=False))


def test_two_tap_rate_nondecreasing_in_snr():
    for q in (0.1, 0.3, 0.6):
        rates = [
            two_tap_rate_iid(ChannelParams(g0=0.8, g1=0.2, snr=10.0 ** (db / 10.0)), q).rate
            for db in np.arange(-10.0, 41.0, 2.5)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(rates, rates[1:], strict=False))


def test_two_tap_rate_small_q_uses_max_terms(fig2_channel):
    """Slow decay stops at max_terms and reports a larger tail bound."""
    cfg = SeriesConfig(max_terms=50)
    result = two_tap_rate_iid(fig2_channel, 0.01, cfg)

    assert result.meta["terms"] == 50
    assert result.error_bound > 1e-12
    converged = two_tap_rate_iid(fig2_channel, 0.01, SeriesConfig(max_terms=20_000))
    assert result.rate <= converged.rate <= result.rate + result.error_bound


def test_two_tap_rate_rejects_bad_q(fig2_channel):
    with pytest.raises(ParameterError, match="q must lie in"):
        two_tap_rate_iid(fig2_channel, 1.5)


def test_one_tap_rate():
    assert one_tap_rate(1.0, math.e - 1.0, 0.0) == pytest.approx(1.0)
    assert one_tap_rate(1.0, 3.0, 1.0) == 0.0


# ============================================================================
# Markov rates
# ============================================================================


def test_markov_equal_probabilities_is_iid(fig2_channel):
    """Markov(q, q) is the i.i.d. source."""
    for q in (0.05, 0.3, 0.8):
        markov = markov_two_tap_rate(fig2_channel, q, q)
        iid = two_tap_rate_iid(fig2_channel, q)
        assert abs(markov.rate - iid.rate) <= 1e-12


def test_markov_memoryless_reduction():
    """g1 = 0: (1 - qbar) log(1 + P g0), qbar = q1 / (1 - q0 + q1)."""
    params = ChannelParams(g0=0.9, g1=0.0, snr=7.0)
    q0, q1 = 0.1, 0.3
    q_bar = q1 / (1.0 - q0 + q1)

    result = markov_two_tap_rate(params, q0, q1)

    assert abs(result.rate - (1.0 - q_bar) * math.log1p(7.0 * 0.9)) <= 1e-12


def test_markov_never_erased(fig2_channel):
    """q1 = 0 keeps the chain received forever: log r."""
    result = markov_two_tap_rate(fig2_channel, 0.4, 0.0)

    assert result.rate == pytest.approx(math.log(derive(fig2_channel).r))


def test_markov_alternating_chain(fig2_channel):
    """q0 = 0, q1 = 1 alternates received and erased: half of log a."""
    result = markov_two_tap_rate(fig2_channel, 0.0, 1.0)

    assert result.rate == pytest.approx(0.5 * math.log(11.0), rel=1e-14)


def test_markov_degenerate_chain(fig2_channel):
    with pytest.raises(DegenerateChainError, match="absorbed"):
        markov_two_tap_rate(fig2_channel, 1.0, 0.0)


def test_markov_bursty_erasures_cost_rate(fig2_channel):
    """At equal erasure rate, fewer run boundaries mean fewer interference-free edges."""
    q0, q1 = 0.8, 0.05
    q_bar = q1 / (1.0 - q0 + q1)

    bursty = markov_two_tap_rate(fig2_channel, q0, q1, SeriesConfig(max_terms=2000))
    iid = two_tap_rate_iid(fig2_channel, q_bar)

    assert bursty.rate < iid.rate
    assert bursty.rate > (1.0 - q_bar) * math.log(derive(fig2_channel).r)


# ============================================================================
# Run statistics
# ============================================================================


def test_run_length_pmf_iid():
    assert run_length_pmf(IidErasures(q=0.5), 2) == pytest.approx(0.25 * 0.25)


def test_run_length_pmf_markov_equal_is_iid():
    markov = run_length_pmf(MarkovErasures(q0=0.3, q1=0.3), 4)

    assert markov == pytest.approx(run_length_pmf(IidErasures(q=0.3), 4))


@pytest.mark.parametrize(
    "process",
    [
        IidErasures(q=0.05),
        IidErasures(q=0.5),
        MarkovErasures(q0=0.1, q1=0.3),
        MarkovErasures(q0=0.8, q1=0.05),
        MarkovErasures(q0=0.0, q1=1.0),
    ],
)
def test_run_start_density_at_most_one(process):
    """Runs of n received symbols plus their closing erasure never overlap."""
    density = math.fsum(run_length_pmf(process, n) * (n + 1) for n in range(1, 5001))

    assert density <= 1.0 + 1e-12


def test_run_length_pmf_matches_simulated_pattern():
    """Run-start frequencies in 10^6 i.i.d. symbols lie within 3 sigma of q^2 (1-q)^n."""
    q, size = 0.3, 1_000_000
    bits = sample_erasure_pattern(IidErasures(q=q), size, np.random.default_rng(17))
    # drop the edge runs
    first_erased = int(np.argmin(bits))
    last_erased = size - 1 - int(np.argmin(bits[::-1]))
    counts = np.bincount(
        ErasurePattern.run_lengths_of(bits[first_erased : last_erased + 1]), minlength=6
    )

    for n in range(1, 5):
        p = run_length_pmf(IidErasures(q=q), n)
        positions = size - n - 1
        sigma = math.sqrt(positions * p * (1.0 - p))
        assert abs(counts[n] - positions * p) <= 3.0 * sigma


def test_steady_state_and_mean_run_length():
    chain = MarkovErasures(q0=0.1, q1=0.3)

    assert steady_state_erasure_rate(chain) == pytest.approx(0.25)
    assert mean_run_length(chain) == pytest.approx(1.0 / 0.3)
    assert mean_run_length(IidErasures(q=0.0)) == math.inf
    assert steady_state_erasure_rate(MarkovErasures(q0=1.0, q1=0.0)) == 1.0


# ============================================================================
# High-SNR
# ============================================================================


def test_high_snr_q_zero():
    """q = 0: slope 1 and offset -log max(g0, g1)."""
    hs = high_snr_two_tap(0.8, 0.2, 0.0)

    assert hs.s_inf == 1.0
    assert hs.l_inf == pytest.approx(-math.log(0.8))


def test_high_snr_memoryless_offset():
    """g0 = 1, g1 = 0 gives L = 0 exactly."""
    hs = high_snr_two_tap(1.0, 0.0, 0.4)

    assert hs.s_inf == pytest.approx(0.6)
    assert hs.l_inf == 0.0


def test_high_snr_all_erased():
    hs = high_snr_two_tap(0.8, 0.2, 1.0)

    assert hs.s_inf == 0.0
    assert hs.l_inf == pytest.approx(-math.log(1.0))


def test_high_snr_equal_taps_limit():
    """g0 = g1 uses the log((n+1) g^n) limit terms and stays finite."""
    hs = high_snr_two_tap(0.5, 0.5, 0.3)
    nearly = high_snr_two_tap(0.5, 0.5 - 1e-9, 0.3)

    assert math.isfinite(hs.l_inf)
    assert hs.l_inf == pytest.approx(nearly.l_inf, abs=1e-6)


@pytest.mark.parametrize("q", [0.1, 0.3, 0.6])
def test_high_snr_slope_matches_series(q):
    """d rate / d ln P at P = 1e6 equals 1 - q within 1%."""
    delta = 0.01
    lo = two_tap_rate_iid(ChannelParams(g0=0.8, g1=0.2, snr=1e6 * math.exp(-delta)), q)
    hi = two_tap_rate_iid(ChannelParams(g0=0.8, g1=0.2, snr=1e6 * math.exp(delta)), q)
    slope = (hi.rate - lo.rate) / (2.0 * delta)

    assert slope == pytest.approx(1.0 - q, rel=0.01)


def test_high_snr_rate_tracks_series():
    """Affine approximation is close to the exact rate at P = 1e6."""
    params = ChannelParams(g0=0.8, g1=0.2, snr=1e6)

    approx = high_snr_rate(params, 0.3)

    assert approx == pytest.approx(two_tap_rate_iid(params, 0.3).rate, abs=1e-3)


def test_high_snr_rate_rejects_zero_power():
    with pytest.raises(ParameterError, match="snr > 0"):
        high_snr_rate(ChannelParams(g0=0.8, g1=0.2, snr=0.0), 0.3)


# ============================================================================
# Finite-block bounds
# ============================================================================


def test_finite_rate_bounds_bracket_rate(fig2_channel):
    lower, upper = finite_rate_bounds(fig2_channel, 0.3, 50)
    rate = two_tap_rate_iid(fig2_channel, 0.3).rate

    assert lower < rate < upper


def test_finite_rate_bounds_q_zero(fig2_channel):
    """q = 0: (log r, (1/N) log det D_N)."""
    dq = derive(fig2_channel)
    lower, upper = finite_rate_bounds(fig2_channel, 0.0, 10)

    assert lower == pytest.approx(math.log(dq.r))
    assert upper == pytest.approx(log_block_det(10, dq) / 10)
