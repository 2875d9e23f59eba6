"""
Tests for matrix_oracle
"""

import math

import numpy as np
import pytest

from erasure_rate_kit.analytic_rates import (
    finite_rate_bounds,
    log_block_det,
    log_block_dets,
)
from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import (
    DegenerateChainError,
    DenseCapError,
    EnumerationLimitError,
    ParameterError,
)
from erasure_rate_kit.matrix_oracle import (
    block_split_logdet,
    build_channel_matrix,
    exact_finite_rate,
    logdet_input_erasure,
    logdet_output_erasure,
    run_lengths,
    tridiag_logdet_prefixes,
    tridiag_logdet_recursive,
)
from erasure_rate_kit.models import (
    ChannelParams,
    ErasurePattern,
    FirFilter,
    IidErasures,
    MarkovErasures,
    RateKind,
)


def _pattern(*bits: int) -> ErasurePattern:
    return ErasurePattern(bits=bits)


# ============================================================================
# Channel matrix
# ============================================================================


def test_build_channel_matrix_identity():
    """taps = [1] gives the identity."""
    np.testing.assert_array_equal(
        build_channel_matrix(FirFilter(taps=(1,)), 3), np.eye(3)
    )


def test_build_channel_matrix_bidiagonal():
    """(n + L) x n with h0 on the diagonal and h1 below it."""
    h = build_channel_matrix(FirFilter(taps=(2.0, 3.0j)), 2)

    np.testing.assert_array_equal(h, [[2.0, 0.0], [3.0j, 2.0], [0.0, 3.0j]])


def test_build_channel_matrix_dense_cap(monkeypatch):
    """ERK_DENSE_CAP bounds the number of rows."""
    monkeypatch.setenv("ERK_DENSE_CAP", "10")

    with pytest.raises(DenseCapError, match="exceeds the cap of 10"):
        build_channel_matrix(FirFilter(taps=(1.0, 0.5)), 10)

    assert build_channel_matrix(FirFilter(taps=(1.0, 0.5)), 9).shape == (10, 9)


def test_filter_rejects_all_zero_taps():
    with pytest.raises(ValueError, match="nonzero tap"):
        FirFilter(taps=(0.0, 0.0))


# ============================================================================
# Log-determinants
# ============================================================================


def test_logdet_all_erased_is_zero(fig2_filter):
    pattern = _pattern(0, 0, 0, 0)

    assert logdet_input_erasure(fig2_filter, pattern, 10.0) == pytest.approx(0.0, abs=1e-12)
    assert logdet_output_erasure(fig2_filter, pattern, 10.0) == pytest.approx(0.0, abs=1e-12)


def test_logdet_single_symbol(fig2_filter):
    """N = 1, e = (1): log(1 + P (g0 + g1)) = log a."""
    value = logdet_input_erasure(fig2_filter, _pattern(1), 10.0)

    assert value == pytest.approx(math.log(11.0), rel=1e-12)


def test_logdet_memoryless_all_received():
    """taps = [1], all ones: N log(1 + P)."""
    value = logdet_output_erasure(FirFilter(taps=(1.0,)), _pattern(1, 1, 1, 1, 1), 3.0)

    assert value == pytest.approx(5.0 * math.log(4.0), rel=1e-12)


def test_input_output_forms_agree():
    """Input- and output-erasure log-determinants agree for random complex filters."""
    rng = np.random.default_rng(11)
    for _ in range(100):
        order = int(rng.integers(1, 5))
        taps = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
        filt = FirFilter(taps=tuple(taps))
        n = int(rng.integers(1, 33))
        pattern = ErasurePattern.from_array(rng.integers(0, 2, size=n))
        snr = float(rng.uniform(0.0, 100.0))

        gap = logdet_input_erasure(filt, pattern, snr) - logdet_output_erasure(
            filt, pattern, snr
        )
        assert abs(gap) <= 1e-9 * n


def test_two_tap_phase_invariance():
    """Independent phases on h0 and h1 leave the log-determinant unchanged."""
    rng = np.random.default_rng(5)
    pattern = ErasurePattern.from_array(rng.integers(0, 2, size=24))
    base = FirFilter.two_tap(0.8, 0.2)
    rotated = FirFilter.two_tap(0.8, 0.2, 0.3, 2.0)

    assert logdet_output_erasure(rotated, pattern, 20.0) == pytest.approx(
        logdet_output_erasure(base, pattern, 20.0), rel=1e-10
    )


def test_linear_phase_invariance():
    """A linear phase ramp across the taps leaves the log-determinant unchanged."""
    rng = np.random.default_rng(5)
    pattern = ErasurePattern.from_array(rng.integers(0, 2, size=24))
    base = FirFilter(taps=(0.9, 0.4 - 0.2j, 0.1j))
    rotated = FirFilter(
        taps=tuple(t * np.exp(1j * (0.3 + 1.7 * k)) for k, t in enumerate(base.taps))
    )

    assert logdet_output_erasure(rotated, pattern, 20.0) == pytest.approx(
        logdet_output_erasure(base, pattern, 20.0), rel=1e-10
    )


def test_independent_phases_matter_beyond_two_taps():
    """Rotating only the middle tap of a three-tap filter changes the log-determinant."""
    pattern = _pattern(*([1] * 24))
    base = FirFilter(taps=(0.9, 0.4 - 0.2j, 0.1j))
    rotated = FirFilter(taps=(base.taps[0], base.taps[1] * np.exp(2.0j), base.taps[2]))

    gap = logdet_output_erasure(rotated, pattern, 20.0) - logdet_output_erasure(
        base, pattern, 20.0
    )
    assert abs(gap) > 1e-3


def test_memory_reduces_erasure_free_logdet():
    """Splitting a fixed gain across two taps never raises the full-block logdet."""
    pattern = _pattern(*([1] * 16))
    memoryless = logdet_output_erasure(FirFilter(taps=(1.0,)), pattern, 10.0)

    for split in (0.9, 0.7, 0.5):
        two_tap = FirFilter.two_tap(split, 1.0 - split)
        assert logdet_output_erasure(two_tap, pattern, 10.0) <= memoryless + 1e-9


# ============================================================================
# Tridiagonal recursion
# ============================================================================


def test_tridiag_initial_conditions(fig2_channel):
    """n = 1, 2, 3 give log a, log(a^2 - b^2), log(a^3 - 2ab^2)."""
    dq = derive(fig2_channel)

    assert tridiag_logdet_recursive(1, dq) == pytest.approx(math.log(11.0))
    assert tridiag_logdet_recursive(2, dq) == pytest.approx(math.log(105.0))
    assert tridiag_logdet_recursive(3, dq) == pytest.approx(math.log(979.0))


def test_tridiag_matches_closed_form_long_blocks():
    """Recursion and closed form agree to 1e-10 relative up to n = 10^4."""
    rng = np.random.default_rng(3)
    ns = np.arange(1, 10_001)
    for _ in range(20):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        dq = derive(ChannelParams(g0=float(g0), g1=float(g1), snr=float(10 ** rng.uniform(-2, 3))))
        recursive = tridiag_logdet_prefixes(10_000, dq)
        closed = log_block_dets(ns, dq)
        assert np.all(np.abs(recursive - closed) <= 1e-10 * np.maximum(np.abs(closed), 1.0))


# ============================================================================
# Block splitting
# ============================================================================


def test_run_lengths_worked_example():
    """(1,1,0,0,1,1,1,0,1,1) splits into runs 2, 3, 2."""
    pattern = _pattern(1, 1, 0, 0, 1, 1, 1, 0, 1, 1)

    assert run_lengths(pattern) == [2, 3, 2]
    assert sum(run_lengths(pattern)) + pattern.bits.count(0) == pattern.n


def test_block_split_worked_example(fig2_filter, fig2_channel):
    """2 log det D_2 + log det D_3, equal to the dense value."""
    pattern = _pattern(1, 1, 0, 0, 1, 1, 1, 0, 1, 1)
    dq = derive(fig2_channel)
    expected = 2.0 * log_block_det(2, dq) + log_block_det(3, dq)

    assert block_split_logdet(fig2_filter, pattern, 10.0) == pytest.approx(expected, rel=1e-14)
    assert logdet_output_erasure(fig2_filter, pattern, 10.0) == pytest.approx(expected, rel=1e-10)


def test_block_split_all_erased(fig2_filter):
    assert block_split_logdet(fig2_filter, _pattern(0, 0, 0), 10.0) == 0.0


def test_block_split_matches_dense():
    """200 random N = 64 patterns agree with the dense Cholesky value."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        phases = rng.uniform(0.0, 2 * np.pi, size=2)
        filt = FirFilter.two_tap(float(g0), float(g1), float(phases[0]), float(phases[1]))
        pattern = ErasurePattern.from_array(rng.integers(0, 2, size=64))
        snr = float(rng.uniform(0.0, 100.0))

        gap = block_split_logdet(filt, pattern, snr) - logdet_output_erasure(filt, pattern, snr)
        assert abs(gap) <= 1e-9 * 64


def test_block_split_rejects_longer_filters():
    with pytest.raises(ParameterError, match="two-tap"):
        block_split_logdet(FirFilter(taps=(1.0, 0.5, 0.2)), _pattern(1, 1), 1.0)


# ============================================================================
# Exhaustive enumeration
# ============================================================================


def test_exact_rate_single_symbol(fig2_filter):
    """N = 1: (1 - q) log a."""
    result = exact_finite_rate(fig2_filter, 10.0, IidErasures(q=0.3), 1)

    assert result.kind == RateKind.EXACT_ENUMERATION
    assert result.error_bound == 0.0
    assert result.rate == pytest.approx(0.7 * math.log(11.0), rel=1e-13)


def test_exact_rate_two_symbols(fig2_filter):
    """N = 2: [(1-q)^2 log(a^2 - b^2) + 2q(1-q) log a] / 2."""
    q = 0.4
    expected = 0.5 * ((1 - q) ** 2 * math.log(105.0) + 2 * q * (1 - q) * math.log(11.0))

    result = exact_finite_rate(fig2_filter, 10.0, IidErasures(q=q), 2)

    assert result.rate == pytest.approx(expected, rel=1e-13)


def test_exact_rate_no_erasures(fig2_filter, fig2_channel):
    """q = 0 leaves a single pattern: (1/N) log det D_N."""
    dq = derive(fig2_channel)

    result = exact_finite_rate(fig2_filter, 10.0, IidErasures(q=0.0), 12)

    assert result.rate == pytest.approx(log_block_det(12, dq) / 12, rel=1e-12)


def test_exact_rate_markov_single_symbol(fig2_filter):
    """N = 1 under Markov erasures: stationary Pr(received) times log a."""
    chain = MarkovErasures(q0=0.1, q1=0.3)

    result = exact_finite_rate(fig2_filter, 10.0, chain, 1)

    assert result.rate == pytest.approx(0.75 * math.log(11.0), rel=1e-13)


def test_exact_rate_markov_equal_is_iid(fig2_filter):
    markov = exact_finite_rate(fig2_filter, 10.0, MarkovErasures(q0=0.35, q1=0.35), 10)
    iid = exact_finite_rate(fig2_filter, 10.0, IidErasures(q=0.35), 10)

    assert markov.rate == iid.rate


def test_exact_rate_limits(fig2_filter):
    with pytest.raises(EnumerationLimitError, match="N <= 22"):
        exact_finite_rate(fig2_filter, 10.0, IidErasures(q=0.2), 23)
    with pytest.raises(DegenerateChainError):
        exact_finite_rate(fig2_filter, 10.0, MarkovErasures(q0=1.0, q1=0.0), 4)


@pytest.mark.slow
def test_exact_rate_inside_finite_block_bounds():
    """N = 18 enumeration lies inside the finite-block bracket on a 3x3x3 grid."""
    n = 18
    for g0, g1 in ((0.8, 0.2), (0.5, 0.5), (1.0, 0.3)):
        for snr in (1.0, 10.0, 100.0):
            params = ChannelParams(g0=g0, g1=g1, snr=snr)
            filt = FirFilter.two_tap(g0, g1)
            for q in (0.1, 0.4, 0.8):
                exact = exact_finite_rate(filt, snr, IidErasures(q=q), n).rate
                lower, upper = finite_rate_bounds(params, q, n)
                assert lower - 1e-12 <= exact <= upper + 1e-12
