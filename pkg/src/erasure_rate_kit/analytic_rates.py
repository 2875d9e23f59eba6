"""
Analytic rates - closed forms and series for the two-tap input-erasure channel

All rates are in nats per channel use. Series are summed with math.fsum and
truncated once a closed-form tail bound drops below the configured target.
"""

import logging
import math
from collections.abc import Callable

import numpy as np

from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import DegenerateChainError, ParameterError
from erasure_rate_kit.models import (
    ChannelParams,
    DerivedQuantities,
    HighSnrCharacterization,
    IidErasures,
    MarkovErasures,
    RateKind,
    RateResult,
    SeriesConfig,
    normalize_process,
)

logger = logging.getLogger(__name__)

DEFAULT_SERIES = SeriesConfig()


def _check_probability(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def _terms_needed(tails: Callable[[np.ndarray], np.ndarray], cfg: SeriesConfig) -> int:
    """Smallest N <= max_terms whose tail bound is below the target."""
    ns = np.arange(1, cfg.max_terms + 1)
    hits = np.flatnonzero(tails(ns) <= cfg.target_tail_bound)
    return int(ns[hits[0]]) if hits.size else cfg.max_terms


# ============================================================================
# Block determinants
# ============================================================================


def log_block_dets(ns: np.ndarray, dq: DerivedQuantities) -> np.ndarray:
    """Vectorized log det(D_n) for an array of block lengths n >= 1."""
    ns = np.asarray(ns, dtype=np.float64)
    log_r = math.log(dq.r)
    if dq.s == 0.0:
        return ns * log_r
    t = dq.s / dq.r
    return ns * log_r + np.log1p(-np.power(t, ns + 1.0)) - math.log1p(-t)


def log_block_det(n: int, dq: DerivedQuantities) -> float:
    """
    log det(D_n), D_n = I_n + P * Gbar_n, in closed form.

    Evaluates log((r^(n+1) - s^(n+1)) / (r - s)) as
    n*log(r) + log(1 - (s/r)^(n+1)) - log(1 - s/r), which stays finite for
    any block length.

    Args:
        n: Block length (>= 1)
        dq: Derived quantities of the channel

    Returns:
        The log-determinant in nats

    Raises:
        ParameterError: If n < 1
    """
    if n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    log_r = math.log(dq.r)
    if dq.s == 0.0:
        return n * log_r
    t = dq.s / dq.r
    return n * log_r + math.log1p(-(t ** (n + 1))) - math.log1p(-t)


# ============================================================================
# Rates
# ============================================================================


def one_tap_rate(g0: float, snr: float, q: float) -> float:
    """Memoryless channel with erasures: (1 - q) log(1 + P g0)."""
    if g0 < 0.0 or snr < 0.0 or not (math.isfinite(g0) and math.isfinite(snr)):
        raise ParameterError("g0 and snr must be finite and nonnegative")
    _check_probability("q", q)
    return (1.0 - q) * math.log1p(snr * g0)


def erasure_free_upper_bound(params: ChannelParams) -> float:
    """log r: the q = 0 rate, which upper-bounds the rate for every q."""
    return math.log(derive(params).r)


def _iid_tail(x: float, log_r: float) -> Callable[[np.ndarray], np.ndarray]:
    # q^2 * sum_{n>N} x^n (n+1) log r, using log det(D_n) <= (n+1) log r
    def tail(ns: np.ndarray) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.float64)
        return np.power(x, ns + 1.0) * ((ns + 2.0) - (ns + 1.0) * x) * log_r

    return tail


def two_tap_rate_iid(
    params: ChannelParams, q: float, cfg: SeriesConfig | None = None
) -> RateResult:
    """
    Achievable rate with i.i.d. Gaussian inputs and Bernoulli(q) erasures.

    R = q^2 * sum_{n>=1} (1-q)^n log det(D_n). The truncated sum is a lower
    bound and the true value lies in [rate, rate + error_bound].

    Args:
        params: Channel parameters
        q: Erasure probability
        cfg: Truncation policy (default 200 terms, 1e-12 target)

    Returns:
        RateResult in nats per channel use

    Raises:
        ParameterError: If q is outside [0, 1]
    """
    cfg = cfg or DEFAULT_SERIES
    _check_probability("q", q)
    dq = derive(params)

    if q == 1.0:
        return RateResult(rate=0.0, kind=RateKind.CLOSED_FORM, meta={"terms": 0})
    if q == 0.0:
        return RateResult(
            rate=math.log(dq.r),
            kind=RateKind.CLOSED_FORM,
            meta={"terms": 0, "note": "erasure-free capacity log r"},
        )
    if dq.b == 0.0:
        # s = 0: every block is a product of independent one-tap terms
        return RateResult(
            rate=(1.0 - q) * math.log(dq.a),
            kind=RateKind.CLOSED_FORM,
            meta={"terms": 0, "note": "memoryless reduction"},
        )

    x = 1.0 - q
    log_r = math.log(dq.r)
    tail = _iid_tail(x, log_r)
    n_terms = _terms_needed(tail, cfg)
    ns = np.arange(1, n_terms + 1)
    terms = q * q * np.power(x, ns) * log_block_dets(ns, dq)
    error_bound = float(tail(np.array([n_terms]))[0])
    logger.debug("two-tap series q=%g: %d terms, tail %.3e", q, n_terms, error_bound)

    return RateResult(
        rate=max(math.fsum(terms), 0.0),
        error_bound=error_bound,
        kind=RateKind.TRUNCATED_SERIES,
        meta={"terms": n_terms},
    )


def markov_two_tap_rate(
    params: ChannelParams, q0: float, q1: float, cfg: SeriesConfig | None = None
) -> RateResult:
    """
    Rate with first-order Markov erasures, Pr(0->1) = 1-q0, Pr(1->0) = q1.

    R = q1^2 (1-q0) / (1-q0+q1) * sum_{n>=1} (1-q1)^(n-1) log det(D_n).
    Markov(q, q) is the i.i.d. source and returns two_tap_rate_iid exactly.

    Raises:
        ParameterError: If a probability is outside [0, 1]
        DegenerateChainError: If 1 - q0 + q1 == 0
    """
    cfg = cfg or DEFAULT_SERIES
    _check_probability("q0", q0)
    _check_probability("q1", q1)
    process = MarkovErasures(q0=q0, q1=q1)
    if process.is_degenerate:
        raise DegenerateChainError(
            "Markov chain with q0=1, q1=0 is absorbed in the erased state"
        )
    if q0 == q1:
        return two_tap_rate_iid(params, q0, cfg)

    dq = derive(params)
    q_bar = process.erasure_rate
    if q1 == 0.0:
        return RateResult(
            rate=math.log(dq.r),
            kind=RateKind.CLOSED_FORM,
            meta={"terms": 0, "steady_state_erasure_rate": q_bar},
        )
    if dq.b == 0.0:
        return RateResult(
            rate=(1.0 - q_bar) * math.log(dq.a),
            kind=RateKind.CLOSED_FORM,
            meta={"terms": 0, "steady_state_erasure_rate": q_bar},
        )

    prefactor = q1 * q1 * (1.0 - q0) / (1.0 - q0 + q1)
    y = 1.0 - q1
    log_r = math.log(dq.r)

    def tail(ns: np.ndarray) -> np.ndarray:
        # prefactor * sum_{n>N} (n+1) y^(n-1) log r
        ns = np.asarray(ns, dtype=np.float64)
        y_n = np.power(y, ns)
        return prefactor * log_r * (y_n * ((ns + 1.0) - ns * y) / q1**2 + y_n / q1)

    n_terms = _terms_needed(tail, cfg)
    ns = np.arange(1, n_terms + 1)
    terms = prefactor * np.power(y, ns - 1.0) * log_block_dets(ns, dq)
    error_bound = float(tail(np.array([n_terms]))[0])

    return RateResult(
        rate=max(math.fsum(terms), 0.0),
        error_bound=error_bound,
        kind=RateKind.TRUNCATED_SERIES,
        meta={"terms": n_terms, "steady_state_erasure_rate": q_bar},
    )


# ============================================================================
# Run statistics
# ============================================================================


def run_length_pmf(process: IidErasures | MarkovErasures, n: int) -> float:
    """
    Probability that an isolated run of exactly n received symbols starts at
    a given interior position.

    i.i.d.: q^2 (1-q)^n. Markov: q1^2 (1-q0)/(1-q0+q1) (1-q1)^(n-1).
    Edge runs (which start at the first symbol) are not modeled.
    """
    if n < 1:
        raise ParameterError(f"run length must be >= 1, got {n}")
    process = normalize_process(process)
    if isinstance(process, IidErasures):
        return process.q**2 * (1.0 - process.q) ** n
    if process.is_degenerate:
        raise DegenerateChainError("degenerate Markov chain has no runs")
    q0, q1 = process.q0, process.q1
    return q1 * q1 * (1.0 - q0) / (1.0 - q0 + q1) * (1.0 - q1) ** (n - 1)


def steady_state_erasure_rate(process: IidErasures | MarkovErasures) -> float:
    process = normalize_process(process)
    if isinstance(process, MarkovErasures) and process.is_degenerate:
        return 1.0
    return process.erasure_rate


def mean_run_length(process: IidErasures | MarkovErasures) -> float:
    """Mean length of a run of received symbols (inf if runs never end)."""
    process = normalize_process(process)
    leave = process.q if isinstance(process, IidErasures) else process.q1
    return math.inf if leave == 0.0 else 1.0 / leave


# ============================================================================
# High-SNR
# ============================================================================


def _log_gain_polynomials(ns: np.ndarray, g0: float, g1: float) -> np.ndarray:
    # log((g0^(n+1) - g1^(n+1)) / (g0 - g1)) = log(sum_m g0^(n-m) g1^m)
    big, small = max(g0, g1), min(g0, g1)
    ns = np.asarray(ns, dtype=np.float64)
    t = small / big
    if t == 1.0:
        return ns * math.log(big) + np.log(ns + 1.0)
    if t == 0.0:
        return ns * math.log(big)
    return ns * math.log(big) + np.log1p(-np.power(t, ns + 1.0)) - math.log1p(-t)


def high_snr_two_tap(
    g0: float, g1: float, q: float, cfg: SeriesConfig | None = None
) -> HighSnrCharacterization:
    """
    High-SNR slope and power offset of the two-tap rate.

    S_inf = 1 - q and
    L_inf = -q^2 sum_{n>=1} (1-q)^(n-1) log((g0^(n+1) - g1^(n+1)) / (g0 - g1)),
    with the g0 == g1 terms replaced by their limit log((n+1) g0^n).
    At q = 0 the offset is the limit -log max(g0, g1).

    Raises:
        ParameterError: On invalid gains or q
    """
    cfg = cfg or DEFAULT_SERIES
    _check_probability("q", q)
    if g0 < 0.0 or g1 < 0.0 or g0 + g1 <= 0.0:
        raise ParameterError("gains must be nonnegative with g0 + g1 > 0")

    big = max(g0, g1)
    if q == 0.0:
        return HighSnrCharacterization(s_inf=1.0, l_inf=-math.log(big))

    x = 1.0 - q
    slope = abs(math.log(big)) + 1.0

    def tail(ns: np.ndarray) -> np.ndarray:
        # |log c_n| <= n (|log big| + 1); sum_{n>N} n x^(n-1) in closed form
        ns = np.asarray(ns, dtype=np.float64)
        return slope * np.power(x, ns) * ((ns + 1.0) - ns * x)

    n_terms = _terms_needed(tail, cfg)
    ns = np.arange(1, n_terms + 1)
    terms = q * q * np.power(x, ns - 1.0) * _log_gain_polynomials(ns, g0, g1)
    total = math.fsum(terms)
    return HighSnrCharacterization(
        s_inf=1.0 - q,
        l_inf=-total if total else 0.0,
        error_bound=float(tail(np.array([n_terms]))[0]),
        terms=n_terms,
    )


def high_snr_rate(
    params: ChannelParams, q: float, cfg: SeriesConfig | None = None
) -> float:
    """Affine high-SNR approximation S_inf (log P - L_inf)."""
    if params.snr <= 0.0:
        raise ParameterError("high-SNR approximation needs snr > 0")
    hs = high_snr_two_tap(params.g0, params.g1, q, cfg)
    return hs.s_inf * (math.log(params.snr) - hs.l_inf)


# ============================================================================
# Finite-block bounds
# ============================================================================


def finite_rate_bounds(
    params: ChannelParams, q: float, n: int, cfg: SeriesConfig | None = None
) -> tuple[float, float]:
    """
    Deterministic bracket for the exact expected rate of an N-symbol block.

    Lower: R - 2*beta*(1-q)/(N q) - beta*(1-q)^N ((N+1) q + 1), beta = 2 log r.
    Upper: R + (1/N) [2 q sum_{n<N} (1-q)^n log det D_n + (1-q)^N log det D_N],
    the excess carried by runs that touch the block edges.

    Returns:
        (lower, upper) in nats per channel use
    """
    if n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    _check_probability("q", q)
    dq = derive(params)
    if q == 0.0:
        exact = log_block_det(n, dq) / n
        return math.log(dq.r), exact

    result = two_tap_rate_iid(params, q, cfg)
    x = 1.0 - q
    beta = 2.0 * math.log(dq.r)
    lower = result.rate - 2.0 * beta * x / (n * q) - beta * x**n * ((n + 1) * q + 1.0)

    ns = np.arange(1, n)
    edge = 2.0 * q * math.fsum(np.power(x, ns) * log_block_dets(ns, dq))
    edge += x**n * log_block_det(n, dq)
    upper = result.rate + result.error_bound + edge / n
    return lower, upper
