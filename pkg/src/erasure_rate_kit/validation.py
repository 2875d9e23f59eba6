"""
Validation suite - identities and oracles the analytic rates must satisfy

Each check draws its cases from a fixed seed, measures the largest
deviation from the identity it tests, and passes when that deviation is
within tolerance. Every tolerance is multiplied by ERK_VALIDATE_TOLERANCE_SCALE.
"""

import logging
import math
import time
from collections.abc import Callable
from typing import Literal

import numpy as np

from erasure_rate_kit.analytic_rates import (
    finite_rate_bounds,
    log_block_dets,
    markov_two_tap_rate,
    two_tap_rate_iid,
)
from erasure_rate_kit.cellular import scp_rate, scp_rate_expectation
from erasure_rate_kit.config import get_tolerance_scale
from erasure_rate_kit.core_model import derive
from erasure_rate_kit.matrix_oracle import (
    block_logdet,
    build_channel_matrix,
    exact_finite_rate,
    gram_logdet,
    tridiag_logdet_prefixes,
)
from erasure_rate_kit.models import (
    CellularParams,
    ChannelParams,
    CheckResult,
    FirFilter,
    IidErasures,
    McConfig,
    ValidationReport,
)
from erasure_rate_kit.simulation import make_rng, monte_carlo_rate

logger = logging.getLogger(__name__)

Level = Literal["quick", "full"]

VALIDATION_SEED = 20240601

_SANDWICH_GAINS = ((0.8, 0.2), (0.5, 0.5), (1.0, 0.3))
_SANDWICH_SNRS = (1.0, 10.0, 100.0)
_SANDWICH_QS = (0.1, 0.4, 0.8)


def _random_filter(rng: np.random.Generator, order: int) -> FirFilter:
    taps = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
    return FirFilter(taps=tuple(taps))


def _random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 2, size=n).astype(np.uint8)


# ============================================================================
# Checks
#
# Each returns (max_deviation, base_tolerance, cases).
# ============================================================================


def check_erasure_form_equivalence(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Input-erasure and output-erasure log-determinants agree (per symbol)."""
    draws, max_n = (40, 16) if level == "quick" else (500, 64)
    worst = 0.0
    for _ in range(draws):
        filt = _random_filter(rng, int(rng.integers(1, 5)))
        n = int(rng.integers(1, max_n + 1))
        snr = float(rng.uniform(0.0, 100.0))
        h = build_channel_matrix(filt, n)
        bits = _random_bits(rng, n)
        gap = abs(
            gram_logdet(h, bits, snr, form="input")
            - gram_logdet(h, bits, snr, form="output")
        )
        worst = max(worst, gap / n)
    return worst, 1e-9, draws


def check_block_split(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Run-wise block determinants reproduce the dense two-tap log-determinant."""
    draws, max_n = (40, 16) if level == "quick" else (500, 64)
    worst = 0.0
    for _ in range(draws):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        snr = float(rng.uniform(0.0, 100.0))
        n = int(rng.integers(1, max_n + 1))
        filt = FirFilter.two_tap(float(g0), float(g1), *rng.uniform(0, 2 * np.pi, size=2))
        bits = _random_bits(rng, n)
        dense = gram_logdet(build_channel_matrix(filt, n), bits, snr)
        dq = derive(ChannelParams(g0=float(g0), g1=float(g1), snr=snr))
        worst = max(worst, abs(block_logdet(bits, dq) - dense) / n)
    return worst, 1e-9, draws


def check_recursion(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Three-term determinant recursion matches the closed form (relative)."""
    pairs, max_n = (5, 1000) if level == "quick" else (20, 10_000)
    ns = np.arange(1, max_n + 1)
    worst = 0.0
    for _ in range(pairs):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        snr = float(10.0 ** rng.uniform(-2.0, 3.0))
        dq = derive(ChannelParams(g0=float(g0), g1=float(g1), snr=snr))
        recursive = tridiag_logdet_prefixes(max_n, dq)
        closed = log_block_dets(ns, dq)
        rel = np.abs(recursive - closed) / np.maximum(np.abs(closed), 1.0)
        worst = max(worst, float(rel.max()))
    return worst, 1e-10, pairs * max_n


def check_sandwich(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """
    Exact finite-block rate lies inside the deterministic finite-N bracket.

    The deviation is the largest amount by which a value leaves its bracket
    (negative when every value is inside).
    """
    n = 12 if level == "quick" else 18
    worst = -math.inf
    cases = 0
    for g0, g1 in _SANDWICH_GAINS:
        for snr in _SANDWICH_SNRS:
            params = ChannelParams(g0=g0, g1=g1, snr=snr)
            filt = FirFilter.two_tap(g0, g1)
            for q in _SANDWICH_QS:
                exact = exact_finite_rate(filt, snr, IidErasures(q=q), n).rate
                lower, upper = finite_rate_bounds(params, q, n)
                worst = max(worst, lower - exact, exact - upper)
                cases += 1
    return worst, 1e-9, cases


def check_scp_expectation(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """SCP closed form equals the four-outcome expectation."""
    draws = 50 if level == "quick" else 1000
    worst = 0.0
    for _ in range(draws):
        p = CellularParams(
            alpha_sq=float(rng.uniform()),
            snr=float(10.0 ** rng.uniform(-1.0, 3.0)),
            q=float(rng.uniform()),
        )
        closed = scp_rate(p)
        worst = max(worst, abs(closed - scp_rate_expectation(p)) / max(1.0, closed))
    return worst, 1e-12, draws


def check_markov_reduction(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Markov(q, q) equals the i.i.d. rate; g1 = 0 gives (1 - qbar) log(1 + P g0)."""
    draws = 20 if level == "quick" else 200
    worst = 0.0
    for _ in range(draws):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        snr = float(10.0 ** rng.uniform(-1.0, 2.0))
        q, q0, q1 = rng.uniform(0.0, 1.0, size=3)
        params = ChannelParams(g0=float(g0), g1=float(g1), snr=snr)
        same = markov_two_tap_rate(params, float(q), float(q))
        worst = max(worst, abs(same.rate - two_tap_rate_iid(params, float(q)).rate))

        memoryless = ChannelParams(g0=float(g0), g1=0.0, snr=snr)
        q_bar = q1 / (1.0 - q0 + q1)
        expected = (1.0 - q_bar) * math.log1p(snr * g0)
        got = markov_two_tap_rate(memoryless, float(q0), float(q1)).rate
        worst = max(worst, abs(got - expected))
    return worst, 1e-12, 2 * draws


def check_phase_invariance(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Tap phases that a diagonal similarity absorbs leave the log-determinant unchanged.

    Two-tap filters take an independent phase on each tap. Longer filters take
    linear-phase rotations h_k exp(i(theta0 + k theta)); independent phases on
    three or more taps do change the log-determinant.
    """
    draws, max_n = (20, 16) if level == "quick" else (200, 64)
    worst = 0.0
    for _ in range(draws):
        g0, g1 = rng.uniform(0.0, 1.0, size=2)
        phi0, phi1 = rng.uniform(0.0, 2 * np.pi, size=2)
        filt = _random_filter(rng, int(rng.integers(2, 5)))
        theta0, theta = rng.uniform(0.0, 2 * np.pi, size=2)
        ramp = np.exp(1j * (theta0 + theta * np.arange(len(filt.taps))))
        pairs = (
            (
                FirFilter.two_tap(float(g0), float(g1)),
                FirFilter.two_tap(float(g0), float(g1), float(phi0), float(phi1)),
            ),
            (filt, FirFilter(taps=tuple(np.asarray(filt.taps) * ramp))),
        )
        n = int(rng.integers(1, max_n + 1))
        snr = float(rng.uniform(0.0, 100.0))
        bits = _random_bits(rng, n)
        for plain, rotated in pairs:
            base = gram_logdet(build_channel_matrix(plain, n), bits, snr)
            turned = gram_logdet(build_channel_matrix(rotated, n), bits, snr)
            worst = max(worst, abs(base - turned) / max(1.0, base))
    return worst, 1e-10, 2 * draws


def check_hadamard_ordering(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """Filter memory never increases the erasure-free log-determinant."""
    draws = 20 if level == "quick" else 200
    worst = -math.inf
    for _ in range(draws):
        gain = float(rng.uniform(0.1, 2.0))
        split = float(rng.uniform(0.0, 1.0))
        snr = float(10.0 ** rng.uniform(-1.0, 2.0))
        n = int(rng.integers(1, 65))
        dq = derive(ChannelParams(g0=gain * split, g1=gain * (1.0 - split), snr=snr))
        memory = float(log_block_dets(np.array([n]), dq)[0])
        memoryless = n * math.log1p(snr * gain)
        worst = max(worst, (memory - memoryless) / n)
    return worst, 1e-12, draws


def check_mc_unbiased(level: Level, rng: np.random.Generator) -> tuple[float, float, int]:
    """
    Monte-Carlo mean at N = 12 matches exact enumeration.

    Returns the deviation in standard errors against a 4-sigma tolerance.
    """
    trials = 2000 if level == "quick" else 100_000
    filt = FirFilter.two_tap(0.8, 0.2)
    process = IidErasures(q=0.3)
    exact = exact_finite_rate(filt, 10.0, process, 12).rate
    seed = int(rng.integers(0, 2**63))
    mc = monte_carlo_rate(filt, 10.0, process, McConfig(block_size=12, trials=trials, seed=seed))
    if mc.error_bound == 0.0:
        return abs(mc.rate - exact), 0.0, trials
    return abs(mc.rate - exact) / mc.error_bound, 4.0, trials


CheckFn = Callable[[Level, np.random.Generator], tuple[float, float, int]]

CHECKS: dict[str, CheckFn] = {
    "erasure_form_equivalence": check_erasure_form_equivalence,
    "block_split_identity": check_block_split,
    "recursion_vs_closed_form": check_recursion,
    "series_enumeration_sandwich": check_sandwich,
    "scp_expectation_oracle": check_scp_expectation,
    "markov_iid_reduction": check_markov_reduction,
    "phase_invariance": check_phase_invariance,
    "hadamard_ordering": check_hadamard_ordering,
    "mc_unbiased": check_mc_unbiased,
}


def run_validation(level: Level = "quick", seed: int = VALIDATION_SEED) -> ValidationReport:
    """Run every check; each gets its own generator derived from `seed`."""
    scale = get_tolerance_scale()
    results: list[CheckResult] = []
    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    for (name, check), stream in zip(CHECKS.items(), streams, strict=True):
        started = time.perf_counter()
        deviation, tolerance, cases = check(level, make_rng(stream))
        tolerance *= scale
        elapsed = time.perf_counter() - started
        passed = deviation <= tolerance
        logger.debug(
            "%s: deviation %.3e tolerance %.3e (%s)",
            name,
            deviation,
            tolerance,
            "pass" if passed else "FAIL",
        )
        results.append(
            CheckResult(
                name=name,
                passed=passed,
                max_deviation=deviation,
                tolerance=tolerance,
                cases=cases,
                seconds=round(elapsed, 3),
            )
        )
    return ValidationReport(level=level, checks=results)


def format_report(report: ValidationReport) -> str:
    """Plain-text pass/fail table."""
    width = max(len(c.name) for c in report.checks)
    lines = [
        f"{'check':<{width}}  result  max_deviation  tolerance  cases",
        "-" * (width + 44),
    ]
    for c in report.checks:
        lines.append(
            f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  "
            f"{c.max_deviation:>13.3e}  {c.tolerance:>9.2e}  {c.cases}"
        )
    failed = [c.name for c in report.checks if not c.passed]
    lines.append("")
    lines.append(
        f"{report.level}: all {len(report.checks)} checks passed"
        if not failed
        else f"{report.level}: FAILED {', '.join(failed)}"
    )
    return "\n".join(lines) + "\n"
