"""
Monte-Carlo estimation of erasure-channel rates

Each trial draws an erasure pattern and evaluates (1/N) log det of the erased
Gram matrix. Trial t always uses the t-th child of SeedSequence(seed), so the
estimate does not depend on how many worker processes run the trials.
"""

import logging
import math
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool

import numpy as np

from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import DegenerateChainError
from erasure_rate_kit.matrix_oracle import block_logdet, build_channel_matrix, gram_logdet
from erasure_rate_kit.models import (
    CellularParams,
    ChannelParams,
    DerivedQuantities,
    FirFilter,
    IidErasures,
    MarkovErasures,
    McConfig,
    RateKind,
    RateResult,
    normalize_process,
)

logger = logging.getLogger(__name__)

RNG_NAME = "PCG64"


def make_rng(seed: np.random.SeedSequence | int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_erasure_pattern(
    process: IidErasures | MarkovErasures, n: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Draw e_1..e_n (1 = received, 0 = erased).

    Markov patterns are built run by run: the first state comes from the
    stationary law and run lengths are geometric (received runs end with
    probability q1, erased runs with probability 1 - q0).
    """
    process = normalize_process(process)
    if isinstance(process, IidErasures):
        return (rng.random(n) >= process.q).astype(np.uint8)
    if process.is_degenerate:
        raise DegenerateChainError("degenerate Markov chain has no stationary law")

    q0, q1 = process.q0, process.q1
    bits = np.empty(n, dtype=np.uint8)
    state = bool(rng.random() < (1.0 - q0) / (1.0 - q0 + q1))
    pos = 0
    while pos < n:
        leave = q1 if state else 1.0 - q0
        length = n - pos if leave <= 0.0 else int(rng.geometric(leave))
        bits[pos : pos + length] = state
        pos += length
        state = not state
    return bits


@dataclass(frozen=True)
class _TrialContext:
    process: IidErasures | MarkovErasures
    block_size: int
    snr: float
    dq: DerivedQuantities | None = None
    channel: np.ndarray | None = None
    per_active_user: bool = False


def _run_trial(ctx: _TrialContext, seed: np.random.SeedSequence) -> float:
    rng = make_rng(seed)
    bits = sample_erasure_pattern(ctx.process, ctx.block_size, rng)
    if ctx.dq is not None:
        logdet = block_logdet(bits, ctx.dq)
    else:
        assert ctx.channel is not None
        logdet = gram_logdet(ctx.channel, bits, ctx.snr)

    if ctx.per_active_user:
        active = int(bits.sum())
        return logdet / active if active else 0.0
    return logdet / ctx.block_size


def _run_trials(ctx: _TrialContext, cfg: McConfig) -> np.ndarray:
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    worker = partial(_run_trial, ctx)
    if cfg.workers > 1 and cfg.trials > 1:
        chunk = max(1, cfg.trials // (4 * cfg.workers))
        with Pool(processes=cfg.workers) as pool:
            values = pool.map(worker, seeds, chunksize=chunk)
    else:
        values = [worker(s) for s in seeds]
    return np.asarray(values, dtype=np.float64)


def _summarize(values: np.ndarray, cfg: McConfig, meta: dict) -> RateResult:
    mean = math.fsum(values) / values.size
    if values.size == 1:
        logger.warning("single Monte-Carlo trial: standard error reported as 0")
        stderr = 0.0
    elif np.all(values == values[0]):
        stderr = 0.0
    else:
        stderr = float(np.std(values, ddof=1) / math.sqrt(values.size))
    return RateResult(
        rate=max(mean, 0.0),
        error_bound=stderr,
        kind=RateKind.MONTE_CARLO,
        meta={
            "trials": cfg.trials,
            "block_size": cfg.block_size,
            "seed": cfg.seed,
            "rng": RNG_NAME,
            **meta,
        },
    )


def _context_for(
    filt: FirFilter, snr: float, process: IidErasures | MarkovErasures, cfg: McConfig
) -> tuple[_TrialContext, str]:
    if filt.order == 1:
        g0, g1 = filt.gains
        dq = derive(ChannelParams(g0=g0, g1=g1, snr=snr))
        return _TrialContext(process, cfg.block_size, snr, dq=dq), "block-split"
    channel = build_channel_matrix(filt, cfg.block_size)
    return _TrialContext(process, cfg.block_size, snr, channel=channel), "dense"


def monte_carlo_rate(
    filt: FirFilter,
    snr: float,
    process: IidErasures | MarkovErasures,
    cfg: McConfig | None = None,
) -> RateResult:
    """
    Monte-Carlo estimate of E[(1/N) log det(I + P G_N)].

    Two-tap filters use block splitting; longer filters use the dense
    Cholesky path. error_bound is the standard error of the mean.
    """
    cfg = cfg or McConfig()
    process = normalize_process(process)
    ctx, method = _context_for(filt, snr, process, cfg)
    logger.debug(
        "monte carlo: %d trials x N=%d (%s), seed %d",
        cfg.trials,
        cfg.block_size,
        method,
        cfg.seed,
    )
    values = _run_trials(ctx, cfg)
    return _summarize(values, cfg, {"method": method, "process": process.kind})


def user_activity_throughput_mc(
    params: CellularParams, cfg: McConfig | None = None
) -> RateResult:
    """
    Throughput per active user: log det(...) / tr(E_N), averaged over blocks.

    Blocks with no active user contribute 0. Converges to mcp_rate / (1 - q).
    """
    cfg = cfg or McConfig()
    if params.q == 1.0:
        logger.warning("user activity with q=1: no user is ever active")
        return RateResult(
            rate=0.0,
            kind=RateKind.MONTE_CARLO,
            meta={
                "trials": cfg.trials,
                "block_size": cfg.block_size,
                "seed": cfg.seed,
                "warning": "q=1: no active users, throughput defined as 0",
            },
        )
    dq = derive(params.as_channel())
    ctx = _TrialContext(
        IidErasures(q=params.q), cfg.block_size, params.snr, dq=dq, per_active_user=True
    )
    values = _run_trials(ctx, cfg)
    return _summarize(values, cfg, {"method": "block-split", "per_active_user": True})


def compare_logdet_forms(
    filt: FirFilter,
    snr: float,
    process: IidErasures | MarkovErasures,
    cfg: McConfig | None = None,
) -> float:
    """
    Largest |input-form - output-form| logdet over the patterns a Monte-Carlo
    run with the same seed would draw.
    """
    cfg = cfg or McConfig()
    channel = build_channel_matrix(filt, cfg.block_size)
    worst = 0.0
    for seed in np.random.SeedSequence(cfg.seed).spawn(cfg.trials):
        bits = sample_erasure_pattern(process, cfg.block_size, make_rng(seed))
        gap = abs(
            gram_logdet(channel, bits, snr, form="input")
            - gram_logdet(channel, bits, snr, form="output")
        )
        worst = max(worst, gap)
    return worst
