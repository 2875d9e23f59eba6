"""
Matrix oracle - log-determinants evaluated from first principles

Builds the Toeplitz channel matrix, forms the input- and output-erasure Gram
matrices explicitly and takes their log-determinant through a Cholesky
factor. These are the reference values the analytic series are checked
against.
"""

import logging
import math
from typing import Literal

import numpy as np
import scipy.linalg as la

from erasure_rate_kit.analytic_rates import log_block_dets
from erasure_rate_kit.config import get_dense_cap
from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import (
    DegenerateChainError,
    DenseCapError,
    EnumerationLimitError,
    ParameterError,
)
from erasure_rate_kit.models import (
    ChannelParams,
    DerivedQuantities,
    ErasurePattern,
    FirFilter,
    IidErasures,
    MarkovErasures,
    RateKind,
    RateResult,
    normalize_process,
)

logger = logging.getLogger(__name__)

MAX_ENUMERATION = 22


def build_channel_matrix(
    filt: FirFilter, n: int, dense_cap: int | None = None
) -> np.ndarray:
    """
    (n+L) x n Toeplitz matrix with [H]_{i,j} = h_{i-j} for 0 <= i-j <= L.

    Args:
        filt: FIR filter h_0..h_L
        n: Number of input symbols
        dense_cap: Row limit (defaults to ERK_DENSE_CAP or 4096)

    Raises:
        DenseCapError: If n + L exceeds the cap
    """
    if n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    cap = dense_cap if dense_cap is not None else get_dense_cap()
    rows = n + filt.order
    if rows > cap:
        raise DenseCapError(f"dense matrix of {rows} rows exceeds the cap of {cap}")

    h = np.zeros((rows, n), dtype=np.complex128)
    cols = np.arange(n)
    for lag, tap in enumerate(filt.taps):
        h[cols + lag, cols] = tap
    return h


def _logdet_hpd(m: np.ndarray) -> float:
    try:
        chol = la.cholesky(m, lower=True, check_finite=False)
    except la.LinAlgError as e:
        raise RuntimeError(
            "Cholesky failed on I + PSD Gram matrix; this is an internal error"
        ) from e
    return float(2.0 * np.sum(np.log(chol.diagonal().real)))


def gram_logdet(
    h: np.ndarray,
    bits: np.ndarray,
    snr: float,
    form: Literal["input", "output"] = "output",
) -> float:
    """
    log det of the erased Gram matrix for a prebuilt channel matrix.

    "input" forms I_{N+L} + P H E E^H H^H; "output" forms I_N + P E^H H^H H E.
    """
    he = h * np.asarray(bits, dtype=np.float64)[np.newaxis, :]
    if form == "input":
        m = np.eye(h.shape[0]) + snr * (he @ he.conj().T)
    else:
        m = np.eye(h.shape[1]) + snr * (he.conj().T @ he)
    return _logdet_hpd(m)


def logdet_input_erasure(filt: FirFilter, pattern: ErasurePattern, snr: float) -> float:
    """log det(I_{N+L} + P H E E^H H^H) for one erasure realization."""
    h = build_channel_matrix(filt, pattern.n)
    return gram_logdet(h, pattern.as_array(), snr, form="input")


def logdet_output_erasure(
    filt: FirFilter, pattern: ErasurePattern, snr: float
) -> float:
    """log det(I_N + P E^H H^H H E); equal to the input form for i.i.d. inputs."""
    h = build_channel_matrix(filt, pattern.n)
    return gram_logdet(h, pattern.as_array(), snr, form="output")


# ============================================================================
# Tridiagonal recursion
# ============================================================================


def tridiag_logdet_prefixes(n: int, dq: DerivedQuantities) -> np.ndarray:
    """
    log det(D_k) for k = 1..n via det D_k = a det D_{k-1} - b^2 det D_{k-2}.

    The recursion runs on the ratios t_k = det D_k / det D_{k-1}
    (t_1 = a, t_k = a - b^2 / t_{k-1}), so nothing overflows.
    """
    if n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    b_sq = dq.b * dq.b
    ratios = np.empty(n, dtype=np.float64)
    ratios[0] = dq.a
    for k in range(1, n):
        ratios[k] = dq.a - b_sq / ratios[k - 1]

    # t_k decreases towards r, and r - s >= 1
    floor = (dq.r - dq.s) * (1.0 - 1e-12)
    if ratios.min() < floor:
        raise RuntimeError(
            f"tridiagonal pivot {ratios.min()} fell below r - s = {dq.r - dq.s}"
        )
    return np.cumsum(np.log(ratios))


def tridiag_logdet_recursive(n: int, dq: DerivedQuantities) -> float:
    """log det(D_n) from the three-term determinant recursion."""
    return float(tridiag_logdet_prefixes(n, dq)[-1])


# ============================================================================
# Block splitting
# ============================================================================


def run_lengths(pattern: ErasurePattern) -> list[int]:
    """Maximal runs of received symbols, in order."""
    return pattern.runs()


def _two_tap_quantities(filt: FirFilter, snr: float) -> DerivedQuantities:
    if filt.order != 1:
        raise ParameterError(
            f"block splitting needs a two-tap filter (L=1), got L={filt.order}"
        )
    g0, g1 = filt.gains
    return derive(ChannelParams(g0=g0, g1=g1, snr=snr))


def block_logdet(bits: np.ndarray, dq: DerivedQuantities) -> float:
    """Sum of log det(D_n) over the maximal runs of ones in `bits`."""
    runs = ErasurePattern.run_lengths_of(bits)
    if runs.size == 0:
        return 0.0
    return math.fsum(log_block_dets(runs, dq))


def block_split_logdet(filt: FirFilter, pattern: ErasurePattern, snr: float) -> float:
    """
    log det(I_N + P G_N) for a two-tap filter by splitting at erasures.

    Each erasure zeroes a row and column of the tridiagonal Gram matrix, so
    the determinant factors into one D_n block per run of n received symbols.

    Raises:
        ParameterError: If the filter does not have exactly two taps
    """
    dq = _two_tap_quantities(filt, snr)
    return block_logdet(pattern.as_array(), dq)


# ============================================================================
# Exhaustive enumeration
# ============================================================================


def exact_finite_rate(
    filt: FirFilter,
    snr: float,
    process: IidErasures | MarkovErasures,
    n: int,
) -> RateResult:
    """
    Exact E[(1/N) log det(I_N + P G_N)] over all 2^N erasure patterns.

    Patterns are enumerated as the bits of 0..2^N-1; log-determinants come from
    the pivot recursion of the erased tridiagonal matrix, vectorized across
    patterns. Markov patterns start from the stationary law.

    Raises:
        EnumerationLimitError: If n > 22
        ParameterError: If the filter is not two-tap
    """
    if n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    if n > MAX_ENUMERATION:
        raise EnumerationLimitError(
            f"exhaustive enumeration is limited to N <= {MAX_ENUMERATION}, got {n}"
        )
    dq = _two_tap_quantities(filt, snr)
    process = normalize_process(process)
    if isinstance(process, MarkovErasures) and process.is_degenerate:
        raise DegenerateChainError("degenerate Markov chain has no stationary law")

    codes = np.arange(2**n, dtype=np.uint32)
    b_sq = dq.b * dq.b
    logdet = np.zeros(codes.size)
    prob = np.ones(codes.size)
    prev_on = np.zeros(codes.size, dtype=bool)
    prev_t = np.ones(codes.size)

    # i.i.d.(q) is the chain with q0 = q1 = q
    if isinstance(process, IidErasures):
        q0 = q1 = process.q
    else:
        q0, q1 = process.q0, process.q1
    pi_on = (1.0 - q0) / (1.0 - q0 + q1)

    for k in range(n):
        on = ((codes >> np.uint32(k)) & np.uint32(1)).astype(bool)
        t = np.where(on, dq.a - b_sq * prev_on / prev_t, 1.0)
        logdet += np.log(t)

        if k == 0:
            prob *= np.where(on, pi_on, 1.0 - pi_on)
        else:
            stay_on = np.where(on, 1.0 - q1, q1)
            from_off = np.where(on, 1.0 - q0, q0)
            prob *= np.where(prev_on, stay_on, from_off)

        prev_on, prev_t = on, t

    rate = math.fsum(prob * logdet) / n
    logger.debug("enumerated %d patterns at N=%d", codes.size, n)
    return RateResult(
        rate=max(rate, 0.0),
        error_bound=0.0,
        kind=RateKind.EXACT_ENUMERATION,
        meta={"block_size": n, "patterns": int(codes.size), "process": process.kind},
    )
