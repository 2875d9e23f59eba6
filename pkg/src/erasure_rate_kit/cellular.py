"""
Cellular uplink - MCP, SCP and ICFS rates in the soft-handoff model

Each mobile is heard by its own base station with unit gain and by one
neighbor with gain alpha. Shadowing erases a mobile at both base stations
with probability q. Joint multicell processing (MCP) is the two-tap
input-erasure channel with h0 = 1, h1 = alpha.
"""

import logging
import math

import numpy as np

from erasure_rate_kit.analytic_rates import high_snr_two_tap, two_tap_rate_iid
from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import (
    CellularParams,
    HighSnrCharacterization,
    RateResult,
    SchemeComparison,
    Scheme,
    SeriesConfig,
)

logger = logging.getLogger(__name__)

CROSSOVER_TOLERANCE = 1e-6
_CROSSOVER_SCAN = 200


def scp_rate(p: CellularParams) -> float:
    """Single-cell processing, interference treated as noise (closed form)."""
    a2p = p.alpha_sq * p.snr
    interfered = math.log1p(p.snr + a2p) - math.log1p(a2p)
    return (1.0 - p.q) * (p.q * math.log1p(p.snr) + (1.0 - p.q) * interfered)


def scp_rate_expectation(p: CellularParams) -> float:
    """SCP rate as the expectation over the four (signal, interferer) outcomes."""
    total = 0.0
    for e_sig in (0, 1):
        for e_int in (0, 1):
            weight = (1.0 - p.q if e_sig else p.q) * (1.0 - p.q if e_int else p.q)
            sinr = e_sig * p.snr / (1.0 + p.alpha_sq * e_int * p.snr)
            total += weight * math.log1p(sinr)
    return total


def icfs_rate(p: CellularParams) -> float:
    """Inter-cell frequency sharing: half the band, no interference."""
    return 0.5 * (1.0 - p.q) * math.log1p(p.snr)


def mcp_rate(p: CellularParams, cfg: SeriesConfig | None = None) -> RateResult:
    """Per-cell MCP sum-rate: the two-tap rate with g0 = 1, g1 = alpha^2."""
    result = two_tap_rate_iid(p.as_channel(), p.q, cfg)
    result.meta["scheme"] = Scheme.MCP.value
    return result


def high_snr_triple(
    scheme: Scheme, p: CellularParams, cfg: SeriesConfig | None = None
) -> HighSnrCharacterization:
    """
    High-SNR slope and offset of one scheme.

    MCP: S = 1-q with the two-tap offset series at g0 = 1, g1 = alpha^2.
    ICFS: S = (1-q)/2, L = 0.
    SCP: S = q(1-q) when alpha > 0 (only interference-free slots grow with P);
    with alpha = 0 the cells decouple and S = 1-q, L = 0.
    """
    q = p.q
    if scheme is Scheme.MCP:
        return high_snr_two_tap(1.0, p.alpha_sq, q, cfg)
    if scheme is Scheme.ICFS:
        return HighSnrCharacterization(s_inf=0.5 * (1.0 - q), l_inf=0.0)

    if p.alpha_sq == 0.0:
        return HighSnrCharacterization(s_inf=1.0 - q, l_inf=0.0)
    slope = q * (1.0 - q)
    if slope == 0.0:
        return HighSnrCharacterization(s_inf=0.0, l_inf=0.0)
    # rate -> (1-q)[q log P + (1-q) log(1 + 1/alpha^2)]
    offset = -(1.0 - q) / q * math.log1p(1.0 / p.alpha_sq)
    return HighSnrCharacterization(s_inf=slope, l_inf=offset)


def _throughput(rate: float, q: float) -> float:
    return rate / (1.0 - q)


def user_activity_throughputs(
    p: CellularParams, cfg: SeriesConfig | None = None
) -> SchemeComparison:
    """
    Per-active-user throughputs: each scheme's shadowing rate times 1/(1-q).

    Raises:
        ParameterError: If q == 1 (no active users)
    """
    if p.q >= 1.0:
        raise ParameterError("per-active-user throughput needs q < 1")
    comparison = compare_schemes(p, cfg)
    comparison.mcp_throughput = _throughput(comparison.mcp, p.q)
    comparison.scp_throughput = _throughput(comparison.scp, p.q)
    comparison.icfs_throughput = _throughput(comparison.icfs, p.q)
    return comparison


def compare_schemes(
    p: CellularParams, cfg: SeriesConfig | None = None
) -> SchemeComparison:
    """MCP, SCP and ICFS rates at one point, plus the SCP/ICFS crossover."""
    return SchemeComparison(
        mcp=mcp_rate(p, cfg).rate,
        scp=scp_rate(p),
        icfs=icfs_rate(p),
        crossover_q=scp_icfs_crossover(p.alpha_sq, p.snr),
    )


def scp_icfs_crossover(
    alpha_sq: float, snr: float, tol: float = CROSSOVER_TOLERANCE
) -> float | None:
    """
    Erasure probability where ICFS and SCP rates cross, or None.

    Scans q over (0, 1) for a sign change of icfs - scp, then bisects the
    bracket down to `tol`.
    """
    if not (0.0 <= alpha_sq <= 1.0) or snr < 0.0:
        raise ParameterError("alpha_sq must lie in [0, 1] and snr must be >= 0")

    def gap(q: float) -> float:
        p = CellularParams(alpha_sq=alpha_sq, snr=snr, q=q)
        return icfs_rate(p) - scp_rate(p)

    grid = np.linspace(0.0, 1.0, _CROSSOVER_SCAN + 1)[1:-1]
    signs = np.sign([gap(float(q)) for q in grid])
    for k in range(len(grid) - 1):
        if signs[k] == 0.0 and k > 0 and signs[k - 1] * signs[k + 1] < 0:
            return float(grid[k])
        if signs[k] * signs[k + 1] < 0:
            lo, hi = float(grid[k]), float(grid[k + 1])
            lo_sign = signs[k]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                mid_gap = gap(mid)
                if mid_gap == 0.0:
                    return mid
                if np.sign(mid_gap) == lo_sign:
                    lo = mid
                else:
                    hi = mid
            root = 0.5 * (lo + hi)
            logger.debug("SCP/ICFS crossover at q=%.7f", root)
            return root
    return None
