"""
Sweeps - evaluate curves over a one-dimensional parameter grid
"""

import logging

import numpy as np

from erasure_rate_kit.analytic_rates import (
    erasure_free_upper_bound,
    high_snr_rate,
    markov_two_tap_rate,
    one_tap_rate,
    two_tap_rate_iid,
)
from erasure_rate_kit.cellular import icfs_rate, mcp_rate, scp_rate
from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import (
    CellularParams,
    ChannelParams,
    Curve,
    FirFilter,
    IidErasures,
    MarkovErasures,
    McConfig,
    OperatingPoint,
    RateResult,
    SeriesConfig,
    SweepColumn,
    SweepSpec,
    SweepTable,
    SweepVariable,
)
from erasure_rate_kit.simulation import monte_carlo_rate, user_activity_throughput_mc
from erasure_rate_kit.units import in_units

logger = logging.getLogger(__name__)

MC_CURVES = frozenset({Curve.TWO_TAP, Curve.MARKOV, Curve.MCP, Curve.MCP_THROUGHPUT})

# q-grids reach 0.01, where the series needs thousands of terms to meet its
# tail target. Each point still stops at the first N that meets it.
SWEEP_MAX_TERMS = 20_000


def point_at(spec: SweepSpec, x: float) -> OperatingPoint:
    """The fixed bindings with the swept variable set to x."""
    update: dict[str, float | bool]
    match spec.variable:
        case SweepVariable.Q:
            update = {"q": x}
        case SweepVariable.SNR_DB:
            update = {"snr": x, "snr_in_db": True}
        case SweepVariable.G0:
            # unit-gain filter
            update = {"g0": x, "g1": 1.0 - x}
        case SweepVariable.ALPHA_SQ:
            update = {"alpha_sq": x}
    return OperatingPoint.model_validate({**spec.fixed.model_dump(), **update})


def _channel(point: OperatingPoint) -> ChannelParams:
    return ChannelParams(g0=point.g0, g1=point.g1, snr=point.snr_linear)


def _cell(point: OperatingPoint) -> CellularParams:
    return CellularParams(alpha_sq=point.alpha_sq, snr=point.snr_linear, q=point.q)


def _markov(point: OperatingPoint) -> MarkovErasures:
    if point.q0 is None or point.q1 is None:
        raise ParameterError("the markov curve needs both q0 and q1")
    return MarkovErasures(q0=point.q0, q1=point.q1)


def sweep_series(series: SeriesConfig) -> SeriesConfig:
    """Raise the term limit to SWEEP_MAX_TERMS; larger limits are kept."""
    if series.max_terms >= SWEEP_MAX_TERMS:
        return series
    return series.model_copy(update={"max_terms": SWEEP_MAX_TERMS})


def _converged(
    result: RateResult, curve: Curve, point: OperatingPoint, series: SeriesConfig
) -> float:
    if result.error_bound > series.target_tail_bound:
        logger.warning(
            "%s at q=%g: series truncated after %s terms, tail bound %.3e exceeds %.1e",
            curve.value,
            point.q,
            result.meta.get("terms"),
            result.error_bound,
            series.target_tail_bound,
        )
    return result.rate


def evaluate_curve(
    curve: Curve, point: OperatingPoint, series: SeriesConfig
) -> float | None:
    """
    Analytic value of one curve at one point; None where it is undefined.

    Series curves log a WARNING when their tail bound misses the target.
    """
    match curve:
        case Curve.TWO_TAP:
            result = two_tap_rate_iid(_channel(point), point.q, series)
            return _converged(result, curve, point, series)
        case Curve.ONE_TAP:
            return one_tap_rate(point.g0, point.snr_linear, point.q)
        case Curve.UPPER_BOUND:
            return erasure_free_upper_bound(_channel(point))
        case Curve.MARKOV:
            chain = _markov(point)
            result = markov_two_tap_rate(_channel(point), chain.q0, chain.q1, series)
            return _converged(result, curve, point, series)
        case Curve.HIGH_SNR:
            if point.snr_linear <= 0.0:
                return None
            return high_snr_rate(_channel(point), point.q, series)
        case Curve.MCP:
            return _converged(mcp_rate(_cell(point), series), curve, point, series)
        case Curve.SCP:
            return scp_rate(_cell(point))
        case Curve.ICFS:
            return icfs_rate(_cell(point))

    if point.q >= 1.0:
        return None
    cell = _cell(point)
    match curve:
        case Curve.MCP_THROUGHPUT:
            rate = _converged(mcp_rate(cell, series), curve, point, series)
        case Curve.SCP_THROUGHPUT:
            rate = scp_rate(cell)
        case _:
            rate = icfs_rate(cell)
    return rate / (1.0 - point.q)


def derive_seed(seed: int, *path: int) -> int:
    """Independent 64-bit seed for one (curve, grid point) of a sweep."""
    state = np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def simulate_curve(
    curve: Curve, point: OperatingPoint, mc: McConfig
) -> RateResult | None:
    """Monte-Carlo counterpart of a curve, or None if it has none."""
    match curve:
        case Curve.TWO_TAP:
            filt = FirFilter.two_tap(point.g0, point.g1)
            return monte_carlo_rate(filt, point.snr_linear, IidErasures(q=point.q), mc)
        case Curve.MARKOV:
            filt = FirFilter.two_tap(point.g0, point.g1)
            return monte_carlo_rate(filt, point.snr_linear, _markov(point), mc)
        case Curve.MCP:
            filt = FirFilter.two_tap(1.0, point.alpha_sq)
            return monte_carlo_rate(filt, point.snr_linear, IidErasures(q=point.q), mc)
        case Curve.MCP_THROUGHPUT:
            if point.q >= 1.0:
                return None
            return user_activity_throughput_mc(_cell(point), mc)
    return None


def run_sweep(spec: SweepSpec, bits: bool = False) -> SweepTable:
    """
    Evaluate every curve of `spec` on its grid.

    With `spec.mc` set, curves that have a Monte-Carlo estimator get two
    extra columns, "<label> [mc]" and "<label> [mc stderr]". Series are
    allowed up to SWEEP_MAX_TERMS terms per point.
    """
    grid = spec.grid()
    labels = spec.labels or [c.value for c in spec.curves]
    points = [point_at(spec, x) for x in grid]
    series = sweep_series(spec.series)

    columns: list[SweepColumn] = []
    for curve_idx, (curve, label) in enumerate(zip(spec.curves, labels, strict=True)):
        values = [evaluate_curve(curve, p, series) for p in points]
        columns.append(SweepColumn(name=label, values=_scaled(values, bits)))

        if spec.mc is None or curve not in MC_CURVES:
            continue
        means: list[float | None] = []
        errors: list[float | None] = []
        for point_idx, p in enumerate(points):
            mc = spec.mc.model_copy(
                update={"seed": derive_seed(spec.mc.seed, curve_idx, point_idx)}
            )
            result = simulate_curve(curve, p, mc)
            means.append(None if result is None else result.rate)
            errors.append(None if result is None else result.error_bound)
        columns.append(SweepColumn(name=f"{label} [mc]", values=_scaled(means, bits)))
        columns.append(
            SweepColumn(name=f"{label} [mc stderr]", values=_scaled(errors, bits))
        )
        logger.debug("simulated %s at %d points", label, len(points))

    return SweepTable(
        variable=spec.variable,
        x=grid,
        columns=columns,
        units="bits" if bits else "nats",
        meta={"snr_in_db": spec.fixed.snr_in_db or spec.variable is SweepVariable.SNR_DB},
    )


def _scaled(values: list[float | None], bits: bool) -> list[float | None]:
    return [None if v is None else in_units(v, bits) for v in values]
