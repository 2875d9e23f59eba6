"""
Rate Tools - request/response layer shared by the CLI and the MCP server

Every method takes a request model and returns a pydantic record carrying
units, the SNR interpretation and the tool version.
"""

import logging
import math
from typing import Any

from erasure_rate_kit._version import __version__
from erasure_rate_kit.analytic_rates import (
    erasure_free_upper_bound,
    high_snr_two_tap,
    markov_two_tap_rate,
    one_tap_rate,
    two_tap_rate_iid,
)
from erasure_rate_kit.cellular import (
    compare_schemes,
    high_snr_triple,
    icfs_rate,
    mcp_rate,
    scp_rate,
    user_activity_throughputs,
)
from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import (
    CellularParams,
    ChannelParams,
    FirFilter,
    Formula,
    HighSnrCharacterization,
    IidErasures,
    MarkovErasures,
    OperatingPoint,
    RateKind,
    RateRecord,
    RateRequest,
    RateResult,
    SchemeComparison,
    SimulateRequest,
)
from erasure_rate_kit.output import snr_interpretation
from erasure_rate_kit.simulation import (
    compare_logdet_forms,
    monte_carlo_rate,
    user_activity_throughput_mc,
)
from erasure_rate_kit.units import in_units

logger = logging.getLogger(__name__)


def _channel(point: OperatingPoint) -> ChannelParams:
    return ChannelParams(g0=point.g0, g1=point.g1, snr=point.snr_linear)


def _cell(point: OperatingPoint) -> CellularParams:
    return CellularParams(alpha_sq=point.alpha_sq, snr=point.snr_linear, q=point.q)


def _params(point: OperatingPoint, **extra: Any) -> dict[str, Any]:
    return {**point.model_dump(), "snr_linear": point.snr_linear, **extra}


class RateTools:
    """Collection of rate and simulation tools."""

    def _record(
        self,
        result: RateResult,
        point: OperatingPoint,
        bits: bool,
        params: dict[str, Any] | None = None,
    ) -> RateRecord:
        return RateRecord(
            rate=in_units(result.rate, bits),
            error_bound=in_units(result.error_bound, bits),
            kind=result.kind,
            units="bits" if bits else "nats",
            params=params if params is not None else _params(point),
            meta={
                **result.meta,
                "version": __version__,
                "snr_interpretation": snr_interpretation(point.snr_in_db),
            },
        )

    def rate(self, request: RateRequest) -> RateRecord:
        """
        Evaluate one formula at one operating point.

        Args:
            request: RateRequest naming the formula and its parameters

        Returns:
            RateRecord with rate, error bound, kind, units, params and meta

        Raises:
            ParameterError: If the formula's parameters are missing or invalid
        """
        point = request.point
        match request.formula:
            case Formula.TWO_TAP:
                result = two_tap_rate_iid(_channel(point), point.q, request.series)
            case Formula.ONE_TAP:
                result = RateResult(
                    rate=one_tap_rate(point.g0, point.snr_linear, point.q),
                    kind=RateKind.CLOSED_FORM,
                )
            case Formula.MARKOV:
                if point.q0 is None or point.q1 is None:
                    raise ParameterError("markov rate needs both q0 and q1")
                result = markov_two_tap_rate(
                    _channel(point), point.q0, point.q1, request.series
                )
            case Formula.UPPER_BOUND:
                result = RateResult(
                    rate=erasure_free_upper_bound(_channel(point)),
                    kind=RateKind.CLOSED_FORM,
                )
            case Formula.SCP:
                result = RateResult(rate=scp_rate(_cell(point)), kind=RateKind.CLOSED_FORM)
            case Formula.ICFS:
                result = RateResult(rate=icfs_rate(_cell(point)), kind=RateKind.CLOSED_FORM)
            case Formula.MCP:
                result = mcp_rate(_cell(point), request.series)
            case Formula.HIGH_SNR:
                return self._high_snr_record(request)
        return self._record(result, point, request.bits)

    def _high_snr_record(self, request: RateRequest) -> RateRecord:
        point = request.point
        snr = point.snr_linear
        if snr <= 0.0:
            raise ParameterError("high-SNR approximation needs snr > 0")

        hs: HighSnrCharacterization
        if request.scheme is None:
            hs = high_snr_two_tap(point.g0, point.g1, point.q, request.series)
        else:
            hs = high_snr_triple(request.scheme, _cell(point), request.series)
        approx = hs.s_inf * (math.log(snr) - hs.l_inf)
        return RateRecord(
            rate=in_units(approx, request.bits),
            error_bound=in_units(hs.s_inf * hs.error_bound, request.bits),
            kind=RateKind.TRUNCATED_SERIES if hs.terms else RateKind.CLOSED_FORM,
            units="bits" if request.bits else "nats",
            params=_params(
                point, scheme=request.scheme.value if request.scheme else "two-tap"
            ),
            meta={
                "s_inf": hs.s_inf,
                "l_inf": hs.l_inf,
                "terms": hs.terms,
                "version": __version__,
                "snr_interpretation": snr_interpretation(point.snr_in_db),
            },
        )

    def simulate(self, request: SimulateRequest) -> RateRecord:
        """
        One Monte-Carlo run.

        Uses the cellular user-activity estimator when `user_activity` is set,
        otherwise the erased-Gram estimator for the given taps (two-tap from
        g0/g1 when no taps are given) under i.i.d. or Markov erasures.
        """
        point = request.point
        extra: dict[str, Any] = {"mc": request.mc.model_dump()}

        if request.user_activity:
            result = user_activity_throughput_mc(_cell(point), request.mc)
            return self._record(result, point, request.bits, _params(point, **extra))

        filt = (
            FirFilter(taps=tuple(request.taps))
            if request.taps
            else FirFilter.two_tap(point.g0, point.g1)
        )
        process: IidErasures | MarkovErasures
        if request.markov:
            if point.q0 is None or point.q1 is None:
                raise ParameterError("markov simulation needs both q0 and q1")
            process = MarkovErasures(q0=point.q0, q1=point.q1)
        else:
            process = IidErasures(q=point.q)
        extra["taps"] = [[t.real, t.imag] for t in filt.taps]
        logger.debug("simulating %d-tap filter with %s erasures", len(filt.taps), process.kind)

        result = monte_carlo_rate(filt, point.snr_linear, process, request.mc)
        if request.validate_forms:
            gap = compare_logdet_forms(filt, point.snr_linear, process, request.mc)
            result.meta["logdet_form_max_gap"] = gap
        return self._record(result, point, request.bits, _params(point, **extra))

    def cellular(self, params: CellularParams) -> SchemeComparison:
        """MCP/SCP/ICFS at one point; per-active-user throughputs when q < 1."""
        if params.q < 1.0:
            return user_activity_throughputs(params)
        return compare_schemes(params)
