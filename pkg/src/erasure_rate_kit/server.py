"""
MCP Server for erasure-rate-kit

Registers the rate, cellular and simulation tools with the MCP framework.
"""

import logging

from chuk_mcp_server import ChukMCPServer

from erasure_rate_kit.models import (
    CellularParams,
    Formula,
    MarkovErasures,
    OperatingPoint,
    RateRequest,
    Scheme,
    SimulateRequest,
)
from erasure_rate_kit.rate_tools import RateTools

logger = logging.getLogger(__name__)


def create_server() -> ChukMCPServer:
    """Create and configure the MCP server with all rate tools."""

    rate_tools = RateTools()
    server = ChukMCPServer()

    # ========================================================================
    # Register Rate Tools
    # ========================================================================

    @server.tool
    async def two_tap_rate(
        g0: float, g1: float, snr: float, q: float, snr_in_db: bool = False
    ):
        """Achievable rate (nats/use) of the two-tap channel with i.i.d. erasures."""
        point = OperatingPoint(g0=g0, g1=g1, snr=snr, snr_in_db=snr_in_db, q=q)
        return rate_tools.rate(RateRequest(formula=Formula.TWO_TAP, point=point))

    @server.tool
    async def markov_rate(
        g0: float, g1: float, snr: float, q0: float, q1: float, snr_in_db: bool = False
    ):
        """Achievable rate (nats/use) with first-order Markov erasures."""
        steady = MarkovErasures(q0=q0, q1=q1)
        point = OperatingPoint(
            g0=g0,
            g1=g1,
            snr=snr,
            snr_in_db=snr_in_db,
            q=0.0 if steady.is_degenerate else steady.erasure_rate,
            q0=q0,
            q1=q1,
        )
        return rate_tools.rate(RateRequest(formula=Formula.MARKOV, point=point))

    @server.tool
    async def high_snr(
        g0: float = 1.0,
        g1: float = 0.5,
        snr: float = 1e6,
        q: float = 0.2,
        scheme: str | None = None,
        alpha_sq: float = 0.5,
    ):
        """High-SNR slope, offset and affine rate (two-tap, or one cellular scheme)."""
        point = OperatingPoint(
            g0=g0, g1=g1, snr=snr, snr_in_db=False, q=q, alpha_sq=alpha_sq
        )
        request = RateRequest(
            formula=Formula.HIGH_SNR,
            point=point,
            scheme=Scheme(scheme) if scheme else None,
        )
        return rate_tools.rate(request)

    # ========================================================================
    # Register Cellular Tools
    # ========================================================================

    @server.tool
    async def cellular_rates(alpha_sq: float, snr: float, q: float):
        """MCP, SCP and ICFS rates, per-active-user throughputs and the SCP/ICFS crossover."""
        return rate_tools.cellular(CellularParams(alpha_sq=alpha_sq, snr=snr, q=q))

    # ========================================================================
    # Register Simulation Tools
    # ========================================================================

    @server.tool
    async def simulate(request: SimulateRequest):
        """Monte-Carlo rate estimate with a recorded seed."""
        return rate_tools.simulate(request)

    return server


def run_server(
    transport: str = "stdio",
    host: str = "127.0.0.1",
    port: int = 3000,
    debug: bool = False,
) -> None:
    """
    Run the MCP server with the specified transport.

    Args:
        transport: Transport type ("stdio" or "sse")
        host: Host to bind to (only for SSE transport)
        port: Port to bind to (only for SSE transport)
        debug: Enable debug logging
    """
    server = create_server()
    logger.debug("starting MCP server over %s", transport)

    if transport.lower() == "stdio":
        server.run_stdio(debug=debug)
    elif transport.lower() == "sse":
        server.run(host=host, port=port, debug=debug)
    else:
        raise ValueError(f"Unknown transport: {transport}. Use 'stdio' or 'sse'")
