"""
erasure-rate-kit - achievable rates of the two-tap input-erasure Gaussian channel

Closed-form series and bounds, high-SNR characterization, Markov erasures,
matrix and Monte-Carlo oracles, and the multicell-processing comparison for
the soft-handoff cellular uplink.
"""

from erasure_rate_kit._version import __version__
from erasure_rate_kit.analytic_rates import (
    erasure_free_upper_bound,
    finite_rate_bounds,
    high_snr_rate,
    high_snr_two_tap,
    log_block_det,
    markov_two_tap_rate,
    mean_run_length,
    one_tap_rate,
    run_length_pmf,
    steady_state_erasure_rate,
    two_tap_rate_iid,
)
from erasure_rate_kit.cellular import (
    compare_schemes,
    high_snr_triple,
    icfs_rate,
    mcp_rate,
    scp_icfs_crossover,
    scp_rate,
    user_activity_throughputs,
)
from erasure_rate_kit.core_model import derive
from erasure_rate_kit.exceptions import (
    DegenerateChainError,
    DenseCapError,
    EnumerationLimitError,
    ErkError,
    ParameterError,
)
from erasure_rate_kit.models import (
    CellularParams,
    ChannelParams,
    DerivedQuantities,
    ErasurePattern,
    FirFilter,
    HighSnrCharacterization,
    IidErasures,
    MarkovErasures,
    McConfig,
    RateResult,
    SchemeComparison,
    SeriesConfig,
)
from erasure_rate_kit.rate_tools import RateTools

__all__ = [
    "__version__",
    # Core
    "derive",
    # Analytic rates
    "two_tap_rate_iid",
    "one_tap_rate",
    "erasure_free_upper_bound",
    "log_block_det",
    "markov_two_tap_rate",
    "run_length_pmf",
    "steady_state_erasure_rate",
    "mean_run_length",
    "high_snr_two_tap",
    "high_snr_rate",
    "finite_rate_bounds",
    # Cellular
    "scp_rate",
    "icfs_rate",
    "mcp_rate",
    "high_snr_triple",
    "user_activity_throughputs",
    "compare_schemes",
    "scp_icfs_crossover",
    # Tools
    "RateTools",
    # Models
    "ChannelParams",
    "DerivedQuantities",
    "IidErasures",
    "MarkovErasures",
    "RateResult",
    "SeriesConfig",
    "HighSnrCharacterization",
    "FirFilter",
    "ErasurePattern",
    "McConfig",
    "CellularParams",
    "SchemeComparison",
    # Errors
    "ErkError",
    "ParameterError",
    "DegenerateChainError",
    "EnumerationLimitError",
    "DenseCapError",
]
