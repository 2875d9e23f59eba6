"""
Core model - derived channel quantities

Every analytic formula consumes the scalars (a, b, r, s) built here.
"""

import math

from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import ChannelParams, DerivedQuantities


def derive(params: ChannelParams) -> DerivedQuantities:
    """
    Compute a, b, r, s for a two-tap channel.

    a = 1 + P(g0 + g1), b = P*sqrt(g0*g1), and r, s are the roots of
    x^2 - a*x + b^2. The discriminant is expanded as
    1 + 2P(g0 + g1) + P^2 (g0 - g1)^2 so it never cancels, and s is taken as
    b^2 / r for the same reason.

    Args:
        params: Validated channel parameters

    Returns:
        DerivedQuantities with r - s >= 1 and s >= 0

    Raises:
        ParameterError: If any input is negative or non-finite
    """
    g0, g1, snr = params.g0, params.g1, params.snr
    for name, value in (("g0", g0), ("g1", g1), ("snr", snr)):
        if not math.isfinite(value) or value < 0.0:
            raise ParameterError(f"{name} must be finite and nonnegative, got {value}")

    a = 1.0 + snr * (g0 + g1)
    b = snr * math.sqrt(g0 * g1)
    disc = 1.0 + 2.0 * snr * (g0 + g1) + (snr * (g0 - g1)) ** 2
    r = 0.5 * (a + math.sqrt(disc))
    s = b * b / r if b > 0.0 else 0.0
    return DerivedQuantities(a=a, b=b, r=r, s=s)
