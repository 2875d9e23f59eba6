"""
Units - dB/linear power and nats/bits conversions
"""

import math

from erasure_rate_kit.exceptions import ParameterError

LN2 = math.log(2.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ParameterError("dB conversion needs a positive linear value")
    return 10.0 * math.log10(value)


def nats_to_bits(value: float) -> float:
    return value / LN2


def in_units(value: float, bits: bool) -> float:
    """A nats value, converted to bits when `bits` is set."""
    return nats_to_bits(value) if bits else value
