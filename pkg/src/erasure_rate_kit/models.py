"""
Pydantic models for erasure-rate-kit
"""

from enum import Enum
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from erasure_rate_kit.units import db_to_linear

Probability = Annotated[float, Field(ge=0.0, le=1.0, allow_inf_nan=False)]
NonNegative = Annotated[float, Field(ge=0.0, allow_inf_nan=False)]


class RateKind(str, Enum):
    """How a rate value was obtained"""

    CLOSED_FORM = "closed_form"
    TRUNCATED_SERIES = "truncated_series"
    EXACT_ENUMERATION = "exact_enumeration"
    MONTE_CARLO = "monte_carlo"


class Scheme(str, Enum):
    """Cellular uplink processing schemes"""

    MCP = "mcp"
    SCP = "scp"
    ICFS = "icfs"


# ============================================================================
# Channel Models
# ============================================================================


class ChannelParams(BaseModel):
    """Two-tap channel: squared tap magnitudes and linear input power.

    Tap phases are not represented; every analytic rate depends on the
    magnitudes only.
    """

    g0: NonNegative
    g1: NonNegative
    snr: NonNegative

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _positive_gain(self) -> "ChannelParams":
        if self.g0 + self.g1 <= 0.0:
            raise ValueError("filter gain g0 + g1 must be positive")
        return self


class DerivedQuantities(BaseModel):
    """The scalars a, b, r, s every rate formula consumes.

    r and s are the roots of x^2 - a*x + b^2 = 0, with r - s >= 1 and s >= 0.
    """

    a: float
    b: float
    r: float
    s: float

    model_config = ConfigDict(frozen=True)


class IidErasures(BaseModel):
    """Bernoulli erasures: each input symbol is erased with probability q"""

    kind: Literal["iid"] = "iid"
    q: Probability

    model_config = ConfigDict(frozen=True)

    @property
    def erasure_rate(self) -> float:
        return self.q


class MarkovErasures(BaseModel):
    """First-order Markov erasures.

    State 1 is a received symbol, state 0 an erasure.
    Pr(0 -> 1) = 1 - q0 and Pr(1 -> 0) = q1.
    """

    kind: Literal["markov"] = "markov"
    q0: Probability
    q1: Probability

    model_config = ConfigDict(frozen=True)

    @property
    def is_degenerate(self) -> bool:
        """True when the chain is absorbed in the erased state."""
        return 1.0 - self.q0 + self.q1 <= 0.0

    @property
    def erasure_rate(self) -> float:
        """Steady-state erasure probability q1 / (1 - q0 + q1)."""
        return self.q1 / (1.0 - self.q0 + self.q1)


ErasureProcess = Annotated[IidErasures | MarkovErasures, Field(discriminator="kind")]


def normalize_process(process: IidErasures | MarkovErasures) -> IidErasures | MarkovErasures:
    """Collapse Markov(q, q) to IID(q) so both take identical code paths."""
    if isinstance(process, MarkovErasures) and process.q0 == process.q1:
        return IidErasures(q=process.q0)
    return process


class RateResult(BaseModel):
    """A rate in nats per channel use with its error bound and provenance"""

    rate: NonNegative
    error_bound: NonNegative = 0.0
    kind: RateKind
    meta: dict[str, Any] = Field(default_factory=dict)


# ============================================================================
# Series Models
# ============================================================================


class SeriesConfig(BaseModel):
    """Truncation policy for the infinite rate series"""

    max_terms: int = Field(default=200, ge=1)
    target_tail_bound: NonNegative = 1e-12

    model_config = ConfigDict(frozen=True)


class HighSnrCharacterization(BaseModel):
    """High-SNR slope (multiplexing gain) and power offset in nats"""

    s_inf: float = Field(ge=0.0, le=1.0)
    l_inf: float
    error_bound: NonNegative = 0.0
    terms: int = 0


# ============================================================================
# Oracle Models
# ============================================================================


class FirFilter(BaseModel):
    """Complex FIR taps h_0..h_L"""

    taps: tuple[complex, ...] = Field(min_length=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("taps", mode="before")
    @classmethod
    def _coerce_taps(cls, value: Any) -> tuple[complex, ...]:
        return tuple(complex(t) for t in value)

    @field_validator("taps")
    @classmethod
    def _check_taps(cls, value: tuple[complex, ...]) -> tuple[complex, ...]:
        if not all(np.isfinite(t.real) and np.isfinite(t.imag) for t in value):
            raise ValueError("filter taps must be finite")
        if not any(t != 0 for t in value):
            raise ValueError("filter needs at least one nonzero tap")
        return value

    @classmethod
    def two_tap(
        cls, g0: float, g1: float, phase0: float = 0.0, phase1: float = 0.0
    ) -> "FirFilter":
        """Build h0, h1 from squared magnitudes and optional phases."""
        return cls(
            taps=(
                np.sqrt(g0) * np.exp(1j * phase0),
                np.sqrt(g1) * np.exp(1j * phase1),
            )
        )

    @property
    def order(self) -> int:
        """Filter memory L (number of taps minus one)."""
        return len(self.taps) - 1

    @property
    def gains(self) -> tuple[float, ...]:
        return tuple(abs(t) ** 2 for t in self.taps)


class ErasurePattern(BaseModel):
    """A realization e_1..e_N; 1 marks a received symbol, 0 an erasure"""

    bits: tuple[int, ...] = Field(min_length=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("bits")
    @classmethod
    def _binary(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(b not in (0, 1) for b in value):
            raise ValueError("erasure pattern entries must be 0 or 1")
        return value

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "ErasurePattern":
        return cls(bits=tuple(int(b) for b in bits))

    @staticmethod
    def run_lengths_of(bits: np.ndarray) -> np.ndarray:
        """Lengths of the maximal runs of ones, in order of appearance."""
        padded = np.concatenate(([0], np.asarray(bits, dtype=np.int8), [0]))
        edges = np.diff(padded)
        return np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.uint8)

    def runs(self) -> list[int]:
        return [int(n) for n in self.run_lengths_of(self.as_array())]

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def active(self) -> int:
        return sum(self.bits)


class McConfig(BaseModel):
    """Monte-Carlo protocol: block size, trial count, seed, worker processes"""

    block_size: int = Field(default=200, ge=1)
    trials: int = Field(default=50, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1)

    model_config = ConfigDict(frozen=True)


# ============================================================================
# Cellular Models
# ============================================================================


class CellularParams(BaseModel):
    """Soft-handoff uplink: inter-cell gain alpha^2, power P, erasure probability q"""

    alpha_sq: Probability
    snr: NonNegative
    q: Probability

    model_config = ConfigDict(frozen=True)

    @property
    def alpha(self) -> float:
        return float(np.sqrt(self.alpha_sq))

    def as_channel(self) -> ChannelParams:
        """The equivalent two-tap channel h0 = 1, h1 = alpha."""
        return ChannelParams(g0=1.0, g1=self.alpha_sq, snr=self.snr)


class SchemeComparison(BaseModel):
    """MCP, SCP and ICFS evaluated at one operating point"""

    mcp: float
    scp: float
    icfs: float
    mcp_throughput: float | None = None
    scp_throughput: float | None = None
    icfs_throughput: float | None = None
    crossover_q: float | None = None


# ============================================================================
# Sweep / Figure Models
# ============================================================================


class SweepVariable(str, Enum):
    """Parameter swept along the x axis"""

    Q = "q"
    SNR_DB = "snr_db"
    G0 = "g0"
    ALPHA_SQ = "alpha_sq"


class Curve(str, Enum):
    """Formulas a sweep can evaluate"""

    TWO_TAP = "two-tap"
    ONE_TAP = "one-tap"
    UPPER_BOUND = "upper-bound"
    MARKOV = "markov"
    HIGH_SNR = "high-snr"
    MCP = "mcp"
    SCP = "scp"
    ICFS = "icfs"
    MCP_THROUGHPUT = "mcp-throughput"
    SCP_THROUGHPUT = "scp-throughput"
    ICFS_THROUGHPUT = "icfs-throughput"


class OperatingPoint(BaseModel):
    """Fixed parameter bindings of a sweep; snr is in dB unless snr_in_db is False"""

    g0: NonNegative = 0.8
    g1: NonNegative = 0.2
    snr: float = Field(default=10.0, allow_inf_nan=False)
    snr_in_db: bool = True
    q: Probability = 0.2
    q0: Probability | None = None
    q1: Probability | None = None
    alpha_sq: Probability = 0.5

    @property
    def snr_linear(self) -> float:
        return db_to_linear(self.snr) if self.snr_in_db else self.snr

    @model_validator(mode="after")
    def _linear_snr_nonnegative(self) -> "OperatingPoint":
        if not self.snr_in_db and self.snr < 0:
            raise ValueError("linear snr must be nonnegative")
        return self


class SweepSpec(BaseModel):
    """A one-dimensional parameter sweep"""

    variable: SweepVariable
    start: float | None = None
    stop: float | None = None
    step: float | None = Field(default=None, gt=0)
    values: list[float] | None = None
    fixed: OperatingPoint = Field(default_factory=OperatingPoint)
    curves: list[Curve] = Field(min_length=1)
    labels: list[str] | None = None
    series: SeriesConfig = Field(default_factory=SeriesConfig)
    mc: McConfig | None = None

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepSpec":
        grid = self.grid()
        if not grid:
            raise ValueError("sweep grid is empty")
        if not all(np.isfinite(x) for x in grid):
            raise ValueError("sweep grid must be finite")
        if self.variable in (SweepVariable.Q, SweepVariable.G0, SweepVariable.ALPHA_SQ):
            if min(grid) < 0.0 or max(grid) > 1.0:
                raise ValueError(f"{self.variable.value} grid must lie in [0, 1]")
        if self.labels is not None and len(self.labels) != len(self.curves):
            raise ValueError("labels must match curves one to one")
        return self

    def grid(self) -> list[float]:
        """Explicit values, or the inclusive start/stop/step range."""
        if self.values is not None:
            return [float(v) for v in self.values]
        if self.start is None or self.stop is None or self.step is None:
            return []
        if self.stop < self.start:
            return []
        count = int(round((self.stop - self.start) / self.step)) + 1
        return [float(v) for v in np.round(self.start + self.step * np.arange(count), 12)]


class SweepColumn(BaseModel):
    """One output column; None marks a point where the curve is undefined"""

    name: str
    values: list[float | None]


class SweepTable(BaseModel):
    """Evaluated sweep: x grid plus one column per curve (and MC overlays)"""

    variable: SweepVariable
    x: list[float]
    columns: list[SweepColumn]
    units: Literal["nats", "bits"] = "nats"
    meta: dict[str, Any] = Field(default_factory=dict)


class FigureId(str, Enum):
    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"
    FIG5 = "fig5"
    FIG7 = "fig7"


class FigureSpec(BaseModel):
    """A figure to reproduce, with optional overrides and Monte-Carlo overlay"""

    id: FigureId
    overrides: dict[str, float] = Field(default_factory=dict)
    mc: McConfig | None = None
    series: SeriesConfig = Field(default_factory=SeriesConfig)


# ============================================================================
# Tool Request / Response Models
# ============================================================================


class Formula(str, Enum):
    """Single-point formulas exposed by `erk rate`"""

    TWO_TAP = "two-tap"
    ONE_TAP = "one-tap"
    MARKOV = "markov"
    UPPER_BOUND = "upper-bound"
    SCP = "scp"
    ICFS = "icfs"
    MCP = "mcp"
    HIGH_SNR = "high-snr"


class RateRequest(BaseModel):
    """Request for a single rate value"""

    formula: Formula
    point: OperatingPoint = Field(default_factory=OperatingPoint)
    scheme: Scheme | None = None
    bits: bool = False
    series: SeriesConfig = Field(default_factory=SeriesConfig)


class SimulateRequest(BaseModel):
    """Request for a Monte-Carlo rate estimate"""

    point: OperatingPoint = Field(default_factory=OperatingPoint)
    taps: list[complex] | None = None
    markov: bool = False
    user_activity: bool = False
    validate_forms: bool = False
    bits: bool = False
    mc: McConfig = Field(default_factory=McConfig)


class RateRecord(BaseModel):
    """JSON record printed by the CLI and returned by the server tools"""

    rate: float
    error_bound: float
    kind: RateKind
    units: Literal["nats", "bits"]
    params: dict[str, Any]
    meta: dict[str, Any] = Field(default_factory=dict)


class CheckResult(BaseModel):
    """Outcome of one validation identity"""

    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    cases: int
    seconds: float = 0.0


class ValidationReport(BaseModel):
    level: Literal["quick", "full"]
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
