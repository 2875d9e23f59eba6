"""
Figure reproduction - sweep definitions and CSV/SVG artifacts per figure

Each figure is one or more sweeps over a shared grid. The defaults are the
published operating points; SNR values are read as dB and the CSV header
says so.
"""

import logging
from pathlib import Path

from erasure_rate_kit.cellular import scp_icfs_crossover
from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.models import (
    Curve,
    FigureId,
    FigureSpec,
    OperatingPoint,
    SweepSpec,
    SweepTable,
    SweepVariable,
)
from erasure_rate_kit.output import write_sweep_csv, write_text
from erasure_rate_kit.svg_chart import ChartSeries, LineChart, render_line_chart
from erasure_rate_kit.sweeps import derive_seed, run_sweep

logger = logging.getLogger(__name__)

FIG2_SNR_DB = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
FIG3_Q = (0.0, 0.05, 0.1, 0.2, 0.3, 0.4)

_GRIDS: dict[FigureId, tuple[SweepVariable, float, float, float]] = {
    FigureId.FIG2: (SweepVariable.Q, 0.0, 1.0, 0.05),
    FigureId.FIG3: (SweepVariable.SNR_DB, 0.0, 30.0, 1.0),
    FigureId.FIG4: (SweepVariable.G0, 0.0, 1.0, 0.01),
    FigureId.FIG5: (SweepVariable.Q, 0.0, 1.0, 0.01),
    FigureId.FIG7: (SweepVariable.Q, 0.0, 0.95, 0.01),
}

_GRID_KEYS = {"start", "stop", "step"}
_ALLOWED: dict[FigureId, set[str]] = {
    FigureId.FIG2: {"g0", "g1", "snr_db"} | _GRID_KEYS,
    FigureId.FIG3: {"g0", "g1"} | _GRID_KEYS,
    FigureId.FIG4: {"snr_db"} | _GRID_KEYS,
    FigureId.FIG5: {"alpha_sq", "snr_db"} | _GRID_KEYS,
    FigureId.FIG7: {"alpha_sq", "snr_db"} | _GRID_KEYS,
}

_X_LABELS = {
    SweepVariable.Q: "erasure probability q",
    SweepVariable.SNR_DB: "P [dB]",
    SweepVariable.G0: "|h0|^2 (|h1|^2 = 1 - |h0|^2)",
    SweepVariable.ALPHA_SQ: "alpha^2",
}

_TITLES = {
    FigureId.FIG2: "Two-tap input-erasure channel rate vs. erasure probability",
    FigureId.FIG3: "Two-tap input-erasure channel rate vs. SNR",
    FigureId.FIG4: "Rate vs. tap balance at unit filter gain",
    FigureId.FIG5: "Cellular uplink: MCP, SCP and ICFS under shadowing",
    FigureId.FIG7: "Cellular uplink: throughput per active user",
}


def _check_overrides(spec: FigureSpec) -> dict[str, float]:
    unknown = set(spec.overrides) - _ALLOWED[spec.id]
    if unknown:
        raise ParameterError(
            f"{spec.id.value} does not accept override(s) {sorted(unknown)}; "
            f"allowed: {sorted(_ALLOWED[spec.id])}"
        )
    return spec.overrides


def _sweep(
    spec: FigureSpec,
    fixed: OperatingPoint,
    curves: list[Curve],
    labels: list[str],
    stream: int,
) -> SweepSpec:
    variable, start, stop, step = _GRIDS[spec.id]
    ov = spec.overrides
    mc = None
    if spec.mc is not None:
        mc = spec.mc.model_copy(update={"seed": derive_seed(spec.mc.seed, stream)})
    return SweepSpec(
        variable=variable,
        start=ov.get("start", start),
        stop=ov.get("stop", stop),
        step=ov.get("step", step),
        fixed=fixed,
        curves=curves,
        labels=labels,
        series=spec.series,
        mc=mc,
    )


def figure_sweeps(spec: FigureSpec) -> list[SweepSpec]:
    """The sweeps that make up one figure, in legend order."""
    ov = _check_overrides(spec)
    g0, g1 = ov.get("g0", 0.8), ov.get("g1", 0.2)

    match spec.id:
        case FigureId.FIG2:
            powers = (ov["snr_db"],) if "snr_db" in ov else FIG2_SNR_DB
            return [
                _sweep(
                    spec,
                    OperatingPoint(g0=g0, g1=g1, snr=p),
                    [Curve.TWO_TAP],
                    [f"P={p:g} dB"],
                    i,
                )
                for i, p in enumerate(powers)
            ]
        case FigureId.FIG3 | FigureId.FIG4:
            snr = ov.get("snr_db", 10.0)
            sweeps = []
            for i, q in enumerate(FIG3_Q):
                point = OperatingPoint(g0=g0, g1=g1, snr=snr, q=q)
                if q == 0.0:
                    curve, label = Curve.UPPER_BOUND, "q=0 (upper bound)"
                else:
                    curve, label = Curve.TWO_TAP, f"q={q:g}"
                sweeps.append(_sweep(spec, point, [curve], [label], i))
            return sweeps
        case FigureId.FIG5:
            point = OperatingPoint(
                alpha_sq=ov.get("alpha_sq", 0.5), snr=ov.get("snr_db", 14.0)
            )
            return [
                _sweep(
                    spec, point, [Curve.MCP, Curve.SCP, Curve.ICFS], ["MCP", "SCP", "ICFS"], 0
                )
            ]
        case FigureId.FIG7:
            point = OperatingPoint(
                alpha_sq=ov.get("alpha_sq", 0.5), snr=ov.get("snr_db", 14.0)
            )
            return [
                _sweep(
                    spec,
                    point,
                    [Curve.MCP_THROUGHPUT, Curve.SCP_THROUGHPUT, Curve.ICFS_THROUGHPUT],
                    ["MCP", "SCP", "ICFS"],
                    0,
                )
            ]
    raise ParameterError(f"unknown figure {spec.id}")


def _stamp(spec: FigureSpec, sweeps: list[SweepSpec], bits: bool) -> str:
    fixed = sweeps[0].fixed
    parts: list[str] = []
    if spec.id in (FigureId.FIG2, FigureId.FIG3):
        parts.append(f"g0={fixed.g0:g}, g1={fixed.g1:g}")
    if spec.id is FigureId.FIG4:
        parts.append(f"P={fixed.snr:g} dB")
    if spec.id in (FigureId.FIG5, FigureId.FIG7):
        parts.append(f"alpha^2={fixed.alpha_sq:g}, P={fixed.snr:g} dB")
        crossover = scp_icfs_crossover(fixed.alpha_sq, fixed.snr_linear)
        if spec.id is FigureId.FIG5 and crossover is not None:
            parts.append(f"SCP/ICFS crossover q*={crossover:.6f}")
    parts.append("P in dB (assumed)")
    parts.append("bits" if bits else "nats")
    if spec.mc is not None:
        parts.append(
            f"MC: N={spec.mc.block_size}, {spec.mc.trials} trials, seed={spec.mc.seed}"
        )
    return "; ".join(parts)


def build_figure(spec: FigureSpec, bits: bool = False) -> tuple[SweepTable, LineChart]:
    """Evaluate a figure's sweeps into one table and its chart."""
    sweeps = figure_sweeps(spec)
    tables = [run_sweep(s, bits=bits) for s in sweeps]
    table = SweepTable(
        variable=tables[0].variable,
        x=tables[0].x,
        columns=[c for t in tables for c in t.columns],
        units="bits" if bits else "nats",
        meta={"snr_in_db": True, "figure": spec.id.value},
    )
    unit = "bits" if bits else "nats"
    y_label = (
        f"throughput per active user [{unit}/channel use]"
        if spec.id is FigureId.FIG7
        else f"rate [{unit}/channel use]"
    )
    chart = LineChart(
        title=_TITLES[spec.id],
        x_label=_X_LABELS[table.variable],
        y_label=y_label,
        series=chart_series(table),
        stamp=_stamp(spec, sweeps, bits),
    )
    return table, chart


def chart_series(table: SweepTable) -> list[ChartSeries]:
    """Lines for analytic columns, markers with 3-sigma bars for Monte-Carlo columns."""
    by_name = {c.name: c for c in table.columns}
    series: list[ChartSeries] = []
    color = -1
    for column in table.columns:
        if column.name.endswith(" [mc stderr]"):
            continue
        if column.name.endswith(" [mc]"):
            stderr = by_name.get(column.name.replace(" [mc]", " [mc stderr]"))
            errors = (
                [None if e is None else 3.0 * e for e in stderr.values]
                if stderr is not None
                else None
            )
            series.append(
                ChartSeries(
                    label=column.name,
                    x=table.x,
                    y=column.values,
                    errors=errors,
                    markers_only=True,
                    color_index=color,
                )
            )
            continue
        color += 1
        series.append(
            ChartSeries(label=column.name, x=table.x, y=column.values, color_index=color)
        )
    return series


def write_figure(
    spec: FigureSpec, out_dir: Path, bits: bool = False
) -> tuple[Path, Path]:
    """
    Write <id>.csv and <id>.svg into `out_dir`.

    Raises:
        ParameterError: For overrides the figure does not accept
        OSError: If an artifact cannot be written
    """
    table, chart = build_figure(spec, bits=bits)
    csv_path = write_sweep_csv(table, out_dir / f"{spec.id.value}.csv")
    svg_path = write_text(out_dir / f"{spec.id.value}.svg", render_line_chart(chart))
    logger.info("figure %s written to %s", spec.id.value, out_dir)
    return csv_path, svg_path
