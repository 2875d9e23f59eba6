"""
Output writers - CSV tables and JSON records

CSV: comma separator, '.' decimal point, LF line endings, 12 significant
digits, and a leading '#' line carrying the tool version and units. Empty
cells mark points where a curve is undefined.
"""

import csv
import io
import logging
from pathlib import Path

from pydantic import BaseModel

from erasure_rate_kit._version import __version__
from erasure_rate_kit.models import SweepTable

logger = logging.getLogger(__name__)

SNR_DB_ASSUMED = "dB (assumed)"
SNR_LINEAR = "linear"


def format_number(value: float | None) -> str:
    if value is None:
        return ""
    text = f"{value:.12g}"
    return "0" if text == "-0" else text


def snr_interpretation(in_db: bool) -> str:
    return SNR_DB_ASSUMED if in_db else SNR_LINEAR


def sweep_csv(table: SweepTable) -> str:
    """Render a sweep table as CSV text."""
    buffer = io.StringIO()
    snr = snr_interpretation(bool(table.meta.get("snr_in_db", True)))
    buffer.write(f"# erk {__version__}; units={table.units}; snr={snr}\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([table.variable.value, *(c.name for c in table.columns)])
    for i, x in enumerate(table.x):
        writer.writerow(
            [format_number(x), *(format_number(c.values[i]) for c in table.columns)]
        )
    return buffer.getvalue()


def record_json(record: BaseModel) -> str:
    return record.model_dump_json(indent=2) + "\n"


def write_text(path: Path, text: str) -> Path:
    """
    Write `text` with LF line endings, creating parent directories.

    Raises:
        OSError: If the file cannot be written (the message names the path)
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e
    logger.debug("wrote %s (%d bytes)", path, len(text))
    return path


def write_sweep_csv(table: SweepTable, path: Path) -> Path:
    return write_text(path, sweep_csv(table))
