"""
Report files: the JSON report document, CSV tables and plot artifacts.

Output holds no timestamps or absolute paths, so re-running a command with
the same inputs and seed reproduces every file byte for byte.
"""

import hashlib
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from common import SCHEMA_VERSION, TOOL_VERSION
from common.logger import get_logger
from common.models import ExperimentReport, PlotArtifact, ReportDocument

logger = get_logger(__name__)

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMAT_SVG = "svg"
OUTPUT_FORMATS = (FORMAT_JSON, FORMAT_CSV, FORMAT_SVG)

REPORT_FILE = "report.json"
METRICS_FILE = "metrics.csv"
COMPARISONS_FILE = "comparisons.csv"


def input_record(path: str | Path) -> dict[str, str]:
    """Input file as given on the command line, with its sha256 digest."""
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return {"path": str(path), "sha256": digest}


def _plain(value: Any) -> Any:
    """json default hook for numpy scalars and arrays."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def report_to_dict(doc: ReportDocument) -> dict[str, Any]:
    """Versioned report mapping; empty sections are left out."""
    data: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "command": doc.command,
        "inputs": doc.inputs,
        "settings": doc.settings,
    }
    for key in ("metrics", "comparisons", "profiles", "ranks", "experiments"):
        section = getattr(doc, key)
        if section:
            data[key] = section
    return data


def dumps_report(doc: ReportDocument) -> str:
    return json.dumps(report_to_dict(doc), indent=2, allow_nan=False, default=_plain) + "\n"


def metrics_table(doc: ReportDocument) -> pd.DataFrame:
    rows = [
        {"algorithm": algorithm, "metric": metric, **estimate}
        for algorithm, metrics in doc.metrics.items()
        for metric, estimate in metrics.items()
    ]
    return pd.DataFrame(rows)


def experiment_table(report: ExperimentReport) -> pd.DataFrame:
    return pd.DataFrame(report.rows if report.rows else [report.summary])


def _write_text(path: Path, text: str) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.debug(f"Wrote {path}")
    return path


def _write_csv(path: Path, table: pd.DataFrame) -> Path:
    return _write_text(path, table.to_csv(index=False, lineterminator="\n"))


def write_report(
    doc: ReportDocument,
    out_dir: str | Path,
    formats: Iterable[str] = OUTPUT_FORMATS,
    artifacts: Sequence[PlotArtifact] = (),
    experiments: Sequence[ExperimentReport] = (),
) -> list[Path]:
    """
    Write a report and its artifacts into ``out_dir``.

    json writes report.json. csv writes the metric and comparison tables and
    one table per experiment. svg writes every plot with its CSV sidecar.

    Returns:
        Paths written, in writing order
    """
    formats = set(formats)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if FORMAT_JSON in formats:
        written.append(_write_text(out / REPORT_FILE, dumps_report(doc)))

    if FORMAT_CSV in formats:
        if doc.metrics:
            written.append(_write_csv(out / METRICS_FILE, metrics_table(doc)))
        if doc.comparisons:
            written.append(_write_csv(out / COMPARISONS_FILE, pd.DataFrame(doc.comparisons)))
        for report in experiments:
            written.append(_write_csv(out / f"{report.name}.csv", experiment_table(report)))

    for artifact in artifacts:
        if FORMAT_SVG in formats:
            written.append(_write_text(out / f"{artifact.name}.svg", artifact.svg))
        if FORMAT_SVG in formats or FORMAT_CSV in formats:
            written.append(_write_text(out / f"{artifact.name}.csv", artifact.csv))

    logger.info(f"Wrote {len(written)} file(s) to {out}")
    return written
