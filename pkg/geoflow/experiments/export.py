"""
实验输出

JSON reports carry ``"schema": 1``, the experiment name, the fully resolved
config and the verdict. Keys are sorted and no wall-clock data is written, so
a fixed config and seed give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from geoflow.experiments.config import ExperimentConfig

SCHEMA_VERSION = 1

CSV_SCHEMAS: dict[str, tuple[str, ...]] = {
    "integrate": ("t", "u", "v", "du", "dv", "drift"),
    "section": ("s", "theta", "s_next", "theta_next", "return_time"),
    "oracle-check": ("t", "u", "v", "du", "dv", "error"),
    "recur": ("n", "sup_displacement"),
    "distal": ("pair", "inf_estimate", "time"),
}


@dataclass
class ExperimentResult:
    """一次实验的结果

    ``payload`` goes into the JSON body; ``rows`` feed the CSV output when the
    experiment has a CSV schema.
    """

    experiment: str
    summary: str
    verdict: str | None = None
    payload: dict[str, Any] = field(default_factory=dict)
    rows: list[tuple] = field(default_factory=list)


def _clean(value: Any) -> Any:
    """Non-finite floats become null so the JSON stays standard."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    item = getattr(value, "item", None)
    if callable(item):
        return _clean(item())
    return value


def report_document(result: ExperimentResult, config: ExperimentConfig) -> dict[str, Any]:
    return _clean(
        {
            "schema": SCHEMA_VERSION,
            "experiment": result.experiment,
            "config": config.model_dump(mode="json"),
            "verdict": result.verdict,
            "summary": result.summary,
            **result.payload,
        }
    )


def write_json(path: str | Path, result: ExperimentResult, config: ExperimentConfig) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report_document(result, config), ensure_ascii=False, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def write_csv(path: str | Path, result: ExperimentResult) -> Path:
    """Write ``result.rows`` under the fixed column header of the experiment.

    Raises:
        KeyError: the experiment has no CSV schema
    """
    columns = CSV_SCHEMAS[result.experiment]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in result.rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return path
