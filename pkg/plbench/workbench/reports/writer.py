"""
Report files.

The report embeds the manifest without wall time so that identical inputs
give identical bytes; the full manifest goes to `<report>.manifest.json`.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

from plbench.workbench.reports.manifest import RunManifest
from plbench.workbench.utils import json
from plbench.workbench.utils.digests import compute_sha256

logger = logging.getLogger(__name__)


def render_report(payload: dict[str, Any], manifest: RunManifest) -> bytes:
    document = {"manifest": manifest.as_dict(include_wall_time=False), "report": payload}
    return json.dumps(document, pretty=True) + b"\n"


def manifest_path(report_path: Path) -> Path:
    return report_path.with_name(report_path.name + ".manifest.json")


def write_report(path: Path, payload: dict[str, Any], manifest: RunManifest) -> str:
    """Write the report and its manifest sidecar; returns the report's sha256."""
    path.parent.mkdir(parents=True, exist_ok=True)
    data = render_report(payload, manifest)
    path.write_bytes(data)
    digest = compute_sha256(data)
    sidecar = manifest.as_dict()
    sidecar["report_sha256"] = digest
    manifest_path(path).write_bytes(json.dumps(sidecar, pretty=True) + b"\n")
    logger.info("wrote %s (%s)", path, digest[:12])
    return digest


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    return path


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return json.canonical_float(value)
    return "" if value is None else value
