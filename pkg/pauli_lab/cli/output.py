# cli/output.py
"""Rendering of report envelopes as JSON (canonical), CSV (spectra and check tables) or text."""
import csv
import io
import json
import logging
import os
import sys
from typing import Any, Dict, Optional

from ..core.errors import ContractError
from ..models.reports import ReportEnvelope, SpectrumReport

logger = logging.getLogger(__name__)


def _csv(env: ReportEnvelope) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    payload = env.payload
    if env.report == "spectrum":
        writer.writerow(["eigenvalue", "multiplicity"])
        for value, mult in SpectrumReport(**payload).multiplicities():
            writer.writerow([f"{value:g}", mult])
    elif env.report == "verify":
        writer.writerow(["suite", "name", "status", "note"])
        for check in payload["checks"]:
            writer.writerow([check["suite"], check["name"], check["status"], check.get("note") or ""])
    else:
        logger.error(f"CSV requested for a {env.report} report")
        raise ContractError(f"CSV output is available for spectrum and verify reports, not {env.report}")
    return buffer.getvalue()


def _scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _text(env: ReportEnvelope) -> str:
    lines = [f"{env.report} (pauli_lab {env.version})"]
    payload: Dict[str, Any] = env.payload
    if env.report == "verify":
        for check in payload["checks"]:
            note = f"  # {check['note']}" if check.get("note") else ""
            lines.append(f"  [{check['status']}] {check['suite']}/{check['name']}{note}")
        return "\n".join(lines) + "\n"
    for key, value in payload.items():
        if _scalar(value):
            lines.append(f"  {key}: {value}")
        elif isinstance(value, dict) and all(_scalar(v) for v in value.values()):
            lines.append(f"  {key}:")
            lines.extend(f"    {k}: {v}" for k, v in value.items())
        elif isinstance(value, list):
            lines.append(f"  {key}: [{len(value)} entries]")
    return "\n".join(lines) + "\n"


def render(env: ReportEnvelope, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(env.model_dump(mode="json"), indent=2) + "\n"
    if fmt == "csv":
        return _csv(env)
    if fmt == "text":
        return _text(env)
    raise ContractError(f"unknown output format {fmt!r}")


def emit(env: ReportEnvelope, fmt: str, out: Optional[str] = None) -> None:
    text = render(env, fmt)
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {env.report} report to {out}")
    else:
        sys.stdout.write(text)
