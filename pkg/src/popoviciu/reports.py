"""Versioned JSON report envelope shared by all commands."""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

SCHEMA_VERSION = "1.0"
RNG_ALGORITHM = "numpy.random.PCG64"


def _clean(obj):
    # JSON has no inf/nan; map them to null so reports stay valid
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def make_report(command: str, config: dict, seed: int | None, result: dict, passed: bool | None) -> dict:
    from . import __version__

    return _clean({
        "schema_version": SCHEMA_VERSION,
        "tool": "popoviciu",
        "tool_version": __version__,
        "command": command,
        "config": config,
        "rng": {"algorithm": RNG_ALGORITHM, "seed": seed},
        "passed": passed,
        "result": result,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    })


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: dict, out) -> str:
    text = dumps_report(report)
    if out is None or str(out) == "-":
        print(text, end="")
    else:
        Path(out).write_text(text)
    return text


def strip_timestamp(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timestamp"}


def load_schema() -> dict:
    return json.loads(resources.files("popoviciu").joinpath("schemas/report.schema.json").read_text())


def validate_report(report: dict) -> None:
    """Validate against the shipped schema (needs the ``jsonschema`` package)."""
    import jsonschema

    jsonschema.validate(report, load_schema())
