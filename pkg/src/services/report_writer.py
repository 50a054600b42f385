"""
Canonical JSON output for reports and sidecars
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_DIGITS = 10


def canonicalize(value: Any) -> Any:
    """Round floats, unwrap numpy scalars and arrays, stringify paths"""
    if isinstance(value, dict):
        return {str(k): canonicalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonicalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [canonicalize(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round(float(value), FLOAT_DIGITS)
    if isinstance(value, Path):
        return str(value)
    return value


def to_canonical_json(payload: Any) -> str:
    """Sorted keys, fixed float precision, two-space indent"""
    return json.dumps(canonicalize(payload), sort_keys=True, indent=2)


def write_report(payload: Any, out: Optional[Union[str, Path]] = None) -> str:
    """
    Write a report to a file, or to stdout when no path is given.

    Returns:
        The JSON text that was written
    """
    text = to_canonical_json(payload)
    if out is None:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {out}")
    return text
