"""
Report writers.

JSON uses sorted keys and two-space indents with exact fractions as
``p/q``; CSV has a fixed column order. Without timings both are pure
functions of the inputs.
"""

import csv
import io
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

logger = logging.getLogger(__name__)


def _default(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serialisable")


def _finite(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, dict):
        return {str(k): _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def to_json(data) -> str:
    return json.dumps(_finite(data), indent=2, sort_keys=True, default=_default) + "\n"


def to_csv(rows: Iterable[Dict[str, object]], columns: Sequence[str],
           precision: Optional[int] = None) -> str:
    """Rows as CSV with ``columns`` in order; floats rounded to ``precision``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = []
        for column in columns:
            value = row.get(column, "")
            if isinstance(value, Fraction):
                value = f"{value.numerator}/{value.denominator}"
            elif isinstance(value, float) and precision is not None:
                value = round(value, precision)
            elif value is None:
                value = ""
            values.append(value)
        writer.writerow(values)
    return buffer.getvalue()


def write_text(text: str, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        f.write(text)
    logger.debug("Wrote %d bytes to %s", len(text), path)
    return path


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return value


def verify_rows(reports: Sequence) -> List[Dict[str, object]]:
    """Flat per-check rows of verification reports."""
    rows = []
    for report in reports:
        for item in report.items:
            data = item.to_dict()
            rows.append({
                "family": report.family,
                "variant": report.variant,
                "n": report.n,
                "check": data["name"],
                "passed": data["passed"],
                "value": _cell(data["value"]),
                "expected": data["expected"],
                "detail": data["detail"],
            })
    return rows


VERIFY_COLUMNS = ["family", "variant", "n", "check", "passed", "value", "expected", "detail"]
