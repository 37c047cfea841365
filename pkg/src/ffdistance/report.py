"""CSV / JSON emission of analysis rows."""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable, TextIO

from .mattila import REPORT_FIELDS


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def write_csv(rows: Iterable[dict], fh: TextIO, fields=REPORT_FIELDS) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_csv_cell(row[k]) for k in fields])


def write_json(rows, fh: TextIO) -> None:
    if isinstance(rows, dict):
        payload = {k: _json_value(v) for k, v in rows.items()}
    else:
        payload = [{k: _json_value(v) for k, v in r.items()} for r in rows]
    json.dump(payload, fh, indent=2)
    fh.write("\n")
