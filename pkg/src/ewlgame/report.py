"""CSV / JSON emission and number formatting shared by the CLI and scripts."""
from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_UP, Decimal


def exact(x: float) -> str:
    """12 significant digits; negative zero prints as 0."""
    x = float(x)
    if x == 0:
        x = 0.0
    return f"{x:.12g}"


def display(x: float, places: int = 1) -> str:
    """Round half away from zero to ``places`` decimals, as the printed tables do."""
    # snap binary noise first so 2.4999999999999996 still reads as 2.5
    d = Decimal(repr(round(float(x), 9)))
    out = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    if out == 0:
        out = abs(out)
    return str(out)


def display_pair(a: float, b: float) -> str:
    return f"({display(a)}, {display(b)})"


def to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if not rows:
        return ""
    columns = columns or list(rows[0])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k, "")) for k in columns})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return exact(v)
    return v


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return v.item()
    return v


def to_json(config: dict, rows: list[dict], **extra) -> str:
    doc = {"config": _jsonable(config), "rows": _jsonable(rows)}
    doc.update(_jsonable(extra))
    return json.dumps(doc, indent=2) + "\n"
