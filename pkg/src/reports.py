"""
Report Emitters
JSON, CSV and text renderings of energy reports, witness certificates and
check summaries. Floats carry 12 significant digits; solver noise below 1e-12
prints as 0.
"""

import json
import sys

import pandas as pd

SIGNIFICANT_DIGITS = 12
ZERO_FLOOR = 1e-12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def clean_float(x):
    if abs(x) < ZERO_FLOOR:
        return 0.0
    return float(FLOAT_FORMAT % x)


def _clean(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return clean_float(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _record(obj):
    return obj if isinstance(obj, dict) else obj.as_record()


def _is_summary(obj):
    return hasattr(obj, "summary_line")


def _to_json(obj):
    payload = [_record(o) for o in obj] if isinstance(obj, list) else _record(obj)
    return json.dumps(_clean(payload), indent=4, ensure_ascii=False) + "\n"


def _to_csv(obj):
    if _is_summary(obj):
        df = pd.DataFrame(obj.rows, columns=["id", "ok", "detail"])
    else:
        records = [_record(o) for o in obj] if isinstance(obj, list) else [_record(obj)]
        flat = [{k: v for k, v in r.items() if not isinstance(v, (list, tuple, dict))} for r in records]
        df = pd.DataFrame([_clean(r) for r in flat])
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _to_text(obj):
    if _is_summary(obj):
        lines = [obj.summary_line()]
        if obj.tally:
            lines.append("routes: " + ", ".join(f"{tag}={count}" for tag, count in sorted(obj.tally.items())))
        lines += [f"  FAIL {f.id}: {f.detail}" for f in obj.failures]
        return "\n".join(lines) + "\n"

    blocks = []
    for record in obj if isinstance(obj, list) else [obj]:
        lines = []
        for key, value in _clean(_record(record)).items():
            if isinstance(value, list):
                value = ", ".join(str(v) for v in value)
            lines.append(f"{key}: {value}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


RENDERERS = {"json": _to_json, "csv": _to_csv, "text": _to_text}


def render_report(obj, fmt="json"):
    if fmt not in RENDERERS:
        raise ValueError(f"unknown report format '{fmt}' (expected {', '.join(RENDERERS)})")
    return RENDERERS[fmt](obj)


def emit_report(obj, fmt="json", stream=None):
    """Write one report (or a list of them) to stream, stdout by default."""
    text = render_report(obj, fmt)
    (stream or sys.stdout).write(text)
    return text
