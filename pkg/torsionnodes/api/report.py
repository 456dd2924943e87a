"""
Report emission: JSON documents, CSV plot data and a plain text rendering.

JSON keys are sorted and floats are written with 17 significant digits, so identical runs produce
byte-identical documents. Complex numbers are written as [re, im].
"""
import csv
import io
import json
import math
import sys
from enum import Enum
from typing import Optional
import numpy as np
from torsionnodes.api.result import Result

FORMATS = ("json", "csv", "text")
CSV_HEADER = ("re", "im", "kind")


def to_primitive(obj):
    """
    Converts report content into JSON primitives
    """
    if isinstance(obj, dict):
        return {str(k): to_primitive(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_primitive(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return to_primitive(obj.tolist())
    if hasattr(obj, "to_transport_format"):
        return to_primitive(obj.to_transport_format())
    return obj


def format_float(x: float) -> str:
    """
    Fixed 17-significant-digit text for a float, which reads back to the same double. A ".0" is appended to integral
    values so they stay floats when parsed.
    """
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = "%.17g" % x
    return text if any(c in text for c in ".en") else text + ".0"


def _encode(obj, indent: int, level: int) -> str:
    if isinstance(obj, float):
        return format_float(obj)
    inner = "\n" + " " * (indent * (level + 1))
    outer = "\n" + " " * (indent * level)
    if isinstance(obj, dict) and obj:
        items = ("{0}: {1}".format(json.dumps(key), _encode(obj[key], indent, level + 1)) for key in sorted(obj))
        return "{" + inner + ("," + inner).join(items) + outer + "}"
    if isinstance(obj, list) and obj:
        return "[" + inner + ("," + inner).join(_encode(v, indent, level + 1) for v in obj) + outer + "]"
    return json.dumps(obj)


def to_json(result: Result) -> str:
    """
    Sorted keys, two-space indentation and floats through format_float
    """
    return _encode(to_primitive(result.to_transport_format()), 2, 0) + "\n"


def to_csv(result: Result) -> str:
    """
    Plot data: one "re,im,kind" row per entry of the report's points list
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for re_, im_, kind in result.points:
        writer.writerow((format_float(re_), format_float(im_), kind))
    return buffer.getvalue()


def _flatten(prefix: str, obj, lines: list):
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten("{0}.{1}".format(prefix, key) if prefix else str(key), obj[key], lines)
    elif isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _flatten("{0}[{1}]".format(prefix, i), v, lines)
    else:
        lines.append((prefix, json.dumps(obj)))


def to_text(result: Result) -> str:
    lines = []
    _flatten("", to_primitive(result.to_transport_format()), lines)
    width = max((len(k) for k, _ in lines), default=0)
    return "".join("{0}  {1}\n".format(k.ljust(width), v) for k, v in lines)


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return to_json(result)
    if fmt == "csv":
        return to_csv(result)
    if fmt == "text":
        return to_text(result)
    raise ValueError("Unknown report format {0}".format(fmt))


def write_report(result: Result, fmt: str = "json", out: Optional[str] = None):
    """
    Writes the rendered report to the file named by out, or to stdout
    """
    text = render(result, fmt)
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w") as stream:
            stream.write(text)
