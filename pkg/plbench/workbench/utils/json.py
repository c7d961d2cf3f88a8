"""orjson wrapper with stdlib fallback and canonical float rounding."""

from __future__ import annotations

import json as std_json
import math
from typing import Any

try:
    import orjson  # type: ignore
except ImportError:  # pragma: no cover
    orjson = None


FLOAT_DIGITS = 12


def canonical_float(value: float) -> float | str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return 0.0
    return float(f"{value:.{FLOAT_DIGITS}g}")


def canonicalize(obj: Any) -> Any:
    """Round floats and normalize containers so dumps are platform independent."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return canonical_float(obj)
    if isinstance(obj, complex):
        return [canonical_float(obj.real), canonical_float(obj.imag)]
    if isinstance(obj, dict):
        return {str(key): canonicalize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(item) for item in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return canonicalize(obj.item())
    if hasattr(obj, "tolist"):
        return canonicalize(obj.tolist())
    return str(obj)


def loads(data: bytes | str) -> Any:
    if orjson:
        return orjson.loads(data)
    if isinstance(data, bytes):
        return std_json.loads(data.decode("utf-8"))
    return std_json.loads(data)


def dumps(obj: Any, *, pretty: bool = False) -> bytes:
    payload = canonicalize(obj)
    if orjson:
        option = orjson.OPT_SORT_KEYS
        if pretty:
            option |= orjson.OPT_INDENT_2
        return orjson.dumps(payload, option=option)
    if pretty:
        return std_json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False).encode("utf-8")
    return std_json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
