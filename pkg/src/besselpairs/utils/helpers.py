# src/besselpairs/utils/helpers.py

import json
import math
from typing import Any, List

from besselpairs.utils.exceptions import ParamError

TEXT_DIGITS = 12


# -----------------------------
# Number formatting
# -----------------------------
def format_float(value: float, digits: int = TEXT_DIGITS) -> str:
    """Human/CSV rendering with `digits` significant digits."""
    if value is None:
        return ""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def _plain(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    if isinstance(obj, dict):
        return {str(key): _plain(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(item) for item in obj]
    if isinstance(getattr(obj, "value", None), str):  # str-Enums
        return obj.value
    return str(obj)


def _encode(obj: Any) -> str:
    # shortest repr that round-trips; inf and nan are not JSON numbers
    if isinstance(obj, float):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        return repr(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(key)}: {_encode(value)}" for key, value in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(item) for item in obj) + "]"
    return json.dumps(obj)


def render_json(payload: Any) -> str:
    """Serialise floats by repr, so 3.0 stays 3.0 and every value round-trips; inf and nan become strings."""
    return _encode(_plain(payload))


# -----------------------------
# Range parsing
# -----------------------------
def parse_int_range(text: str) -> List[int]:
    """'a..b' -> [a, a+1, ..., b]; a single integer is a one-element range."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            start, stop = int(parts[0]), int(parts[1])
        else:
            raise ValueError(text)
    except ValueError:
        raise ParamError(f"expected an integer range a..b, got {text!r}", "n-range", text)
    if stop < start:
        raise ParamError(f"empty integer range {text!r}", "n-range", text)
    return list(range(start, stop + 1))


def parse_float_range(text: str) -> List[float]:
    """'a..b..step' -> a, a+step, ... up to b inclusive (rounded against drift)."""
    parts = text.split("..")
    try:
        values = [float(part) for part in parts]
    except ValueError:
        raise ParamError(f"expected a range a..b..step, got {text!r}", "m-range", text)
    if len(values) == 1:
        return values
    if len(values) != 3:
        raise ParamError(f"expected a range a..b..step, got {text!r}", "m-range", text)
    start, stop, step = values
    if not step > 0.0 or stop < start:
        raise ParamError(f"range {text!r} needs step > 0 and a <= b", "m-range", text)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def parse_sizes(text: str) -> List[int]:
    """'512,1024,2048' -> [512, 1024, 2048]."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParamError(f"expected comma separated grid sizes, got {text!r}", "N", text)
