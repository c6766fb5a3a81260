# src/besselpairs/utils/validators.py

import math
from typing import Optional

from besselpairs.utils.exceptions import ParamError


def require_dimension(n: int, minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise ParamError(f"dimension n must be an integer >= {minimum}", "n", n)
    return int(n)


def require_positive(value: float, name: str) -> float:
    if value is None or not (math.isfinite(value) and value > 0.0):
        raise ParamError(f"{name} must be finite and > 0", name, value)
    return float(value)


def require_finite(value: float, name: str) -> float:
    if value is None or not math.isfinite(value):
        raise ParamError(f"{name} must be finite", name, value)
    return float(value)


def require_mode(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ParamError("mode index k must be an integer >= 0", "k", k)
    return int(k)


def optional_positive(value: Optional[float], name: str) -> Optional[float]:
    """None passes through so module defaults apply."""
    return None if value is None else require_positive(value, name)
