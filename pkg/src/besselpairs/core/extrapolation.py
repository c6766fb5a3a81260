# src/besselpairs/core/extrapolation.py

import math
from typing import Sequence


def richardson_limit(step_ratio: float, values: Sequence[float]) -> float:
    """Richardson tableau; values[i + 1] is computed with a step `step_ratio` times finer.

    The error is assumed to expand in powers h, h^2, ... of the step measured
    in units where refining multiplies column m by step_ratio**m.
    """
    n_steps = len(values)

    if n_steps == 1:
        return values[0]

    last_level = list(values)
    this_level = None

    for m in range(1, n_steps):
        this_level = []
        mult = step_ratio ** m
        factor = 1.0 / (mult - 1.0)
        for i in range(n_steps - m):
            low = last_level[i]
            high = last_level[i + 1]
            this_level.append(factor * (mult * high - low))
        last_level = this_level
    return this_level[0]


def first_order_limit(sizes: Sequence[int], values: Sequence[float]) -> float:
    """Extrapolate the two finest values assuming error ~ C / N."""
    n_coarse, n_fine = sizes[-2], sizes[-1]
    v_coarse, v_fine = values[-2], values[-1]
    return (n_fine * v_fine - n_coarse * v_coarse) / (n_fine - n_coarse)


def observed_order(sizes: Sequence[int], values: Sequence[float]) -> float:
    """Convergence order p from the three finest values, error ~ C / N^p."""
    d_coarse = values[-2] - values[-3]
    d_fine = values[-1] - values[-2]
    if d_coarse == 0.0 or d_fine == 0.0 or d_coarse * d_fine < 0:
        return math.nan
    return math.log(abs(d_coarse / d_fine)) / math.log(sizes[-1] / sizes[-2])
