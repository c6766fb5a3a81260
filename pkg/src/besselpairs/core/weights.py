# src/besselpairs/core/weights.py

import math
import warnings
from typing import Callable, Optional

import numpy as np

from besselpairs.config.settings import settings
from besselpairs.core.extrapolation import richardson_limit
from besselpairs.core.potentials import Constant, Potential
from besselpairs.core.quadrature import index_samples, integrate_log
from besselpairs.core.sturm import prufer_shoot
from besselpairs.models.enums import CriterionClass
from besselpairs.models.schemas import (
    BesselPairSpec,
    CriterionReport,
    IntegralConditionReport,
    WeightEstimate,
)
from besselpairs.utils.exceptions import NoLimitWarning, ParamError, QuadratureError
from besselpairs.utils.logger import get_logger

log = get_logger(__name__)

ZERO_GRID = range(4, 49)  # r = R 2^{-j}
ZERO_AVERAGED = 8
INFINITY_LEVELS = 40  # r = d 2^j
INFINITY_SPREAD = 1e-3


# -----------------------------
# Weights by bisection
# -----------------------------
def weight_pair(
    V: Potential,
    W: Potential,
    n: int,
    R: float,
    tol: Optional[float] = None,
    eps: Optional[float] = None,
    shoot_tol: Optional[float] = None,
    cap_exponent: Optional[int] = None,
) -> WeightEstimate:
    """beta(V, W; R) = sup{c : (B_{V,cW}) has a positive solution on (0, R)}."""
    tol = settings.weight_tol if tol is None else tol
    cap_exponent = settings.weight_cap_exponent if cap_exponent is None else cap_exponent
    if not tol > 0.0:
        raise ParamError("tol must be > 0", "tol", tol)
    cap = 2.0 ** cap_exponent

    pair = BesselPairSpec(V=V, W=W, n=n, R=R, c=0.0)
    if W.is_zero():
        log.info("weight_infinite", reason="W identically zero")
        return WeightEstimate(lower=cap, upper=math.inf, value=math.inf, infinite=True, cap=cap)

    def shoot(c: float):
        # a zero at R to working precision counts as positive
        return prufer_shoot(pair.with_coupling(c), eps=eps, tol=shoot_tol, boundary_policy="positive")

    lower, upper = 0.0, 1.0
    lower_report, upper_report = shoot(lower), shoot(upper)
    iterations = 2
    while upper_report.positive_on_interval:
        lower, lower_report = upper, upper_report
        upper *= 2.0
        if upper > cap:
            log.info("weight_infinite", reason="no zero below cap", cap=cap)
            return WeightEstimate(
                lower=lower,
                upper=math.inf,
                value=math.inf,
                iterations=iterations,
                reports=[lower_report],
                infinite=True,
                cap=cap,
            )
        upper_report = shoot(upper)
        iterations += 1

    while upper - lower > tol:
        middle = 0.5 * (lower + upper)
        report = shoot(middle)
        iterations += 1
        if report.positive_on_interval:
            lower, lower_report = middle, report
        else:
            upper, upper_report = middle, report

    log.info("weight_bracket", lower=lower, upper=upper, iterations=iterations, n=n, R=R)
    return WeightEstimate(
        lower=lower,
        upper=upper,
        value=0.5 * (lower + upper),
        iterations=iterations,
        reports=[lower_report, upper_report],
        cap=cap,
    )


def weight_potential(
    W: Potential,
    R: float,
    tol: Optional[float] = None,
    eps: Optional[float] = None,
    shoot_tol: Optional[float] = None,
) -> WeightEstimate:
    """beta(W; R) for (B_{cW}): y'' + y'/r + c W y = 0."""
    return weight_pair(Constant(level=1.0), W, 2, R, tol=tol, eps=eps, shoot_tol=shoot_tol)


# -----------------------------
# Integral criteria
# -----------------------------
def _classify(limit: float, margin: float) -> CriterionClass:
    if limit < 0.25 - margin:
        return CriterionClass.SUFFICIENT_BELOW_QUARTER
    if limit > 0.25 + margin:
        return CriterionClass.NECESSARY_FAIL_ABOVE_QUARTER
    return CriterionClass.INCONCLUSIVE


def criterion_at_zero(
    V: Potential,
    W: Potential,
    n: int,
    R: float,
    margin: Optional[float] = None,
) -> CriterionReport:
    """Phi(r) = r^{2(n-1)} V W (int_r^R 1/(tau^{n-1} V))^2 as r -> 0.

    When the flux integral converges at 0 the inner integral int_0^r is used.
    """
    margin = settings.criterion_margin if margin is None else margin
    BesselPairSpec(V=V, W=W, n=n, R=R)
    radii = R * 2.0 ** -np.array(ZERO_GRID, dtype=float)

    phi = index_samples(V, W, n, R, radii)
    if not np.all(np.isfinite(phi)):
        raise QuadratureError("criterion samples are not finite", lower=float(radii[-1]), upper=R)

    limit = float(np.mean(phi[-ZERO_AVERAGED:]))
    report = CriterionReport(
        limit_estimate=limit,
        classification=_classify(limit, margin),
        samples=list(zip(radii.tolist(), phi.tolist())),
        margin=margin,
    )
    log.info("criterion_at_zero", limit=limit, classification=report.classification.value)
    return report


def criterion_at_infinity(
    a_fn: Callable[[float], float],
    b_fn: Callable[[float], float],
    d: float,
    levels: int = INFINITY_LEVELS,
) -> float:
    """L = lim a(r) b(r) (int_r^inf 1/a)^2 as r -> inf."""
    if not d > 0.0:
        raise ParamError("lower endpoint d must be > 0", "d", d)
    radii = d * 2.0 ** np.arange(levels + 1, dtype=float)
    b_values = np.array([b_fn(float(r)) for r in radii])
    if np.all(b_values == 0.0):
        return 0.0

    pieces = np.array(
        [integrate_log(lambda tau: -math.log(a_fn(tau)), lo, hi) for lo, hi in zip(radii[:-1], radii[1:])]
    )
    ratio = pieces[-1] / pieces[-2]
    if not ratio < 1.0:
        raise QuadratureError(
            f"int 1/a does not converge at infinity (piece ratio {ratio:.6g})",
            lower=float(radii[-2]),
            upper=math.inf,
        )
    tail = pieces[-1] * ratio / (1.0 - ratio)
    tails = np.cumsum(pieces[::-1])[::-1] + tail

    a_values = np.array([a_fn(float(r)) for r in radii[:-1]])
    samples = a_values * b_values[:-1] * tails ** 2
    last = samples[-4:]
    spread = float(np.max(last) - np.min(last))
    if spread > INFINITY_SPREAD:
        log.warning("no_limit", spread=spread)
        warnings.warn(f"criterion samples spread {spread:.3g} at infinity", NoLimitWarning, stacklevel=2)
    limit = float(richardson_limit(2.0, list(last)))
    log.info("criterion_at_infinity", limit=limit, spread=spread)
    return limit


def integral_condition_at_zero(W: Potential, R: float, levels: int = 48) -> IntegralConditionReport:
    """liminf_{r -> 0} ln(r) int_0^r s W(s) ds > -inf, sampled at r = R 2^{-j}."""
    radii = R * 2.0 ** -np.arange(levels + 1, dtype=float)
    pieces = np.array(
        [
            integrate_log(lambda s: math.log(s) + W.log_value(s), lo, hi)
            for hi, lo in zip(radii[:-1], radii[1:])
        ]
    )
    if pieces[-2] == 0.0:
        return IntegralConditionReport(samples=[], bounded=True, minimum=0.0)
    unbounded = IntegralConditionReport(samples=[], bounded=False, minimum=-math.inf)
    if pieces[-1] >= (1.0 - 1e-3) * pieces[-2]:
        return unbounded

    # int_0^{r_j} = pieces below r_j plus the innermost integral
    try:
        tail = integrate_log(lambda s: math.log(s) + W.log_value(s), 0.0, float(radii[-1]))
    except QuadratureError:
        log.info("integral_condition_divergent", radius=float(radii[-1]))
        return unbounded
    inner = np.cumsum(pieces[::-1])[::-1] + tail
    samples = np.log(radii[:-1]) * inner
    drift = abs(samples[-1] - samples[-9]) / (1.0 + abs(samples[-1]))
    bounded = bool(drift < 5e-2)
    return IntegralConditionReport(
        samples=list(zip(radii[:-1].tolist(), samples.tolist())),
        bounded=bounded,
        minimum=float(np.min(samples)),
    )
