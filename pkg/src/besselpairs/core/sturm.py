# src/besselpairs/core/sturm.py

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from besselpairs.config.settings import settings
from besselpairs.core.extrapolation import first_order_limit, richardson_limit
from besselpairs.core.potentials import iterated_logs, x_chain
from besselpairs.core.quadrature import dyadic_pieces, index_samples
from besselpairs.models.schemas import BesselPairSpec, HypothesisReport, ShootingReport, StepStats
from besselpairs.utils.exceptions import (
    HypothesisWarning,
    InconclusiveShootError,
    ParamError,
    QuadratureError,
    StiffnessError,
)
from besselpairs.utils.logger import get_logger

log = get_logger(__name__)

MAX_LOG_STEP = math.log(1.25)  # radial step <= r/4
J0_SERIES_TERMS = 30
ORIGIN_LEVELS = 12
_GROWTH_FLOOR = 1e-6
_BOUNDARY_BAND = 10.0  # inconclusive band, in units of tol
_RESIDUAL_STEP = 0.05


# -----------------------------
# Self-adjoint form
# -----------------------------
@dataclass(frozen=True)
class SelfAdjointForm:
    """(p y')' + q y = 0 on (eps_min, R]."""
    p: Callable
    dp: Callable
    q: Callable
    eps_min: float
    R: float


def to_selfadjoint(pair: BesselPairSpec, eps_min: float = 0.0) -> SelfAdjointForm:
    V, W, n, c = pair.V, pair.W, pair.n, pair.c

    def p(r):
        return np.asarray(r, dtype=float) ** (n - 1) * V.value(r)

    def dp(r):
        return p(r) * (n - 1 + V.log_derivative(r)) / np.asarray(r, dtype=float)

    def q(r):
        return c * np.asarray(r, dtype=float) ** (n - 1) * W.value(r)

    return SelfAdjointForm(p=p, dp=dp, q=q, eps_min=eps_min, R=pair.R)


# -----------------------------
# Prüfer shooting
# -----------------------------
def _coefficients(pair: BesselPairSpec, r: float) -> tuple[float, float]:
    """kappa = n - 2 + r V'/V and Q = c r^2 W / V at radius r."""
    kappa = pair.n - 2 + pair.V.log_derivative(r)
    if pair.c == 0.0:
        return kappa, 0.0
    with np.errstate(divide="ignore"):
        log_q = math.log(pair.c) + 2.0 * math.log(r) + pair.W.log_value(r) - pair.V.log_value(r)
    return kappa, math.exp(log_q) if math.isfinite(log_q) else 0.0


def _principal_angle(kappa: float, q_coef: float) -> tuple[float, float]:
    """Start angle from the frozen indicial equation s^2 + kappa s + Q = 0; returns (theta, disc)."""
    disc = kappa * kappa - 4.0 * q_coef
    s_plus = (-kappa + math.sqrt(disc)) / 2.0 if disc >= 0 else -kappa / 2.0
    return math.atan2(1.0, s_plus), disc


def origin_index(pair: BesselPairSpec, eps: float) -> float:
    """Limit of c r^{2(n-1)} V W I^2 as r -> 0, estimated below eps.

    I = int_r^R 1/p when that integral diverges as r -> 0, otherwise
    I = int_0^r 1/p. Values above 1/4 mean zeros accumulate at the origin.
    The samples run over r = eps 4^{-j}; a sequence whose increments do not
    decay is taken as divergent, otherwise the error is assumed ~ 1/log(1/r).
    """
    if pair.c == 0.0 or pair.W.is_zero():
        return 0.0
    radii = eps * 4.0 ** -np.arange(ORIGIN_LEVELS + 1, dtype=float)
    phi = pair.c * index_samples(pair.V, pair.W, pair.n, pair.R, radii)
    if np.any(np.isnan(phi)):
        raise QuadratureError("origin index samples are not finite", lower=float(radii[-1]), upper=eps)
    if np.any(np.isinf(phi)):
        return math.inf

    steps = np.diff(phi)
    if np.all(steps > _GROWTH_FLOOR * phi[1:]) and steps[-1] >= 0.5 * steps[0]:
        return math.inf
    scales = -np.log(radii[-2:])
    return max(0.0, float(first_order_limit(scales, phi[-2:])))


def prufer_shoot(
    pair: BesselPairSpec,
    eps: Optional[float] = None,
    tol: Optional[float] = None,
    boundary_policy: Literal["strict", "positive"] = "strict",
) -> ShootingReport:
    """Count zeros on (eps, R] of the principal solution of (B_{V,cW}).

    The angle theta of (y, r y') is integrated in t = log r:
        theta' = cos^2 + kappa sin cos + Q sin^2.
    """
    R = pair.R
    eps = settings.shoot_eps_ratio * R if eps is None else eps
    tol = settings.shoot_tol if tol is None else tol
    if not 0.0 < eps < R / 2.0:
        raise ParamError(f"eps must lie in (0, R/2), got {eps:g}", "eps", eps)
    if not tol > 0.0:
        raise ParamError("tol must be > 0", "tol", tol)

    kappa0, q0 = _coefficients(pair, eps)
    theta0, _ = _principal_angle(kappa0, q0)

    if pair.c == 0.0 or pair.W.is_zero():
        log.debug("shoot_degenerate", c=pair.c, W=pair.W.kind)
        return ShootingReport(
            zero_count=0,
            theta_final=theta0,
            positive_on_interval=True,
            epsilon_used=eps,
            degenerate=True,
        )

    # zeros accumulating below eps, judged from the trend of the index
    index = origin_index(pair, eps)
    oscillatory = index > 0.25

    t_end = math.log(R)

    def rhs(t, y):
        r = min(math.exp(t), R)
        kappa, q_coef = _coefficients(pair, r)
        s, c = math.sin(y[0]), math.cos(y[0])
        return [c * c + kappa * s * c + q_coef * s * s]

    def first_crossing(t, y):
        return y[0] - math.pi

    first_crossing.direction = 1

    sol = solve_ivp(
        rhs,
        (math.log(eps), t_end),
        [theta0],
        method="RK45",
        rtol=tol,
        atol=tol,
        max_step=MAX_LOG_STEP,
        events=[first_crossing],
    )
    if sol.status == -1:
        raise StiffnessError(
            f"integrator failed at r={math.exp(sol.t[-1]):.6g}: {sol.message}",
            radius=math.exp(sol.t[-1]),
            status=sol.status,
        )

    theta_final = float(sol.y[0, -1])
    crossings = int(math.floor(theta_final / math.pi))
    offset = theta_final - math.pi * crossings
    boundary_zero = False
    if crossings >= 1 and offset <= _BOUNDARY_BAND * tol:
        if offset > tol and boundary_policy == "strict":
            raise InconclusiveShootError(
                f"a zero lies within {offset:.3g} of R (tol {tol:g}); tighten tol",
                margin=offset,
                tol=tol,
            )
        # zero at R itself is allowed
        crossings -= 1
        boundary_zero = True
    elif math.pi - offset <= tol:
        boundary_zero = True

    first_zero = None
    if crossings >= 1 and len(sol.t_events[0]):
        first_zero = math.exp(float(sol.t_events[0][0]))

    zero_count = crossings
    if oscillatory:
        zero_count += 1
        if first_zero is None:
            first_zero = eps

    report = ShootingReport(
        zero_count=zero_count,
        first_zero=first_zero,
        theta_final=theta_final,
        positive_on_interval=zero_count == 0,
        epsilon_used=eps,
        step_stats=StepStats(
            nfev=sol.nfev, steps=len(sol.t), status=sol.status, message=sol.message
        ),
        boundary_zero=boundary_zero,
        oscillatory_at_origin=oscillatory,
        origin_index=index,
    )
    log.debug(
        "shoot_done",
        c=pair.c,
        zero_count=report.zero_count,
        theta_final=theta_final,
        oscillatory_at_origin=oscillatory,
        nfev=sol.nfev,
    )
    return report


# -----------------------------
# Residuals
# -----------------------------
def _derivatives(phi: Callable, r: float) -> tuple[float, float]:
    d1, d2 = [], []
    centre = phi(r)
    for level in range(3):
        h = _RESIDUAL_STEP * r / 2 ** level
        up, down = phi(r + h), phi(r - h)
        d1.append((up - down) / (2.0 * h))
        d2.append((up - 2.0 * centre + down) / (h * h))
    return richardson_limit(4.0, d1), richardson_limit(4.0, d2)


def residual(phi: Callable, pair: BesselPairSpec, grid) -> float:
    """max |(p phi')' + q phi| / (1 + |q phi|) over the grid."""
    form = to_selfadjoint(pair)
    worst = 0.0
    for r in np.asarray(grid, dtype=float):
        d1, d2 = _derivatives(phi, r)
        value = phi(r)
        q_phi = form.q(r) * value
        lhs = form.p(r) * d2 + form.dp(r) * d1 + q_phi
        worst = max(worst, abs(lhs) / (1.0 + abs(q_phi)))
    return float(worst)


# -----------------------------
# Explicit solutions
# -----------------------------
def log_solution(R: float) -> Callable:
    """1 - log(r/R), positive on (0, R] for V = 1, W = 0, n = 2."""
    return lambda r: 1.0 - np.log(np.asarray(r, dtype=float) / R)


def bessel_j0(x):
    """J_0 by its power series."""
    x = np.asarray(x, dtype=float)
    quarter = -(x * x) / 4.0
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, J0_SERIES_TERMS):
        term = term * quarter / (k * k)
        total = total + term
    return float(total) if total.ndim == 0 else total


def bessel_zero_z0() -> float:
    """First positive zero of J_0."""
    return brentq(bessel_j0, 2.0, 3.0, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)


def iterated_log_solution(k: int, rho: float) -> Callable:
    """(prod_{i<=k} log^(i)(rho/r))^{1/2}, a positive solution for W_{k,rho}/4."""
    def phi(r):
        logs = iterated_logs(rho / np.asarray(r, dtype=float), k)
        return np.sqrt(np.prod(np.stack(logs), axis=0))
    return phi


def x_chain_solution(k: int, D: float) -> Callable:
    """(X_1 ... X_k (r/D))^{-1/2}, a positive solution for the X-potential / 4."""
    def phi(r):
        chain = x_chain(np.asarray(r, dtype=float) / D, k)
        return np.prod(np.stack(chain), axis=0) ** -0.5
    return phi


# -----------------------------
# Hypotheses of the equivalence theorem
# -----------------------------
def hypothesis_check(pair: BesselPairSpec, levels: int = 40) -> HypothesisReport:
    """int_0 r^{1-n}/V = +inf and int_0 r^{n-1} V < inf, judged from dyadic pieces."""
    V, n = pair.V, pair.n
    flux = dyadic_pieces(lambda r: (1 - n) * math.log(r) - V.log_value(r), pair.R, levels)
    mass = dyadic_pieces(lambda r: (n - 1) * math.log(r) + V.log_value(r), pair.R, levels)

    # pieces of a divergent integral stop shrinking
    flux_diverges = bool(flux[-1] >= (1.0 - 1e-3) * flux[-2])
    mass_finite = bool(mass[-1] < (1.0 - 1e-3) * mass[-2])
    report = HypothesisReport(
        flux_diverges=flux_diverges,
        mass_finite=mass_finite,
        flux_pieces=flux.tolist(),
        mass_pieces=mass.tolist(),
    )
    if not report.holds:
        message = (
            f"integrability hypotheses fail for n={n}: "
            f"flux diverges={flux_diverges}, mass finite={mass_finite}"
        )
        log.warning("hypothesis_failed", n=n, flux_diverges=flux_diverges, mass_finite=mass_finite)
        warnings.warn(message, HypothesisWarning, stacklevel=2)
    return report
