# src/besselpairs/core/quadrature.py

import math
from typing import Callable

import numpy as np
from scipy.integrate import quad

from besselpairs.core.potentials import Potential
from besselpairs.utils.exceptions import QuadratureError
from besselpairs.utils.logger import get_logger

log = get_logger(__name__)

_REL_TOL = 1e-11
_ACCEPT_REL_ERR = 1e-6
FLUX_DIVERGENCE_SLACK = 1e-6


def integrate_log(log_integrand: Callable[[float], float], lower: float, upper: float) -> float:
    """int_lower^upper exp(log_integrand(tau)) dtau, integrated in t = log(tau)."""
    if upper <= lower:
        return 0.0

    def integrand(t: float) -> float:
        tau = math.exp(t)
        if tau == 0.0:
            return 0.0
        return float(np.exp(log_integrand(tau) + t))

    with np.errstate(over="ignore", divide="ignore"):
        result = quad(
            integrand,
            math.log(lower) if lower > 0.0 else -math.inf,
            math.log(upper),
            epsabs=0.0,
            epsrel=_REL_TOL,
            limit=200,
            full_output=1,
        )
    value, abserr = result[0], result[1]
    if not math.isfinite(value) or abserr > _ACCEPT_REL_ERR * abs(value) + 1e-300:
        raise QuadratureError(
            f"quadrature over [{lower:.6g}, {upper:.6g}] did not converge "
            f"(value={value:.6g}, error={abserr:.3g})",
            lower=lower,
            upper=upper,
        )
    if len(result) > 3:
        log.debug("quad_message", lower=lower, upper=upper, message=result[3])
    return value


def inverse_flux(V: Potential, n: int, R: float, r: float) -> float:
    """int_r^R dtau / (tau^{n-1} V(tau))"""
    return integrate_log(lambda tau: -(n - 1) * math.log(tau) - V.log_value(tau), r, R)


def inner_flux(V: Potential, n: int, r: float) -> float:
    """int_0^r dtau / (tau^{n-1} V(tau)), for weights where it converges."""
    return integrate_log(lambda tau: -(n - 1) * math.log(tau) - V.log_value(tau), 0.0, r)


def inverse_flux_pieces(V: Potential, n: int, radii: np.ndarray) -> np.ndarray:
    """Running inverse-flux integrals from radii[0] down to each radius (radii decreasing)."""
    pieces = [
        integrate_log(lambda tau: -(n - 1) * math.log(tau) - V.log_value(tau), lo, hi)
        for hi, lo in zip(radii[:-1], radii[1:])
    ]
    return np.concatenate([[0.0], np.cumsum(pieces)])


def dyadic_pieces(log_integrand: Callable[[float], float], R: float, levels: int) -> np.ndarray:
    """Integrals over [R 2^{-j-1}, R 2^{-j}] for j = 0 .. levels-1."""
    return np.array(
        [integrate_log(log_integrand, R * 2.0 ** (-j - 1), R * 2.0 ** (-j)) for j in range(levels)]
    )


def flux_samples(V: Potential, n: int, R: float, radii: np.ndarray) -> np.ndarray:
    """I(r) at each radius (radii decreasing).

    I = int_r^R 1/(tau^{n-1} V) when that integral diverges as r -> 0,
    otherwise I = int_0^r.
    """
    kappa = n - 2 + V.log_derivative(float(radii[-1]))
    if kappa >= -FLUX_DIVERGENCE_SLACK:
        return inverse_flux(V, n, R, float(radii[0])) + inverse_flux_pieces(V, n, radii)
    return np.array([inner_flux(V, n, float(r)) for r in radii])


def index_samples(V: Potential, W: Potential, n: int, R: float, radii: np.ndarray) -> np.ndarray:
    """r^{2(n-1)} V W I^2 at each radius; the coupling is left out."""
    fluxes = flux_samples(V, n, R, radii)
    with np.errstate(divide="ignore", over="ignore"):
        log_phi = (
            2.0 * (n - 1) * np.log(radii)
            + V.log_value(radii)
            + W.log_value(radii)
            + 2.0 * np.log(fluxes)
        )
        return np.exp(log_phi)
