# src/besselpairs/core/oracle.py

"""Discretized Rayleigh quotients.

Radial problems live on a geometric grid r_j = R exp(t_j), t_j uniform in
[-log_span, 0]. Every row and column is rescaled by exp(-s_j) with s_j taken
in log space, so the assembled pencils never hold underflowing weights and
their eigenvalues are those of the unscaled problem.
"""

import math
import re
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cholesky_banded

from besselpairs.config.settings import settings
from besselpairs.core import constants
from besselpairs.core.extrapolation import first_order_limit, observed_order
from besselpairs.core.grammar import parse_potential
from besselpairs.core.potentials import Constant, Potential, Power
from besselpairs.models.schemas import (
    BesselPairSpec,
    ConvergenceStudy,
    ModeScanResult,
    StudyRow,
)
from besselpairs.utils.exceptions import (
    IllFormedStudyError,
    OutOfRegimeError,
    ParamError,
    SingularMassError,
)
from besselpairs.utils.logger import get_logger

log = get_logger(__name__)

MIN_GRID = 64
_TINY_PIVOT = 1e-300


def _grid_args(N: Optional[int], log_span: Optional[float], rel_tol: Optional[float]):
    N = settings.oracle_grid_size if N is None else int(N)
    log_span = settings.oracle_log_span if log_span is None else float(log_span)
    rel_tol = settings.oracle_rel_tol if rel_tol is None else float(rel_tol)
    if N < MIN_GRID:
        raise ParamError(f"grid size N must be >= {MIN_GRID}", "N", N)
    if not log_span > 0.0:
        raise ParamError("log_span must be > 0", "log_span", log_span)
    if not 0.0 < rel_tol < 1.0:
        raise ParamError("rel_tol must lie in (0, 1)", "rel_tol", rel_tol)
    return N, log_span, rel_tol


# -----------------------------
# Tridiagonal pencils
# -----------------------------
def _sturm_count(diag: np.ndarray, off: np.ndarray, mass: np.ndarray, shift: float) -> int:
    """Number of eigenvalues below `shift` of (T, diag(mass)): negative LDL^T pivots."""
    count = 0
    diag, off, mass = diag.tolist(), off.tolist(), mass.tolist()
    pivot = diag[0] - shift * mass[0]
    if pivot < 0.0:
        count += 1
    for j in range(1, len(diag)):
        if pivot == 0.0:
            pivot = _TINY_PIVOT
        pivot = diag[j] - shift * mass[j] - off[j - 1] * off[j - 1] / pivot
        if pivot < 0.0:
            count += 1
    return count


def _smallest_tridiagonal(diag: np.ndarray, off: np.ndarray, mass: np.ndarray, rel_tol: float) -> float:
    """Smallest eigenvalue of a positive definite tridiagonal pencil by bisection."""
    positive = mass > 0.0
    if not np.any(positive):
        raise SingularMassError("mass form vanishes on the whole grid")
    # Rayleigh quotients of unit vectors bound the minimum from above
    upper = float(np.min(diag[positive] / mass[positive]))
    lower = 0.0
    iterations = 0
    while upper - lower > rel_tol * upper:
        middle = 0.5 * (lower + upper)
        if _sturm_count(diag, off, mass, middle) > 0:
            upper = middle
        else:
            lower = middle
        iterations += 1
    log.debug("tridiagonal_bisection", value=upper, iterations=iterations, size=len(diag))
    return 0.5 * (lower + upper)


def discrete_hardy_quotient(
    V: Potential,
    W: Potential,
    n: int,
    R: float,
    N: Optional[int] = None,
    log_span: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> float:
    """inf of int V u'^2 r^{n-1} / int W u^2 r^{n-1} over the grid, u(R) = 0.

    In t = log(r/R) the forms become int V u_t^2 r^{n-2} dt and int W u^2 r^n dt;
    stiffness uses midpoint weights, mass the trapezoidal rule. The inner end
    is free.
    """
    N, log_span, rel_tol = _grid_args(N, log_span, rel_tol)
    BesselPairSpec(V=V, W=W, n=n, R=R)

    h = log_span / N
    t = np.linspace(-log_span, 0.0, N + 1)
    t_mid = 0.5 * (t[:-1] + t[1:])
    log_R = math.log(R)

    with np.errstate(divide="ignore"):
        log_link = V.log_value(R * np.exp(t_mid)) + (n - 2) * (log_R + t_mid) - math.log(h)
        trapezoid = np.full(N + 1, h)
        trapezoid[0] = trapezoid[-1] = 0.5 * h
        log_mass = W.log_value(R * np.exp(t)) + n * (log_R + t) + np.log(trapezoid)

    # unknowns are nodes 0 .. N-1; u_N = 0
    log_link = log_link[:N]
    log_diag = np.empty(N)
    log_diag[0] = log_link[0]
    log_diag[1:] = np.logaddexp(log_link[:-1], log_link[1:])
    half = 0.5 * log_diag

    diag = np.ones(N)
    off = -np.exp(log_link[:-1] - half[:-1] - half[1:])
    with np.errstate(under="ignore"):
        mass = np.exp(log_mass[:N] - 2.0 * half)

    value = _smallest_tridiagonal(diag, off, mass, rel_tol)
    log.info("discrete_hardy_quotient", n=n, R=R, N=N, log_span=log_span, value=value)
    return value


def flat_dirichlet_quotient(R: float = 1.0, N: Optional[int] = None, rel_tol: Optional[float] = None) -> float:
    """Smallest eigenvalue of -u'' = lambda u on (0, R), Dirichlet at both ends."""
    N, _, rel_tol = _grid_args(N, None, rel_tol)
    if not (math.isfinite(R) and R > 0.0):
        raise ParamError("radius R must be finite and > 0", "R", R)
    h = R / N
    interior = N - 1
    value = _smallest_tridiagonal(
        np.full(interior, 2.0 / h ** 2),
        np.full(interior - 1, -1.0 / h ** 2),
        np.ones(interior),
        rel_tol,
    )
    log.info("flat_dirichlet_quotient", R=R, N=N, value=value)
    return value


# -----------------------------
# Fourth-order mode pencils
# -----------------------------
def _mode_forms(n: int, m: float, k: int, N: int, log_span: float):
    """Banded (upper, 2 super-diagonals) numerator and denominator of the mode quotient.

    With w = exp(gamma t / 2) v, gamma = n - 2m - 4, all three forms
        S2 = int (v_tt - v_t)^2, S1 = int v_t^2, S0 = int v^2  (weight e^{gamma t})
    have constant coefficients.
    """
    ck = constants.c_k(k, n)
    gamma = n - 2.0 * m - 4.0
    k1 = (n - 1) * (2.0 * m + 1.0) + 2.0 * ck
    k0 = ck * (ck + (n - 4.0 - 2.0 * m) * (2.0 * m + 2.0))

    h = log_span / N
    nodes = N + 1
    s2 = [np.zeros(nodes), np.zeros(nodes - 1), np.zeros(nodes - 2)]
    s1 = [np.zeros(nodes), np.zeros(nodes - 1)]

    # second-derivative rows at interior nodes 1 .. N-1
    lo = math.exp(0.5 * gamma * h) * (1.0 / h ** 2 + 0.5 / h)
    mid = -2.0 / h ** 2
    hi = math.exp(-0.5 * gamma * h) * (1.0 / h ** 2 - 0.5 / h)
    centre = np.arange(1, N)
    s2[0][centre - 1] += h * lo * lo
    s2[0][centre] += h * mid * mid
    s2[0][centre + 1] += h * hi * hi
    s2[1][centre - 1] += h * lo * mid
    s2[1][centre] += h * mid * hi
    s2[2][centre - 1] += h * lo * hi

    # first differences on elements [j, j+1]
    left = math.exp(0.25 * gamma * h)
    right = math.exp(-0.25 * gamma * h)
    s1[0][:-1] += left * left / h
    s1[0][1:] += right * right / h
    s1[1][:] += -1.0 / h

    s0 = np.full(nodes, h)
    s0[0] = s0[-1] = 0.5 * h

    # clamped at R; f(r_0) = 0 for k >= 1
    first = 1 if k >= 1 else 0
    last = N - 2
    size = last - first + 1

    def banded(d0, d1, d2) -> np.ndarray:
        ab = np.zeros((3, size))
        ab[2] = d0[first:last + 1]
        ab[1, 1:] = d1[first:last]
        ab[0, 2:] = d2[first:last - 1]
        return ab

    zero2 = np.zeros(nodes - 2)
    stiffness = banded(s2[0] + k1 * s1[0] + k0 * s0, s2[1] + k1 * s1[1], s2[2])
    denominator = banded(s1[0] + ck * s0, s1[1], zero2)
    return stiffness, denominator


def _positive_definite(ab: np.ndarray) -> bool:
    try:
        cholesky_banded(ab, lower=False, check_finite=False)
    except LinAlgError:
        return False
    return True


def _smallest_banded(stiffness: np.ndarray, denominator: np.ndarray, rel_tol: float) -> float:
    """Smallest eigenvalue of (A, B), B positive definite: A - mu B stops being definite at mu_min."""
    upper = float(np.min(stiffness[2] / denominator[2]))
    lower = min(0.0, upper)
    step = 1.0
    while not _positive_definite(stiffness - lower * denominator):
        lower -= step
        step *= 2.0
    iterations = 0
    while upper - lower > rel_tol * max(abs(upper), 1.0):
        middle = 0.5 * (lower + upper)
        if _positive_definite(stiffness - middle * denominator):
            lower = middle
        else:
            upper = middle
        iterations += 1
    log.debug("banded_bisection", value=upper, iterations=iterations)
    return 0.5 * (lower + upper)


def discrete_mode_quotient(
    n: int,
    m: float,
    k: int,
    R: float = 1.0,
    N: Optional[int] = None,
    log_span: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> float:
    """Discrete minimum of the k-th spherical-harmonic mode quotient of the Hardy-Rellich ratio."""
    N, log_span, rel_tol = _grid_args(N, log_span, rel_tol)
    if n < 1:
        raise ParamError("dimension n must be >= 1", "n", n)
    if k < 0:
        raise ParamError("mode index k must be >= 0", "k", k)
    if not (math.isfinite(R) and R > 0.0):
        raise ParamError("radius R must be finite and > 0", "R", R)
    if m > (n - 2) / 2.0 + constants.REGIME_TOL:
        raise OutOfRegimeError(
            f"mode quotient needs m <= (n-2)/2, got m={m:g}, n={n}",
            "mode",
            "m <= (n-2)/2",
            n=n,
            m=m,
        )
    # the quotient is invariant under r -> r/R
    stiffness, denominator = _mode_forms(n, m, k, N, log_span)
    value = _smallest_banded(stiffness, denominator, rel_tol)
    log.info("discrete_mode_quotient", n=n, m=m, k=k, N=N, value=value)
    return value


def discrete_hardy_rellich(
    n: int,
    m: float,
    k_max: Optional[int] = None,
    R: float = 1.0,
    N: Optional[int] = None,
    log_span: Optional[float] = None,
) -> ModeScanResult:
    """min over k <= k_max of the discrete mode quotients, compared with a_nm's argmin."""
    closed = constants.a_nm(n, m)
    cutoff = max((closed.modes_scanned or 1) - 1, closed.k_min or 0)
    if k_max is None:
        k_max = cutoff
    if k_max < cutoff:
        raise ParamError(f"k_max must be >= the scan cutoff {cutoff}", "k_max", k_max)

    values = [discrete_mode_quotient(n, m, k, R=R, N=N, log_span=log_span) for k in range(k_max + 1)]
    k_min = int(np.argmin(values))
    result = ModeScanResult(
        value=values[k_min],
        k_min=k_min,
        mode_values=values,
        closed_form_k_min=closed.k_min,
        matches_closed_form=closed.k_min is None or k_min == closed.k_min,
    )
    if not result.matches_closed_form:
        log.warning("mode_argmin_mismatch", n=n, m=m, discrete=k_min, closed_form=closed.k_min)
    return result


# -----------------------------
# Convergence studies
# -----------------------------
_HARDY_ID = re.compile(r"^hardy:n=(\d+)(?:,V=(.+?))?(?:,W=(.+))?$")
_MODE_ID = re.compile(r"^mode:n=(\d+),m=([-+0-9.eE]+),k=(\d+)$")
_FLAT_ID = re.compile(r"^flat(?::R=([-+0-9.eE]+))?$")


def _float(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParamError(f"{name} is not a number: {text!r}", name, text)


def problem_solver(problem: str):
    """Map a problem id to a function of the grid size."""
    problem = problem.strip()
    match = _HARDY_ID.match(problem)
    if match:
        n = int(match.group(1))
        V = parse_potential(match.group(2)) if match.group(2) else Constant(level=1.0)
        W = parse_potential(match.group(3)) if match.group(3) else Power(exponent=2.0)
        return lambda N: discrete_hardy_quotient(V, W, n, 1.0, N=N)
    match = _MODE_ID.match(problem)
    if match:
        n, m, k = int(match.group(1)), _float(match.group(2), "m"), int(match.group(3))
        return lambda N: discrete_mode_quotient(n, m, k, N=N)
    match = _FLAT_ID.match(problem)
    if match:
        R = _float(match.group(1), "R") if match.group(1) else 1.0
        return lambda N: flat_dirichlet_quotient(R, N=N)
    raise ParamError(
        f"unknown problem id {problem!r}; expected hardy:n=..., mode:n=...,m=...,k=... or flat[:R=...]",
        "problem",
        problem,
    )


def convergence_study(problem: str, sizes: Sequence[int]) -> ConvergenceStudy:
    """Run the problem at each N and extrapolate assuming error ~ C/N."""
    sizes = [int(size) for size in sizes]
    if len(sizes) < 3:
        raise IllFormedStudyError("a study needs at least three grid sizes", sizes=sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise IllFormedStudyError("grid sizes must be strictly increasing", sizes=sizes)

    solve = problem_solver(problem)
    values = [solve(size) for size in sizes]
    rows = [StudyRow(N=sizes[0], value=values[0])]
    for i in range(1, len(sizes)):
        rows.append(
            StudyRow(
                N=sizes[i],
                value=values[i],
                extrapolated=first_order_limit(sizes[: i + 1], values[: i + 1]),
            )
        )
    study = ConvergenceStudy(
        problem=problem,
        rows=rows,
        limit=rows[-1].extrapolated,
        observed_order=observed_order(sizes, values),
    )
    log.info("convergence_study", problem=problem, limit=study.limit, order=study.observed_order)
    return study
