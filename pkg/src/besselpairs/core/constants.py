# src/besselpairs/core/constants.py

import math
from typing import Callable, Optional, Union

from besselpairs.models.enums import HigherOrderVariant
from besselpairs.models.schemas import Component, ConstantResult
from besselpairs.utils.exceptions import DegenerateModeError, OutOfRegimeError, ParamError
from besselpairs.utils.logger import get_logger
from besselpairs.utils.validators import require_dimension

log = get_logger(__name__)

Z0 = 2.404825557695773  # first zero of J_0
REGIME_TOL = 1e-12
TABLE_TOL = 1e-12
BOUNDARY_FLAG_TOL = 1e-9
SCAN_CAP = 10 ** 6


# -----------------------------
# Helpers
# -----------------------------
def c_k(k: int, n: int) -> float:
    """Laplace-Beltrami eigenvalue k(n + k - 2) of the k-th spherical harmonic."""
    return float(k * (n + k - 2))


def _require(condition: bool, constant: str, text: str, **params) -> None:
    if not condition:
        raise OutOfRegimeError(f"{constant}: requires {text}", constant=constant, condition=text, **params)


def _agree(a: float, b: float) -> bool:
    return abs(a - b) <= TABLE_TOL * max(1.0, abs(a))


def _scan(term: Callable[[int], float], threshold: float):
    """Minimise term(k) over k = 0, 1, ... for a term convex in c_k.

    Stops once c_k is past `threshold` and the sequence increased twice in a
    row; returns (minimum, argmin, values).
    """
    values = []
    best, best_k = math.inf, 0
    increases = 0
    for k in range(SCAN_CAP):
        value = term(k)
        if values and value > values[-1]:
            increases += 1
        else:
            increases = 0
        values.append(value)
        if value < best:
            best, best_k = value, k
        if k >= 2 and increases >= 2 and term.ck(k) > threshold:
            break
    else:
        log.warning("scan_cap_reached", cap=SCAN_CAP)
    return best, best_k, values


class _Term:
    def __init__(self, fn: Callable[[int], float], n: int):
        self.fn, self.n = fn, n

    def __call__(self, k: int) -> float:
        return self.fn(k)

    def ck(self, k: int) -> float:
        return c_k(k, self.n)


# -----------------------------
# Hardy-type constants
# -----------------------------
def hardy_constant(n: int, lam: float) -> float:
    """((n - lambda - 2)/2)^2 for V with r V'/V -> -lambda."""
    _require(lam <= n - 2 + REGIME_TOL, "hardy", "lambda <= n - 2", n=n, lam=lam)
    return ((n - lam - 2) / 2.0) ** 2


def ckn_constant(n: int, a: float) -> float:
    """S(a, a + 1) = ((n - 2a - 2)/2)^2."""
    _require(a <= (n - 2) / 2.0 + REGIME_TOL, "ckn", "a <= (n - 2)/2", n=n, a=a)
    return ((n - 2 * a - 2) / 2.0) ** 2


def cn_constant(n: int) -> float:
    """Best Hardy-Rellich constant for int |Delta u|^2 >= C(n) int |grad u|^2 / |x|^2."""
    _require(n >= 3, "cn", "n >= 3", n=n)
    if n == 3:
        return 25.0 / 36.0
    if n == 4:
        return 3.0
    return n * n / 4.0


def power_family_constant(n: int, m: float, alpha: float, beta: float) -> float:
    """Best constant for V = (a + b r^alpha)^beta / r^{2m} against V / r^2."""
    product = alpha * beta
    if product == 0.0:
        raise ParamError("alpha * beta must be non-zero", "alpha*beta", product)
    if product > 0:
        _require(m <= (n - 2) / 2.0 + REGIME_TOL, "power", "m <= (n - 2)/2", n=n, m=m)
        return ((n - 2 * m - 2) / 2.0) ** 2
    _require(2 * m - product <= n - 2 + REGIME_TOL, "power", "2m - alpha*beta <= n - 2", n=n, m=m)
    return ((n - 2 * m + product - 2) / 2.0) ** 2


def bbdgv_constant(n: int, alpha: float, beta: float, b: float) -> Union[float, tuple[float, float]]:
    """Best constant for V = (1 + b r^alpha)^beta; only bounds when alpha * beta > 0."""
    if not b > 0:
        raise ParamError("b must be > 0", "b", b)
    product = alpha * beta
    if product == 0.0:
        raise ParamError("alpha * beta must be non-zero", "alpha*beta", product)
    scale = b ** (2.0 / alpha)
    if product < 0:
        _require(-product <= n - 2 + REGIME_TOL, "bbdgv", "-alpha*beta <= n - 2", n=n, alpha=alpha, beta=beta)
        return scale * ((n - product - 2) / 2.0) ** 2
    _require(n >= 2, "bbdgv", "n >= 2", n=n)
    return scale * ((n - 2) / 2.0) ** 2, scale * ((n + product - 2) / 2.0) ** 2


def brezis_vazquez_constant(R: float) -> float:
    """beta(1; R) = z0^2 / R^2."""
    if not R > 0:
        raise ParamError("R must be > 0", "R", R)
    return Z0 ** 2 / R ** 2


def weighted_log_hardy_constant(n: int, m: float) -> float:
    """Hardy constant for r^{-2m}-weighted iterated-log V, where lambda = 2m + 2."""
    return hardy_constant(n, 2 * m + 2)


def ckn_log_constant() -> float:
    """Coefficient of the logarithmic remainder terms."""
    return 0.25


# -----------------------------
# Hardy-Rellich: a_{n,m}
# -----------------------------
def exmain_window(n: int) -> tuple[float, float]:
    """(m_-, m_+) = ((-(n + 4) -+ 2 sqrt(n^2 - n + 1)) / 6); a_{n,m} is radial inside."""
    root = 2.0 * math.sqrt(n * n - n + 1)
    return (-(n + 4) - root) / 6.0, (-(n + 4) + root) / 6.0


def radial_hardy_rellich_constant(n: int, m: float) -> float:
    """((n + 2m)/2)^2, the constant over radial functions."""
    _require(m <= (n - 2) / 2.0 + REGIME_TOL, "radial-hr", "m <= (n - 2)/2", n=n, m=m)
    return ((n + 2 * m) / 2.0) ** 2


def _quotient(x: float, m: float, n: int) -> float:
    half = (n - 4 - 2 * m) / 2.0
    return (half * (n + 2 * m) / 2.0 + x) ** 2 / (half * half + x)


def mode_constant_A(k: int, m: float, n: int) -> float:
    """A(k, m, n): the Hardy-Rellich quotient restricted to the k-th spherical mode."""
    _require(m <= (n - 2) / 2.0 + REGIME_TOL, "A", "m <= (n - 2)/2", n=n, m=m, k=k)
    if k < 0 or int(k) != k:
        raise ParamError("mode index k must be a non-negative integer", "k", k)
    ck = c_k(k, n)
    if abs(m - (n - 4) / 2.0) <= REGIME_TOL:
        if n + k <= 2:
            raise DegenerateModeError(
                f"A({k}, {m}, {n}) is 0/0: both denominators vanish", k=k, m=m, n=n
            )
        if k == 0:
            # radial limit ((n + 2m)/2)^2 at m = (n - 4)/2
            return float((n - 2) ** 2)
        return ck
    return _quotient(ck, m, n)


def _a_nm_table(n: int, m: float) -> Optional[tuple[float, str]]:
    """Piecewise closed form for a_{n,m}; None where no branch applies."""
    _, m_plus = exmain_window(n)
    radial = ((n + 2 * m) / 2.0) ** 2

    if abs(m - (n - 4) / 2.0) <= REGIME_TOL:
        return float(min((n - 2) ** 2, n - 1)), "min{(n-2)^2,n-1}"
    if n == 1:
        if m < -1.5 or -7.0 / 6.0 <= m <= -0.5:
            return radial, "n=1: ((1+2m)/2)^2"
        if -1.5 < m < -7.0 / 6.0:
            return min(radial, _quotient(2.0, m, n)), "n=1: min{((n+2m)/2)^2,A(c=2)}"
        return None
    if m <= m_plus:
        return radial, "((n+2m)/2)^2"
    if (2 <= n <= 3 and m <= (n - 2) / 2.0) or (n >= 4 and (n - 4) / 2.0 < m <= (n - 2) / 2.0):
        return _quotient(n - 1.0, m, n), "A(c=n-1)"
    if n >= 4 and m_plus < m < (n - 4) / 2.0:
        return _a_nm_case5(n, m, m_plus)
    return None


def _a_nm_case5(n: int, m: float, m_plus: float) -> tuple[float, str]:
    k_star = math.floor((math.sqrt(3.0) / 3.0 - 0.5) * (n - 2))
    if k_star <= 1:
        return _quotient(n - 1.0, m, n), "k*<=1: A(c=n-1)"

    def bounds(k: int) -> tuple[float, float]:
        if k == 0:
            return m_plus, (n - 4) / 2.0
        root = math.sqrt(max((n - 2) ** 2 - 12 * k * (k + n - 2), 0.0))
        return (2 * (n - 5) - root) / 6.0, (2 * (n - 5) + root) / 6.0

    edges = [edge for k in range(k_star + 1) for edge in bounds(k)]
    flag = " [near subinterval boundary]" if min(abs(m - e) for e in edges) <= BOUNDARY_FLAG_TOL else ""

    lo0, hi0 = bounds(0)
    lo1, hi1 = bounds(1)
    if lo0 < m <= lo1 or hi1 <= m < hi0:
        return _quotient(n - 1.0, m, n), "A(c=n-1) outer subinterval" + flag
    for k in range(1, k_star):
        lo_k, hi_k = bounds(k)
        lo_next, hi_next = bounds(k + 1)
        if lo_k < m <= lo_next or hi_next <= m < hi_k:
            value = min(_quotient(c_k(k, n), m, n), _quotient(c_k(k + 1, n), m, n))
            return value, f"min{{A(c_{k}),A(c_{k + 1})}}" + flag
    value = min(_quotient(c_k(k_star, n), m, n), _quotient(c_k(k_star + 1, n), m, n))
    return value, f"min{{A(c_{k_star}),A(c_{k_star + 1})}}" + flag


def a_nm(n: int, m: float) -> ConstantResult:
    """a_{n,m} = min_k A(k, m, n) by a certified scan, cross-checked against the case table."""
    n = require_dimension(n)
    _require(m <= (n - 2) / 2.0 + REGIME_TOL, "a_nm", "m <= (n - 2)/2", n=n, m=m)
    radial = ((n + 2 * m) / 2.0) ** 2
    degenerate = set()

    def term(k: int) -> float:
        try:
            return mode_constant_A(k, m, n)
        except DegenerateModeError:
            degenerate.add(k)
            return radial

    x1 = -(n - 4 - 2 * m) * (n + 2 * m) / 4.0
    x2 = (n - 4 - 2 * m) * (-n + 6 * m + 8) / 4.0
    value, k_min, values = _scan(_Term(term, n), max(x1, x2))

    result = ConstantResult(value=value, case_taken=f"scan: A(k={k_min})", k_min=k_min, modes_scanned=len(values))
    table = _a_nm_table(n, m)
    if table is not None:
        table_value, table_case = table
        agrees = _agree(value, table_value)
        result.table_value, result.table_case, result.table_agrees = table_value, table_case, agrees
        if agrees:
            result.case_taken = table_case
        else:
            log.warning("table_disagreement", constant="a_nm", n=n, m=m, scan=value, table=table_value, case=table_case)
    if k_min in degenerate:
        result.case_taken += " [degenerate-mode-limit]"
    return result


# -----------------------------
# Rellich: beta_{n,m}
# -----------------------------
def _beta_table(n: int, m: float, base: float, half_d: float) -> Optional[tuple[float, str]]:
    """Explicit cases of the Rellich theorem; None when none applies or applicable cases conflict."""
    def g(k: int) -> float:
        ck = c_k(k, n)
        return ck * (ck + half_d)

    lower = -1.0 - math.sqrt(1.0 + (n - 1) ** 2) / 2.0
    hits = []
    if lower <= m <= (n - 4) / 2.0 + REGIME_TOL:
        hits.append((base, "rellich case 1: ((n+2m)(n-4-2m)/4)^2"))
    if n / 2.0 - 3 <= m <= lower:
        hits.append((base + (n - 1) * ((n - 1) + half_d), "rellich case 2: k=1"))
    kk = (n - 2 * m - 4) / 2.0
    if abs(kk - round(kk)) <= REGIME_TOL:
        hits.append((base + g(int(round(kk))), f"rellich case 3: k={int(round(kk))}"))
    else:
        k = math.floor(kk)
        hits.append((base + min(g(k), g(k + 1)), f"rellich case 4: min over k={k},{k + 1}"))
    if any(not _agree(hits[0][0], value) for value, _ in hits[1:]):
        return None
    return hits[0]


def beta_nm(n: int, m: float) -> ConstantResult:
    """beta_{n,m} = ((n+2m)(n-4-2m)/4)^2 + min_k c_k (c_k + (n+2m)(n-2m-4)/2)."""
    n = require_dimension(n)
    _require(m <= (n - 4) / 2.0 + REGIME_TOL, "beta_nm", "m <= (n - 4)/2", n=n, m=m)
    d = (n + 2 * m) * (n - 2 * m - 4)
    base = (d / 4.0) ** 2
    half_d = d / 2.0

    def term(k: int) -> float:
        ck = c_k(k, n)
        return ck * (ck + half_d)

    extra, k_min, values = _scan(_Term(term, n), -d / 4.0)
    value = base + extra
    result = ConstantResult(value=value, case_taken=f"scan: k={k_min}", k_min=k_min, modes_scanned=len(values))
    table = _beta_table(n, m, base, half_d)
    if table is not None:
        table_value, table_case = table
        agrees = _agree(value, table_value)
        result.table_value, result.table_case, result.table_agrees = table_value, table_case, agrees
        if agrees:
            result.case_taken = table_case
        else:
            log.warning("table_disagreement", constant="beta_nm", n=n, m=m, scan=value, table=table_value)
    return result


def hrs_constants(n: int, m: float, betaW: float) -> ConstantResult:
    """Rellich constant (n+2m)^2 (n-2m-4)^2 / 16 with the Bessel-potential coefficient betaW (n+2m)^2/4."""
    _require(-n / 2.0 - REGIME_TOL <= m <= (n - 4) / 2.0 + REGIME_TOL, "hrs", "-n/2 <= m <= (n - 4)/2", n=n, m=m)
    if betaW < 0:
        raise ParamError("betaW must be >= 0", "betaW", betaW)
    leading = (n + 2 * m) ** 2 * (n - 2 * m - 4) ** 2 / 16.0
    improvement = betaW * (n + 2 * m) ** 2 / 4.0
    return ConstantResult(
        value=leading,
        case_taken="(n+2m)^2(n-2m-4)^2/16",
        components=[Component(label="leading", value=leading), Component(label="improvement", value=improvement)],
    )


# -----------------------------
# Improvement coefficients
# -----------------------------
def sigma_nm(n: int, m: float, lam: float, betaW: float) -> float:
    """sigma_{n,m} = betaW ((n+2m)^2/4 + (n-2m-lambda-2)^2/4)."""
    if betaW < 0:
        raise ParamError("betaW must be >= 0", "betaW", betaW)
    return betaW * ((n + 2 * m) ** 2 / 4.0 + (n - 2 * m - lam - 2) ** 2 / 4.0)


def rellich_improvement_coefficient(n: int, lam: float, betaW: float) -> float:
    return sigma_nm(n, 0, lam, betaW)


# -----------------------------
# Higher-order Rellich compositions
# -----------------------------
def _product(factors: list[float]) -> float:
    return math.prod(factors)  # empty product is 1


def higher_order_constants(
    variant: HigherOrderVariant,
    n: int,
    k: float,
    m: int,
    l: int,
    betaW: float = 0.25,
    lam: float = 2.0,
) -> ConstantResult:
    """Leading coefficient and labelled factors of the iterated Rellich inequalities."""
    variant = HigherOrderVariant(variant)
    n = require_dimension(n)
    if int(m) != m or m < 1:
        raise ParamError("order m must be a positive integer", "m", m)
    if int(l) != l:
        raise ParamError("l must be an integer", "l", l)
    m, l = int(m), int(l)
    top = m - 1 if variant == HigherOrderVariant.HO3 else m
    _require(1 <= l <= top, variant.value, f"1 <= l <= {'m - 1' if top != m else 'm'}", l=l, m=m)
    if variant == HigherOrderVariant.HO2:
        _require(2 * k + 4 * m + 2 <= n, variant.value, "2k + 4m + 2 <= n", n=n, k=k, m=m)
    else:
        _require(2 * k + 4 * m <= n, variant.value, "2k + 4m <= n", n=n, k=k, m=m)

    components: dict[str, float] = {}

    def record(label: str, value: float) -> float:
        components.setdefault(label, value)
        return value

    def beta(index: float) -> float:
        return record(f"beta[{n},{index:g}]", beta_nm(n, index).value)

    def sigma(index: float) -> float:
        return record(f"sigma[{n},{index:g}]", sigma_nm(n, index, lam, betaW))

    def a(index: float) -> float:
        return record(f"a[{n},{index:g}]", a_nm(n, index).value)

    if variant == HigherOrderVariant.HO1:
        leading = _product([beta(k + 2 * i) for i in range(l)])
        tail = _product([beta(k + 2 * j - 2) for j in range(1, l)])
        for i in range(l):
            record(f"summand[{i}]", sigma(k + 2 * i) * tail)
        case = "prod_{i<l} beta[n,k+2i]"
    elif variant == HigherOrderVariant.HO2:
        front = ((n - 2 * k - 2) / 2.0) ** 2
        leading = front * _product([beta(k + 2 * i + 1) for i in range(l)])
        tail = _product([beta(k + 2 * j - 1) for j in range(1, l)])
        for i in range(l):
            record(f"summand[{i}]", front * sigma(k + 2 * i + 1) * tail)
        record("betaW", betaW)
        case = "((n-2k-2)/2)^2 prod_{i<l} beta[n,k+2i+1]"
    elif variant == HigherOrderVariant.HO3:
        front = a(k) * ((n - 2 * k - 4) / 2.0) ** 2
        leading = front * _product([beta(k + 2 * i + 2) for i in range(l)])
        tail = _product([beta(k + 2 * j) for j in range(1, l)])
        for i in range(l):
            record(f"summand[{i}]", front * sigma(k + 2 * i + 2) * tail)
        record("betaW*a[n,k]", betaW * a(k))
        record("betaW", betaW)
        case = "a[n,k]((n-2k-4)/2)^2 prod_{i<l} beta[n,k+2i+2]"
    else:
        def factor(i: int) -> float:
            return a(k + 2 * i - 2) * (n - 2 * k - 4 * i) ** 2 / 4.0

        leading = _product([factor(i) for i in range(1, l + 1)])
        tail = _product([factor(j) for j in range(1, l)])
        for i in range(1, l + 1):
            record(f"gradient_summand[{i}]", betaW * tail)
            record(f"summand[{i}]", betaW * a(k + 2 * i - 2) * tail)
        case = "prod_{i<=l} a[n,k+2i-2](n-2k-4i)^2/4"

    labelled = [Component(label="leading", value=leading)]
    labelled += [Component(label=label, value=value) for label, value in components.items()]
    return ConstantResult(value=leading, case_taken=case, components=labelled)
