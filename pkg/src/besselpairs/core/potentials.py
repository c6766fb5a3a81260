# src/besselpairs/core/potentials.py

import math
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import expit, logsumexp

from besselpairs.utils.exceptions import DomainError, NoLimitError, ParamError

TOWER_MARGIN = 1e-12
_EXP_OVERFLOW = 709.0
_SUM_LIMIT_SPREAD = 0.25


# -----------------------------
# Scalar helpers
# -----------------------------
def e_tower(height: int) -> float:
    """exp(exp(...exp(1))) with `height` exponentials; e_tower(0) == 1."""
    value = 1.0
    for _ in range(height):
        if value > _EXP_OVERFLOW:
            raise ParamError(
                f"e-tower of height {height} overflows double precision",
                "k",
                height,
            )
        value = math.exp(value)
    return value


def iterated_logs(x, depth: int) -> list:
    """[log(x), log(log(x)), ...] with `depth` entries."""
    out = []
    current = np.log(x)
    out.append(current)
    for _ in range(depth - 1):
        current = np.log(current)
        out.append(current)
    return out


def x_chain(t, depth: int) -> list:
    """[X_1(t), X_2(t), ...] where X_1(t) = 1/(1 - log t) and X_i = X_1(X_{i-1})."""
    out = []
    current = np.asarray(t, dtype=float)
    for _ in range(depth):
        current = 1.0 / (1.0 - np.log(current))
        out.append(current)
    return out


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ParamError(f"{name} must be finite", name, value)


# -----------------------------
# Potential catalog
# -----------------------------
class _RadialPotential(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def domain_radius(self) -> float:
        return math.inf

    # kind-specific kernels work on validated float arrays
    def _value(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _log_value(self, r: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self._value(r))

    def _rdlog(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def lambda_limit(self) -> float:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def _radii(self, r) -> np.ndarray:
        arr = np.asarray(r, dtype=float)
        limit = self.domain_radius
        inside = np.ravel((arr > 0.0) & (arr <= limit))
        if not np.all(inside):
            raise DomainError(
                f"radius outside (0, {limit:g}] for {self.kind} potential",
                radius=float(np.ravel(arr)[~inside][0]),
                domain_radius=limit,
            )
        return arr

    @staticmethod
    def _shape(result: np.ndarray, r):
        return float(result) if np.ndim(r) == 0 else result

    def value(self, r):
        return self._shape(self._value(self._radii(r)), r)

    def log_value(self, r):
        return self._shape(self._log_value(self._radii(r)), r)

    def log_derivative(self, r):
        """r V'(r) / V(r) from the closed-form derivative."""
        return self._shape(self._rdlog(self._radii(r)), r)


class Constant(_RadialPotential):
    kind: Literal["Constant"] = "Constant"
    level: float

    @model_validator(mode="after")
    def _check(self):
        _finite("level", self.level)
        if self.level < 0:
            raise ParamError("constant level must be >= 0", "level", self.level)
        return self

    def _value(self, r):
        return np.full_like(r, self.level)

    def _rdlog(self, r):
        return np.zeros_like(r)

    def lambda_limit(self) -> float:
        return 0.0

    def is_zero(self) -> bool:
        return self.level == 0.0


class Power(_RadialPotential):
    """r^{-a}"""
    kind: Literal["Power"] = "Power"
    exponent: float

    @model_validator(mode="after")
    def _check(self):
        _finite("exponent", self.exponent)
        return self

    def _value(self, r):
        return r ** (-self.exponent)

    def _log_value(self, r):
        return -self.exponent * np.log(r)

    def _rdlog(self, r):
        return np.full_like(r, -self.exponent)

    def lambda_limit(self) -> float:
        return self.exponent


class PowerWeighted(_RadialPotential):
    """(a + b r^alpha)^beta / r^{2m}"""
    kind: Literal["PowerWeighted"] = "PowerWeighted"
    a: float
    b: float
    alpha: float
    beta: float
    m: float = 0.0

    @model_validator(mode="after")
    def _check(self):
        for name in ("a", "b", "alpha", "beta", "m"):
            _finite(name, getattr(self, name))
        if self.a <= 0:
            raise ParamError("power-weighted a must be > 0", "a", self.a)
        if self.b <= 0:
            raise ParamError("power-weighted b must be > 0", "b", self.b)
        return self

    def _log_base(self, r):
        return np.logaddexp(math.log(self.a), math.log(self.b) + self.alpha * np.log(r))

    def _value(self, r):
        return np.exp(self._log_value(r))

    def _log_value(self, r):
        return self.beta * self._log_base(r) - 2.0 * self.m * np.log(r)

    def _rdlog(self, r):
        share = expit(math.log(self.b) + self.alpha * np.log(r) - math.log(self.a))
        return -2.0 * self.m + self.alpha * self.beta * share

    def lambda_limit(self) -> float:
        # branch rule of the power-family theorem, not the r -> 0 limit when alpha > 0
        product = self.alpha * self.beta
        if product < 0:
            return 2.0 * self.m - product
        return 2.0 * self.m


class IteratedLog(_RadialPotential):
    """W_{k,rho}(r) = sum_j r^{-2} (prod_{i<=j} log^(i)(rho/r))^{-2}"""
    kind: Literal["IteratedLog"] = "IteratedLog"
    k: int
    rho: float

    @model_validator(mode="after")
    def _check(self):
        _finite("rho", self.rho)
        if self.k < 1:
            raise ParamError("iterated-log depth must be >= 1", "k", self.k)
        if self.rho <= 0:
            raise ParamError("iterated-log scale must be > 0", "rho", self.rho)
        e_tower(self.k - 1)
        return self

    @property
    def domain_radius(self) -> float:
        return self.rho / (e_tower(self.k - 1) * (1.0 + TOWER_MARGIN))

    def _partials(self, r):
        logs = iterated_logs(self.rho / r, self.k)
        partials = np.cumprod(np.stack(logs), axis=0)
        return partials

    def _value(self, r):
        partials = self._partials(r)
        return np.sum(partials ** -2.0, axis=0) / r ** 2

    def _log_value(self, r):
        partials = self._partials(r)
        return logsumexp(-2.0 * np.log(partials), axis=0) - 2.0 * np.log(r)

    def _rdlog(self, r):
        partials = self._partials(r)
        weights = partials ** -2.0
        running = np.cumsum(1.0 / partials, axis=0)
        return -2.0 + 2.0 * np.sum(weights * running, axis=0) / np.sum(weights, axis=0)

    def lambda_limit(self) -> float:
        return 2.0


class XLog(_RadialPotential):
    """sum_j r^{-2} X_1^2(r/D) ... X_j^2(r/D)"""
    kind: Literal["XLog"] = "XLog"
    k: int
    D: float

    @model_validator(mode="after")
    def _check(self):
        _finite("D", self.D)
        if self.k < 1:
            raise ParamError("X-potential depth must be >= 1", "k", self.k)
        if self.D <= 0:
            raise ParamError("X-potential scale must be > 0", "D", self.D)
        return self

    @property
    def domain_radius(self) -> float:
        return self.D

    def _products(self, r):
        # t X_i'(t) / X_i(t) = X_1 ... X_i, so the partial products double as log-derivatives
        return np.cumprod(np.stack(x_chain(r / self.D, self.k)), axis=0)

    def _value(self, r):
        return np.sum(self._products(r) ** 2, axis=0) / r ** 2

    def _log_value(self, r):
        products = self._products(r)
        return logsumexp(2.0 * np.log(products), axis=0) - 2.0 * np.log(r)

    def _rdlog(self, r):
        products = self._products(r)
        weights = products ** 2
        running = np.cumsum(products, axis=0)
        return -2.0 + 2.0 * np.sum(weights * running, axis=0) / np.sum(weights, axis=0)

    def lambda_limit(self) -> float:
        return 2.0


class Scaled(_RadialPotential):
    """alpha^2 W(alpha r)"""
    kind: Literal["Scaled"] = "Scaled"
    alpha: float
    inner: "Potential"

    @model_validator(mode="after")
    def _check(self):
        _finite("alpha", self.alpha)
        if self.alpha <= 0:
            raise ParamError("scaling factor must be > 0", "alpha", self.alpha)
        return self

    @property
    def domain_radius(self) -> float:
        return self.inner.domain_radius / self.alpha

    def _value(self, r):
        return self.alpha ** 2 * self.inner._value(self.alpha * r)

    def _log_value(self, r):
        return 2.0 * math.log(self.alpha) + self.inner._log_value(self.alpha * r)

    def _rdlog(self, r):
        return self.inner._rdlog(self.alpha * r)

    def lambda_limit(self) -> float:
        return self.inner.lambda_limit()

    def is_zero(self) -> bool:
        return self.inner.is_zero()


class Sum(_RadialPotential):
    kind: Literal["Sum"] = "Sum"
    members: tuple["Potential", ...]

    @model_validator(mode="after")
    def _check(self):
        if not self.members:
            raise ParamError("sum needs at least one member", "members", 0)
        return self

    @property
    def domain_radius(self) -> float:
        return min(member.domain_radius for member in self.members)

    def _value(self, r):
        return np.sum([member._value(r) for member in self.members], axis=0)

    def _log_value(self, r):
        stacked = np.stack([np.broadcast_to(member._log_value(r), np.shape(r)) for member in self.members])
        return logsumexp(stacked, axis=0)

    def _rdlog(self, r):
        # quotient rule on the summed value, weighted in log space
        logs = np.stack([np.broadcast_to(member._log_value(r), np.shape(r)) for member in self.members])
        shares = np.exp(logs - logsumexp(logs, axis=0))
        slopes = np.stack([np.broadcast_to(member._rdlog(r), np.shape(r)) for member in self.members])
        return np.sum(shares * slopes, axis=0)

    def lambda_limit(self) -> float:
        live = [member for member in self.members if not member.is_zero()]
        if not live:
            return 0.0
        leading = max(member.lambda_limit() for member in live)
        inner_radius = min(self.domain_radius, 1.0) * 1e-12
        observed = float(self._rdlog(np.asarray(inner_radius)))
        if not math.isfinite(observed) or abs(observed + leading) > _SUM_LIMIT_SPREAD:
            raise NoLimitError(
                f"sum members do not settle on a common leading order (r V'/V = {observed:.6g} "
                f"near 0, leading member suggests {-leading:.6g})",
                kind=self.kind,
            )
        return leading

    def is_zero(self) -> bool:
        return all(member.is_zero() for member in self.members)


class Product(_RadialPotential):
    kind: Literal["Product"] = "Product"
    members: tuple["Potential", ...]

    @model_validator(mode="after")
    def _check(self):
        if not self.members:
            raise ParamError("product needs at least one member", "members", 0)
        return self

    @property
    def domain_radius(self) -> float:
        return min(member.domain_radius for member in self.members)

    def _value(self, r):
        return np.prod([member._value(r) for member in self.members], axis=0)

    def _log_value(self, r):
        return np.sum([member._log_value(r) for member in self.members], axis=0)

    def _rdlog(self, r):
        return np.sum([member._rdlog(r) for member in self.members], axis=0)

    def lambda_limit(self) -> float:
        return sum(member.lambda_limit() for member in self.members)

    def is_zero(self) -> bool:
        return any(member.is_zero() for member in self.members)


Potential = Annotated[
    Union[Constant, Power, PowerWeighted, IteratedLog, XLog, Scaled, Sum, Product],
    Field(discriminator="kind"),
]

Scaled.model_rebuild()
Sum.model_rebuild()
Product.model_rebuild()


# -----------------------------
# Module-level operations
# -----------------------------
def evaluate(potential: Potential, r):
    """W(r) for 0 < r <= domain radius."""
    return potential.value(r)


def log_value(potential: Potential, r):
    return potential.log_value(r)


def log_derivative(potential: Potential, r):
    return potential.log_derivative(r)


def lambda_limit(potential: Potential) -> float:
    """-lim_{r -> 0} r V'(r) / V(r)"""
    return potential.lambda_limit()


def is_identically_zero(potential: Potential) -> bool:
    return potential.is_zero()


def require_radius(potential: Potential, radius: float, name: str = "R") -> None:
    if radius > potential.domain_radius:
        raise ParamError(
            f"{name}={radius:g} exceeds the domain radius {potential.domain_radius:g} "
            f"of the {potential.kind} potential",
            name,
            radius,
        )
