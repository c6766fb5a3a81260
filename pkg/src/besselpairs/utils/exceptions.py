class BesselPairError(Exception):
    """Base exception for Bessel pair computations"""
    exit_code = 4

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        self.message = message
        self.error_code = error_code or "BESSEL_PAIR_ERROR"
        self.details = details or {}
        super().__init__(self.message)


# -----------------------------
# Usage errors (exit 2)
# -----------------------------
class DomainError(BesselPairError):
    """Radius outside the domain of a potential"""
    exit_code = 2

    def __init__(self, message: str, radius: float = None, domain_radius: float = None):
        super().__init__(
            message,
            "DOMAIN_ERROR",
            {"radius": radius, "domain_radius": domain_radius}
        )


class ParamError(BesselPairError):
    """Invalid parameter at construction time"""
    exit_code = 2

    def __init__(self, message: str, parameter: str = None, value=None):
        super().__init__(message, "PARAM_ERROR", {"parameter": parameter, "value": value})


class ExpressionError(ParamError):
    """Potential expression does not follow the grammar"""

    def __init__(self, message: str, text: str = None, position: int = None):
        BesselPairError.__init__(
            self, message, "EXPRESSION_ERROR", {"text": text, "position": position}
        )


class IllFormedStudyError(BesselPairError):
    """Convergence study grid is unusable"""
    exit_code = 2

    def __init__(self, message: str, sizes: list = None):
        super().__init__(message, "ILL_FORMED_STUDY", {"sizes": sizes})


# -----------------------------
# Regime errors (exit 3)
# -----------------------------
class OutOfRegimeError(BesselPairError):
    """A theorem hypothesis fails for the requested parameters"""
    exit_code = 3

    def __init__(self, message: str, constant: str = None, condition: str = None, **params):
        super().__init__(
            message,
            "OUT_OF_REGIME",
            {"constant": constant, "condition": condition, "params": params}
        )


class DegenerateModeError(BesselPairError):
    """Both denominators of the mode quotient vanish"""
    exit_code = 3

    def __init__(self, message: str, k: int = None, m: float = None, n: int = None):
        super().__init__(message, "DEGENERATE_MODE", {"k": k, "m": m, "n": n})


# -----------------------------
# Numerical failures (exit 4)
# -----------------------------
class NoLimitError(BesselPairError):
    """Limit of r V'/V at the origin is not well defined"""

    def __init__(self, message: str, kind: str = None):
        super().__init__(message, "NO_LIMIT", {"kind": kind})


class StiffnessError(BesselPairError):
    """Adaptive integrator step collapsed"""

    def __init__(self, message: str, radius: float = None, status: int = None):
        super().__init__(message, "STIFFNESS_ERROR", {"radius": radius, "status": status})


class InconclusiveShootError(BesselPairError):
    """A zero sits within tolerance of the outer endpoint"""

    def __init__(self, message: str, margin: float = None, tol: float = None):
        super().__init__(message, "REPORTS_INCONCLUSIVE", {"margin": margin, "tol": tol})


class InfiniteWeightError(BesselPairError):
    """No zero appeared up to the coupling cap"""

    def __init__(self, message: str, cap: float = None):
        super().__init__(message, "INFINITE_WEIGHT", {"cap": cap})


class QuadratureError(BesselPairError):
    """Quadrature diverged or failed to converge"""

    def __init__(self, message: str, lower: float = None, upper: float = None):
        super().__init__(message, "QUADRATURE_ERROR", {"lower": lower, "upper": upper})


class SingularMassError(BesselPairError):
    """Mass form vanishes on the whole grid"""

    def __init__(self, message: str, grid_size: int = None):
        super().__init__(message, "SINGULAR_MASS", {"grid_size": grid_size})


# -----------------------------
# Warnings
# -----------------------------
class NoLimitWarning(UserWarning):
    """Samples of a limit estimate do not settle"""


class HypothesisWarning(UserWarning):
    """Integrability hypotheses of the equivalence theorem fail numerically"""
