# src/besselpairs/services/verification.py

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from besselpairs.core import constants, oracle, sturm, weights
from besselpairs.core.potentials import Constant, IteratedLog, Power, PowerWeighted, Product
from besselpairs.models.enums import CriterionClass, Suite
from besselpairs.models.schemas import BesselPairSpec, CheckItem, SuiteReport
from besselpairs.utils.exceptions import BesselPairError
from besselpairs.utils.logger import get_logger
from besselpairs.workers.pool import ordered_map

Check = Tuple[str, Callable[[], CheckItem]]

TABLE_DIMENSIONS = range(1, 13)
TABLE_STEP = 0.1
HARDY_ORACLE_TOL = 0.02
MODE_ORACLE_TOL = 0.03
SCALING_RADII = (0.5, 1.0, 2.0, 4.0)
SCALING_TOL = 1e-7
LADDER_PAIRS = 20
LADDER_COUPLINGS = tuple(float(c) for c in np.geomspace(0.05, 200.0, 10))


def _compare(name: str, expected: float, observed: float, tolerance: float, relative: bool = False, detail: str = None) -> CheckItem:
    deviation = abs(observed - expected)
    if relative:
        deviation /= abs(expected)
    return CheckItem(
        name=name,
        passed=bool(deviation <= tolerance),
        expected=expected,
        observed=observed,
        deviation=deviation,
        tolerance=tolerance,
        detail=detail,
    )


class VerificationService:
    """Cross-checks closed forms, the discretized oracle and ODE weights.

    A failing or raising check is recorded and the suite carries on.
    """

    def __init__(self, threads: Optional[int] = None, oracle_grid: Optional[int] = None):
        self.threads = threads
        self.oracle_grid = oracle_grid
        self.log = get_logger(__name__)

    def run(self, suite: Suite) -> SuiteReport:
        suite = Suite(suite)
        checks = {
            Suite.CLASSICAL: self._classical,
            Suite.CASE_TABLE: self._case_table,
            Suite.RELLICH: self._rellich,
            Suite.WEIGHTS: self._weights,
        }[suite]()
        items = ordered_map(self._guarded, checks, threads=self.threads)
        report = SuiteReport(suite=suite, items=items)
        self.log.info(
            "suite_done",
            suite=suite.value,
            passed=report.passed,
            failures=sum(not item.passed for item in items),
            max_deviation=report.max_deviation,
        )
        return report

    def _guarded(self, check: Check) -> CheckItem:
        name, body = check
        try:
            return body()
        except BesselPairError as exc:
            self.log.warning("check_failed", check=name, error_code=exc.error_code, message=exc.message)
            return CheckItem(name=name, passed=False, detail=f"{exc.error_code}: {exc.message}")
        except Exception as exc:
            self.log.warning("check_crashed", check=name, error_type=type(exc).__name__, message=str(exc))
            return CheckItem(name=name, passed=False, detail=f"{type(exc).__name__}: {exc}")

    # -----------------------------
    # classical
    # -----------------------------
    def _classical(self) -> List[Check]:
        checks: List[Check] = []
        for n in range(3, 11):
            checks.append((f"hardy oracle n={n}", lambda n=n: _compare(
                f"hardy oracle n={n}",
                constants.hardy_constant(n, 0.0),
                oracle.discrete_hardy_quotient(Constant(level=1.0), Power(exponent=2.0), n, 1.0, N=self.oracle_grid),
                HARDY_ORACLE_TOL,
                relative=True,
            )))
        for n in (3, 5, 8):
            checks.append((f"hardy weight n={n}", lambda n=n: _compare(
                f"hardy weight n={n}",
                constants.hardy_constant(n, 0.0),
                weights.weight_pair(Constant(level=1.0), Power(exponent=2.0), n, 1.0).require_finite().value,
                1e-6,
            )))
        checks.append(("bessel zero", lambda: _compare(
            "bessel zero",
            constants.Z0,
            sturm.bessel_zero_z0(),
            1e-12,
        )))
        return checks

    # -----------------------------
    # appendixB
    # -----------------------------
    @staticmethod
    def _table_start(n: int) -> float:
        return -1.5 + 1e-9 if n == 1 else constants.exmain_window(n)[0]

    @classmethod
    def _case_table_grid(cls, n: int) -> List[float]:
        """In-regime m on the 0.1 lattice where the piecewise table applies unambiguously."""
        lo, hi = cls._table_start(n), (-0.5 if n == 1 else (n - 2) / 2.0)
        first = math.ceil(lo / TABLE_STEP - 1e-9)
        last = math.floor(hi / TABLE_STEP + 1e-9)
        return [round(j * TABLE_STEP, 10) for j in range(first, last + 1)]

    @classmethod
    def _below_window_grid(cls, n: int) -> List[float]:
        """m on the 0.1 lattice from -(n + 4)/2 up to the start of the in-regime grid."""
        first = math.ceil(-(n + 4) / 2.0 / TABLE_STEP - 1e-9)
        last = math.ceil(cls._table_start(n) / TABLE_STEP - 1e-9) - 1
        return [round(j * TABLE_STEP, 10) for j in range(first, last + 1)]

    def _below_window_dimension(self, n: int) -> CheckItem:
        """Below the window the radial branch of the table can overshoot; the scan stays the minimum."""
        worst, compared, failures, disagreements = 0.0, 0, [], []
        for m in self._below_window_grid(n):
            result = constants.a_nm(n, m)
            if result.table_value is None:
                continue
            compared += 1
            excess = result.value - result.table_value
            worst = max(worst, excess)
            if excess > constants.TABLE_TOL * max(1.0, abs(result.table_value)):
                failures.append(f"m={m:g}")
            if not result.table_agrees:
                disagreements.append(f"m={m:g} (scan {result.value:.6g}, table {result.table_value:.6g})")
        detail = f"{compared} points"
        if disagreements:
            detail += f"; table disagrees with scan at {', '.join(disagreements)}"
        if failures:
            detail += f"; scan above table at {', '.join(failures)}"
        return CheckItem(
            name=f"a_nm below window n={n}",
            passed=not failures and compared > 0,
            deviation=max(worst, 0.0),
            tolerance=constants.TABLE_TOL,
            detail=detail,
        )

    def _case_table_dimension(self, n: int) -> CheckItem:
        worst, compared, failures = 0.0, 0, []
        for m in self._case_table_grid(n):
            result = constants.a_nm(n, m)
            if result.table_value is None or "near subinterval boundary" in (result.table_case or ""):
                continue
            compared += 1
            deviation = abs(result.value - result.table_value)
            worst = max(worst, deviation)
            if not result.table_agrees:
                failures.append(f"m={m:g}")
        return CheckItem(
            name=f"a_nm table n={n}",
            passed=not failures and compared > 0,
            deviation=worst,
            tolerance=constants.TABLE_TOL,
            detail=f"{compared} points" + (f"; disagree at {', '.join(failures)}" if failures else ""),
        )

    def _case_table(self) -> List[Check]:
        checks: List[Check] = [
            (f"a_nm table n={n}", lambda n=n: self._case_table_dimension(n)) for n in TABLE_DIMENSIONS
        ]
        checks += [
            (f"a_nm below window n={n}", lambda n=n: self._below_window_dimension(n)) for n in TABLE_DIMENSIONS
        ]
        for n, expected in ((3, 25.0 / 36.0), (4, 3.0), (5, 6.25)):
            checks.append((f"a_nm n={n} m=0", lambda n=n, expected=expected: _compare(
                f"a_nm n={n} m=0", expected, constants.a_nm(n, 0.0).value, constants.TABLE_TOL
            )))
        return checks

    # -----------------------------
    # rellich
    # -----------------------------
    def _mode_oracle(self, n: int, expected_k: int) -> CheckItem:
        scan = oracle.discrete_hardy_rellich(n, 0.0, N=self.oracle_grid)
        item = _compare(
            f"hardy-rellich oracle n={n}",
            constants.cn_constant(n),
            scan.value,
            MODE_ORACLE_TOL,
            relative=True,
            detail=f"k_min={scan.k_min} closed form k_min={scan.closed_form_k_min}",
        )
        item.passed = item.passed and scan.k_min == expected_k and scan.matches_closed_form
        return item

    def _rellich(self) -> List[Check]:
        checks: List[Check] = []
        for n in range(5, 13):
            checks.append((f"beta_nm n={n} m=0", lambda n=n: _compare(
                f"beta_nm n={n} m=0", n * n * (n - 4) ** 2 / 16.0, constants.beta_nm(n, 0.0).value, 1e-12
            )))
        checks.append(("beta_nm n=4 m=0", lambda: _compare("beta_nm n=4 m=0", 0.0, constants.beta_nm(4, 0.0).value, 1e-12)))
        for n in range(4, 13):
            checks.append((f"sigma n={n}", lambda n=n: _compare(
                f"sigma n={n}", 1.0 + n * (n - 4) / 8.0, constants.sigma_nm(n, 0.0, 2.0, 0.25), 1e-12
            )))
        for n, expected_k in ((3, 1), (4, 1), (5, 0)):
            checks.append((f"hardy-rellich oracle n={n}", lambda n=n, k=expected_k: self._mode_oracle(n, k)))
        return checks

    # -----------------------------
    # weights
    # -----------------------------
    @staticmethod
    def _scaling() -> CheckItem:
        # the bisection width is absolute in c, so tighten it by R^2 before scaling back
        z0_squared = constants.Z0 ** 2
        products = [
            weights.weight_potential(Constant(level=1.0), R, tol=SCALING_TOL / (R * R)).require_finite().value * R * R
            for R in SCALING_RADII
        ]
        spread = max(abs(p - z0_squared) for p in products)
        return CheckItem(
            name="bessel scaling beta(1;R) R^2",
            passed=spread <= 1e-6,
            expected=z0_squared,
            observed=products[-1],
            deviation=spread,
            tolerance=1e-6,
        )

    @staticmethod
    def _criterion(c: float) -> CheckItem:
        report = weights.criterion_at_zero(Constant(level=1.0), Product(members=(Constant(level=c), Power(exponent=2.0))), 5, 1.0)
        item = _compare(f"criterion at zero c={c:g}", c / 9.0, report.limit_estimate, 1e-4)
        expected = (
            CriterionClass.SUFFICIENT_BELOW_QUARTER if c / 9.0 < 0.25 else CriterionClass.NECESSARY_FAIL_ABOVE_QUARTER
        )
        item.passed = item.passed and report.classification == expected
        item.detail = report.classification.value
        return item

    @staticmethod
    def _residual(k: int) -> CheckItem:
        rho = math.e ** k
        pair = BesselPairSpec(V=Constant(level=1.0), W=IteratedLog(k=k, rho=rho), n=2, R=1.0, c=0.25)
        grid = np.geomspace(1e-6, 0.5, 200)
        value = sturm.residual(sturm.iterated_log_solution(k, rho), pair, grid)
        return CheckItem(name=f"iterated-log residual k={k}", passed=value < 1e-6, observed=value, deviation=value, tolerance=1e-6)

    @staticmethod
    def _power_family() -> CheckItem:
        V = PowerWeighted(a=1.0, b=1.0, alpha=2.0, beta=1.0, m=0.0)
        estimate = weights.weight_pair(V, Product(members=(V, Power(exponent=2.0))), 5, 1.0).require_finite()
        return _compare("power family weight n=5", 2.25, estimate.value, 0.05, relative=True)

    @staticmethod
    def _infinity() -> CheckItem:
        V = PowerWeighted(a=1.0, b=1.0, alpha=-2.0, beta=-1.0, m=0.0)
        n = 5
        limit = weights.criterion_at_infinity(
            lambda r: r ** (n - 1) * V.value(r),
            lambda r: r ** (n - 1) * V.value(r) / r ** 2,
            1.0,
        )
        return _compare("criterion at infinity n=5", 1.0 / (n - 2) ** 2, limit, 1e-3)

    @staticmethod
    def _ladder_counts(pair: BesselPairSpec) -> Optional[str]:
        counts = [sturm.prufer_shoot(pair.with_coupling(c), boundary_policy="positive").zero_count for c in LADDER_COUPLINGS]
        if any(b < a for a, b in zip(counts, counts[1:])):
            return f"pow:{pair.W.exponent:.3g} n={pair.n} counts={counts}"
        return None

    def _ladder(self) -> CheckItem:
        rng = np.random.default_rng(20240601)
        pairs = []
        for _ in range(LADDER_PAIRS):
            W = Power(exponent=float(rng.uniform(0.0, 2.0)))
            pairs.append(BesselPairSpec(V=Constant(level=1.0), W=W, n=int(rng.integers(2, 6)), R=1.0))
        broken = [line for line in ordered_map(self._ladder_counts, pairs, threads=self.threads) if line]
        return CheckItem(
            name="zero count monotone in c",
            passed=not broken,
            detail="; ".join(broken) or f"{len(pairs)} pairs x {len(LADDER_COUPLINGS)} couplings",
        )

    def _weights(self) -> List[Check]:
        return [
            ("bessel weight", lambda: _compare(
                "bessel weight",
                sturm.bessel_zero_z0() ** 2,
                weights.weight_potential(Constant(level=1.0), 1.0).require_finite().value,
                1e-6,
            )),
            ("bessel scaling beta(1;R) R^2", self._scaling),
            ("criterion at zero c=0.2", lambda: self._criterion(0.2)),
            ("criterion at zero c=3", lambda: self._criterion(3.0)),
            ("iterated-log residual k=1", lambda: self._residual(1)),
            ("iterated-log residual k=2", lambda: self._residual(2)),
            ("iterated-log weight k=1", lambda: _compare(
                "iterated-log weight k=1",
                0.25,
                weights.weight_potential(IteratedLog(k=1, rho=math.e), 1.0).require_finite().value,
                0.05,
            )),
            ("power family weight n=5", self._power_family),
            ("criterion at infinity n=5", self._infinity),
            ("zero count monotone in c", self._ladder),
        ]
