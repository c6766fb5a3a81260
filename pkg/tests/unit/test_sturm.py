import math

import numpy as np
import pytest

from besselpairs.core.constants import Z0
from besselpairs.core.potentials import Constant, IteratedLog, Power, XLog
from besselpairs.core.sturm import (
    bessel_j0,
    bessel_zero_z0,
    hypothesis_check,
    iterated_log_solution,
    log_solution,
    origin_index,
    prufer_shoot,
    residual,
    to_selfadjoint,
    x_chain_solution,
)
from besselpairs.models.schemas import BesselPairSpec
from besselpairs.utils.exceptions import HypothesisWarning, ParamError
from tests.fixtures.sample_potentials import INVERSE_SQUARE, UNIT, ZERO

LOG_GRID = np.geomspace(1e-6, 0.5, 200)


class TestBesselFunction:
    def test_series_at_origin(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_zero(self):
        assert bessel_zero_z0() == pytest.approx(Z0, abs=1e-12)
        assert abs(bessel_j0(bessel_zero_z0())) < 1e-14


class TestShooting:
    def test_below_bessel_threshold_is_positive(self, bessel_pair):
        report = prufer_shoot(bessel_pair.with_coupling(5.0))
        assert report.positive_on_interval
        assert report.zero_count == 0
        assert not report.oscillatory_at_origin

    def test_above_bessel_threshold_has_one_zero(self, bessel_pair):
        c = 6.5
        report = prufer_shoot(bessel_pair.with_coupling(c))
        assert report.zero_count == 1
        assert report.first_zero == pytest.approx(Z0 / math.sqrt(c), rel=1e-6)
        assert report.step_stats.nfev > 0

    def test_zero_count_grows_with_coupling(self, bessel_pair):
        counts = [prufer_shoot(bessel_pair.with_coupling(c)).zero_count for c in (1.0, 40.0, 200.0)]
        assert counts == sorted(counts)
        assert counts[-1] >= 4

    def test_hardy_threshold_is_detected_at_the_origin(self, hardy_pair):
        below = prufer_shoot(hardy_pair.with_coupling(0.2))
        above = prufer_shoot(hardy_pair.with_coupling(0.3))
        assert below.positive_on_interval
        assert above.oscillatory_at_origin
        assert not above.positive_on_interval
        assert above.origin_index > 0.25

    def test_critical_exponent_oscillates_at_the_origin(self):
        # V = r^-1, W = r^-3 in dimension 3: the index is c log^2(R/r) and never settles
        pair = BesselPairSpec(V=Power(exponent=1.0), W=Power(exponent=3.0), n=3, R=1.0, c=1e-3)
        report = prufer_shoot(pair)
        assert report.origin_index == math.inf
        assert report.oscillatory_at_origin
        assert not report.positive_on_interval

    @pytest.mark.parametrize("eps", [1e-4, 1e-6, 1e-8])
    def test_origin_index_is_the_limit_not_the_value_at_eps(self, hardy_pair, eps):
        # c (1 - r/R)^2 at any single radius; the limit is c
        assert origin_index(hardy_pair.with_coupling(0.2), eps) == pytest.approx(0.2, rel=1e-6)

    def test_positive_verdict_does_not_depend_on_the_cutoff(self, hardy_pair):
        reports = [prufer_shoot(hardy_pair.with_coupling(0.2), eps=eps) for eps in (1e-4, 1e-6, 1e-8)]
        assert all(report.positive_on_interval for report in reports)
        assert {report.zero_count for report in reports} == {0}

    def test_oscillatory_verdict_does_not_depend_on_the_cutoff(self, hardy_pair):
        reports = [prufer_shoot(hardy_pair.with_coupling(0.3), eps=eps) for eps in (1e-4, 1e-6, 1e-8)]
        assert all(report.oscillatory_at_origin for report in reports)
        assert not any(report.positive_on_interval for report in reports)

    def test_origin_index_vanishes_without_coupling(self, hardy_pair):
        assert origin_index(hardy_pair.with_coupling(0.0), 1e-8) == 0.0

    def test_degenerate_pair_reports_positive(self):
        pair = BesselPairSpec(V=UNIT, W=ZERO, n=2, R=1.0)
        report = prufer_shoot(pair)
        assert report.degenerate
        assert report.positive_on_interval

    def test_eps_must_be_inside(self, bessel_pair):
        with pytest.raises(ParamError):
            prufer_shoot(bessel_pair, eps=0.75)
        with pytest.raises(ParamError):
            prufer_shoot(bessel_pair, tol=0.0)


class TestSelfAdjointForm:
    def test_coefficients(self, hardy_pair):
        form = to_selfadjoint(hardy_pair.with_coupling(2.0))
        assert form.p(0.5) == pytest.approx(0.25)
        assert form.dp(0.5) == pytest.approx(1.0)
        assert form.q(0.5) == pytest.approx(2.0 * 0.25 * 4.0)


class TestExplicitSolutions:
    def test_log_solution(self):
        pair = BesselPairSpec(V=UNIT, W=ZERO, n=2, R=1.0)
        phi = log_solution(1.0)
        assert phi(1.0) == pytest.approx(1.0)
        assert residual(phi, pair, np.geomspace(1e-3, 0.9, 50)) < 1e-6

    def test_bessel_solution(self, bessel_pair):
        R = 1.0
        phi = lambda r: bessel_j0(Z0 * np.asarray(r) / R)
        pair = bessel_pair.with_coupling(Z0 ** 2)
        assert residual(phi, pair, np.geomspace(1e-3, 0.9, 50)) < 1e-6

    @pytest.mark.parametrize("k", [1, 2])
    def test_iterated_log_solutions(self, k):
        rho = math.e ** k
        pair = BesselPairSpec(V=UNIT, W=IteratedLog(k=k, rho=rho), n=2, R=1.0, c=0.25)
        assert residual(iterated_log_solution(k, rho), pair, LOG_GRID) < 1e-6

    def test_x_chain_solution(self):
        pair = BesselPairSpec(V=UNIT, W=XLog(k=1, D=1.0), n=2, R=1.0, c=0.25)
        assert residual(x_chain_solution(1, 1.0), pair, LOG_GRID) < 1e-6

    def test_wrong_coupling_has_a_residual(self):
        pair = BesselPairSpec(V=UNIT, W=IteratedLog(k=1, rho=math.e), n=2, R=1.0, c=1.0)
        assert residual(iterated_log_solution(1, math.e), pair, LOG_GRID) > 1e-3


class TestHypotheses:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_constant_weight_satisfies_hypotheses(self, n):
        assert hypothesis_check(BesselPairSpec(V=UNIT, W=INVERSE_SQUARE, n=n, R=1.0)).holds

    def test_dimension_one_warns(self):
        with pytest.warns(HypothesisWarning):
            report = hypothesis_check(BesselPairSpec(V=Constant(level=1.0), W=INVERSE_SQUARE, n=1, R=1.0))
        assert not report.flux_diverges
