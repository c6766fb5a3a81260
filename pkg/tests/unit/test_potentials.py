import math

import numpy as np
import pytest

from besselpairs.core.potentials import (
    Constant,
    IteratedLog,
    Power,
    PowerWeighted,
    Product,
    Scaled,
    Sum,
    XLog,
    e_tower,
    evaluate,
    is_identically_zero,
    lambda_limit,
    log_derivative,
    log_value,
    x_chain,
)
from besselpairs.utils.exceptions import DomainError, ParamError
from tests.fixtures.sample_potentials import (
    GROWING,
    ILOG_1,
    INVERSE_SQUARE,
    SATURATING,
    UNIT,
    XLOG_1,
    ZERO,
)


class TestEvaluation:
    def test_constant_and_power(self):
        assert evaluate(UNIT, 0.3) == 1.0
        assert evaluate(INVERSE_SQUARE, 0.5) == pytest.approx(4.0)
        assert log_value(INVERSE_SQUARE, 0.5) == pytest.approx(2.0 * math.log(2.0))

    def test_vectorised_evaluation_keeps_shape(self):
        r = np.array([0.25, 0.5, 1.0])
        assert np.allclose(evaluate(INVERSE_SQUARE, r), [16.0, 4.0, 1.0])

    def test_power_weighted(self):
        assert evaluate(GROWING, 2.0) == pytest.approx(5.0)
        # r V'/V = 2 r^2 / (1 + r^2)
        assert log_derivative(GROWING, 2.0) == pytest.approx(1.6)

    def test_iterated_log_at_unit_log(self):
        # log(e / 1) = 1, so W = 1 and r W'/W = -2 + 2 / log(rho / r) = 0
        assert evaluate(ILOG_1, 1.0) == pytest.approx(1.0)
        assert log_derivative(ILOG_1, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_iterated_log_derivative_matches_differences(self):
        W = IteratedLog(k=2, rho=10.0)
        r, h = 0.01, 1e-6
        numeric = r * (evaluate(W, r + h) - evaluate(W, r - h)) / (2 * h) / evaluate(W, r)
        assert log_derivative(W, r) == pytest.approx(numeric, rel=1e-6)

    def test_xlog_derivative_matches_differences(self):
        W = XLog(k=2, D=1.0)
        r, h = 0.05, 1e-7
        numeric = r * (evaluate(W, r + h) - evaluate(W, r - h)) / (2 * h) / evaluate(W, r)
        assert log_derivative(W, r) == pytest.approx(numeric, rel=1e-6)

    def test_xlog_at_scale(self):
        assert evaluate(XLOG_1, 1.0) == pytest.approx(1.0)

    def test_scaled_inverse_square_is_invariant(self):
        scaled = Scaled(alpha=2.0, inner=INVERSE_SQUARE)
        assert evaluate(scaled, 0.3) == pytest.approx(evaluate(INVERSE_SQUARE, 0.3))

    def test_product_log_derivative_adds(self):
        product = Product(members=(GROWING, INVERSE_SQUARE))
        assert log_derivative(product, 2.0) == pytest.approx(1.6 - 2.0)

    def test_sum_log_value_is_stable_far_inside(self):
        total = Sum(members=(UNIT, Power(exponent=40.0)))
        assert log_value(total, 1e-20) == pytest.approx(800.0 * math.log(10.0))


class TestDomains:
    def test_iterated_log_domain(self):
        assert ILOG_1.domain_radius == pytest.approx(math.e)
        with pytest.raises(DomainError):
            evaluate(IteratedLog(k=1, rho=1.0), 2.0)

    def test_nonpositive_radius(self):
        with pytest.raises(DomainError):
            evaluate(UNIT, 0.0)

    def test_scaled_domain(self):
        assert Scaled(alpha=2.0, inner=XLOG_1).domain_radius == pytest.approx(0.5)

    def test_e_tower(self):
        assert e_tower(0) == 1.0
        assert e_tower(1) == pytest.approx(math.e)
        assert e_tower(2) == pytest.approx(math.e ** math.e)
        with pytest.raises(ParamError):
            e_tower(4)


class TestValidation:
    @pytest.mark.parametrize(
        "build",
        [
            lambda: Constant(level=-1.0),
            lambda: Power(exponent=math.inf),
            lambda: PowerWeighted(a=0.0, b=1.0, alpha=1.0, beta=1.0),
            lambda: IteratedLog(k=0, rho=1.0),
            lambda: XLog(k=1, D=-1.0),
            lambda: Scaled(alpha=0.0, inner=UNIT),
            lambda: Sum(members=()),
        ],
    )
    def test_invalid_parameters(self, build):
        with pytest.raises(ParamError):
            build()

    def test_models_are_frozen(self):
        with pytest.raises(Exception):
            UNIT.level = 2.0


class TestLimits:
    def test_lambda_limits(self):
        assert lambda_limit(UNIT) == 0.0
        assert lambda_limit(INVERSE_SQUARE) == 2.0
        assert lambda_limit(ILOG_1) == 2.0
        assert lambda_limit(GROWING) == 0.0
        assert lambda_limit(SATURATING) == 0.0
        assert lambda_limit(PowerWeighted(a=1.0, b=1.0, alpha=2.0, beta=-1.0, m=0.5)) == pytest.approx(3.0)

    def test_sum_takes_the_dominant_member(self):
        assert lambda_limit(Sum(members=(UNIT, INVERSE_SQUARE))) == 2.0

    def test_identically_zero(self):
        assert is_identically_zero(ZERO)
        assert is_identically_zero(Product(members=(ZERO, INVERSE_SQUARE)))
        assert is_identically_zero(Sum(members=(ZERO, ZERO)))
        assert not is_identically_zero(Sum(members=(ZERO, UNIT)))


EVERY_KIND = [
    UNIT,
    INVERSE_SQUARE,
    GROWING,
    SATURATING,
    ILOG_1,
    IteratedLog(k=3, rho=math.e ** math.e ** math.e),
    XLOG_1,
    XLog(k=3, D=1.0),
    Scaled(alpha=3.0, inner=GROWING),
    Sum(members=(UNIT, INVERSE_SQUARE)),
    Product(members=(GROWING, ILOG_1)),
]


class TestConsistency:
    @pytest.mark.parametrize("W", EVERY_KIND, ids=lambda W: W.kind)
    def test_log_derivative_matches_differences(self, W):
        # d log W / d log r by central differences in log r
        r = np.geomspace(1e-6, 0.3, 50)
        h = 1e-5
        numeric = (log_value(W, r * math.exp(h)) - log_value(W, r * math.exp(-h))) / (2.0 * h)
        exact = log_derivative(W, r)
        assert np.allclose(exact, numeric, rtol=1e-6, atol=1e-6)

    def test_scaled_matches_its_definition(self):
        rng = np.random.default_rng(7)
        for alpha, r in zip(rng.uniform(0.1, 10.0, 100), rng.uniform(1e-4, 0.09, 100)):
            scaled = Scaled(alpha=float(alpha), inner=GROWING)
            assert evaluate(scaled, float(r)) == pytest.approx(alpha ** 2 * evaluate(GROWING, alpha * r), rel=1e-12)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_x_chain_nests(self, k):
        t = np.geomspace(1e-8, 0.9, 20)
        chain = x_chain(t, k)
        assert len(chain) == k
        assert np.allclose(chain[0], 1.0 / (1.0 - np.log(t)), rtol=1e-14)
        for previous, current in zip(chain, chain[1:]):
            assert np.allclose(current, 1.0 / (1.0 - np.log(previous)), rtol=1e-14)
            assert np.all((0.0 < current) & (current < 1.0))
