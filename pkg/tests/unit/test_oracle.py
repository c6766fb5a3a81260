import math

import pytest

from besselpairs.core.constants import hardy_constant, mode_constant_A
from besselpairs.core.oracle import (
    convergence_study,
    discrete_hardy_quotient,
    discrete_hardy_rellich,
    discrete_mode_quotient,
    flat_dirichlet_quotient,
    problem_solver,
)
from besselpairs.core.potentials import Constant, Power, Product
from besselpairs.utils.exceptions import (
    IllFormedStudyError,
    OutOfRegimeError,
    ParamError,
    SingularMassError,
)
from tests.fixtures.sample_potentials import INVERSE_SQUARE, UNIT, ZERO

GRID = 4096


class TestHardyQuotient:
    @pytest.mark.parametrize("n", [3, 4, 5, 7, 10])
    def test_matches_closed_form(self, n):
        value = discrete_hardy_quotient(UNIT, INVERSE_SQUARE, n, 1.0, N=GRID)
        assert value == pytest.approx(hardy_constant(n, 0.0), rel=0.02)

    def test_scale_invariance(self):
        plain = discrete_hardy_quotient(UNIT, INVERSE_SQUARE, 3, 1.0, N=1024)
        scaled = discrete_hardy_quotient(
            Constant(level=7.0), Product(members=(Constant(level=7.0), INVERSE_SQUARE)), 3, 1.0, N=1024
        )
        assert scaled == pytest.approx(plain, rel=1e-8)

    def test_weight_inside_ode_bracket(self):
        value = discrete_hardy_quotient(UNIT, UNIT, 2, 1.0, N=GRID, log_span=30.0)
        assert value == pytest.approx(2.404825557695773 ** 2, rel=0.02)

    def test_singular_mass(self):
        with pytest.raises(SingularMassError):
            discrete_hardy_quotient(UNIT, ZERO, 3, 1.0, N=256)

    def test_grid_must_be_large_enough(self):
        with pytest.raises(ParamError):
            discrete_hardy_quotient(UNIT, INVERSE_SQUARE, 3, 1.0, N=32)


class TestModeQuotient:
    @pytest.mark.parametrize(
        "n, m, k, expected",
        [(4, 0.0, 1, 3.0), (3, 0.0, 1, 25.0 / 36.0), (5, 0.0, 0, 6.25)],
    )
    def test_known_modes(self, n, m, k, expected):
        assert discrete_mode_quotient(n, m, k, N=GRID) == pytest.approx(expected, rel=0.03)

    def test_out_of_regime(self):
        with pytest.raises(OutOfRegimeError):
            discrete_mode_quotient(4, 2.0, 1)

    @pytest.mark.parametrize("n, m", [(3, 0.0), (4, 0.0), (5, 0.0), (6, -1.0)])
    def test_mode_ordering_matches_closed_form(self, n, m):
        discrete = [discrete_mode_quotient(n, m, k, N=GRID) for k in range(7)]
        closed = [mode_constant_A(k, m, n) for k in range(7)]
        assert discrete.index(min(discrete)) == closed.index(min(closed))


@pytest.mark.slow
class TestHardyRellich:
    @pytest.mark.parametrize("n, value, k", [(3, 25.0 / 36.0, 1), (4, 3.0, 1), (5, 6.25, 0)])
    def test_reproduces_constants(self, n, value, k):
        result = discrete_hardy_rellich(n, 0.0, N=GRID)
        assert result.value == pytest.approx(value, rel=0.03)
        assert result.k_min == k
        assert result.matches_closed_form

    def test_k_max_below_cutoff(self):
        with pytest.raises(ParamError):
            discrete_hardy_rellich(4, 0.0, k_max=0, N=256)


class TestStudies:
    def test_flat_sanity_problem(self):
        assert flat_dirichlet_quotient(1.0, N=512) == pytest.approx(math.pi ** 2, rel=0.005)

    @pytest.mark.slow
    def test_hardy_study_extrapolates(self):
        study = convergence_study("hardy:n=3", [512, 1024, 2048, 4096])
        assert study.limit == pytest.approx(0.25, rel=0.005)
        assert [row.N for row in study.rows] == [512, 1024, 2048, 4096]
        assert study.rows[0].extrapolated is None

    def test_flat_study(self):
        study = convergence_study("flat:R=2", [128, 256, 512])
        assert study.limit == pytest.approx(math.pi ** 2 / 4.0, rel=0.005)

    @pytest.mark.parametrize("sizes", [[512, 512, 512], [512, 1024], [1024, 512, 2048]])
    def test_ill_formed_sizes(self, sizes):
        with pytest.raises(IllFormedStudyError):
            convergence_study("flat", sizes)

    def test_problem_ids(self):
        assert callable(problem_solver("hardy:n=5,V=const:1,W=pow:2"))
        assert callable(problem_solver("mode:n=4,m=0,k=1"))
        with pytest.raises(ParamError):
            problem_solver("sphere:n=3")
