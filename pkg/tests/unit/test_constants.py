import math

import pytest

from besselpairs.core import constants
from besselpairs.core.constants import (
    Z0,
    a_nm,
    bbdgv_constant,
    beta_nm,
    brezis_vazquez_constant,
    cn_constant,
    exmain_window,
    hardy_constant,
    higher_order_constants,
    hrs_constants,
    mode_constant_A,
    power_family_constant,
    radial_hardy_rellich_constant,
    rellich_improvement_coefficient,
    sigma_nm,
)
from besselpairs.models.enums import HigherOrderVariant
from besselpairs.utils.exceptions import DegenerateModeError, OutOfRegimeError, ParamError


class TestHardyFamily:
    @pytest.mark.parametrize("n", range(3, 11))
    def test_hardy_constant(self, n):
        assert hardy_constant(n, 0.0) == ((n - 2) / 2.0) ** 2

    def test_hardy_out_of_regime(self):
        with pytest.raises(OutOfRegimeError) as info:
            hardy_constant(3, 1.5)
        assert info.value.exit_code == 3

    def test_power_family(self):
        assert power_family_constant(5, 0.0, 2.0, 1.0) == 2.25
        assert power_family_constant(5, 0.0, 2.0, -1.0) == 0.25
        with pytest.raises(ParamError):
            power_family_constant(5, 0.0, 0.0, 1.0)

    def test_bbdgv_bounds_and_value(self):
        assert bbdgv_constant(5, 2.0, -1.0, 1.0) == 6.25
        lower, upper = bbdgv_constant(5, 2.0, 1.0, 1.0)
        assert lower == 2.25
        assert upper == 6.25

    def test_brezis_vazquez(self):
        assert brezis_vazquez_constant(2.0) == pytest.approx(Z0 ** 2 / 4.0)

    def test_log_remainder_coefficient(self):
        assert constants.ckn_log_constant() == 0.25


class TestHardyRellich:
    @pytest.mark.parametrize("n, expected", [(3, 25.0 / 36.0), (4, 3.0), (5, 6.25), (6, 9.0)])
    def test_cn_constant(self, n, expected):
        assert cn_constant(n) == pytest.approx(expected)

    def test_a_nm_dimension_four(self):
        result = a_nm(4, 0.0)
        assert result.value == 3.0
        assert result.case_taken == "min{(n-2)^2,n-1}"
        assert result.k_min == 1

    def test_a_nm_dimension_three(self):
        result = a_nm(3, 0.0)
        assert result.value == pytest.approx(25.0 / 36.0, abs=1e-12)
        assert result.case_taken == "A(c=n-1)"
        assert result.k_min == 1

    def test_a_nm_dimension_five_is_radial(self):
        result = a_nm(5, 0.0)
        assert result.value == pytest.approx(6.25, abs=1e-12)
        assert result.k_min == 0
        assert result.table_agrees

    def test_a_nm_out_of_regime(self):
        with pytest.raises(OutOfRegimeError):
            a_nm(4, 2.0)

    @pytest.mark.parametrize("n", [0, 2.5, True])
    def test_a_nm_rejects_bad_dimensions(self, n):
        with pytest.raises(ParamError):
            a_nm(n, -1.0)

    def test_mode_constants(self):
        assert mode_constant_A(1, 0.0, 4) == 3.0
        assert mode_constant_A(0, 0.0, 4) == 4.0
        with pytest.raises(DegenerateModeError):
            mode_constant_A(0, -1.0, 2)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_scan_matches_table_on_the_lattice(self, n):
        lower, _ = exmain_window(n)
        top = (n - 2) / 2.0
        first = math.ceil(lower * 10 - 1e-9)
        compared = 0
        for j in range(first, math.floor(top * 10 + 1e-9) + 1):
            m = j / 10.0
            result = a_nm(n, m)
            if result.table_value is None or "near subinterval boundary" in result.table_case:
                continue
            compared += 1
            assert abs(result.value - result.table_value) <= constants.TABLE_TOL * max(1.0, result.value), (n, m)
        assert compared > 0

    @pytest.mark.parametrize("n", range(3, 13))
    def test_cn_is_a_nm_at_m_zero(self, n):
        assert cn_constant(n) == pytest.approx(a_nm(n, 0.0).value, abs=1e-12)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_a_nm_never_exceeds_the_radial_constant(self, n):
        top = (n - 2) / 2.0
        for j in range(math.ceil(-(n + 4) * 5), math.floor(top * 10 + 1e-9) + 1):
            m = j / 10.0
            radial = ((n + 2 * m) / 2.0) ** 2
            assert a_nm(n, m).value <= radial + 1e-12 * max(1.0, radial), (n, m)

    def test_scan_is_kept_where_the_table_overshoots(self):
        # below the radial window A(1, -3, 4) = 0 while the radial branch gives 1
        result = a_nm(4, -3.0)
        assert result.value == pytest.approx(0.0, abs=1e-12)
        assert result.k_min == 1
        assert result.table_value == pytest.approx(1.0)
        assert result.table_agrees is False
        assert result.case_taken.startswith("scan")

    def test_radial_window(self):
        lower, upper = exmain_window(8)
        m = 0.5 * (lower + upper)
        assert a_nm(8, m).value == pytest.approx(radial_hardy_rellich_constant(8, m), abs=1e-12)


class TestRellich:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_beta_nm_case_one(self, n):
        assert beta_nm(n, 0.0).value == pytest.approx(n * n * (n - 4) ** 2 / 16.0, abs=1e-12)

    def test_beta_nm_dimension_four(self):
        assert beta_nm(4, 0.0).value == 0.0

    def test_beta_nm_out_of_regime(self):
        with pytest.raises(OutOfRegimeError):
            beta_nm(5, 1.0)

    @pytest.mark.parametrize("n", range(4, 13))
    def test_sigma_identity(self, n):
        assert sigma_nm(n, 0.0, 2.0, 0.25) == pytest.approx(1.0 + n * (n - 4) / 8.0, abs=1e-12)
        assert rellich_improvement_coefficient(n, 2.0, 0.25) == sigma_nm(n, 0.0, 2.0, 0.25)

    def test_sigma_rejects_negative_weight(self):
        with pytest.raises(ParamError):
            sigma_nm(5, 0.0, 2.0, -1.0)

    def test_hrs_constants(self):
        result = hrs_constants(5, 0.0, 0.25)
        components = {component.label: component.value for component in result.components}
        assert result.value == pytest.approx(25.0 / 16.0)
        assert components["improvement"] == pytest.approx(25.0 / 16.0)


class TestHigherOrder:
    def test_first_variant_single_step(self):
        result = higher_order_constants(HigherOrderVariant.HO1, 9, 0, 2, 1)
        assert result.value == pytest.approx(126.5625)
        assert result.components[0].label == "leading"

    def test_fourth_variant_single_step(self):
        result = higher_order_constants(HigherOrderVariant.HO4, 8, 0, 2, 1)
        assert result.value == pytest.approx(64.0)
        labels = [component.label for component in result.components]
        assert "gradient_summand[1]" in labels

    def test_components_are_not_repeated(self):
        result = higher_order_constants(HigherOrderVariant.HO1, 12, 0, 2, 2)
        labels = [component.label for component in result.components]
        assert len(labels) == len(set(labels))

    def test_order_bounds(self):
        with pytest.raises(OutOfRegimeError):
            higher_order_constants(HigherOrderVariant.HO3, 20, 0, 2, 2)
        with pytest.raises(ParamError):
            higher_order_constants(HigherOrderVariant.HO1, 9, 0, 0, 1)

    def test_second_variant_single_step(self):
        # ((12 - 2)/2)^2 beta[12,1], with beta[12,1] = (14 * 6 / 4)^2
        result = higher_order_constants(HigherOrderVariant.HO2, 12, 0, 1, 1)
        components = {component.label: component.value for component in result.components}
        assert result.value == pytest.approx(25.0 * 441.0)
        assert components["summand[0]"] == pytest.approx(25.0 * sigma_nm(12, 1, 2.0, 0.25))

    def test_third_variant_single_step(self):
        # a[12,0] ((12 - 4)/2)^2 beta[12,2] = 36 * 16 * 256
        result = higher_order_constants(HigherOrderVariant.HO3, 12, 0, 2, 1)
        components = {component.label: component.value for component in result.components}
        assert result.value == pytest.approx(36.0 * 16.0 * 256.0)
        assert components["betaW*a[n,k]"] == pytest.approx(0.25 * 36.0)

    def test_single_step_tail_is_the_empty_product(self):
        result = higher_order_constants(HigherOrderVariant.HO1, 9, 0, 2, 1)
        components = {component.label: component.value for component in result.components}
        assert components["summand[0]"] == sigma_nm(9, 0, 2.0, 0.25)
