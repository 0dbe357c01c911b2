import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from qhj_spectra import (
    DegeneratePotentialError,
    PotentialParams,
    Variant,
    classify_symmetry,
    evaluate_potential,
)

finite_reals = st.floats(
    min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False
)


class TestParams:
    def test_alpha_normalized_positive(self):
        assert PotentialParams(1.0, -3.0, -2.0).alpha == 2.0

    def test_alpha_zero_rejected(self):
        with pytest.raises(ValueError):
            PotentialParams(1.0, -3.0, 0.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            PotentialParams(float("nan"), -3.0, 1.0)

    def test_s(self):
        assert PotentialParams(4.0, -8.0, 2.0).s == 1.0

    def test_s_needs_positive_v1(self):
        with pytest.raises(DegeneratePotentialError):
            PotentialParams(-1.0, -3.0, 1.0).s


class TestEvaluate:
    def test_value_at_origin_is_v2(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        assert evaluate_potential(params, Variant.REAL_SINH_GORDON, 0.0) == -3.0 + 0j

    def test_high_precision_point(self):
        # sinh(1)^2 - 3 cosh(1), frozen from a 50-digit mpmath evaluation
        params = PotentialParams(1.0, -3.0, 1.0)
        value = evaluate_potential(params, Variant.REAL_SINH_GORDON, 1.0)
        with mpmath.workdps(50):
            expected = float(mpmath.sinh(1) ** 2 - 3 * mpmath.cosh(1))
        assert value.imag == 0.0
        assert value.real == pytest.approx(expected, rel=1e-15)
        assert value.real == pytest.approx(-3.2481440589039143, rel=1e-12)

    @given(v1=finite_reals, v2=finite_reals, x=finite_reals)
    def test_real_variant_even_exactly(self, v1, v2, x):
        params = PotentialParams(v1, v2, 1.0)
        plus = evaluate_potential(params, Variant.REAL_SINH_GORDON, x)
        minus = evaluate_potential(params, Variant.REAL_SINH_GORDON, -x)
        assert plus == minus

    @given(x=st.floats(min_value=-5.0, max_value=5.0))
    def test_imag_cosh_even_in_x(self, x):
        params = PotentialParams(1.0, 4.0, 1.0)
        plus = evaluate_potential(params, Variant.IMAG_COSH, x)
        minus = evaluate_potential(params, Variant.IMAG_COSH, -x)
        assert plus == minus

    def test_complex_variants_fix_alpha_two(self):
        # the stored alpha is ignored for the complex family
        params = PotentialParams(1.0, 3.0, 7.0)
        x = 0.4
        expected = math.sinh(2 * x) ** 2 + 3j * math.cosh(2 * x)
        assert evaluate_potential(params, Variant.IMAG_COSH, x) == pytest.approx(expected)
        expected = 1j * math.sinh(2 * x) ** 2 + 3 * math.cosh(2 * x)
        assert evaluate_potential(params, Variant.IMAG_SINH, x) == pytest.approx(expected)

    def test_nonfinite_x_rejected(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        with pytest.raises(ValueError):
            evaluate_potential(params, Variant.REAL_SINH_GORDON, float("inf"))

    def test_array_evaluation(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        x = np.linspace(-2, 2, 11)
        values = evaluate_potential(params, Variant.REAL_SINH_GORDON, x)
        assert values.shape == x.shape
        assert np.all(values.imag == 0.0)

    def test_double_well_shape(self):
        # V2 < 0 < V1 with -V2 >= 2 V1: symmetric double well with minima at
        # cosh(alpha x*) = -V2 / (2 V1)
        params = PotentialParams(1.0, -3.0, 1.0)
        x = np.linspace(-4.0, 4.0, 40001)
        values = evaluate_potential(params, Variant.REAL_SINH_GORDON, x).real
        x_star = math.acosh(1.5)
        assert abs(abs(x[np.argmin(values)]) - x_star) < 1e-3
        assert values.min() < params.v2  # below the local hump at the origin
        assert values[0] > params.v2 and values[-1] > params.v2


class TestClassify:
    def test_real_pt_and_lambda(self):
        report = classify_symmetry(PotentialParams(1.0, -3.0, 1.0), Variant.REAL_SINH_GORDON)
        assert report.pt_symmetric
        assert report.physical_qes_possible
        assert report.lambda_value == 1.5 + 0j

    def test_real_positive_v2_not_physical(self):
        report = classify_symmetry(PotentialParams(1.0, 3.0, 1.0), Variant.REAL_SINH_GORDON)
        assert report.lambda_value == -1.5 + 0j
        assert not report.physical_qes_possible

    def test_imag_cosh_lambda_is_plus_minus_i(self):
        report = classify_symmetry(PotentialParams(1.0, 4.0, 2.0), Variant.IMAG_COSH)
        assert report.pt_symmetric
        assert not report.physical_qes_possible
        assert sorted(c.imag for c in report.lambda_candidates) == [-1.0, 1.0]
        assert all(c.real == 0.0 for c in report.lambda_candidates)

    def test_imag_sinh_not_pt_symmetric(self):
        report = classify_symmetry(PotentialParams(1.0, 3.0, 2.0), Variant.IMAG_SINH)
        assert not report.pt_symmetric
        assert not report.physical_qes_possible
        assert report.lambda_value.imag != 0.0

    def test_v1_zero_degenerate(self):
        with pytest.raises(DegeneratePotentialError):
            classify_symmetry(PotentialParams(0.0, -3.0, 1.0), Variant.REAL_SINH_GORDON)
