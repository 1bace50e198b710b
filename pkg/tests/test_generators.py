"""
矩阵族生成器测试
"""

from fractions import Fraction

import numpy as np
import pytest

from core.domain import Family, FamilySpec, Exponent, ScalarMode, validate_points
from core.exceptions import (
    BadExponentError,
    DuplicatePointError,
    ExactModeUnsupportedError,
    LengthMismatchError,
    NonpositiveExponentError,
)
from matrix_lib import generators
from matrix_lib import get_family, list_families


def test_kwong_exact_entries(k3_points):
    """K_3(1,2,5,10) 的元素为 p_i² − p_i p_j + p_j²"""
    k3 = generators.gen_kwong(k3_points, 3)
    assert k3.is_exact
    assert k3.rows()[0] == [1, 3, 21, 91]
    assert k3.entry(1, 1) == 4 and k3.entry(1, 2) == 19 and k3.entry(1, 3) == 84
    assert k3.entry(2, 3) == 75 and k3.entry(3, 3) == 100


def test_kwong_two_by_two():
    matrix = generators.gen_kwong(validate_points([1, 2]), 3)
    assert matrix.rows() == [[1, 3], [3, 4]]


def test_kwong_float_matches_exact(k3_points):
    exact = generators.gen_kwong(k3_points, 3).to_numpy()
    approx = generators.gen_kwong(k3_points, 3, ScalarMode.FLOAT).to_numpy()
    np.testing.assert_allclose(approx, exact, rtol=1e-14)


def test_kwong_zero_exponent_is_cauchy(half_points):
    assert generators.gen_kwong(half_points, 0).rows() == generators.gen_cauchy(half_points).rows()


def test_kwong_negative_integer_exact():
    matrix = generators.gen_kwong(validate_points([1, 2]), -1)
    # (1/p_i + 1/p_j)/(p_i + p_j) = 1/(p_i p_j)
    assert matrix.rows() == [[1, Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 4)]]


def test_exact_mode_requirements(k3_points):
    with pytest.raises(ExactModeUnsupportedError):
        generators.gen_kwong(k3_points, 2.5, ScalarMode.EXACT)
    with pytest.raises(ExactModeUnsupportedError):
        generators.gen_kwong(validate_points([1.0, 2.5]), 3, ScalarMode.EXACT)
    assert generators.gen_kwong(k3_points, "5/2").mode is ScalarMode.FLOAT


def test_loewner_diagonal_is_derivative():
    points = validate_points([1, 2, 3])
    matrix = generators.gen_loewner(points, 3)
    assert [matrix.entry(i, i) for i in range(3)] == [3, 12, 27]
    # (8 - 1)/(2 - 1)
    assert matrix.entry(1, 0) == 7
    approx = generators.gen_loewner(points, 2.5).to_numpy()
    np.testing.assert_allclose(np.diag(approx), 2.5 * np.array([1.0, 2.0, 3.0]) ** 1.5)


def test_power_absdiff():
    points = validate_points([1, 2, 4])
    matrix = generators.gen_power_absdiff(points, 2)
    assert matrix.rows() == [[0, 1, 9], [1, 0, 4], [9, 4, 0]]
    with pytest.raises(NonpositiveExponentError):
        generators.gen_power_absdiff(points, 0)
    with pytest.raises(NonpositiveExponentError):
        generators.gen_power_absdiff(points, -0.5)


def test_cosh_form_congruence(six_points):
    """K_r = Δ K̃_r Δ"""
    for r in (0.5, 2.0, 4.3, 7.0):
        tilde = generators.gen_cosh_kwong_from_points(six_points, r).to_numpy()
        delta = generators.cosh_congruence_diag(six_points, r)
        direct = generators.gen_kwong(six_points, r, ScalarMode.FLOAT).to_numpy()
        np.testing.assert_allclose(delta[:, None] * tilde * delta[None, :], direct, rtol=1e-12)


def test_cosh_form_is_overflow_safe():
    matrix = generators.gen_cosh_kwong([0.0, 150.0], 5.0)
    array = matrix.to_numpy()
    assert np.all(np.isfinite(array))
    assert array[0, 0] == 1.0
    with pytest.raises(DuplicatePointError):
        generators.gen_cosh_kwong([0.0, 0.0], 2.0)


def test_cross_kwong():
    p, q = validate_points([1, 2]), validate_points([1, 3])
    matrix = generators.gen_cross_kwong(p, q, 2)
    assert matrix.rows() == [[1, Fraction(5, 2)], [Fraction(5, 3), Fraction(13, 5)]]
    with pytest.raises(LengthMismatchError):
        generators.gen_cross_kwong(p, validate_points([1, 2, 3]), 2)


def test_power_sum():
    matrix = generators.gen_power_sum(validate_points([1, 2]), 2)
    assert matrix.rows() == [[4, 9], [9, 16]]


def test_vandermonde_pair_shapes(k3_points):
    pair = generators.gen_vandermonde_pair(k3_points, 3)
    assert pair.W.shape == (3, 4)
    assert pair.W.rows()[2] == [1, 4, 25, 100]
    assert pair.V.rows() == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
    with pytest.raises(BadExponentError):
        generators.gen_vandermonde_pair(k3_points, 2)
    with pytest.raises(BadExponentError):
        generators.gen_vandermonde_pair(k3_points, 5)


def test_loewner_pair_uses_all_ones_antidiagonal():
    pair = generators.gen_loewner_vandermonde_pair(validate_points([1, 2, 3]), 2)
    assert pair.V.rows() == [[0, 1], [1, 0]]


def test_build_matrix_dispatch(k3_points):
    spec = FamilySpec(Family.COSH_KWONG, k3_points, Exponent.of(2))
    assert generators.build_matrix(spec).mode is ScalarMode.FLOAT
    with pytest.raises(ExactModeUnsupportedError):
        generators.build_matrix(spec, ScalarMode.EXACT)
    assert generators.can_build_exact(FamilySpec(Family.KWONG, k3_points, Exponent.of(3)))
    assert not generators.can_build_exact(FamilySpec(Family.KWONG, k3_points, Exponent.of("7/2")))


def test_scale_factor():
    assert generators.scale_factor(2, 3) == 4
    assert generators.scale_factor(Fraction(1, 2), 0) == 2


def test_family_registry():
    assert get_family("kwong") is generators.gen_kwong
    assert "cross" not in list_families(symmetric_only=True)
    assert len(list_families()) == 7
