"""
结构恒等式测试
Vandermonde 分解、广义 Sylvester 定律、三项恒等式、H_j 与条件惯性
"""

from fractions import Fraction

import numpy as np
import pytest

from core.domain import GeneralMatrix, Inertia, ScalarMode, SymMatrix, validate_points
from core.exceptions import (
    DepthOutOfRangeError,
    LengthMismatchError,
    PreconditionViolatedError,
    RankDeficientError,
)
from framework.exact_engine import inertia_exact
from matrix_lib import generators, structure


def test_vandermonde_factorization_k3(k3_points):
    check = structure.verify_vandermonde_factorization(k3_points, 3)
    assert check.holds and check.residual == 0


def test_loewner_factorization(half_points):
    for k in range(1, half_points.n + 1):
        assert structure.verify_loewner_factorization(half_points, k).holds


def test_generalized_sylvester_on_vandermonde_pair(k3_points):
    pair = generators.gen_vandermonde_pair(k3_points, 3)
    check = structure.generalized_sylvester_check(pair.V, pair.W)
    assert check.holds
    assert check.compressed == Inertia(1, 1, 2)
    assert check.expected == structure.vandermonde_core_inertia(3) + Inertia(0, 1, 0)


def test_generalized_sylvester_rejects_rank_deficient_x():
    a = SymMatrix.from_rows([[1, 0], [0, -1]])
    x = GeneralMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    with pytest.raises(RankDeficientError):
        structure.generalized_sylvester_check(a, x)
    with pytest.raises(LengthMismatchError):
        structure.generalized_sylvester_check(a, GeneralMatrix.from_rows([[1, 2, 3]]))


def test_vandermonde_core_inertia():
    assert structure.vandermonde_core_inertia(1) == Inertia(1, 0, 0)
    assert structure.vandermonde_core_inertia(3) == Inertia(1, 0, 2)
    assert structure.vandermonde_core_inertia(5) == Inertia(3, 0, 2)


def test_three_term_identity(six_points, half_points):
    for r in range(2, 9):
        assert structure.verify_three_term_identity(six_points, r)
        assert structure.verify_three_term_identity(half_points, r)


def test_negative_exponent_congruence(half_points):
    for r in range(0, 6):
        assert structure.verify_negative_exponent_congruence(half_points, r)


def test_recursion_quadratic_form(six_points):
    x = [1, -2, 1, 0, 3, -3]
    for r in range(2, 7):
        assert structure.verify_recursion_quadratic_form(six_points, r, x)
    with pytest.raises(PreconditionViolatedError):
        structure.verify_recursion_quadratic_form(six_points, 3, [1, 0, 0, 0, 0, 0])


def test_basis_hj_exact():
    basis = structure.basis_Hj(validate_points([1, 2, 3]), 2)
    assert basis.vectors == ((1, -2, 1),)
    assert structure.basis_Hj(validate_points([1, 2]), 1).vectors == ((1, -1),)
    assert structure.basis_Hj(validate_points([1, 2, 3]), 0).dimension == 3
    with pytest.raises(DepthOutOfRangeError):
        structure.basis_Hj(validate_points([1, 2, 3]), 3)


def test_basis_hj_annihilates_moments(half_points):
    for j in range(half_points.n):
        basis = structure.basis_Hj(half_points, j)
        assert basis.dimension == half_points.n - j
        for vec in basis.vectors:
            for t in range(j):
                assert sum(p ** t * v for p, v in zip(half_points, vec)) == 0


def test_basis_hj_float_is_orthonormal():
    basis = structure.basis_Hj(validate_points([1.0, 2.0, 3.5, 4.0]), 2)
    matrix = basis.as_matrix().to_numpy()
    assert matrix.shape == (4, 2)
    assert np.abs(matrix.T @ matrix - np.eye(2)).max() < 1e-12


def test_conditional_definiteness_exact(six_points):
    """H_1 上 K_2 负定，H_2 上 K_4 正定"""
    assert structure.conditional_inertia(generators.gen_kwong(six_points, 2), 1) == Inertia(0, 0, 5)
    assert structure.conditional_inertia(generators.gen_kwong(six_points, 4), 2) == Inertia(4, 0, 0)


def test_conditional_definiteness_float(six_points):
    for r in (1.5, 2.5):
        matrix = generators.gen_kwong(six_points, r)
        assert structure.conditional_inertia(matrix, 1) == Inertia(0, 0, 5)
    for r in (3.5, 4.5):
        matrix = generators.gen_kwong(six_points, r)
        assert structure.conditional_inertia(matrix, 2) == Inertia(4, 0, 0)


def test_scaled_inertia_witness(half_points):
    assert structure.scaled_inertia_witness(half_points, Fraction(3, 2), 3)
    assert structure.scaled_inertia_witness(half_points, 5, -2)
    scaled = generators.gen_kwong(half_points.scaled(7), 4)
    assert inertia_exact(scaled)[0] == inertia_exact(generators.gen_kwong(half_points, 4))[0]
    assert scaled.mode is ScalarMode.EXACT
