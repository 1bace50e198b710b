"""
核心类型测试
节点校验、指数、惯性指数、矩阵容器、有理线性代数、运行配置与序列化
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from core.domain import (
    Exponent,
    Family,
    FamilySpec,
    GeneralMatrix,
    Inertia,
    Points,
    ScalarMode,
    SymMatrix,
    format_scalar,
    inertia_sum_check,
    parse_scalar,
    validate_points,
)
from core.exceptions import (
    BadExponentError,
    DuplicatePointError,
    ExactModeUnsupportedError,
    KwongLabError,
    LengthMismatchError,
    NonpositivePointError,
    ScalarModeMismatchError,
    ValidationError,
)
from core.rational_linalg import congruence, det, integer_normalize, null_space, rank
from core.run_config import build_run_config, parse_r_grid
from core.serialization import dumps, json_safe, matrix_to_csv, matrix_to_dict, read_matrix_csv


def test_validate_points_sorts_and_detects_mode():
    """节点升序排列，全部可精确表示时为精确模式"""
    points = validate_points([5, 1, "3/2"])
    assert points.values == (Fraction(1), Fraction(3, 2), Fraction(5))
    assert points.is_exact
    assert validate_points([1.0, 2.5]).mode is ScalarMode.FLOAT


def test_validate_points_errors():
    with pytest.raises(DuplicatePointError):
        validate_points([1, 1, 2])
    with pytest.raises(NonpositivePointError):
        validate_points([0, 1])
    with pytest.raises(NonpositivePointError):
        validate_points([-1.5, 2.0])
    with pytest.raises(ValidationError):
        validate_points([])


def test_points_text_roundtrip_and_scaling():
    points = Points.from_text("1, 2, 5/2")
    assert points.to_text() == "1,2,5/2"
    assert points.scaled(2).values == (Fraction(2), Fraction(4), Fraction(5))


def test_exponent_integrality():
    assert Exponent.of(3).is_odd_integer
    assert Exponent.of("7/2").is_exact and not Exponent.of("7/2").is_integer
    assert Exponent.of(3.0).is_integer and not Exponent.of(3.0).is_exact
    assert Exponent.of(3.0 + 1e-13).is_integer
    assert not Exponent.of(3.001).is_integer
    assert Exponent.of(-5).to_json() == -5
    assert Exponent.of("1/4").to_json() == "1/4"
    assert abs(Exponent.of(-3)).value == 3


def test_inertia_value_object():
    inertia = Inertia(1, 1, 2)
    assert str(inertia) == "(1,1,2)"
    assert inertia + Inertia(0, 2, 0) == Inertia(1, 3, 2)
    assert inertia_sum_check(inertia, 4)
    with pytest.raises(ValidationError):
        Inertia(-1, 0, 0)


def test_scalar_formatting():
    assert format_scalar(Fraction(5, 2)) == "5/2"
    assert format_scalar(Fraction(4)) == "4"
    assert parse_scalar("5/2") == Fraction(5, 2)
    assert parse_scalar("0.5", exact=False) == 0.5


def test_family_spec_rules(k3_points):
    assert Family.parse("Kwong") is Family.KWONG
    assert Family.parse("absdiff") is Family.POWER_ABS_DIFF
    with pytest.raises(ValidationError):
        FamilySpec(Family.KWONG, k3_points)
    with pytest.raises(ValidationError):
        FamilySpec(Family.CROSS_KWONG, k3_points, Exponent.of(2))
    with pytest.raises(LengthMismatchError):
        FamilySpec(Family.CROSS_KWONG, k3_points, Exponent.of(2), validate_points([1, 2]))
    spec = FamilySpec(Family.CAUCHY, k3_points)
    assert spec.to_dict()["r"] is None


def test_sym_matrix_storage():
    matrix = SymMatrix.from_rows([[1, 3], [3, 4]])
    assert matrix.is_exact
    assert matrix.lower == ((Fraction(1),), (Fraction(3), Fraction(4)))
    assert matrix.entry(0, 1) == 3
    assert matrix.permuted([1, 0]).rows() == [[4, 3], [3, 1]]
    np.testing.assert_array_equal(matrix.to_numpy(), np.array([[1.0, 3.0], [3.0, 4.0]]))
    with pytest.raises(ValidationError):
        SymMatrix.from_rows([[1, 2], [3, 4]])
    with pytest.raises(ScalarModeMismatchError):
        SymMatrix.from_rows([[1, 0.5], [0.5, 1]], mode=ScalarMode.EXACT)


def test_general_matrix_transpose():
    matrix = GeneralMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert matrix.shape == (2, 3)
    assert matrix.transpose().rows() == [[1, 4], [2, 5], [3, 6]]


def test_rational_linalg_helpers():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert det(a) == 5
    assert rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    x = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)]]
    assert congruence(a, x) == [[Fraction(7), Fraction(4)], [Fraction(4), Fraction(3)]]
    assert integer_normalize([Fraction(-1, 2), Fraction(1), Fraction(-1, 2)]) == [1, -2, 1]


def test_null_space_of_moment_rows():
    moments = [[Fraction(1)] * 3, [Fraction(1), Fraction(2), Fraction(3)]]
    assert null_space(moments, 3) == [[1, -2, 1]]
    assert null_space([], 2) == [[1, 0], [0, 1]]


def test_parse_r_grid():
    grid = parse_r_grid("0.25:6.75:0.25")
    assert len(grid) == 27
    assert grid[0].value == Fraction(1, 4) and grid[-1].value == Fraction(27, 4)
    assert all(r.is_exact for r in grid)
    assert len(parse_r_grid("0.1:9.0:0.1")) == 90
    with pytest.raises(BadExponentError):
        parse_r_grid("1:2")


def test_run_config_validation():
    config = build_run_config(subcommand="verify", points="1,2,5,10", r_values=[Exponent.of(3)],
                              engine="exact")
    assert config.order == 4
    assert build_run_config(subcommand="predict", n=3).resolved_points().to_text() == "1,2,3"
    with pytest.raises(DuplicatePointError):
        build_run_config(subcommand="verify", points="1,1,2")
    with pytest.raises(ExactModeUnsupportedError):
        build_run_config(subcommand="verify", points="1,2", r_values=[Exponent.of("5/2")], engine="exact")
    with pytest.raises(ValidationError):
        build_run_config(subcommand="verify", points="1,2", n=3)
    with pytest.raises(ValidationError):
        build_run_config(subcommand="verify", n=2, jobs=0)


def test_serialization():
    matrix = SymMatrix.from_rows([[1, 3], [3, 4]])
    assert matrix_to_csv(matrix) == "1,3\n3,4"
    data = matrix_to_dict(SymMatrix.from_rows([[Fraction(1, 2), 1], [1, 2]]))
    assert data["entries"] == [["1/2", "1"], ["1", "2"]]
    assert read_matrix_csv("1,3\n3,4").rows() == matrix.rows()
    assert json_safe({"gap": float("inf")}) == {"gap": "Infinity"}
    assert json.loads(dumps({"x": [1.5, float("inf")]})) == {"x": [1.5, "Infinity"]}


def test_error_objects():
    err = DuplicatePointError("节点重复: 1")
    assert isinstance(err, ValueError) and isinstance(err, KwongLabError)
    assert err.to_dict() == {"error": "DuplicatePoint", "detail": "节点重复: 1"}
