"""
闭式惯性预测测试
"""

from fractions import Fraction

import pytest

from core.domain import Family, Inertia
from core.exceptions import BadExponentError, NonpositiveExponentError, ValidationError
from framework.oracle import (
    CaseKind,
    absdiff_flip_points,
    expected_nullity,
    flip_points,
    greatest_odd_below,
    loewner_flip_points,
    predict_absdiff_inertia,
    predict_inertia,
    predict_kwong_inertia,
    predict_loewner_inertia_partial,
    predict_loewner_integer_inertia,
    predict_singular,
)
from core.domain import Exponent


@pytest.mark.parametrize("n, r, expected, tag", [
    (6, 2, (1, 0, 5), "OpenBand(1)"),
    (6, 3, (1, 3, 2), "OddInteger(3)"),
    (6, 4, (4, 0, 2), "OpenBand(3)"),
    (6, 7, (3, 0, 3), "TailEvenN"),
    (5, "37/10", (3, 0, 2), "TailOddN"),
    (7, 4, (5, 0, 2), "OpenBand(3)"),
    (8, 7, (3, 1, 4), "OddInteger(7)"),
    (6, "1/2", (6, 0, 0), "UnitInterval"),
    (6, 0, (6, 0, 0), "ZeroExponent"),
    (6, 1, (1, 5, 0), "OddInteger(1)"),
    (1, 9, (1, 0, 0), "Order1"),
])
def test_kwong_prediction_table(n, r, expected, tag):
    case = predict_kwong_inertia(n, r)
    assert case.inertia.as_tuple() == expected
    assert case.case_tag == tag


def test_prediction_covers_every_order_and_exponent():
    """n ≤ 12、r ∈ [−12, 12] 步长 0.05：预测总是给出阶为 n 的惯性"""
    for n in range(1, 13):
        for step in range(-240, 241):
            r = Fraction(step, 20)
            inertia = predict_kwong_inertia(n, r).inertia
            assert inertia.order == n, (n, r)
            # 奇异当且仅当零维数为正
            assert (inertia.zeta > 0) == predict_singular(n, r), (n, r)
            # 负指数与 |r| 惯性相同
            assert inertia == predict_kwong_inertia(n, abs(r)).inertia, (n, r)
            k = abs(r)
            if k.denominator == 1 and k.numerator % 2 == 1 and k < n:
                assert inertia.zeta == n - k
                assert inertia.pi + inertia.nu == k


def test_negative_exponent_reflection():
    case = predict_kwong_inertia(4, -3)
    assert case.kind is CaseKind.NEGATIVE_REFLECTED
    assert case.inertia.as_tuple() == (1, 1, 2)
    assert case.to_dict()["reflectedFrom"] == "OddInteger(3)"
    assert case.case_tag == "NegativeReflected"


def test_prediction_json_shape():
    data = predict_kwong_inertia(6, 4).to_dict()
    assert data == {"n": 6, "r": 4, "caseTag": "OpenBand(3)", "inertia": [4, 0, 2]}


def test_greatest_odd_below():
    assert greatest_odd_below(Exponent.of(4)) == 3
    assert greatest_odd_below(Exponent.of(3)) == 1
    assert greatest_odd_below(Exponent.of(3.7)) == 3
    assert greatest_odd_below(Exponent.of("5/2")) == 1


def test_singularity_and_flip_points():
    assert predict_singular(6, 3) and predict_singular(6, -5)
    assert not predict_singular(6, 7) and not predict_singular(6, 2)
    assert flip_points(6) == [1, 3, 5]
    assert flip_points(7) == [1, 3, 5]
    assert absdiff_flip_points(6) == [2, 4]
    assert loewner_flip_points(4) == [1, 2, 3]
    with pytest.raises(ValidationError):
        flip_points(1)


def test_absdiff_is_shifted_kwong():
    assert predict_absdiff_inertia(6, 2) == predict_kwong_inertia(6, 3).inertia
    assert predict_absdiff_inertia(5, 0.5) == Inertia(1, 0, 4)
    with pytest.raises(NonpositiveExponentError):
        predict_absdiff_inertia(5, 0)


def test_loewner_predictions():
    assert predict_loewner_inertia_partial(5, 0.5) == Inertia(5, 0, 0)
    assert predict_loewner_inertia_partial(5, 1.5) == Inertia(1, 0, 4)
    assert predict_loewner_inertia_partial(5, 3.5) is None
    assert predict_loewner_integer_inertia(5, 3) == Inertia(2, 2, 1)
    assert predict_loewner_integer_inertia(4, 4) == Inertia(2, 0, 2)
    with pytest.raises(BadExponentError):
        predict_loewner_integer_inertia(4, 5)


def test_expected_nullity_by_family():
    assert expected_nullity(Family.KWONG, 6, 3) == 3
    assert expected_nullity(Family.KWONG, 6, 4) == 0
    assert expected_nullity(Family.POWER_ABS_DIFF, 6, 2) == 3
    assert expected_nullity(Family.LOEWNER, 6, 2) == 4
    assert expected_nullity(Family.LOEWNER, 6, 3.5) is None
    assert predict_inertia(Family.CAUCHY, 4, None) == Inertia(4, 0, 0)
