"""
测试公共夹具
节点语料：1..n、k²+1 序列前 n 项、固定种子的随机有理节点集
"""

import os
import random
import sys
from fractions import Fraction

import pytest

# 添加项目路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
os.environ.setdefault("KWONG_ENV", "testing")

from core.domain import Points, validate_points  # noqa: E402
from framework.verification import random_rational_points  # noqa: E402

SQUARE_PLUS_ONE = [1, 2, 5, 10, 17, 26, 37, 50, 65]


def integer_points(n: int) -> Points:
    return validate_points(list(range(1, n + 1)))


def square_plus_one_points(n: int) -> Points:
    return validate_points(SQUARE_PLUS_ONE[:n])


def random_point_sets(n: int, count: int = 5, seed: int = 20240601):
    rng = random.Random(seed + n)
    return [random_rational_points(rng, n) for _ in range(count)]


def exact_corpus(n: int, random_sets: int = 5):
    """验收语料：1..n、k²+1 前 n 项与随机有理节点集"""
    return [integer_points(n), square_plus_one_points(n)] + random_point_sets(n, random_sets)


@pytest.fixture
def k3_points() -> Points:
    return validate_points([1, 2, 5, 10])


@pytest.fixture
def six_points() -> Points:
    return integer_points(6)


@pytest.fixture
def half_points() -> Points:
    return validate_points([Fraction(1, 2), 1, Fraction(3, 2), 3])
