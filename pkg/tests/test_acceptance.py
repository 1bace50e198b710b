"""
端到端验收测试
闭式惯性、分解恒等式、符号分析与轨迹扫描在固定语料上的整体校验
"""

import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import exact_corpus, integer_points, square_plus_one_points
from core.domain import Inertia, ScalarMode, validate_points
from framework.engine_manager import compute_inertia, make_spec
from framework.exact_engine import charpoly_exact, inertia_exact, inertia_from_charpoly, minor_exact
from framework.float_engine import RoutePolicy, inertia_float
from framework.oracle import predict_kwong_inertia
from framework.sweep import detect_transitions, sweep_inertia
from framework.verification import random_rational_points
from matrix_lib import generators, signs, structure

ORDERS = range(2, 8)


@pytest.mark.parametrize("n", ORDERS)
def test_exact_inertia_matches_prediction(n):
    for points in exact_corpus(n):
        for r in range(1, 10):
            matrix = generators.gen_kwong(points, r)
            inertia, _ = inertia_exact(matrix)
            assert inertia == predict_kwong_inertia(n, r).inertia, (points.to_text(), r)
            if r % 2 == 1 and r < n:
                assert inertia.zeta == n - r
            # 特征多项式路线独立复核
            assert inertia_from_charpoly(charpoly_exact(matrix)) == inertia


@pytest.mark.parametrize("policy", ["auto", "cosh"])
@pytest.mark.parametrize("n", ORDERS)
def test_float_inertia_matches_prediction(n, policy):
    for points in exact_corpus(n):
        float_points = points.to_float_points()
        for step in range(1, 91):
            r = step / 10
            result = compute_inertia(make_spec("kwong", float_points, r), "float", policy=policy)
            expected = predict_kwong_inertia(n, Fraction(step, 10)).inertia
            assert result.inertia == expected, (points.to_text(), r)


def test_vandermonde_factorization_corpus():
    for n in range(2, 10):
        corpus = exact_corpus(n) if n <= 7 else [integer_points(n), square_plus_one_points(n)]
        for points in corpus:
            for r in range(1, n + 1, 2):
                check = structure.verify_vandermonde_factorization(points, r)
                assert check.holds, (points.to_text(), r)
                sylvester = structure.generalized_sylvester_check(check.pair.V, check.pair.W)
                assert sylvester.holds
                assert sylvester.compressed == structure.vandermonde_core_inertia(r) + Inertia(0, n - r, 0)


def test_k3_minor_values():
    k3 = generators.gen_kwong(validate_points([1, 2, 5, 10]), 3)
    assert minor_exact(k3, [0, 1], [0, 1]) == -5
    assert minor_exact(k3, [0, 1], [2, 3]) == 35


def test_three_term_identity_corpus():
    for n in ORDERS:
        for points in exact_corpus(n):
            for r in range(2, 9):
                assert structure.verify_three_term_identity(points, r)


@pytest.mark.parametrize("n", range(4, 8))
def test_conditional_definiteness(n):
    points = integer_points(n)
    for r in (Fraction(3, 2), 2, Fraction(5, 2)):
        matrix = generators.gen_kwong(points, r)
        assert structure.conditional_inertia(matrix, 1) == Inertia(0, 0, n - 1)
    for r in (Fraction(7, 2), 4, Fraction(9, 2)):
        matrix = generators.gen_kwong(points, r)
        assert structure.conditional_inertia(matrix, 2) == Inertia(n - 2, 0, 0)


@pytest.mark.parametrize("n", ORDERS)
def test_absdiff_matches_shifted_kwong(n):
    points = integer_points(n)
    for half_steps in range(1, 13):
        r = Fraction(half_steps, 2)
        spec = make_spec("absdiff", points if r.denominator == 1 else points.to_float_points(),
                         r if r.denominator == 1 else float(r))
        result = compute_inertia(spec, "auto")
        assert result.inertia == predict_kwong_inertia(n, r + 1).inertia, (n, r)
        if r.denominator == 1:
            assert result.engine.value == "exact"


@pytest.mark.parametrize("n", (3, 5, 7))
def test_descartes_bounds(n):
    rng = np.random.default_rng(1000 + n)
    points = integer_points(n)
    for _ in range(100):
        weights = rng.standard_normal(n).tolist()
        for r in (n - 0.5, float(n), n + 2.5):
            s = signs.descartes_zero_bound(points, weights, r)
            s0 = signs.companion_sign_changes(points, weights, r)
            zeros = signs.count_positive_zeros_f(points, weights, r, scan_samples=1024).count
            assert zeros <= s <= n - 1
            assert s + s0 <= 2 * n - 1
            assert s0 >= n


@pytest.mark.parametrize("n", (3, 5))
def test_cross_kwong_nonsingular(n):
    rng = random.Random(4242 + n)
    for index in range(50):
        p = random_rational_points(rng, n)
        q = random_rational_points(rng, n)
        r = (n - 0.5, n, n + 2.5)[index % 3]
        check = signs.cross_kwong_nonsingular(p, q, r)
        assert check.nonsingular, (p.to_text(), q.to_text(), r)
        assert check.method == ("exact" if r == n else "mpmath")


def test_six_point_sweep_reproduction():
    records = sweep_inertia(integer_points(6), 0.2, 7.0, 69)
    transitions = detect_transitions(records)
    assert [t.location for t in transitions] == pytest.approx([1.0, 3.0, 5.0], abs=1e-3)
    by_r = {round(rec.r, 6): rec.inertia for rec in records}
    assert by_r[0.5] == Inertia(6, 0, 0)
    assert by_r[2.0] == Inertia(1, 0, 5)
    assert by_r[4.0] == Inertia(4, 0, 2)
    assert by_r[6.5] == Inertia(3, 0, 3)
    for rec in records:
        assert rec.inertia == predict_kwong_inertia(6, Fraction(round(rec.r * 10), 10)).inertia


def test_invariance_suite():
    rng = random.Random(777)
    for _ in range(50):
        n = rng.randint(2, 6)
        r = rng.randint(1, 7)
        points = random_rational_points(rng, n)
        base, _ = inertia_exact(generators.gen_kwong(points, r))

        perm = list(range(n))
        rng.shuffle(perm)
        assert inertia_exact(generators.gen_kwong(points, r).permuted(perm))[0] == base

        factor = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert inertia_exact(generators.gen_kwong(points.scaled(factor), r))[0] == base

        assert inertia_exact(generators.gen_kwong(points, -r))[0] == base

        spec = make_spec("kwong", integer_points(n).to_float_points(), r + 0.5)
        direct = inertia_float(spec, RoutePolicy.DIRECT).inertia
        assert inertia_float(spec, RoutePolicy.COSH).inertia == direct


def test_float_generators_agree_with_exact_mode():
    points = integer_points(5)
    exact = generators.gen_kwong(points, 4, ScalarMode.EXACT).to_numpy()
    approx = generators.gen_kwong(points, 4, ScalarMode.FLOAT).to_numpy()
    np.testing.assert_allclose(approx, exact, rtol=1e-14)
