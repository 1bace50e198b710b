"""
浮点惯性引擎测试
"""

import numpy as np
import pytest

from core.domain import Exponent, Family, FamilySpec, SymMatrix, validate_points
from core.exceptions import AmbiguousNullityError, NoConvergenceError, ScalarModeMismatchError
from framework.engine_manager import (
    EngineKind,
    EngineManager,
    compute_inertia,
    make_spec,
    nearest_singular_exponent,
)
from framework.float_engine import (
    ConditioningRoute,
    RoutePolicy,
    check_interlacing,
    choose_route,
    classify_inertia,
    eig_sym,
    inertia_float,
    jacobi_eigenvalues,
)
from matrix_lib import generators


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return 0.5 * (a + a.T)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(3)
    for n in (1, 2, 5, 9, 16):
        a = _random_symmetric(rng, n)
        np.testing.assert_allclose(eig_sym(a, method="jacobi"), np.linalg.eigvalsh(a), atol=1e-12)


def test_large_order_routes_to_lapack():
    rng = np.random.default_rng(5)
    a = _random_symmetric(rng, 24)
    np.testing.assert_allclose(eig_sym(a), np.linalg.eigvalsh(a), atol=1e-11)


def test_jacobi_reports_best_iterate_on_exhaustion():
    a = _random_symmetric(np.random.default_rng(8), 6)
    with pytest.raises(NoConvergenceError) as info:
        jacobi_eigenvalues(a, sweep_tol=1e-300, max_sweeps=1)
    assert len(info.value.best_eigenvalues) == 6


def test_jacobi_converges_at_default_tolerance(six_points):
    """非对角范数不得因相消误差停在 1e-8 量级"""
    diagonal = np.diag([3.0, -1.0, 2.0, 5.0])
    np.testing.assert_allclose(jacobi_eigenvalues(diagonal, sweep_tol=1e-15, max_sweeps=2),
                               [-1.0, 2.0, 3.0, 5.0])

    a = _random_symmetric(np.random.default_rng(3), 5)
    np.testing.assert_allclose(jacobi_eigenvalues(a, sweep_tol=1e-15, max_sweeps=30),
                               np.linalg.eigvalsh(a), atol=1e-12)

    report = inertia_float(make_spec("kwong", six_points, 2.5), RoutePolicy.DIRECT)
    assert report.inertia.as_tuple() == (1, 0, 5)


def test_exact_matrix_rejected(k3_points):
    with pytest.raises(ScalarModeMismatchError):
        eig_sym(generators.gen_kwong(k3_points, 3))


def test_threshold_classification():
    report = classify_inertia([-2.0, 1e-20, 3.0])
    assert report.inertia.as_tuple() == (1, 1, 1)
    assert report.zero_threshold == pytest.approx(64 * 3 * np.finfo(float).eps * 3.0)


def test_expected_nullity_classification():
    report = classify_inertia([-1.0, 1e-13, 2.0, 5.0], expected_nullity=1)
    assert report.inertia.as_tuple() == (2, 1, 1)
    assert report.gap_ratio == pytest.approx(1e13)


def test_expected_nullity_needs_spectral_gap():
    with pytest.raises(AmbiguousNullityError) as info:
        classify_inertia([-1.0, 0.01, 2.0], expected_nullity=1)
    assert info.value.report.gap_ratio < 1e3


def test_k3_float_with_oracle_nullity(k3_points):
    """K_3(1,2,5,10) 的浮点特征值经吸附后得到 (1,1,2)"""
    spec = make_spec("kwong", k3_points.to_float_points(), 3.0)
    result = compute_inertia(spec, "float")
    assert result.engine is EngineKind.FLOAT
    assert result.snapped_r == 3
    assert result.inertia.as_tuple() == (1, 1, 2)


def test_snapping_window(six_points):
    spec = FamilySpec(Family.KWONG, six_points, Exponent.of(3.0 + 5e-10))
    assert nearest_singular_exponent(spec) == 3
    assert nearest_singular_exponent(spec.with_r(3.0 + 1e-6)) is None
    assert nearest_singular_exponent(spec.with_r(-5.0)) == 5


def test_negative_exponent_float():
    result = compute_inertia(make_spec("kwong", validate_points([1, 2, 3, 4]), -2.0), "float")
    assert result.inertia.as_tuple() == (1, 0, 3)


def test_route_policy(six_points):
    spec = make_spec("kwong", six_points, 25.0)
    assert choose_route(spec) is ConditioningRoute.COSH
    assert choose_route(spec.with_r(4.0)) is ConditioningRoute.DIRECT
    wide = make_spec("kwong", validate_points([1, 5000]), 2.0)
    assert choose_route(wide) is ConditioningRoute.COSH
    assert RoutePolicy.parse("cosh") is RoutePolicy.COSH


def test_cosh_route_preserves_inertia(six_points):
    for r in (0.5, 2.0, 4.0, 6.5):
        spec = make_spec("kwong", six_points, r)
        direct = inertia_float(spec, RoutePolicy.DIRECT)
        cosh = inertia_float(spec, RoutePolicy.COSH)
        assert cosh.conditioning_route is ConditioningRoute.COSH
        assert direct.inertia == cosh.inertia


def test_interlacing_holds_for_symmetric_matrices(six_points):
    assert check_interlacing(generators.gen_kwong(six_points, 2.5).to_float()).holds
    rng = np.random.default_rng(21)
    assert check_interlacing(_random_symmetric(rng, 7)).holds


def test_spectrum_report_json(six_points):
    report = inertia_float(make_spec("kwong", six_points, 2.0))
    data = report.to_dict()
    assert data["inertia"] == [1, 0, 5]
    assert data["conditioningRoute"] == "direct"
    assert len(data["eigenvalues"]) == 6


def test_float_symmetric_matrix_input():
    matrix = SymMatrix.from_rows([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(eig_sym(matrix), [1.0, 3.0])


def test_engine_manager_auto_rule(k3_points):
    manager = EngineManager(exact_max_order=3)
    assert manager.factory.get_available_engines() == ["exact", "float"]
    assert manager.resolve(make_spec("kwong", k3_points, 3), "auto") is EngineKind.FLOAT
    small = make_spec("kwong", validate_points([1, 2, 5]), 3)
    assert EngineManager().resolve(small, "auto") is EngineKind.EXACT
    assert EngineManager().resolve(small.with_r(2.5), "auto") is EngineKind.FLOAT
