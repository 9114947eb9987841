import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from su3char import (
    ConvergenceError,
    QuadratureResult,
    adaptive_triangle,
    periodic_trapezoid_2d,
)
from su3char.quadrature import subdivide_triangle, triangle_rule

UNIT = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def test_triangle_rule_exact_on_polynomials():
    x, y, w = triangle_rule(UNIT, 12)
    assert math.fsum(w.tolist()) == pytest.approx(0.5, rel=1e-14)
    assert float(w @ x) == pytest.approx(1.0 / 6.0, rel=1e-13)
    assert float(w @ (x * y)) == pytest.approx(1.0 / 24.0, rel=1e-12)
    assert float(w @ (x ** 2 * y)) == pytest.approx(1.0 / 60.0, rel=1e-12)


def test_triangle_rule_scales_with_area():
    big = ((0.0, 0.0), (2.0, 0.0), (0.0, 4.0))
    _, _, w = triangle_rule(big, 8)
    assert math.fsum(w.tolist()) == pytest.approx(4.0, rel=1e-14)


def test_subdivision_covers_parent():
    children = subdivide_triangle(UNIT)
    assert len(children) == 4

    def area(t):
        (ax, ay), (bx, by), (cx, cy) = t
        return abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2.0

    assert sum(area(c) for c in children) == pytest.approx(area(UNIT), rel=1e-15)
    for c in children:
        assert area(c) == pytest.approx(area(UNIT) / 4.0, rel=1e-12)


def test_adaptive_triangle_converges_on_smooth_integrand():
    res = adaptive_triangle(lambda x, y: np.exp(-(x + y)), UNIT, base_rule=16)
    res.require_converged("exp test")
    # int over unit simplex of e^{-(x+y)} = 1 - 2/e
    assert res.value == pytest.approx(1.0 - 2.0 / math.e, rel=1e-10)
    assert res.levels >= 2
    assert res.converged


def test_adaptive_triangle_flags_nonconvergence():
    # genuinely rough integrand, no refinement budget
    res = adaptive_triangle(
        lambda x, y: np.abs(np.sin(40.0 / (x + y + 1e-3))),
        UNIT,
        base_rule=4,
        max_refinements=0,
        rel_tol=1e-12,
    )
    assert not res.converged
    assert res.last_delta == math.inf
    with pytest.raises(ConvergenceError) as exc_info:
        res.require_converged("rough test")
    assert exc_info.value.result is res


def test_adaptive_triangle_is_deterministic():
    f = lambda x, y: np.sin(3 * x) * np.cos(2 * y) + x * y
    r1 = adaptive_triangle(f, UNIT, base_rule=24)
    r2 = adaptive_triangle(f, UNIT, base_rule=24)
    assert r1 == r2


def test_periodic_trapezoid_exact_for_trig_polynomials():
    # f = (1 + cos(3 t1)) (1 + sin(2 t2)): mean 1, bandwidth 3 < n
    def f(t1, t2):
        return (1.0 + np.cos(3.0 * t1)) * (1.0 + np.sin(2.0 * t2))

    res = periodic_trapezoid_2d(f, 2.0 * math.pi, n0=8)
    assert res.converged
    assert res.value == pytest.approx((2.0 * math.pi) ** 2, rel=1e-14)
    assert res.levels == 2  # exact at n0 and 2*n0, stops immediately


def test_periodic_trapezoid_outgrows_aliasing():
    # cos(8 t1) aliases to +1 on the 8-point grid, so the first level reads
    # 2*(2pi)^2; doubling resolves the mode and the rule settles on the mean
    def f(t1, t2):
        return 1.0 + np.cos(8.0 * t1)

    area = (2.0 * math.pi) ** 2
    res = periodic_trapezoid_2d(f, 2.0 * math.pi, n0=8, max_doublings=3)
    assert res.converged
    assert res.levels == 3
    assert res.value == pytest.approx(area, rel=1e-14)


def test_periodic_trapezoid_rejects_bad_args():
    f = lambda t1, t2: t1 * 0.0 + 1.0
    with pytest.raises(ValueError):
        periodic_trapezoid_2d(f, 1.0, n0=1)
    with pytest.raises(ValueError):
        periodic_trapezoid_2d(f, 1.0, n0=4, rel_tol=0.0)
    with pytest.raises(ValueError):
        adaptive_triangle(f, UNIT, rel_tol=-1.0)


@given(st.integers(2, 40))
def test_trapezoid_constant_is_exact_for_any_grid(n):
    res = periodic_trapezoid_2d(lambda a, b: np.full_like(a, 2.5), 1.0, n0=n)
    assert res.value == pytest.approx(2.5, rel=1e-15)


def test_quadrature_result_fields():
    res = QuadratureResult(1.0, 3, 1e-9, True)
    assert res.require_converged("x") is res
