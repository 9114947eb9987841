import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from su3char import (
    WEYL_GROUP,
    DominantWeight,
    GridSpec,
    TorusPoint,
    build_grid,
    c_of_H,
    chi_stable,
    default_mu_set,
    dim,
    envelope_min,
    pointwise_singular_bound,
    rank1_bound_margin,
    ratio,
    sweep_constant,
    weyl_act_torus,
)
from su3char.bounds import _envelope_min_grid

TWO_PI = 2.0 * math.pi
ZERO = TorusPoint((0.0, 0.0, 0.0))

weights = st.builds(DominantWeight, st.integers(0, 20), st.integers(0, 20))


@st.composite
def torus_points(draw):
    t1 = draw(st.floats(0.0, TWO_PI))
    t2 = draw(st.floats(0.0, 1.0)) * (TWO_PI - t1)
    return TorusPoint.from_alcove_coords(t1, t2)


# ---------------------------------------------------------------------------
# envelope
# ---------------------------------------------------------------------------

def test_envelope_at_zero_is_twelve_dim():
    # every wall_norm vanishes, so each factor takes the pairing branch and
    # each of the six terms is (a+1)(b+1)(a+b+2) = 2*dim
    for a, b in [(0, 0), (3, 1), (17, 9)]:
        mu = DominantWeight(a, b)
        env = envelope_min(mu, ZERO)
        assert env.min_form == 12.0 * dim(mu)
        assert env.per_weyl_terms == tuple([2.0 * dim(mu)] * 6)


def test_envelope_at_central_direction():
    H = TorusPoint((2 * math.pi / 3, 0.0, -2 * math.pi / 3))
    env = envelope_min(DominantWeight(0, 0), H)
    assert env.min_form == pytest.approx(12.0 / math.sqrt(3.0), rel=1e-14)


def test_envelope_saturates_to_inverse_walls():
    # walls all >= 1/(a+b+2) here, so every factor picks the 1/wall branch
    mu = DominantWeight(10, 10)
    H = TorusPoint.from_alcove_coords(2.0, 2.0)
    w = H.wall_norms()
    assert min(w) > 1.0 / (mu.a + mu.b + 2)
    env = envelope_min(mu, H)
    assert env.min_form == pytest.approx(6.0 / (w[0] * w[1] * w[2]), rel=1e-12)


@given(weights, torus_points(), st.sampled_from(range(6)))
def test_envelope_weyl_invariance(mu, H, si):
    s = WEYL_GROUP[si]
    a = envelope_min(mu, H)
    b = envelope_min(mu, weyl_act_torus(s, H))
    assert b.min_form == pytest.approx(a.min_form, rel=1e-10)


@given(weights, torus_points())
def test_envelope_positive_and_product_form_within_factor_eight(mu, H):
    env = envelope_min(mu, H)
    assert env.min_form > 0.0
    assert env.product_form <= env.min_form * (1 + 1e-12)
    assert env.product_form >= env.min_form / 8.0 * (1 - 1e-12)


@given(weights)
def test_envelope_grid_matches_scalar(mu):
    pts = [(0.0, 0.0), (1.0, 2.0), (0.0, 3.0), (1e-9, 1e-9), (2.0, TWO_PI - 2.0)]
    t1 = np.array([p[0] for p in pts])
    t2 = np.array([p[1] for p in pts])
    grid_vals = _envelope_min_grid(mu, t1, t2)
    for i, (x, y) in enumerate(pts):
        want = envelope_min(mu, TorusPoint.from_alcove_coords(x, y)).min_form
        assert grid_vals[i] == pytest.approx(want, rel=1e-9)


# ---------------------------------------------------------------------------
# c(H) and the pointwise bound
# ---------------------------------------------------------------------------

def test_c_of_H_examples():
    assert c_of_H(ZERO) == 0.0
    assert c_of_H(TorusPoint((math.pi, -math.pi, 0.0))) == pytest.approx(1.0, abs=1e-15)
    H = TorusPoint((2 * math.pi / 3, 0.0, -2 * math.pi / 3))
    assert c_of_H(H) == pytest.approx(0.75, rel=1e-14)


def test_c_of_H_vanishes_only_at_central_points():
    # the other two central elements: theta = +-(2pi/3)(1,1,-2)
    H = TorusPoint((2 * math.pi / 3, 2 * math.pi / 3, -4 * math.pi / 3))
    assert c_of_H(H) == pytest.approx(0.0, abs=1e-15)


def test_pointwise_bound_example():
    bound = pointwise_singular_bound(DominantWeight(0, 0), TorusPoint((math.pi, -math.pi, 0.0)))
    assert bound.value == pytest.approx(0.5, rel=1e-14)
    assert bound.legacy_value == pytest.approx(1.0, rel=1e-14)


def test_pointwise_bound_rejects_central_H():
    with pytest.raises(ValueError):
        pointwise_singular_bound(DominantWeight(2, 2), ZERO)


@given(st.integers(1, 40))
def test_pointwise_bound_improves_on_legacy_on_the_diagonal(n):
    # for mu = (N,N) the new bound wins by ~ mu_min^{1/2}
    mu = DominantWeight(n, n)
    H = TorusPoint((math.pi, -math.pi, 0.0))
    b = pointwise_singular_bound(mu, H)
    assert b.value < b.legacy_value


# ---------------------------------------------------------------------------
# ratio records
# ---------------------------------------------------------------------------

def test_ratio_at_zero_is_exactly_one_twelfth():
    for a, b in [(0, 0), (2, 5), (30, 30)]:
        rec = ratio(DominantWeight(a, b), ZERO)
        assert rec.ratio == 1.0 / 12.0
        assert rec.method == "schur"
        assert rec.abs_chi == float(dim(DominantWeight(a, b)))


@given(torus_points())
def test_trivial_weight_ratio_below_one(H):
    rec = ratio(DominantWeight(0, 0), H)
    assert 0.0 < rec.ratio <= 1.0
    assert rec.envelope > 0.0
    assert rec.ratio == rec.abs_chi / rec.envelope


# ---------------------------------------------------------------------------
# rank-one margin
# ---------------------------------------------------------------------------

def test_rank1_margin_examples():
    assert rank1_bound_margin(1, math.pi / 2) == pytest.approx(1.0, abs=1e-12)
    assert rank1_bound_margin(5, math.pi / 6) == pytest.approx(2.0, abs=1e-12)
    # n = 0: margin vanishes exactly where |sin| = 1
    assert rank1_bound_margin(0, math.pi / 2) == 0.0
    assert rank1_bound_margin(0, 0.3) >= 0.0
    with pytest.raises(ValueError):
        rank1_bound_margin(-1, 0.5)


def test_rank1_margin_array_matches_scalar():
    thetas = np.linspace(0.05, math.pi - 0.05, 11)
    arr = rank1_bound_margin(7, thetas)
    for i, th in enumerate(thetas):
        assert arr[i] == pytest.approx(rank1_bound_margin(7, float(th)), abs=1e-14)


@given(st.integers(0, 60), st.floats(1e-4, math.pi - 1e-4))
def test_rank1_margin_nonnegative(n, theta):
    assert rank1_bound_margin(n, theta) >= -1e-12


# ---------------------------------------------------------------------------
# grid construction and the sweep
# ---------------------------------------------------------------------------

def test_grid_strata_counts_and_exact_hits():
    spec = GridSpec(total=2000, wall_points_per_edge=100, chamber_wall_points=50,
                    corner_scales=4, corner_rays=3)
    grid = build_grid(spec, seed=7)
    assert len(grid.stratum) == spec.total
    assert grid.t1[0] == 0.0 and grid.t2[0] == 0.0  # H = 0 first

    by = {}
    for lab in grid.stratum:
        by[lab] = by.get(lab, 0) + 1
    assert by["corner_exact"] == 3
    assert by["corner_ray"] == 3 * 4 * 3
    assert by["wall_t1"] == by["wall_t2"] == by["wall_far"] == 100
    assert by["chamber_alpha0"] == 50
    assert by["interior"] == spec.interior_points()

    lab = np.array(grid.stratum)
    assert (grid.t1[lab == "wall_t1"] == 0.0).all()
    assert (grid.t2[lab == "wall_t2"] == 0.0).all()
    # chamber stratum hits <alpha0, H> = 0 in exact floating point
    cham = lab == "chamber_alpha0"
    assert (grid.t1[cham] + grid.t2[cham] == 0.0).all()


def test_grid_is_seed_deterministic():
    spec = GridSpec(total=500, wall_points_per_edge=50, chamber_wall_points=20,
                    corner_scales=3, corner_rays=2)
    g1 = build_grid(spec, seed=42)
    g2 = build_grid(spec, seed=42)
    assert np.array_equal(g1.t1, g2.t1) and np.array_equal(g1.t2, g2.t2)
    g3 = build_grid(spec, seed=43)
    assert not np.array_equal(g1.t1, g3.t1)


def test_grid_spec_rejects_overfull_strata():
    with pytest.raises(ValueError):
        GridSpec(total=10).interior_points()


def test_default_mu_set_shape():
    mus = default_mu_set(4, 8)
    shells = {}
    for mu in mus:
        shells.setdefault(mu.a + mu.b, []).append(mu)
    assert set(shells) == set(range(9))
    for s in range(5):
        assert len(shells[s]) == s + 1  # dense below the cutoff
    for s in range(5, 9):
        assert len(shells[s]) <= s + 1
        assert DominantWeight(0, s) in shells[s]
        assert DominantWeight(s, 0) in shells[s]


def test_sweep_small_is_deterministic_and_sane():
    spec = GridSpec(total=400, wall_points_per_edge=40, chamber_wall_points=30,
                    corner_scales=3, corner_rays=3)
    mus = default_mu_set(2, 2)
    rep1 = sweep_constant(mus, spec, seed=11)
    rep2 = sweep_constant(mus, spec, seed=11, threads=3)
    assert rep1 == rep2  # thread count must not change anything
    assert rep1.finite_ok
    assert rep1.ratio_at_zero_exact
    assert rep1.c_emp == max(r.ratio for r in rep1.per_mu)
    assert rep1.mu_count == len(mus)
    assert rep1.grid_total == 400
    assert rep1.convention == "alpha_sq_2"
    shell_ids = [row["shell"] for row in rep1.shells]
    assert shell_ids == sorted(set(mu.a + mu.b for mu in mus))
