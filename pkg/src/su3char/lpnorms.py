"""Lp norms of characters against normalized Haar measure, plus the
predicted-bound formulas they are checked against.

The torus reduction: ||chi_mu||_p^p is proportional to

    N_p = int_A |chi(mu, H)|^p * w(H) dH,   w = prod_{alpha} wall_norm^2,

over the alcove A = {t1, t2 >= 0, t1 + t2 <= 2pi}.  We self-normalize by
Z = int_A w so that ||chi_(0,0)||_p = 1 identically and no Haar-measure
constant enters.  The integrand is 2pi-periodic in (t1, t2) -- shifting
either coordinate by 2pi multiplies the matrix by a central element, which
leaves |chi| and w unchanged -- and A carries exactly half of the period
square's integral (the complement triangle maps onto A by
(t1,t2) -> (2pi-t2, 2pi-t1), a symmetry of |chi|*w).  The default
quadrature therefore runs an equal-weight trapezoid rule on the period
square, where it is *exact* for even p once the grid outruns the
integrand's bandwidth; a Duffy-mapped triangle rule over A is kept as an
independent cross-check mapping.

Also here: the seven-case predicted Lp bounds driven by (mu_bar, mu_min),
the model integral I(p; a~, b~, c~) over the shrunken simplex A0 with its
seven-case majorant, and log-log slope fits recovering the predicted
exponents on weight families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .cartan import DominantWeight, dim, mu_stats
from .character import chi_on_grid
from .quadrature import (
    ConvergenceError,
    QuadratureResult,
    adaptive_triangle,
    periodic_trapezoid_2d,
)

__all__ = [
    "QuadratureSpec",
    "LpReport",
    "ScalingRow",
    "FitResult",
    "haar_lp_norm",
    "predicted_singular_bound",
    "predicted_regular_bound",
    "predicted_dimension_bound",
    "I_numeric",
    "I_bound",
    "scaling_fit",
    "family_weight",
    "ConvergenceError",
]

TWO_PI = 2.0 * math.pi
A0_SIDE = 4.0 * math.pi / 3.0
_P_TOL = 1e-9  # width of the exact-exponent boundary cases p = 8/3, 3, 5

_MAPPINGS = ("periodic_square", "duffy")


@dataclass(frozen=True)
class QuadratureSpec:
    base_rule: int = 64
    max_refinements: int = 6
    rel_tol: float = 1e-6
    mapping: str = "periodic_square"

    def __post_init__(self):
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.base_rule < 2:
            raise ValueError("base_rule must be at least 2")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be nonnegative")
        if self.mapping not in _MAPPINGS:
            raise ValueError(f"mapping must be one of {_MAPPINGS}")


@dataclass(frozen=True)
class LpReport:
    mu_a: int
    mu_b: int
    p: float
    norm: float
    normalizer_z: float
    predicted_singular: float
    predicted_regular: Optional[float]   # None when p < 2
    predicted_dimension: Optional[float]  # None when p <= 8/3
    levels: int
    last_delta: float
    converged: bool


def _weight(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    s = np.sin(0.5 * t1) * np.sin(0.5 * t2) * np.sin(0.5 * (t1 + t2))
    return s * s


def _norm_integrand(mu: DominantWeight, p: float):
    def f(t1, t2):
        w = _weight(t1, t2)
        out = np.zeros(w.shape, dtype=np.float64)
        mask = w > 0.0
        if mask.any():
            vals, _ = chi_on_grid(mu, t1[mask], t2[mask])
            out[mask] = np.abs(vals) ** p * w[mask]
        return out

    return f


def _bandwidth(mu: DominantWeight) -> float:
    """Largest |frequency| of chi_mu in either alcove coordinate."""
    return max(2 * mu.a + mu.b, mu.a + 2 * mu.b) / 3.0


def haar_lp_norm(mu, p: float, spec: Optional[QuadratureSpec] = None) -> LpReport:
    if p <= 0.0:
        raise ValueError("p must be positive")
    if not isinstance(mu, DominantWeight):
        mu = DominantWeight(*mu)
    spec = spec or QuadratureSpec()

    f = _norm_integrand(mu, p)
    if spec.mapping == "periodic_square":
        n0 = max(48, int(math.ceil(p * _bandwidth(mu))) + 8)
        num = periodic_trapezoid_2d(f, TWO_PI, n0, spec.max_refinements, spec.rel_tol)
        den = periodic_trapezoid_2d(_weight, TWO_PI, n0, spec.max_refinements, spec.rel_tol)
    else:
        alcove = ((0.0, 0.0), (TWO_PI, 0.0), (0.0, TWO_PI))
        num = adaptive_triangle(f, alcove, spec.base_rule, spec.max_refinements, spec.rel_tol)
        den = adaptive_triangle(_weight, alcove, spec.base_rule, spec.max_refinements, spec.rel_tol)

    norm = (num.value / den.value) ** (1.0 / p)
    return LpReport(
        mu_a=mu.a,
        mu_b=mu.b,
        p=p,
        norm=norm,
        normalizer_z=den.value,
        predicted_singular=predicted_singular_bound(mu, p),
        predicted_regular=predicted_regular_bound(mu, p) if p >= 2.0 else None,
        predicted_dimension=(
            predicted_dimension_bound(mu, p) if p > 8.0 / 3.0 - _P_TOL else None
        ),
        levels=num.levels,
        last_delta=num.last_delta,
        converged=num.converged and den.converged,
    )


def predicted_singular_bound(mu, p: float) -> float:
    """Seven-case majorant of ||chi_mu||_p in (mu_bar, mu_min); natural logs."""
    if p <= 0.0:
        raise ValueError("p must be positive")
    if not isinstance(mu, DominantWeight):
        mu = DominantWeight(*mu)
    st = mu_stats(mu)
    ub, lb = float(st.mu_bar), float(st.mu_min)
    third = 8.0 / 3.0
    if p < third - _P_TOL:
        return 1.0
    if abs(p - third) <= _P_TOL:
        return math.log(2.0 + lb) ** 0.375
    if p < 3.0 - _P_TOL:
        return lb ** (3.0 - 8.0 / p)
    if abs(p - 3.0) <= _P_TOL:
        return lb ** (1.0 / 3.0) * math.log(2.0 + ub / lb) ** (1.0 / 3.0)
    if p < 5.0 - _P_TOL:
        return ub ** (1.0 - 3.0 / p) * lb ** (2.0 - 5.0 / p)
    if abs(p - 5.0) <= _P_TOL:
        return ub ** 0.4 * lb * math.log(2.0 + ub / lb) ** 0.2
    return ub ** (2.0 - 8.0 / p) * lb


def predicted_regular_bound(mu, p: float) -> float:
    """Three-case mu_bar-only majorant (the earlier regular-regime bound)."""
    if p < 2.0:
        raise ValueError("the regular-regime bound requires p >= 2")
    if not isinstance(mu, DominantWeight):
        mu = DominantWeight(*mu)
    ub = float(mu_stats(mu).mu_bar)
    third = 8.0 / 3.0
    if p < third - _P_TOL:
        return 1.0
    if abs(p - third) <= _P_TOL:
        return math.log(2.0 + ub) ** 0.375
    return ub ** (3.0 - 8.0 / p)


def predicted_dimension_bound(mu, p: float) -> float:
    """dim(mu)^{1 - 8/(3p)} for p > 8/3 (equals 1 at the boundary)."""
    if p < 8.0 / 3.0 - _P_TOL:
        raise ValueError("the dimension bound requires p > 8/3")
    if not isinstance(mu, DominantWeight):
        mu = DominantWeight(*mu)
    return float(dim(mu)) ** (1.0 - 8.0 / (3.0 * p))


# ---------------------------------------------------------------------------
# the model integral over A0 and its case bound
# ---------------------------------------------------------------------------

def _model_g(x, y, p: float, aa: float, bb: float, cc: float):
    num = (x * y) ** 2 * (x + y) ** 2
    den = (1.0 + aa * x) ** p * (1.0 + bb * y) ** p * (1.0 + cc * (x + y)) ** p
    return num / den


def I_numeric(
    p: float,
    a_t: float,
    b_t: float,
    c_t: float,
    spec: Optional[QuadratureSpec] = None,
    full: bool = False,
):
    """int over {t1,t2 >= 0, t1+t2 <= 4pi/3} of
    t1^2 t2^2 (t1+t2)^2 / [(1+a_t t1)^p (1+b_t t2)^p (1+c_t(t1+t2))^p].

    Integrates the diagonal half {t2 <= t1} with the integrand folded across
    t1 = t2; the folded sum is symmetric in (a_t, t1) <-> (b_t, t2) term by
    term, so swapped calls return bit-identical values.
    """
    if p <= 0.0:
        raise ValueError("p must be positive")
    if min(a_t, b_t, c_t) <= 0.0:
        raise ValueError("a_t, b_t, c_t must be positive")
    spec = spec or QuadratureSpec()

    def h(x, y):
        return _model_g(x, y, p, a_t, b_t, c_t) + _model_g(y, x, p, a_t, b_t, c_t)

    lower = ((0.0, 0.0), (A0_SIDE, 0.0), (A0_SIDE / 2.0, A0_SIDE / 2.0))
    res = adaptive_triangle(h, lower, spec.base_rule, spec.max_refinements, spec.rel_tol)
    if full:
        return res
    res.require_converged(f"I_numeric(p={p}, {a_t}, {b_t}, {c_t})")
    return res.value


def I_bound(p: float, a: float, b: float, c: float) -> float:
    """Seven-case majorant of I_numeric for sorted arguments a >= b >= c > 0."""
    if p <= 0.0:
        raise ValueError("p must be positive")
    if not (a >= b >= c > 0.0):
        raise ValueError(
            "I_bound requires a >= b >= c > 0; pass the sorted shifted-weight "
            "pairings (mu_stats gives the extremes)"
        )
    third = 8.0 / 3.0
    if p < third - _P_TOL:
        return a ** -p * b ** -p * c ** -p
    if abs(p - third) <= _P_TOL:
        return a ** -p * b ** -p * c ** -p * math.log(2.0 + c)
    if p < 3.0 - _P_TOL:
        return a ** -p * b ** -p * c ** (2.0 * p - 8.0)
    if abs(p - 3.0) <= _P_TOL:
        return a ** -3.0 * b ** -3.0 * c ** -2.0 * math.log(2.0 + a / c)
    if p < 5.0 - _P_TOL:
        return a ** -3.0 * b ** -p * c ** (p - 5.0)
    if abs(p - 5.0) <= _P_TOL:
        return a ** -3.0 * b ** -5.0 * math.log(2.0 + b / c)
    return a ** -3.0 * b ** -5.0


# ---------------------------------------------------------------------------
# scaling fits
# ---------------------------------------------------------------------------

_FAMILIES = ("axis", "diagonal", "fixed_b")


def family_weight(family: str, N: int, b0: int = 2) -> DominantWeight:
    if family == "axis":
        return DominantWeight(N, 0)
    if family == "diagonal":
        return DominantWeight(N, N)
    if family == "fixed_b":
        return DominantWeight(N, b0)
    raise ValueError(f"family must be one of {_FAMILIES}")


@dataclass(frozen=True)
class ScalingRow:
    N: int
    mu_a: int
    mu_b: int
    p: float
    norm: float
    predicted: float
    ratio: float


@dataclass(frozen=True)
class FitResult:
    family: str
    p: float
    slope: float
    residual: float                 # RMS residual of the log-log fit
    slope_trimmed: Optional[float]  # set when residual > 0.02 (smallest N dropped)
    residual_trimmed: Optional[float]
    table: Tuple[ScalingRow, ...]


def _ols_loglog(ns: Sequence[float], norms: Sequence[float]) -> Tuple[float, float]:
    xs = [math.log(n) for n in ns]
    ys = [math.log(v) for v in norms]
    n = len(xs)
    xbar = math.fsum(xs) / n
    ybar = math.fsum(ys) / n
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    rss = math.fsum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
    return slope, math.sqrt(rss / n)


def scaling_fit(
    family: str,
    p: float,
    N_values: Sequence[int] = (8, 16, 32, 64, 128, 256, 512),
    spec: Optional[QuadratureSpec] = None,
    b0: int = 2,
) -> FitResult:
    """OLS slope of log ||chi|| against log N along a weight family.

    When the full-fit RMS residual exceeds 0.02 the smallest N is dropped
    and the fit repeated (small-N transients); both slopes are reported.
    """
    if len(N_values) < 4:
        raise ValueError("need at least 4 N values for a slope fit")
    rows: List[ScalingRow] = []
    for N in N_values:
        mu = family_weight(family, N, b0)
        rep = haar_lp_norm(mu, p, spec)
        predicted = rep.predicted_singular
        rows.append(
            ScalingRow(
                N=N,
                mu_a=mu.a,
                mu_b=mu.b,
                p=p,
                norm=rep.norm,
                predicted=predicted,
                ratio=rep.norm / predicted,
            )
        )
        if not rep.converged:
            err = ConvergenceError(
                f"haar_lp_norm did not converge at N={N} "
                f"(last relative delta {rep.last_delta:.3e})",
                QuadratureResult(rep.norm, rep.levels, rep.last_delta, False),
            )
            err.partial_table = tuple(rows)
            raise err

    slope, residual = _ols_loglog([r.N for r in rows], [r.norm for r in rows])
    slope_trimmed = residual_trimmed = None
    if residual > 0.02:
        slope_trimmed, residual_trimmed = _ols_loglog(
            [r.N for r in rows[1:]], [r.norm for r in rows[1:]]
        )
    return FitResult(
        family=family,
        p=p,
        slope=slope,
        residual=residual,
        slope_trimmed=slope_trimmed,
        residual_trimmed=residual_trimmed,
        table=tuple(rows),
    )
