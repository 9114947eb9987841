"""Three independent evaluators for su(3) irreducible characters.

``chi_weyl``    quotient of the alternating 6-term phase sum by the product
                of the three positive-root sines (Weyl character formula);
                fast and accurate away from walls, cancellation-limited near
                them.
``descent_terms``
                regroups the same sum by right cosets of a wall reflection,
                so the cancellation across one chosen wall is done in closed
                form by a rank-one character sin(m*u)/sin(u); exact on that
                wall, needs the other two walls to stay away from zero.
``chi_schur``   brute-force oracle: the sum of dim(mu) unit-modulus phases,
                one per Gelfand-Tsetlin pattern of shape (a+b, b, 0) with
                entries <= 3.  Slow but unconditionally stable; exact at
                H = 0.
``chi_stable``  dispatcher picking among the three by wall distances.

All evaluators agree on chi~(lambda, H) = chi(mu, H) for lambda = mu + rho;
the lambda-level entry points (chi_weyl, descent_terms) exist so the Weyl
antisymmetry chi~(s.lambda, H) = det(s) * chi~(lambda, H) can be exercised
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .cartan import (
    ALPHA1,
    ALPHA2,
    DominantWeight,
    POSITIVE_ROOTS,
    RegularTriple,
    Root,
    TorusPoint,
    WEYL_GROUP,
    WeylElement,
    dim,
    pairing_root_torus,
    pairing_weight_root,
    wall_coset,
    wall_norm,
)

__all__ = [
    "CharValue",
    "DescentTerm",
    "DescentTermSet",
    "chi_rank1",
    "chi_weyl",
    "chi_schur",
    "descent_terms",
    "chi_stable",
    "chi_on_grid",
    "SingularInputError",
    "WallTooSmallError",
    "ResourceLimitError",
    "EPS_WALL",
    "SCHUR_DIM_LIMIT",
    "GRID_METHOD_NAMES",
]

# Dispatch threshold: below this wall distance the Weyl quotient loses ~10
# significant digits and we descend to a better-conditioned formula.
EPS_WALL = 1e-3

# chi_rank1 switches from the sine ratio to the Chebyshev recurrence here.
RANK1_SIN_SWITCH = 1e-8

# Exact-zero guard for denominators (an exact wall hit).
WALL_FLOOR = 1e-14

# chi_schur refuses representations with more patterns than this.
SCHUR_DIM_LIMIT = 10**7

# Positive-root representative of each extended wall.  Wall 0 is alpha0's
# wall but the positive system contains -alpha0 = (1,3); using the positive
# representative in both the rank-one factor and the prefactor keeps the
# assembled descent sum equal to chi~ with no stray sign.
WALL_POSITIVE_ROOT: Tuple[Root, Root, Root] = (Root(1, 3), ALPHA1, ALPHA2)


class SingularInputError(ValueError):
    """Weyl quotient requested on or too close to a wall."""


class WallTooSmallError(ValueError):
    """Descent prefactor would divide by a vanishing complementary wall."""


class ResourceLimitError(RuntimeError):
    """Pattern enumeration refused; representation too large."""


@dataclass(frozen=True)
class CharValue:
    """Evaluated character: value, which formula produced it, conditioning.

    ``condition`` is the reciprocal of the smallest wall distance that
    appeared in a denominator; +inf when no division happened (schur).
    """

    value: complex
    method: str
    condition: float


# ---------------------------------------------------------------------------
# rank-one building block
# ---------------------------------------------------------------------------

def chi_rank1(m: int, u: float) -> float:
    """sin(m*u)/sin(u), continued across sin(u) = 0.

    This is the su(2) character of the (|m|-1)-fold symmetric power evaluated
    at angle 2u, i.e. the Chebyshev polynomial U_{|m|-1}(cos u) up to the sign
    of m.  Satisfies |chi_rank1(m, u)| <= min(|m|, 1/|sin u|), odd in m.
    """
    if m == 0:
        return 0.0
    s = math.sin(u)
    if abs(s) >= RANK1_SIN_SWITCH:
        return math.sin(m * u) / s
    # near a pole of 1/sin: degree-(|m|-1) Chebyshev recurrence in cos u
    n = abs(m)
    c2 = 2.0 * math.cos(u)
    ukm1, uk = 0.0, 1.0  # U_{-1}, U_0
    for _ in range(n - 1):
        ukm1, uk = uk, c2 * uk - ukm1
    return uk if m > 0 else -uk


def _rank1_array(m: int, u: np.ndarray) -> np.ndarray:
    """Vectorized chi_rank1 for scalar integer m over an array of angles."""
    if m == 0:
        return np.zeros_like(u)
    s = np.sin(u)
    safe = np.abs(s) >= RANK1_SIN_SWITCH
    out = np.empty_like(u)
    out[safe] = np.sin(m * u[safe]) / s[safe]
    if not safe.all():
        up = u[~safe]
        n = abs(m)
        c2 = 2.0 * np.cos(up)
        ukm1 = np.zeros_like(up)
        uk = np.ones_like(up)
        for _ in range(n - 1):
            ukm1, uk = uk, c2 * uk - ukm1
        out[~safe] = uk if m > 0 else -uk
    return out


# ---------------------------------------------------------------------------
# Weyl quotient
# ---------------------------------------------------------------------------

def chi_weyl(lam: RegularTriple, H: TorusPoint) -> CharValue:
    """Alternating phase sum over W divided by the positive-root sine product."""
    walls = [wall_norm(H, beta) for beta in POSITIVE_ROOTS]
    wmin = min(walls)
    if wmin <= WALL_FLOOR:
        raise SingularInputError(
            f"H is on a wall (min wall_norm {wmin:.3e}); use chi_stable"
        )
    th = H.theta
    num = 0j
    for s in WEYL_GROUP:
        e = s.apply(lam.ell)
        angle = e[0] * th[0] + e[1] * th[1] + e[2] * th[2]
        num += s.sign * complex(math.cos(angle), math.sin(angle))
    den = 1.0 + 0j
    for beta in POSITIVE_ROOTS:
        den *= 2j * math.sin(0.5 * pairing_root_torus(H, beta))
    return CharValue(value=num / den, method="weyl", condition=1.0 / wmin)


# ---------------------------------------------------------------------------
# Gelfand-Tsetlin / Schur oracle
# ---------------------------------------------------------------------------

_weights_cache: dict = {}


def _schur_weight_arrays(a: int, b: int):
    """Weights (w1, w2, w3) of all GT patterns of shape (a+b, b, 0), lex order.

    Lex order is (m12, m22, m11) ascending.  w1 = m11, w2 = m12+m22-m11,
    w3 = a+2b - m12 - m22; one pattern per basis vector, so the number of
    rows equals dim.
    """
    key = (a, b)
    hit = _weights_cache.get(key)
    if hit is not None:
        return hit
    m12v = np.arange(b, a + b + 1, dtype=np.int64)
    m22v = np.arange(0, b + 1, dtype=np.int64)
    m12 = np.repeat(m12v, b + 1)
    m22 = np.tile(m22v, a + 1)
    counts = m12 - m22 + 1
    total = int(counts.sum())
    block = np.repeat(np.arange(m12.size), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    within = np.arange(total, dtype=np.int64) - offsets[block]
    m11 = m22[block] + within
    w1 = m11
    w2 = m12[block] + m22[block] - m11
    w3 = (a + 2 * b) - m12[block] - m22[block]
    for arr in (w1, w2, w3):
        arr.setflags(write=False)
    if len(_weights_cache) > 3:
        _weights_cache.clear()
    _weights_cache[key] = (w1, w2, w3)
    return w1, w2, w3


def chi_schur(mu: DominantWeight, H: TorusPoint) -> CharValue:
    """Sum of dim(mu) unit phases exp(i*<w, theta>) over GT patterns.

    No denominators at all, hence stable everywhere (walls, corners, H = 0);
    at H = 0 every phase is exactly 1.0 and the value is exactly dim(mu).
    Summation is exactly rounded (math.fsum) in pattern-lex order.
    """
    d = dim(mu)
    if d > SCHUR_DIM_LIMIT:
        raise ResourceLimitError(
            f"dim(mu) = {d} exceeds the pattern-sum budget {SCHUR_DIM_LIMIT}"
        )
    w1, w2, w3 = _schur_weight_arrays(mu.a, mu.b)
    th = H.theta
    angle = w1 * th[0] + w2 * th[1] + w3 * th[2]
    re = math.fsum(np.cos(angle).tolist())
    im = math.fsum(np.sin(angle).tolist())
    return CharValue(value=complex(re, im), method="schur", condition=math.inf)


def _schur_batch(mu: DominantWeight, th1, th2, th3) -> np.ndarray:
    """chi(mu, .) on many torus points at once via the pattern phase sum."""
    d = dim(mu)
    if d > SCHUR_DIM_LIMIT:
        raise ResourceLimitError(
            f"dim(mu) = {d} exceeds the pattern-sum budget {SCHUR_DIM_LIMIT}"
        )
    w1, w2, w3 = _schur_weight_arrays(mu.a, mu.b)
    out = np.zeros(th1.shape, dtype=np.complex128)
    # fixed-size pattern chunks keep peak memory bounded and the reduction
    # order independent of how many points the caller batched
    chunk = max(1, (1 << 22) // max(1, th1.size))
    for lo in range(0, w1.size, chunk):
        hi = min(lo + chunk, w1.size)
        angle = (
            np.multiply.outer(w1[lo:hi].astype(np.float64), th1)
            + np.multiply.outer(w2[lo:hi].astype(np.float64), th2)
            + np.multiply.outer(w3[lo:hi].astype(np.float64), th3)
        )
        out += np.exp(1j * angle).sum(axis=0)
    return out


# ---------------------------------------------------------------------------
# descent to a wall
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DescentTerm:
    element: WeylElement
    det: int
    m: int             # pairing of the coset-moved weight with the wall root
    phase: complex     # exp(i * <s.lambda, H - H^j>)
    rank1: float       # chi_rank1(m, u), u = <beta_j, H>/2


@dataclass(frozen=True)
class DescentTermSet:
    """Terms of the coset-regrouped character formula at wall j."""

    j: int
    prefactor: complex
    terms: Tuple[DescentTerm, DescentTerm, DescentTerm]
    condition: float

    def assembled(self) -> complex:
        acc = 0j
        for t in self.terms:
            acc += t.det * t.phase * t.rank1
        return self.prefactor * acc


def descent_terms(lam: RegularTriple, H: TorusPoint, j: int) -> DescentTermSet:
    """Regroup the Weyl sum over the coset transversal of wall j.

    The pair (phase, rank1) of each term is exp(i<s.lambda, H_j>) and the
    rank-one character sin(m*u)/sin(u); prefactor is 1 over the two
    complementary wall sines (times 2i each).  assembled() equals
    chi~(lambda, H) wherever both complementary walls are nonzero --
    including exactly on wall j.
    """
    if j not in (0, 1, 2):
        raise ValueError(f"wall index must be 0, 1 or 2, got {j}")
    beta_j = WALL_POSITIVE_ROOT[j]
    others = [WALL_POSITIVE_ROOT[k] for k in (0, 1, 2) if k != j]
    other_walls = [wall_norm(H, beta) for beta in others]
    if min(other_walls) <= WALL_FLOOR:
        k_bad = others[other_walls.index(min(other_walls))]
        raise WallTooSmallError(
            f"complementary wall ({k_bad.j},{k_bad.k}) is singular "
            f"(wall_norm {min(other_walls):.3e}); descend to a different wall"
        )
    prefactor = 1.0 + 0j
    for beta in others:
        prefactor /= 2j * math.sin(0.5 * pairing_root_torus(H, beta))
    u = 0.5 * pairing_root_torus(H, beta_j)
    th = H.theta
    terms = []
    for s in wall_coset(j):
        e = s.apply(lam.ell)
        m = e[beta_j.j - 1] - e[beta_j.k - 1]
        angle = e[0] * th[0] + e[1] * th[1] + e[2] * th[2] - m * u
        terms.append(
            DescentTerm(
                element=s,
                det=s.sign,
                m=m,
                phase=complex(math.cos(angle), math.sin(angle)),
                rank1=chi_rank1(m, u),
            )
        )
    return DescentTermSet(
        j=j,
        prefactor=prefactor,
        terms=tuple(terms),
        condition=1.0 / min(other_walls),
    )


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

def chi_stable(mu: DominantWeight, H: TorusPoint) -> CharValue:
    """Evaluate chi(mu, H) by the best-conditioned of the three formulas.

    All walls >= EPS_WALL: Weyl quotient.  Exactly one wall below: descent at
    that wall.  Two or more walls below: pattern sum (may refuse very large
    mu -- that resource guard is only raised when no formula is safe).
    """
    walls = H.wall_norms()  # indexed by wall 0, 1, 2
    order = sorted(range(3), key=lambda i: walls[i])
    if walls[order[0]] >= EPS_WALL:
        lam = mu.shifted()
        cv = chi_weyl(lam, H)
        return cv
    if walls[order[1]] >= EPS_WALL:
        j = order[0]
        ts = descent_terms(mu.shifted(), H, j)
        return CharValue(
            value=ts.assembled(), method=f"descent{j}", condition=ts.condition
        )
    return chi_schur(mu, H)


# ---------------------------------------------------------------------------
# vectorized evaluation on alcove-coordinate grids
# ---------------------------------------------------------------------------

GRID_METHOD_NAMES = ("weyl", "descent0", "descent1", "descent2", "schur", "weyl_fallback")


def _theta_cols(t1: np.ndarray, t2: np.ndarray):
    th1 = (2.0 * t1 + t2) / 3.0
    th2 = (t2 - t1) / 3.0
    th3 = -(t1 + 2.0 * t2) / 3.0
    m = (th1 + th2 + th3) / 3.0
    return th1 - m, th2 - m, th3 - m


def _weyl_batch(lam: RegularTriple, th1, th2, th3, p0, p1, p2) -> np.ndarray:
    num = np.zeros(th1.shape, dtype=np.complex128)
    for s in WEYL_GROUP:
        e = s.apply(lam.ell)
        angle = e[0] * th1 + e[1] * th2 + e[2] * th3
        num += s.sign * np.exp(1j * angle)
    den = (2j * np.sin(0.5 * p1)) * (2j * np.sin(0.5 * p2)) * (2j * np.sin(0.5 * p0))
    return num / den


def _descent_batch(lam: RegularTriple, th1, th2, th3, pairings, j: int) -> np.ndarray:
    beta_j = WALL_POSITIVE_ROOT[j]
    others = [k for k in (0, 1, 2) if k != j]
    prefactor = 1.0 / (
        (2j * np.sin(0.5 * pairings[others[0]]))
        * (2j * np.sin(0.5 * pairings[others[1]]))
    )
    u = 0.5 * pairings[j]
    acc = np.zeros(th1.shape, dtype=np.complex128)
    for s in wall_coset(j):
        e = s.apply(lam.ell)
        m = e[beta_j.j - 1] - e[beta_j.k - 1]
        angle = e[0] * th1 + e[1] * th2 + e[2] * th3 - m * u
        acc += (s.sign * _rank1_array(m, u)) * np.exp(1j * angle)
    return prefactor * acc


def chi_on_grid(mu: DominantWeight, t1: np.ndarray, t2: np.ndarray):
    """chi(mu, .) over flat arrays of alcove coordinates.

    Returns (values, methods): complex128 values and a uint8 method code per
    point, indexing GRID_METHOD_NAMES.  Mirrors chi_stable's dispatch; the
    single extension is that points needing the pattern sum but exceeding its
    budget fall back to the Weyl quotient ("weyl_fallback") -- those points
    sit within ~1e-3 of a corner where |chi| ~ dim is enormous compared to
    the quotient's absolute error, so the fallback is safe where the scalar
    API would refuse.
    """
    t1 = np.asarray(t1, dtype=np.float64)
    t2 = np.asarray(t2, dtype=np.float64)
    th1, th2, th3 = _theta_cols(t1, t2)
    # pairings with the positive wall representatives, indexed by wall number
    pairings = (t1 + t2, t1, t2)
    walls = np.stack([np.abs(np.sin(0.5 * p)) for p in pairings])
    wsort = np.sort(walls, axis=0)
    values = np.empty(t1.shape, dtype=np.complex128)
    methods = np.empty(t1.shape, dtype=np.uint8)
    lam = mu.shifted()

    m_weyl = wsort[0] >= EPS_WALL
    if m_weyl.any():
        idx = np.nonzero(m_weyl)[0]
        values[idx] = _weyl_batch(
            lam, th1[idx], th2[idx], th3[idx],
            pairings[0][idx], pairings[1][idx], pairings[2][idx],
        )
        methods[idx] = 0

    m_desc = (~m_weyl) & (wsort[1] >= EPS_WALL)
    if m_desc.any():
        jmin = np.argmin(walls, axis=0)
        for j in (0, 1, 2):
            sel = np.nonzero(m_desc & (jmin == j))[0]
            if sel.size == 0:
                continue
            sub_pairings = tuple(p[sel] for p in pairings)
            values[sel] = _descent_batch(
                lam, th1[sel], th2[sel], th3[sel], sub_pairings, j
            )
            methods[sel] = 1 + j

    m_hard = (~m_weyl) & (~m_desc)
    if m_hard.any():
        idx = np.nonzero(m_hard)[0]
        if dim(mu) <= SCHUR_DIM_LIMIT:
            values[idx] = _schur_batch(mu, th1[idx], th2[idx], th3[idx])
            methods[idx] = 4
        else:
            prod = walls[0][idx] * walls[1][idx] * walls[2][idx]
            if np.any(prod == 0.0):
                raise ResourceLimitError(
                    "grid hits an exact multi-wall point and dim(mu) "
                    f"= {dim(mu)} exceeds the pattern-sum budget"
                )
            values[idx] = _weyl_batch(
                lam, th1[idx], th2[idx], th3[idx],
                pairings[0][idx], pairings[1][idx], pairings[2][idx],
            )
            methods[idx] = 5
    return values, methods
