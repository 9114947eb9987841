"""Root data, Weyl group and alcove geometry for su(3).

Conventions used by the whole package (everything downstream assumes them):

* A point of the maximal torus is an angle triple ``theta = (theta1, theta2,
  theta3)`` with ``theta1 + theta2 + theta3 = 0`` (trace-zero gauge), i.e.
  ``H = i*diag(theta)``.
* Roots are ordered index pairs ``(j, k)`` acting by
  ``<alpha_jk, H> = theta_j - theta_k``.  The extended simple roots are
  ``alpha1 = (1,2)``, ``alpha2 = (2,3)``, ``alpha0 = (3,1)``; they satisfy
  ``alpha0 + alpha1 + alpha2 = 0``.  The positive roots are
  ``{alpha1, alpha2, -alpha0}``; all roots have squared length 2.
* A dominant weight is ``mu = (a, b)`` (fundamental-weight coefficients,
  a, b >= 0).  The strictly dominant shift ``lambda = mu + rho`` is stored as
  an integer triple ``ell = (a+b+2, b+1, 0)`` in the gauge ``ell3 = 0``;
  pairings are differences, ``<lambda, alpha_jk> = ell_j - ell_k``.  Against
  the positive roots these are ``a+1``, ``b+1`` and ``a+b+2``.
* The distance of ``<alpha, H>`` to ``2*pi*Z`` is measured by
  ``wall_norm(H, alpha) = |sin((theta_j - theta_k)/2)|``.
* Alcove coordinates are ``t1 = theta1 - theta2``, ``t2 = theta2 - theta3``;
  the fundamental alcove is ``A = {t1 >= 0, t2 >= 0, t1 + t2 <= 2*pi}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

__all__ = [
    "TorusPoint",
    "Root",
    "DominantWeight",
    "RegularTriple",
    "WeylElement",
    "MuStats",
    "FoldResult",
    "ALPHA1",
    "ALPHA2",
    "ALPHA0",
    "EXTENDED_ROOTS",
    "POSITIVE_ROOTS",
    "WEYL_GROUP",
    "IDENTITY",
    "RHO",
    "pairing_root_torus",
    "wall_norm",
    "pairing_weight_root",
    "weyl_act_torus",
    "weyl_act_weight",
    "reflection",
    "wall_coset",
    "dim",
    "mu_stats",
    "fold_to_alcove",
    "in_alcove",
    "theta_from_alcove",
]

TWO_PI = 2.0 * math.pi

# Trace-zero gauge tolerance for torus points (absolute, scaled by magnitude
# for large inputs so fold targets can be validated too).
SUM_TOL = 1e-12


@dataclass(frozen=True)
class TorusPoint:
    """Torus element in the trace-zero angle gauge."""

    theta: Tuple[float, float, float]

    def __post_init__(self):
        s = self.theta[0] + self.theta[1] + self.theta[2]
        scale = max(1.0, max(abs(x) for x in self.theta))
        if abs(s) > SUM_TOL * scale:
            raise ValueError(
                f"torus angles must sum to zero (got sum {s!r}); "
                "recenter or use fold_to_alcove for raw triples"
            )

    @classmethod
    def from_theta(cls, t1: float, t2: float, t3: float) -> "TorusPoint":
        """Validate and recenter an angle triple (removes the eps-level drift)."""
        s = (t1 + t2 + t3) / 3.0
        scale = max(1.0, abs(t1), abs(t2), abs(t3))
        if abs(t1 + t2 + t3) > SUM_TOL * scale:
            raise ValueError(f"angles sum to {t1 + t2 + t3!r}, not a torus point")
        if s != 0.0:
            t1, t2, t3 = t1 - s, t2 - s, t3 - s
        return cls((t1, t2, t3))

    @classmethod
    def from_alcove_coords(cls, t1: float, t2: float) -> "TorusPoint":
        """Build from alcove coordinates (t1, t2) = (theta1-theta2, theta2-theta3)."""
        th1, th2, th3 = theta_from_alcove(t1, t2)
        return cls((th1, th2, th3))

    @property
    def alcove_coords(self) -> Tuple[float, float]:
        return (self.theta[0] - self.theta[1], self.theta[1] - self.theta[2])

    def wall_norms(self) -> Tuple[float, float, float]:
        """wall_norm against (alpha0, alpha1, alpha2), in that order."""
        return (
            wall_norm(self, ALPHA0),
            wall_norm(self, ALPHA1),
            wall_norm(self, ALPHA2),
        )

    def min_wall(self) -> float:
        return min(self.wall_norms())


ZERO_POINT = TorusPoint((0.0, 0.0, 0.0))


def theta_from_alcove(t1: float, t2: float) -> Tuple[float, float, float]:
    """Angle triple for alcove coordinates, recentered to exact-ish trace zero.

    The round trip theta1-theta2 ~ t1, theta2-theta3 ~ t2 holds only to a few
    ulp (the /3 splits and the recentering each round); callers that need
    exact wall hits must keep (t1, t2) and evaluate pairings from them
    directly, as chi_on_grid does.
    """
    th1 = (2.0 * t1 + t2) / 3.0
    th2 = (t2 - t1) / 3.0
    th3 = -(t1 + 2.0 * t2) / 3.0
    m = (th1 + th2 + th3) / 3.0
    return (th1 - m, th2 - m, th3 - m)


@dataclass(frozen=True)
class Root:
    """Root alpha_jk as an ordered index pair; evaluates to theta_j - theta_k."""

    j: int
    k: int

    def __post_init__(self):
        if self.j == self.k or not (1 <= self.j <= 3 and 1 <= self.k <= 3):
            raise ValueError(f"bad root indices ({self.j}, {self.k})")

    def negated(self) -> "Root":
        return Root(self.k, self.j)


ALPHA1 = Root(1, 2)
ALPHA2 = Root(2, 3)
ALPHA0 = Root(3, 1)

# Extended simple roots indexed by wall number 0, 1, 2.
EXTENDED_ROOTS: Tuple[Root, Root, Root] = (ALPHA0, ALPHA1, ALPHA2)

# Positive system: {alpha1, alpha2, -alpha0}.  -alpha0 = (1,3) is the highest
# root; its wall_norm agrees with alpha0's (the norm is sign-blind).
POSITIVE_ROOTS: Tuple[Root, Root, Root] = (ALPHA1, ALPHA2, ALPHA0.negated())


def pairing_root_torus(H: TorusPoint, alpha: Root) -> float:
    """<alpha, H> = theta_j - theta_k."""
    return H.theta[alpha.j - 1] - H.theta[alpha.k - 1]


def wall_norm(H: TorusPoint, alpha: Root) -> float:
    """|sin(<alpha,H>/2)|: distance of the pairing to 2*pi*Z, in sine units."""
    return abs(math.sin(0.5 * pairing_root_torus(H, alpha)))


@dataclass(frozen=True)
class DominantWeight:
    """Dominant weight a*omega1 + b*omega2, a, b nonnegative integers."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("dominant weight coordinates must be int")
        if self.a < 0 or self.b < 0:
            raise ValueError(f"dominant weight needs a,b >= 0, got ({self.a},{self.b})")

    def shifted(self) -> "RegularTriple":
        """lambda = mu + rho as a regular triple."""
        return RegularTriple.from_dominant(self)


@dataclass(frozen=True)
class RegularTriple:
    """Strictly dominant-shift weight as an integer triple, gauge ell3 = 0.

    Regularity (all entries distinct) is the only structural requirement;
    Weyl images of a dominant ``mu+rho`` are therefore representable too.
    """

    ell: Tuple[int, int, int]

    def __post_init__(self):
        e = self.ell
        if any(not isinstance(x, int) for x in e):
            raise TypeError("regular triple entries must be int")
        if e[2] != 0:
            # canonical gauge: subtract ell3 (pairings only see differences)
            object.__setattr__(self, "ell", (e[0] - e[2], e[1] - e[2], 0))
            e = self.ell
        if e[0] == e[1] or e[1] == e[2] or e[0] == e[2]:
            raise ValueError(f"triple {e} is singular (repeated entry)")

    @classmethod
    def from_dominant(cls, mu: DominantWeight) -> "RegularTriple":
        return cls((mu.a + mu.b + 2, mu.b + 1, 0))


RHO = RegularTriple((2, 1, 0))  # mu = (0,0) shifted


def pairing_weight_root(lam: RegularTriple, alpha: Root) -> int:
    """<lambda, alpha_jk> = ell_j - ell_k (an integer in this normalization)."""
    return lam.ell[alpha.j - 1] - lam.ell[alpha.k - 1]


# ---------------------------------------------------------------------------
# Weyl group: S3 permuting the three angle/weight slots.
# ---------------------------------------------------------------------------

_PARITY = {
    (1, 2, 3): 1,
    (2, 1, 3): -1,
    (1, 3, 2): -1,
    (3, 2, 1): -1,
    (2, 3, 1): 1,
    (3, 1, 2): 1,
}


@dataclass(frozen=True)
class WeylElement:
    """Permutation s of {1,2,3}; perm[i-1] = s(i).  Acts by (s.x)_{s(i)} = x_i."""

    perm: Tuple[int, int, int]

    def __post_init__(self):
        if self.perm not in _PARITY:
            raise ValueError(f"not a permutation of (1,2,3): {self.perm}")

    @property
    def sign(self) -> int:
        return _PARITY[self.perm]

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self*other)(i) = self(other(i)) -- other acts first
        return WeylElement(tuple(self.perm[other.perm[i] - 1] for i in range(3)))

    def inverse(self) -> "WeylElement":
        inv = [0, 0, 0]
        for i in range(3):
            inv[self.perm[i] - 1] = i + 1
        return WeylElement(tuple(inv))

    def apply(self, triple):
        """Permute the slots of a length-3 sequence: out[s(i)] = in[i]."""
        out = [None, None, None]
        for i in range(3):
            out[self.perm[i] - 1] = triple[i]
        return tuple(out)

    def act_root(self, alpha: Root) -> Root:
        return Root(self.perm[alpha.j - 1], self.perm[alpha.k - 1])


IDENTITY = WeylElement((1, 2, 3))

# Deterministic listing: identity first, then lexicographic by perm.
WEYL_GROUP: Tuple[WeylElement, ...] = (
    IDENTITY,
    WeylElement((1, 3, 2)),
    WeylElement((2, 1, 3)),
    WeylElement((2, 3, 1)),
    WeylElement((3, 1, 2)),
    WeylElement((3, 2, 1)),
)


def reflection(alpha: Root) -> WeylElement:
    """Reflection in the wall of alpha_jk: the transposition (j k)."""
    perm = [1, 2, 3]
    perm[alpha.j - 1], perm[alpha.k - 1] = perm[alpha.k - 1], perm[alpha.j - 1]
    return WeylElement(tuple(perm))


def weyl_act_torus(s: WeylElement, H: TorusPoint) -> TorusPoint:
    return TorusPoint(s.apply(H.theta))


def weyl_act_weight(s: WeylElement, lam: RegularTriple) -> RegularTriple:
    # constructor re-canonicalizes the gauge (subtracts the new ell3)
    return RegularTriple(s.apply(lam.ell))


def wall_coset(j: int) -> Tuple[WeylElement, WeylElement, WeylElement]:
    """Right transversal W_j of {e, s_{alpha_j}} in W: {e, s_{j+1}, s_{j+1}s_j}.

    Indices are mod 3 over the extended simple roots (alpha_3 == alpha_0).
    Together with W^j = {e, s_{alpha_j}} this factorizes W = W^j * W_j, which
    is what the descent formula sums over.
    """
    if j not in (0, 1, 2):
        raise ValueError(f"wall index must be 0, 1 or 2, got {j}")
    s_j = reflection(EXTENDED_ROOTS[j])
    s_next = reflection(EXTENDED_ROOTS[(j + 1) % 3])
    return (IDENTITY, s_next, s_next * s_j)


# ---------------------------------------------------------------------------
# Dimension and size statistics
# ---------------------------------------------------------------------------

def dim(mu: DominantWeight) -> int:
    """Weyl dimension (a+1)(b+1)(a+b+2)/2; always an integer."""
    return (mu.a + 1) * (mu.b + 1) * (mu.a + mu.b + 2) // 2


@dataclass(frozen=True)
class MuStats:
    """Sorted positive-root pairings of mu+rho: controls every bound downstream."""

    mu_bar: int          # largest pairing, a+b+2
    mu_min: int          # smallest pairing, min(a+1, b+1)
    sorted_pairings: Tuple[int, int, int]  # descending


def mu_stats(mu: DominantWeight) -> MuStats:
    p = sorted((mu.a + 1, mu.b + 1, mu.a + mu.b + 2), reverse=True)
    return MuStats(mu_bar=p[0], mu_min=p[2], sorted_pairings=tuple(p))


# ---------------------------------------------------------------------------
# Alcove membership and folding
# ---------------------------------------------------------------------------

def in_alcove(H: TorusPoint, tol: float = 0.0) -> bool:
    t1, t2 = H.alcove_coords
    return t1 >= -tol and t2 >= -tol and (t1 + t2) <= TWO_PI + tol


@dataclass(frozen=True)
class FoldResult:
    """Fold log: point = perm applied to input, then + 2*pi*shift."""

    point: TorusPoint
    perm: WeylElement
    shift: Tuple[int, int, int]  # integer coroot vector, sums to zero
    iterations: int


def fold_to_alcove(theta: Iterable[float]) -> FoldResult:
    """Map a raw trace-zero angle triple into the fundamental alcove.

    Sort the angles (a Weyl move), then translate by 2*pi integer coroot
    vectors of the form (-1, 0, 1) until the spread theta1 - theta3 is at
    most 2*pi, re-sorting after each translation.  Both move types fix the
    character exactly: sorting is conjugation by a permutation matrix and
    exp(2*pi*i*diag(v)) = Id for integer trace-zero v.
    """
    th = [float(x) for x in theta]
    s = sum(th)
    scale = max(1.0, max(abs(x) for x in th))
    if abs(s) > 1e-9 * scale:
        raise ValueError(f"raw angles must sum to ~0 (got {s!r})")
    th = [x - s / 3.0 for x in th]

    max_iter = int(10 * (1 + max(abs(x) for x in th) / TWO_PI))
    # tracks cumulative transform: current = perm(input) + 2*pi*shift
    perm = IDENTITY
    shift = [0, 0, 0]
    iterations = 0
    for _ in range(max_iter + 1):
        iterations += 1
        # sort descending; record the slot permutation (stable for ties)
        order = sorted(range(3), key=lambda i: -th[i])
        if order != [0, 1, 2]:
            # element sending slot order[r] -> slot r+1
            p = [0, 0, 0]
            for r, i in enumerate(order):
                p[i] = r + 1
            step = WeylElement(tuple(p))
            th = list(step.apply(th))
            shift = list(step.apply(shift))
            perm = step * perm
        if th[0] - th[2] <= TWO_PI:
            # the eps-scale sum left over from a huge input would trip the
            # TorusPoint gauge check; recentering shifts pairings by ~1e-16
            m = (th[0] + th[1] + th[2]) / 3.0
            return FoldResult(
                point=TorusPoint((th[0] - m, th[1] - m, th[2] - m)),
                perm=perm,
                shift=tuple(shift),
                iterations=iterations,
            )
        th[0] -= TWO_PI
        th[2] += TWO_PI
        shift[0] -= 1
        shift[2] += 1
    raise RuntimeError(
        f"alcove fold did not terminate after {max_iter} iterations"
    )
