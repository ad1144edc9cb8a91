"""Closed-form dimension predictions and cyclicity formulas for regular
systems (foci, limit cycles, polycycles), used as ground truth for the
numerical estimators.

All formula operations work in exact rational arithmetic whenever the inputs
are exact (ints, Fractions, or floats that are exact binary rationals such
as 0.5), so lattice identities hold with no rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Union

from .errors import DomainError, NotAccumulatingError
from .models import DegFocusParams, HopfTakensParams

__all__ = [
    "Regime",
    "Certainty",
    "DimPrediction",
    "PolycycleData",
    "predict_hopf_takens_dim",
    "predict_limit_cycle_dim",
    "predict_degfocus_dim",
    "predict_3d_spiral_dim",
    "polycycle_spiral_dim",
    "saddle_loop_dim",
    "two_saddle_cyclicity_bound",
    "two_saddle_dim1_bound",
]

Number = Union[int, float, Fraction]


class Regime(Enum):
    EXPONENTIAL = "exponential"  # rectifiable spiral, dimension 1
    POWER = "power"


class Certainty(Enum):
    THEOREM = "theorem"
    CONJECTURE = "conjecture"


@dataclass(frozen=True)
class DimPrediction:
    value: Fraction
    regime: Regime
    alpha: Optional[Fraction]  # power-comparability exponent, in (0, 1]
    source: str
    certainty: Certainty = Certainty.THEOREM

    def __post_init__(self):
        if self.regime is Regime.POWER:
            if self.alpha is None or not (0 < self.alpha <= 1):
                raise DomainError("power regime needs alpha in (0, 1]")
        elif self.alpha is not None:
            raise DomainError("exponential regime carries no power exponent")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class PolycycleData:
    """Sequence dimensions at the two transversals and the implied spiral dim."""

    d1: float
    d2: float
    spiral_dim: float

    def __post_init__(self):
        if not (0.0 < self.d1 < 1.0 and 0.0 < self.d2 < 1.0):
            raise DomainError("transversal sequence dimensions must lie in (0, 1)")
        if abs(self.spiral_dim - (1.0 + max(self.d1, self.d2))) > 1e-12:
            raise DomainError("spiral_dim must equal 1 + max(d1, d2)")

    @classmethod
    def from_pair(cls, d1: float, d2: float) -> "PolycycleData":
        return cls(d1=d1, d2=d2, spiral_dim=1.0 + max(d1, d2))


def _as_fraction(v: Number) -> Fraction:
    if isinstance(v, Rational):
        return Fraction(v)
    return Fraction(v)  # exact binary value of the float


def predict_hopf_takens_dim(p: HopfTakensParams) -> DimPrediction:
    """Spiral dimension at the origin of the Hopf-Takens normal form.

    Nonzero a_0 gives a hyperbolic focus (exponential spiral, dimension 1);
    otherwise the first nonzero coefficient index k (with the leading
    coefficient fixed to 1) gives dimension 4k/(2k+1).
    """
    if p.a[0] != 0.0:
        return DimPrediction(Fraction(1), Regime.EXPONENTIAL, None, "hopf-takens focus")
    k = p.l
    for i in range(1, p.l):
        if p.a[i] != 0.0:
            k = i
            break
    return DimPrediction(
        Fraction(4 * k, 2 * k + 1), Regime.POWER, Fraction(1, 2 * k), "hopf-takens weak focus"
    )


def predict_limit_cycle_dim(m: int) -> DimPrediction:
    """Dimension 2 - 1/m of spirals near a multiplicity-m limit cycle."""
    if m < 1:
        raise DomainError("multiplicity must be a positive integer")
    if m == 1:
        return DimPrediction(Fraction(1), Regime.EXPONENTIAL, None, "limit cycle m=1")
    return DimPrediction(
        Fraction(2) - Fraction(1, m), Regime.POWER, Fraction(1, m - 1), f"limit cycle m={m}"
    )


def predict_degfocus_dim(p: DegFocusParams) -> DimPrediction:
    """Spiral dimension near the degenerate focus.

    k = 0 is exponential (dimension 1). For k > 0 the m = n case is
    theorem-grade 2 - 2/(1+2kn); m != n uses the conjectural formula
    2 - (1 + n/m)/(1 + 2kn) and is tagged accordingly.
    """
    m, n, k = p.m, p.n, p.k
    if k == 0:
        return DimPrediction(Fraction(1), Regime.EXPONENTIAL, None, "degenerate focus k=0")
    if m == n:
        return DimPrediction(
            Fraction(2) - Fraction(2, 1 + 2 * k * n),
            Regime.POWER,
            Fraction(1, 2 * n * k),
            "degenerate focus m=n",
        )
    return DimPrediction(
        Fraction(2) - Fraction(m + n, m * (1 + 2 * k * n)),
        Regime.POWER,
        Fraction(1, 2 * m * n * k),
        "degenerate focus m!=n",
        certainty=Certainty.CONJECTURE,
    )


def predict_3d_spiral_dim(a1: Number, b2: Number) -> DimPrediction:
    """Dimension of the planar projection of the closed-form 3D spiral."""
    if b2 == 0:
        raise DomainError("b2 must be nonzero")
    if a1 == 0:
        raise DomainError("a1 must be nonzero (constant radius otherwise)")
    ratio = _as_fraction(a1) / _as_fraction(b2)
    if ratio < 0:
        raise NotAccumulatingError("a1/b2 < 0: the origin is not an accumulation point")
    if ratio > 1:
        return DimPrediction(Fraction(1), Regime.EXPONENTIAL, None, "3d spiral (Holder surface)")
    return DimPrediction(2 / (1 + ratio), Regime.POWER, ratio, "3d spiral (Lipschitz surface)")


def polycycle_spiral_dim(seq_dims: Sequence[Number]):
    """Spiral dimension near a hyperbolic polycycle: 1 + max of the
    transversal sequence dimensions."""
    if len(seq_dims) == 0:
        raise DomainError("need at least one transversal dimension")
    for d in seq_dims:
        if not (0 <= d < 1):
            raise DomainError(f"sequence dimension {d} outside [0, 1)")
    best = max(seq_dims)
    if isinstance(best, Rational):
        return Fraction(1) + Fraction(best)
    return 1.0 + float(best)


def saddle_loop_dim(codim: int) -> Fraction:
    """Spiral dimension from the saddle-loop codimension (2-to-1 map)."""
    if codim < 1:
        raise DomainError("codimension must be a positive integer")
    if codim % 2 == 0:
        return Fraction(2) - Fraction(2, codim)
    return Fraction(2) - Fraction(2, codim + 1)


def two_saddle_dim1_bound() -> int:
    """Cyclicity bound for the dimension-1 branch of the 2-saddle polycycle."""
    return 3


def two_saddle_cyclicity_bound(d1: Number, d2: Number) -> int:
    """Cyclicity bound of a hyperbolic 2-saddle polycycle from the two
    transversal sequence dimensions (both strictly inside (0, 1))."""
    if not (0 < d1 < 1 and 0 < d2 < 1):
        raise DomainError("d1, d2 must lie strictly in (0, 1); use two_saddle_dim1_bound for d=1")
    f1, f2 = _as_fraction(d1), _as_fraction(d2)
    r = min(
        (f2 * (1 - f1)) / (f1 * (1 - f2)),
        (f1 * (1 - f2)) / (f2 * (1 - f1)),
    )
    dmax = max(f1, f2)
    expr = 3 + (1 + r) * dmax / (1 - dmax)
    return _floor_exactish(expr)


def _floor_exactish(v: Fraction) -> int:
    """Floor with a tiny snap for float-contaminated inputs near integers."""
    f = math.floor(v)
    if v - f > Fraction(1) - Fraction(1, 10**9) :
        return f + 1
    return f
