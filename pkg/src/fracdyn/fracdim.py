"""Minkowski (box) dimension and content estimation for planar polylines and
monotone real sequences, plus lattice snapping of estimated dimensions.

Scaling fits share one window policy: the two coarsest scales are dropped
(plus, for counting estimators, scales with fewer than 10 boxes), and the
contiguous sub-window of at least 6 scales maximizing the fit r^2 is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.ndimage import distance_transform_edt

from .errors import (
    AmbiguousSnapError,
    DegenerateSequenceError,
    InsufficientScalesError,
    RasterBudgetError,
    UnderResolvedError,
    ValidationError,
)
from .flow import Trajectory
from .models import DegFocusParams, GenTrigTable

__all__ = [
    "MonotoneSequence",
    "ScaleGrid",
    "DimensionEstimate",
    "LatticeFamily",
    "Lattice",
    "HOPF_LATTICE",
    "CANARD_LATTICE",
    "Classification",
    "seq_box_dim",
    "seq_gap_dim",
    "curve_box_dim",
    "curve_sausage_dim",
    "snap_to_lattice",
    "degfocus_sector_dim",
]


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneSequence:
    """Finite strictly monotone sequence with a declared accumulation value."""

    values: np.ndarray
    limit: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or len(v) < 1:
            raise ValidationError("values must be a nonempty 1-d array")
        if not np.all(np.isfinite(v)):
            raise ValidationError("values must be finite")
        if len(v) >= 2:
            dv = np.diff(v)
            if not (np.all(dv > 0) or np.all(dv < 0)):
                raise ValidationError("values must be strictly monotone")
        if math.isfinite(self.limit) and len(v) >= 2:
            d = np.abs(v - self.limit)
            if not d[-1] < d[0]:
                raise ValidationError("values must converge toward the declared limit")
            if not np.all(np.diff(d) < 0):
                raise ValidationError("distances to the limit must strictly decrease")

    def distances(self) -> np.ndarray:
        """|v_i - limit|, strictly decreasing."""
        if not math.isfinite(self.limit):
            raise ValidationError("sequence has no finite accumulation value")
        return np.abs(self.values - self.limit)

    def gaps(self) -> np.ndarray:
        d = self.distances()
        return d[:-1] - d[1:]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ScaleGrid:
    """Geometric grid delta_j = delta_max * ratio^j down to delta_min."""

    delta_max: float
    delta_min: float
    ratio: float

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise ValidationError("ratio must lie in (0, 1)")
        if not (0.0 < self.delta_min < self.delta_max):
            raise ValidationError("need 0 < delta_min < delta_max")
        if len(self.deltas()) < 12:
            raise ValidationError("scale grid must contain at least 12 scales")

    def deltas(self) -> np.ndarray:
        n = int(math.floor(math.log(self.delta_min / self.delta_max) / math.log(self.ratio) * (1 + 1e-12))) + 1
        return self.delta_max * self.ratio ** np.arange(max(n, 1))

    @classmethod
    def geometric(cls, delta_max: float, delta_min: float, n_scales: int = 28) -> "ScaleGrid":
        if n_scales < 12:
            raise ValidationError("need at least 12 scales")
        ratio = (delta_min / delta_max) ** (1.0 / (n_scales - 1))
        return cls(delta_max=delta_max, delta_min=delta_min * (1 - 1e-12), ratio=ratio)


class Method(Enum):
    BOX_COUNT = "BoxCount"
    SAUSAGE = "Sausage"
    GAP_STRUCTURE = "GapStructure"


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    stderr: float
    fit_window: tuple[float, float]
    r2: float
    method: Method
    content_bounds: Optional[tuple[float, float, float]] = None  # (lower, upper, at_dim)

    def __post_init__(self):
        if not (0.0 <= self.value <= 2.0):
            raise ValidationError("dimension must lie in [0, 2]")
        if self.stderr < 0.0:
            raise ValidationError("stderr must be nonnegative")
        if not (0.0 <= self.r2 <= 1.0 + 1e-12):
            raise ValidationError("r2 must lie in [0, 1]")
        if self.content_bounds is not None and (
            self.content_bounds[0] <= 0.0 or self.content_bounds[1] <= 0.0
        ):
            raise ValidationError("content bounds must be positive")

    def csv_row(self) -> str:
        cb = self.content_bounds
        parts = [
            self.method.value,
            repr(self.value),
            repr(self.stderr),
            repr(self.r2),
            repr(self.fit_window[0]),
            repr(self.fit_window[1]),
            repr(cb[0]) if cb else "",
            repr(cb[1]) if cb else "",
        ]
        return ",".join(parts)

    @staticmethod
    def csv_header() -> str:
        return "method,value,stderr,r2,delta_lo,delta_hi,content_lower,content_upper"


class LatticeFamily(Enum):
    HOPF = "HopfLattice"
    CANARD = "CanardLattice"
    UNRESTRICTED = "Unrestricted"


@dataclass(frozen=True)
class Lattice:
    family: LatticeFamily
    max_index: int = 10  # snapping refused above this index (points pile up at 1)

    def points(self) -> list[tuple[Fraction, Optional[int]]]:
        if self.family is LatticeFamily.HOPF:
            pts = [(Fraction(2 * j + 1, 2 * j + 3), j) for j in range(self.max_index + 1)]
        elif self.family is LatticeFamily.CANARD:
            pts = [(Fraction(j, j + 1), j) for j in range(self.max_index + 1)]
        else:
            return []
        return pts + [(Fraction(1), None)]

    def unrestricted_nearest_index(self, value: float) -> Optional[int]:
        """Nearest lattice index with no cap (None if the family is unrestricted)."""
        if self.family is LatticeFamily.HOPF:
            if value >= 1.0:
                return None
            j = (3.0 * value - 1.0) / (2.0 * (1.0 - value))
        elif self.family is LatticeFamily.CANARD:
            if value >= 1.0:
                return None
            j = value / (1.0 - value)
        else:
            return None
        return max(0, int(round(j)))


HOPF_LATTICE = Lattice(LatticeFamily.HOPF)
CANARD_LATTICE = Lattice(LatticeFamily.CANARD)


@dataclass(frozen=True)
class Classification:
    """Lattice-snapped dimension with the implied cyclicity bound.

    ``cyclicity_bound`` is None when the bound is absent (dimension 1 gives
    "finite but unbounded by dimension"; unrestricted lattices give none).
    """

    snapped: Fraction
    index_j: Optional[int]
    residual: float
    cyclicity_bound: Optional[int]
    note: str = ""

    @property
    def bound_text(self) -> str:
        return "unbounded" if self.cyclicity_bound is None else str(self.cyclicity_bound)


# --------------------------------------------------------------------------
# shared fitting machinery
# --------------------------------------------------------------------------

def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope with its standard error and r^2."""
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    syy = float(np.sum((y - ym) ** 2))
    slope = sxy / sxx
    resid = syy - slope * sxy
    if syy <= 1e-30:
        return 0.0, 0.0, 1.0
    r2 = max(0.0, 1.0 - resid / syy)
    stderr = math.sqrt(max(resid, 0.0) / (n - 2) / sxx) if n > 2 else 0.0
    return slope, stderr, min(r2, 1.0)


def _select_window(x: np.ndarray, y: np.ndarray, counts: Optional[np.ndarray],
                   min_scales: int = 6, drop_coarsest: int = 2,
                   min_count: int = 10,
                   valid: Optional[np.ndarray] = None) -> tuple[int, int, float, float, float]:
    """Window policy shared by all estimators; x, y ordered coarse -> fine.

    Returns (i0, i1, slope, stderr, r2) for the best window x[i0:i1+1].
    """
    keep = np.ones(len(x), dtype=bool)
    keep[:drop_coarsest] = False
    if counts is not None:
        keep &= counts >= min_count
    if valid is not None:
        keep &= valid
    idx = np.flatnonzero(keep)
    if len(idx) < min_scales:
        raise InsufficientScalesError(
            f"only {len(idx)} scales survive window selection (< {min_scales})"
        )
    # contiguous runs of surviving scales
    runs = []
    start = idx[0]
    prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            runs.append((start, prev))
            start = i
        prev = i
    runs.append((start, prev))

    best = None
    for lo, hi in runs:
        span = hi - lo + 1
        if span < min_scales:
            continue
        for i0 in range(lo, hi - min_scales + 2):
            for i1 in range(i0 + min_scales - 1, hi + 1):
                sl, se, r2 = _ols(x[i0 : i1 + 1], y[i0 : i1 + 1])
                key = (r2, i1 - i0, -i0)
                if best is None or key > best[0]:
                    best = (key, i0, i1, sl, se, r2)
    if best is None:
        raise InsufficientScalesError("no contiguous window of sufficient length")
    _, i0, i1, sl, se, r2 = best
    return i0, i1, sl, se, r2


def _clip_dim(value: float) -> float:
    return min(2.0, max(0.0, value))


# --------------------------------------------------------------------------
# sequence estimators
# --------------------------------------------------------------------------

def _seq_auto_grid(d: np.ndarray, gaps: np.ndarray) -> ScaleGrid:
    delta_max = d[0] / 4.0
    delta_min = max(float(np.min(gaps)) * 2.0, d[0] * 1e-15)
    if delta_min >= delta_max:
        delta_min = delta_max / 100.0
    return ScaleGrid.geometric(delta_max, delta_min, n_scales=32)


def _require_estimable(s: MonotoneSequence) -> tuple[np.ndarray, np.ndarray]:
    if len(s) < 16:
        raise ValidationError("sequence estimation needs at least 16 values")
    d = s.distances()
    if d[-1] <= 0.0:
        raise ValidationError("sequence reaches its limit exactly; nothing to estimate")
    return d, s.gaps()


def seq_box_dim(s: MonotoneSequence, g: Optional[ScaleGrid] = None) -> DimensionEstimate:
    """Interval-counting dimension of {values} united with the limit point."""
    d, gaps = _require_estimable(s)
    if g is None:
        g = _seq_auto_grid(d, gaps)
    if float(np.max(gaps)) < g.delta_min:
        raise DegenerateSequenceError("all gaps lie below delta_min")
    deltas = g.deltas()
    counts = np.empty(len(deltas), dtype=np.int64)
    for i, delta in enumerate(deltas):
        bins = np.unique(np.floor(d / delta).astype(np.int64))
        counts[i] = len(bins) + (0 if bins[0] == 0 else 1)  # the limit sits in bin 0
    x = np.log(1.0 / deltas)
    y = np.log(counts.astype(float))
    i0, i1, slope, se, r2 = _select_window(x, y, counts)
    return DimensionEstimate(
        value=_clip_dim(slope),
        stderr=se,
        fit_window=(float(deltas[i1]), float(deltas[i0])),
        r2=r2,
        method=Method.BOX_COUNT,
    )


def seq_gap_dim(s: MonotoneSequence, g: Optional[ScaleGrid] = None) -> DimensionEstimate:
    """Gap-structure dimension from the exact neighborhood measure |U_delta|.

    Each resolved gap contributes min(gap, 2 delta); the tail beyond the last
    value contributes its diameter; the two outer sides contribute 2 delta.
    The fit of log |U_delta| against log delta gives 1 - dimension.
    """
    d, gaps = _require_estimable(s)
    if g is None:
        g = _seq_auto_grid(d, gaps)
    if float(np.max(gaps)) < g.delta_min:
        raise DegenerateSequenceError("all gaps lie below delta_min")
    deltas = g.deltas()
    tail = float(d[-1])
    measures = np.array(
        [2.0 * delta + tail + float(np.minimum(gaps, 2.0 * delta).sum()) for delta in deltas]
    )
    x = np.log(deltas)
    y = np.log(measures)
    i0, i1, slope, se, r2 = _select_window(x, y, None)
    dim = _clip_dim(1.0 - slope)
    win = slice(i0, i1 + 1)
    contents = measures[win] / deltas[win] ** (1.0 - dim)
    return DimensionEstimate(
        value=dim,
        stderr=se,
        fit_window=(float(deltas[i1]), float(deltas[i0])),
        r2=r2,
        method=Method.GAP_STRUCTURE,
        content_bounds=(float(contents.min()), float(contents.max()), dim),
    )


# --------------------------------------------------------------------------
# curve estimators
# --------------------------------------------------------------------------

def _polyline_samples(xy: np.ndarray, step: float) -> np.ndarray:
    """Points along each segment at spacing <= step, vertices included."""
    p = xy[:-1]
    d = np.diff(xy, axis=0)
    seg_len = np.hypot(d[:, 0], d[:, 1])
    nsub = np.maximum(1, np.ceil(seg_len / step)).astype(np.int64)
    total = int(nsub.sum())
    seg_id = np.repeat(np.arange(len(seg_len)), nsub)
    start = np.zeros(len(seg_len), dtype=np.int64)
    np.cumsum(nsub[:-1], out=start[1:])
    fr = (np.arange(total) - start[seg_id]) / nsub[seg_id]
    pts = p[seg_id] + fr[:, None] * d[seg_id]
    return np.vstack([pts, xy[-1:]])


def _curve_preflight(tr: Trajectory, g: Optional[ScaleGrid]) -> tuple[ScaleGrid, float]:
    if len(tr.xy) < 2:
        raise ValidationError("trajectory needs at least 2 points")
    if tr.turns >= 1.0 and len(tr.xy) / tr.turns < 63.0:
        raise ValidationError("trajectory must carry >= 64 points per turn")
    max_spacing = float(tr.segment_lengths().max())
    if g is None:
        lo = np.min(tr.xy, axis=0)
        hi = np.max(tr.xy, axis=0)
        extent = float(max(hi - lo))
        delta_min = 3.0 * max_spacing * (1.0 + 1e-6)
        delta_max = extent / 6.0
        if delta_max <= delta_min * 1.5:
            delta_max = delta_min * 16.0
        g = ScaleGrid.geometric(delta_max, delta_min, n_scales=24)
    if max_spacing > g.delta_min / 3.0 * (1.0 + 1e-9):
        raise UnderResolvedError(
            f"sample spacing {max_spacing:.3e} exceeds delta_min/3 = {g.delta_min / 3.0:.3e}"
        )
    return g, max_spacing


def curve_box_dim(tr: Trajectory, g: Optional[ScaleGrid] = None) -> DimensionEstimate:
    """Grid box counting over the polyline (boxes touched by any segment)."""
    g, _ = _curve_preflight(tr, g)
    deltas = g.deltas()
    lo = np.min(tr.xy, axis=0)
    counts = np.empty(len(deltas), dtype=np.int64)
    for i, delta in enumerate(deltas):
        pts = _polyline_samples(tr.xy, 0.3 * delta)
        ix = np.floor((pts[:, 0] - lo[0]) / delta).astype(np.int64)
        iy = np.floor((pts[:, 1] - lo[1]) / delta).astype(np.int64)
        width = int(ix.max()) + 2
        counts[i] = len(np.unique(ix + width * iy))
    x = np.log(1.0 / deltas)
    y = np.log(counts.astype(float))
    i0, i1, slope, se, r2 = _select_window(x, y, counts)
    return DimensionEstimate(
        value=_clip_dim(slope),
        stderr=se,
        fit_window=(float(deltas[i1]), float(deltas[i0])),
        r2=r2,
        method=Method.BOX_COUNT,
    )


def curve_sausage_dim(tr: Trajectory, g: Optional[ScaleGrid] = None,
                      pixel_budget: int = 1 << 26) -> DimensionEstimate:
    """Dimension from Lebesgue measure of the delta-neighborhood.

    Rasterizes at resolution delta/8 per scale and measures the area within
    distance delta of the curve with an exact Euclidean distance transform.
    """
    g, _ = _curve_preflight(tr, g)
    deltas = g.deltas()
    lo = np.min(tr.xy, axis=0)
    hi = np.max(tr.xy, axis=0)
    measures = np.empty(len(deltas))
    for i, delta in enumerate(deltas):
        pixel = delta / 8.0
        pad = delta + 2.0 * pixel
        w = int(math.ceil((hi[0] - lo[0] + 2 * pad) / pixel)) + 1
        h = int(math.ceil((hi[1] - lo[1] + 2 * pad) / pixel)) + 1
        if w * h > pixel_budget:
            raise RasterBudgetError(
                f"raster {w}x{h} exceeds pixel budget {pixel_budget} at delta={delta:.3e}"
            )
        pts = _polyline_samples(tr.xy, 0.5 * pixel)
        ix = np.floor((pts[:, 0] - lo[0] + pad) / pixel).astype(np.int64)
        iy = np.floor((pts[:, 1] - lo[1] + pad) / pixel).astype(np.int64)
        mask = np.zeros((w, h), dtype=bool)
        mask[ix, iy] = True
        dist = distance_transform_edt(~mask, sampling=pixel)
        measures[i] = float((dist <= delta).sum()) * pixel * pixel
    x = np.log(deltas)
    y = np.log(measures)
    # drop saturated coarse scales: the neighborhood stops scaling once it
    # covers an appreciable share of the bounding box
    bbox_area = float((hi[0] - lo[0]) * (hi[1] - lo[1]))
    valid = measures <= 0.2 * bbox_area
    i0, i1, slope, se, r2 = _select_window(x, y, None, valid=valid)
    dim = _clip_dim(2.0 - slope)
    win = slice(i0, i1 + 1)
    contents = measures[win] / deltas[win] ** (2.0 - dim)
    return DimensionEstimate(
        value=dim,
        stderr=se,
        fit_window=(float(deltas[i1]), float(deltas[i0])),
        r2=r2,
        method=Method.SAUSAGE,
        content_bounds=(float(contents.min()), float(contents.max()), dim),
    )


# --------------------------------------------------------------------------
# lattice snapping
# --------------------------------------------------------------------------

def snap_to_lattice(d, lat: Lattice, gate: float = 0.04) -> Classification:
    """Snap an estimate to the nearest admissible lattice point.

    Raises AmbiguousSnapError when no point lies within the gate, when two
    points do, or when the estimate falls in the accumulation zone near 1
    (nearest unrestricted index above the snapping cap).
    """
    if not (0.0 < gate <= 0.06):
        raise ValidationError("gate must lie in (0, 0.06]")
    value = float(d.value) if isinstance(d, DimensionEstimate) else float(d)

    if lat.family is LatticeFamily.UNRESTRICTED:
        snapped = Fraction(value).limit_denominator(1_000_000)
        return Classification(
            snapped=snapped,
            index_j=None,
            residual=abs(value - float(snapped)),
            cyclicity_bound=None,
            note="unrestricted lattice: no snapping constraint or bound",
        )

    pts = lat.points()
    dists = [abs(value - float(p)) for p, _ in pts]
    order = np.argsort(dists)
    best = int(order[0])
    snapped, index_j = pts[best]
    residual = dists[best]
    if residual > gate:
        raise AmbiguousSnapError(
            f"nearest lattice point {snapped} is {residual:.4f} away (> gate {gate})"
        )
    if len(order) > 1 and dists[int(order[1])] <= gate:
        raise AmbiguousSnapError(
            f"two lattice points within gate {gate}: {snapped} and {pts[int(order[1])][0]}"
        )
    j_free = lat.unrestricted_nearest_index(value)
    if j_free is not None and j_free > lat.max_index:
        if lat.family is LatticeFamily.HOPF:
            excluded = Fraction(2 * j_free + 1, 2 * j_free + 3)
        else:
            excluded = Fraction(j_free, j_free + 1)
        if abs(value - float(excluded)) < residual:
            raise AmbiguousSnapError(
                f"estimate {value:.4f} lies in the lattice accumulation zone "
                f"(nearest index {j_free} > {lat.max_index})"
            )

    note = ""
    if index_j is None:  # snapped to 1
        bound = None
        note = "cyclicity finite for analytic systems; no bound from dimension 1"
    elif lat.family is LatticeFamily.HOPF:
        bound_frac = (snapped + 1) / (2 * (1 - snapped))
        assert bound_frac.denominator == 1
        bound = int(bound_frac)
    else:
        bound_frac = (2 - snapped) / (1 - snapped)
        assert bound_frac.denominator == 1
        bound = int(bound_frac)
    return Classification(
        snapped=snapped,
        index_j=index_j,
        residual=residual,
        cyclicity_bound=bound,
        note=note,
    )


# --------------------------------------------------------------------------
# sector-decomposition estimator for degenerate-focus spirals
# --------------------------------------------------------------------------

def degfocus_sector_dim(params: DegFocusParams, table: GenTrigTable,
                        seq: MonotoneSequence, grid: Optional[ScaleGrid] = None,
                        sectors: int = 64) -> DimensionEstimate:
    """Sausage dimension of a degenerate-focus spiral from its radial orbit.

    The spiral in generalized polar coordinates is foliated by the curves of
    constant angular phase. For each of ``sectors`` phases the spiral crossing
    radii are reconstructed from the radial return-map orbit, and the measure
    of the delta-neighborhood is accumulated as resolved-winding tubes plus
    the filled nucleus below the resolution crossover. The area Jacobian of
    the generalized coordinates is m*n*s^(m+n-1), which makes both terms
    closed-form in the crossing radii.

    Direct box counting cannot reach the asymptotic regime of these spirals
    (the radial decay per winding is far below any affordable resolution), so
    this estimator is the workhorse for the degenerate-focus table.
    """
    m, n, k = params.m, params.n, params.k
    if params.sign != -1:
        raise ValidationError("sector estimator needs the stable (sign -1) focus")
    if k < 1:
        raise ValidationError("sector estimator needs k >= 1")
    if table.m != m or table.n != n:
        raise ValidationError("table (m, n) does not match parameters")
    if len(seq) < 64:
        raise ValidationError("need a radial orbit with at least 64 windings")

    P = 2 * m * n * k
    r = seq.values
    log_r = np.log(r)
    if P * float(np.max(np.abs(log_r))) > 690.0:
        raise ValidationError("r^(-2mnk) overflows at this orbit depth")
    u = np.exp(-P * log_r)

    T = table.period
    sig = (np.arange(sectors) + 0.5) * (T / sectors)
    c_grid = table.cs ** (m - 1) * table.sn ** (n - 1)
    c_int = CubicSpline(table.phi, c_grid).antiderivative()(sig)
    cs_s = np.asarray(table.cs_at(sig))
    sn_s = np.asarray(table.sn_at(sig))

    # per-sector winding data
    per_sigma = []
    h_first = np.empty(sectors)
    h_last = np.empty(sectors)
    for i in range(sectors):
        u_s = u + P * c_int[i]
        s_arr = np.exp(-np.log(u_s) / P)
        speed = np.hypot(
            n * s_arr**n * abs(sn_s[i]) ** (2 * n - 1),
            m * s_arr**m * abs(cs_s[i]) ** (2 * m - 1),
        )
        dcoef = (m * n) * s_arr ** (m + n - 1) / speed
        gaps = s_arr[:-1] - s_arr[1:]
        h = gaps * dcoef[:-1]
        tube_prefix = np.concatenate([[0.0], np.cumsum(speed[:-1])])
        fill = (m * n / (m + n)) * s_arr ** (m + n)
        per_sigma.append((h, tube_prefix, fill))
        h_first[i] = h[0]
        h_last[i] = h[-1]

    if grid is None:
        delta_min = 0.75 * float(h_last.max())
        delta_max = 0.25 * float(h_first.min())
        if delta_max <= delta_min * 10.0:
            raise InsufficientScalesError(
                "radial orbit too shallow for a sector scale range; request more turns"
            )
        grid = ScaleGrid.geometric(delta_max, delta_min, n_scales=28)
    deltas = grid.deltas()

    measures = np.zeros(len(deltas))
    dsig = T / sectors
    for h, tube_prefix, fill in per_sigma:
        for q, delta in enumerate(deltas):
            below = np.flatnonzero(h <= 2.0 * delta)
            J = int(below[0]) if len(below) else len(h)
            measures[q] += (2.0 * delta * tube_prefix[J] + fill[J]) * dsig

    x = np.log(deltas)
    y = np.log(measures)
    i0, i1, slope, se, r2 = _select_window(x, y, None)
    dim = _clip_dim(2.0 - slope)
    win = slice(i0, i1 + 1)
    contents = measures[win] / deltas[win] ** (2.0 - dim)
    return DimensionEstimate(
        value=dim,
        stderr=se,
        fit_window=(float(deltas[i1]), float(deltas[i0])),
        r2=r2,
        method=Method.SAUSAGE,
        content_bounds=(float(contents.min()), float(contents.max()), dim),
    )
