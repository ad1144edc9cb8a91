"""Critical-curve analysis, slow-fast Hopf certification, slow divergence
integral (SDI), entry-exit sequences, and their fractal classification.

Everything operates on the eps = 0 slice of the slow-fast system x' = f,
y' = eps*g. The SDI between fast-fiber endpoints is

    I(y_tilde, y_bar) = -int_{omega(y_tilde)_x}^{alpha(y_bar)_x}
                            f_x^2 / (g * f_y) dx

along the critical curve y = y(x); its removable 0/0 point at the Hopf
location is patched with the linearized limit (the integrand tends to 0
there since g has a simple zero matching f_x's simple zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import (
    AccuracyError,
    AssumptionViolatedError,
    BracketFailureError,
    DomainError,
    FoldResolutionError,
    MultipleRootsError,
    NoBalancedLevelError,
    NoBranchError,
    NoFiberError,
    NotContactError,
    NotHopfError,
    NumericalError,
    QuadratureFailureError,
    SlowSingularityError,
    TruncatedSequenceError,
    ValidationError,
)
from .fracdim import (
    CANARD_LATTICE,
    HOPF_LATTICE,
    Classification,
    DimensionEstimate,
    MonotoneSequence,
    snap_to_lattice,
)
from .models import PlanarSystem, Polynomial2, SystemKind

__all__ = [
    "Stability",
    "Concavity",
    "SDISign",
    "CriticalBranch",
    "HopfPoint",
    "SDIValue",
    "HopfMode",
    "CanardMode",
    "EntryExitSequence",
    "Assumption2Verdict",
    "critical_branches",
    "find_slow_fast_hopf",
    "slow_vf_x",
    "fast_fiber_endpoints",
    "sdi",
    "tilde_I",
    "check_assumption2",
    "balanced_canard_level",
    "entry_exit_next",
    "entry_exit_sequence",
    "classify_hopf",
    "classify_canard",
]


class Stability(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"


class Concavity(Enum):
    UP = "up"
    DOWN = "down"


class SDISign(Enum):
    NEG = "neg"
    POS = "pos"


@dataclass(frozen=True)
class CriticalBranch:
    """Normally hyperbolic piece of the critical curve as a graph x -> y(x)."""

    xs: np.ndarray
    ys: np.ndarray
    stability: Stability
    residual: float
    f: Polynomial2

    def y_at(self, x: float) -> float:
        y = float(np.interp(x, self.xs, self.ys))
        return _newton_branch_y(self.f, x, y)

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])


@dataclass(frozen=True)
class HopfPoint:
    x: float
    y: float
    certs: tuple[tuple[str, float], ...]
    concavity: Concavity

    def cert(self, name: str) -> float:
        for key, val in self.certs:
            if key == name:
                return val
        raise KeyError(name)

    @property
    def location(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class SDIValue:
    value: float
    y_tilde: float
    y_bar: float
    quadrature_error: float

    def __post_init__(self):
        if self.quadrature_error > 1e-10 * max(1.0, abs(self.value)):
            raise QuadratureFailureError(
                f"quadrature error {self.quadrature_error:.2e} too large for I={self.value:.6e}"
            )


@dataclass(frozen=True)
class HopfMode:
    pass


@dataclass(frozen=True)
class CanardMode:
    y_star: float


Mode = Union[HopfMode, CanardMode]


@dataclass(frozen=True)
class Assumption2Verdict:
    kind: str  # "ConstantNeg" | "ConstantPos" | "Violated"
    y_where: Optional[float] = None
    method: str = "sampled"
    samples: int = 0

    @property
    def sdi_sign(self) -> SDISign:
        if self.kind == "ConstantNeg":
            return SDISign.NEG
        if self.kind == "ConstantPos":
            return SDISign.POS
        raise AssumptionViolatedError(self.y_where if self.y_where is not None else math.nan)


@dataclass(frozen=True)
class EntryExitSequence:
    y0: float
    values: MonotoneSequence
    residuals: np.ndarray
    mode: Mode
    sdi_sign: SDISign
    truncated: bool = False

    def __post_init__(self):
        if np.any(self.residuals > 1e-9):
            raise AccuracyError("entry-exit residual above 1e-9")

    def write_csv(self, path: str) -> None:
        v = self.values.values
        gaps = np.abs(np.diff(v))
        with open(path, "w") as fh:
            fh.write("k,y_k,gap_k,residual_k\n")
            for k, yk in enumerate(v):
                gap = repr(float(gaps[k])) if k < len(gaps) else ""
                res = repr(float(self.residuals[k - 1])) if 0 < k <= len(self.residuals) else ""
                fh.write(f"{k},{float(yk)!r},{gap},{res}\n")


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _newton_branch_y(f: Polynomial2, x: float, y0: float) -> float:
    fy = f.dy()
    y = y0
    for _ in range(80):
        val = f(x, y)
        dv = fy(x, y)
        if dv == 0.0:
            raise SlowSingularityError(f"f_y vanished while tracking the branch at x={x!r}")
        step = val / dv
        y -= step
        if abs(step) <= 1e-15 * (1.0 + abs(y)):
            break
    if abs(f(x, y)) > 1e-10 * (1.0 + abs(y)):
        raise NumericalError(f"branch solve did not converge at x={x!r}")
    return y


def _real_roots_in_y(f: Polynomial2, x: float) -> list[float]:
    """Real roots of the univariate polynomial y -> f(x, y)."""
    deg = max((j for _, _, j in f.terms), default=0)
    coeffs = np.zeros(deg + 1)
    for c, i, j in f.terms:
        coeffs[deg - j] += c * x**i
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if len(nz) == 0 or nz[0] == deg:  # identically zero or constant in y
        return []
    coeffs = coeffs[nz[0]:]
    roots = np.roots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-9 * (1.0 + abs(r)):
            try:
                out.append(_newton_branch_y(f, x, float(r.real)))
            except NumericalError:
                continue
    out.sort()
    dedup: list[float] = []
    for r in out:
        if not dedup or abs(r - dedup[-1]) > 1e-9 * (1.0 + abs(r)):
            dedup.append(r)
    return dedup


def _real_roots_in_x(f: Polynomial2, y: float) -> list[float]:
    deg = max((i for _, i, _ in f.terms), default=0)
    coeffs = np.zeros(deg + 1)
    for c, i, j in f.terms:
        coeffs[deg - i] += c * y**j
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if len(nz) == 0 or nz[0] == deg:
        return []
    coeffs = coeffs[nz[0]:]
    fx = f.dx()
    out = []
    for r in np.roots(coeffs):
        if abs(r.imag) <= 1e-9 * (1.0 + abs(r)):
            x = float(r.real)
            for _ in range(60):
                val = f(x, y)
                dv = fx(x, y)
                if dv == 0.0:
                    break
                step = val / dv
                x -= step
                if abs(step) <= 1e-15 * (1.0 + abs(x)):
                    break
            if abs(f(x, y)) <= 1e-10 * (1.0 + abs(x)):
                out.append(x)
    out.sort()
    dedup: list[float] = []
    for r in out:
        if not dedup or abs(r - dedup[-1]) > 1e-9 * (1.0 + abs(r)):
            dedup.append(r)
    return dedup


# --------------------------------------------------------------------------
# critical curve and Hopf point
# --------------------------------------------------------------------------

def critical_branches(sys: PlanarSystem, window, nx: int = 401,
                      fold_tol: float = 1e-8) -> list[CriticalBranch]:
    """Normally hyperbolic branches of f = 0 in the window, split at folds."""
    if sys.kind is not SystemKind.SLOW_FAST:
        raise ValidationError("critical branches are defined for slow-fast systems")
    (x0, x1), (y0, y1) = _normalize_window(window)
    f = sys.f
    fxp = f.dx()
    xs = np.linspace(x0, x1, nx)
    match_tol = 0.15 * (y1 - y0)

    strands: list[dict] = []
    any_root = False
    for x in xs:
        roots = [y for y in _real_roots_in_y(f, x) if y0 - 1e-12 <= y <= y1 + 1e-12]
        if roots:
            any_root = True
        open_strands = [s for s in strands if s["open"]]
        used = set()
        for s in open_strands:
            best = None
            for idx, y in enumerate(roots):
                if idx in used:
                    continue
                dist = abs(y - s["ys"][-1])
                if dist <= match_tol and (best is None or dist < best[0]):
                    best = (dist, idx)
            if best is None:
                s["open"] = False
            else:
                used.add(best[1])
                s["xs"].append(float(x))
                s["ys"].append(roots[best[1]])
        for idx, y in enumerate(roots):
            if idx not in used:
                strands.append({"xs": [float(x)], "ys": [y], "open": True})
    if not any_root:
        raise NoBranchError("f = 0 has no real solution in the window")

    branches: list[CriticalBranch] = []
    for s in strands:
        sx = np.asarray(s["xs"])
        sy = np.asarray(s["ys"])
        if len(sx) < 8:
            continue
        fx_vals = fxp(sx, sy)
        splits = _split_at_folds(sys, sx, sy, fx_vals, fold_tol)
        for lo, hi in splits:
            if hi - lo < 8:
                continue
            seg_fx = fx_vals[lo:hi]
            sign = np.sign(seg_fx[np.argmax(np.abs(seg_fx))])
            keep = np.sign(seg_fx) == sign
            bx, by = sx[lo:hi][keep], sy[lo:hi][keep]
            if len(bx) < 8:
                continue
            residual = float(np.max(np.abs(f(bx, by))))
            branches.append(
                CriticalBranch(
                    xs=bx,
                    ys=by,
                    stability=Stability.ATTRACTING if sign < 0 else Stability.REPELLING,
                    residual=residual,
                    f=f,
                )
            )
    if not branches:
        raise NoBranchError("no normally hyperbolic branch of usable length in the window")
    return branches


def _normalize_window(window):
    w = np.asarray(window, dtype=float).ravel()
    if len(w) != 4:
        raise ValidationError("window must be ((x0, x1), (y0, y1))")
    x0, x1, y0, y1 = w
    if not (x1 > x0 and y1 > y0):
        raise ValidationError("window must have positive extent")
    return (x0, x1), (y0, y1)


def _split_at_folds(sys: PlanarSystem, sx, sy, fx_vals, fold_tol):
    """Index ranges of maximal one-signed f_x pieces along a strand."""
    signs = np.sign(fx_vals)
    change = np.flatnonzero(signs[:-1] * signs[1:] < 0)
    cuts = [0]
    for i in change:
        near_small = min(abs(fx_vals[i]), abs(fx_vals[i + 1]))
        if near_small > max(abs(fx_vals[i]), abs(fx_vals[i + 1])) * 0.5 and near_small > 1e-3:
            # a jump in f_x sign without passing near zero: strand tracking failed
            raise FoldResolutionError(
                f"cannot isolate fold between x={sx[i]!r} and x={sx[i + 1]!r}"
            )
        cuts.append(i + 1)
    cuts.append(len(sx))
    return [(cuts[j], cuts[j + 1]) for j in range(len(cuts) - 1)]


def find_slow_fast_hopf(sys: PlanarSystem, guess: tuple[float, float],
                        tol: float = 1e-12) -> HopfPoint:
    """Newton-solve the contact point (f = 0, f_x = 0) and certify it."""
    f = sys.f
    g = sys.g
    fx, fy = f.dx(), f.dy()
    fxx, fxy = fx.dx(), fx.dy()
    gx = g.dx()

    x, y = float(guess[0]), float(guess[1])
    converged = False
    for _ in range(80):
        r1, r2 = f(x, y), fx(x, y)
        j11, j12 = fx(x, y), fy(x, y)
        j21, j22 = fxx(x, y), fxy(x, y)
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            raise NumericalError("singular Jacobian in the Hopf-point Newton solve")
        dx = (r1 * j22 - r2 * j12) / det
        dy = (j11 * r2 - j21 * r1) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) <= tol * (1.0 + abs(x) + abs(y)):
            converged = True
            break
    if not converged or abs(f(x, y)) > 1e-10 or abs(fx(x, y)) > 1e-10:
        raise NumericalError("Newton solve for the contact point did not converge")

    v_f, v_fx = float(f(x, y)), float(fx(x, y))
    v_fy, v_fxx = float(fy(x, y)), float(fxx(x, y))
    v_g, v_gx = float(g(x, y)), float(gx(x, y))
    if abs(v_fy) <= 1e-10:
        raise NotContactError("f_y vanishes: contact point is not nilpotent")
    if abs(v_fxx) <= 1e-10:
        raise NotHopfError("f_xx = 0 (contact of order > 2)", v_fxx)
    if abs(v_g) > 1e-10:
        raise NotHopfError("g(p_c) != 0", v_g)
    if v_gx * v_fy >= 0.0:
        raise NotHopfError("sign condition g_x * f_y < 0 fails", v_gx * v_fy)
    concavity = Concavity.UP if v_fy * v_fxx < 0 else Concavity.DOWN
    certs = (
        ("f", v_f),
        ("f_x", v_fx),
        ("f_y", v_fy),
        ("f_xx", v_fxx),
        ("g", v_g),
        ("g_x", v_gx),
    )
    return HopfPoint(x=x, y=y, certs=certs, concavity=concavity)


def slow_vf_x(sys: PlanarSystem, x: float, branch: CriticalBranch,
              fold_tol: float = 1e-7) -> float:
    """x-component -g f_y / f_x of the slow vector field on the branch.

    At a nilpotent contact point (f_x and g both vanish) the regular
    extension -(g_x f_y)/f_xx is returned.
    """
    f = branch.f
    y = branch.y_at(x)
    v_fx = f.dx()(x, y)
    v_fy = f.dy()(x, y)
    v_g = sys.g(x, y)
    if abs(v_fx) <= fold_tol:
        if abs(v_g) <= 1e-8 * (1.0 + abs(x)):
            v_gx = sys.g.dx()(x, y)
            v_fxx = f.dx().dx()(x, y)
            if v_fxx == 0.0:
                raise SlowSingularityError("degenerate contact: f_xx = 0")
            return -(v_gx * v_fy) / v_fxx
        raise SlowSingularityError(
            f"slow dynamics unbounded at the fold x={x!r} (g != 0 there)"
        )
    if abs(v_g) <= 1e-12 * (1.0 + abs(x)):
        raise SlowSingularityError(f"slow vector field vanishes on the branch at x={x!r}")
    return -v_g * v_fy / v_fx


def fast_fiber_endpoints(sys: PlanarSystem, y: float, hopf: HopfPoint) -> tuple[float, float]:
    """(alpha_x, omega_x): repelling- and attracting-branch roots of f(., y)
    nearest the Hopf point."""
    span = 1.0 + abs(hopf.y)
    if hopf.concavity is Concavity.UP:
        if y <= hopf.y + 1e-14 * span:
            if abs(y - hopf.y) <= 1e-12 * span:
                raise NoFiberError("degenerate fiber at the Hopf level")
            raise DomainError("y must lie above y_c for a concave-up critical curve")
    else:
        if y >= hopf.y - 1e-14 * span:
            if abs(y - hopf.y) <= 1e-12 * span:
                raise NoFiberError("degenerate fiber at the Hopf level")
            raise DomainError("y must lie below y_c for a concave-down critical curve")

    roots = _real_roots_in_x(sys.f, y)
    left = [r for r in roots if r < hopf.x]
    right = [r for r in roots if r > hopf.x]
    if not left or not right:
        raise NoFiberError("fiber endpoints do not straddle the Hopf point")
    x_left = max(left)
    x_right = min(right)
    fxp = sys.f.dx()
    y_l = _newton_branch_y(sys.f, x_left, y)
    y_r = _newton_branch_y(sys.f, x_right, y)
    stab_left = fxp(x_left, y_l)
    stab_right = fxp(x_right, y_r)
    if stab_left > 0 > stab_right:
        return (x_left, x_right)
    if stab_right > 0 > stab_left:
        return (x_right, x_left)
    raise NoFiberError("nearest roots are not one repelling and one attracting")


# --------------------------------------------------------------------------
# slow divergence integral
# --------------------------------------------------------------------------

def _sdi_integrand(sys: PlanarSystem, hopf: HopfPoint, patch: float = 1e-6):
    f = sys.f
    fx, fy = f.dx(), f.dy()
    xc = hopf.x
    v_fxx = hopf.cert("f_xx")
    v_gx = hopf.cert("g_x")
    v_fy = hopf.cert("f_y")
    lin_slope = v_fxx**2 / (v_gx * v_fy)  # f_x^2/(g f_y) ~ slope * (x - xc)

    quad_coef = -v_fxx / (2.0 * v_fy)

    def y_of(x: float) -> float:
        return _newton_branch_y(f, x, hopf.y + quad_coef * (x - xc) ** 2)

    def h(x: float) -> float:
        if abs(x - xc) < patch:
            return lin_slope * (x - xc)
        y = y_of(x)
        denom = sys.g(x, y) * fy(x, y)
        if denom == 0.0:
            raise SlowSingularityError(f"g * f_y vanishes non-removably at x={x!r}")
        return fx(x, y) ** 2 / denom

    return h


def sdi(sys: PlanarSystem, y_tilde: float, y_bar: float, hopf: HopfPoint) -> SDIValue:
    """Slow divergence integral I(y_tilde, y_bar) by adaptive quadrature."""
    omega_x = fast_fiber_endpoints(sys, y_tilde, hopf)[1]
    alpha_x = fast_fiber_endpoints(sys, y_bar, hopf)[0]
    h = _sdi_integrand(sys, hopf)

    lo, hi = min(omega_x, alpha_x), max(omega_x, alpha_x)
    _presample_slow_singularity(sys, hopf, lo, hi)
    pts = [hopf.x] if lo < hopf.x < hi else None
    val, err = quad(h, lo, hi, points=pts, epsabs=1e-13, epsrel=1e-13, limit=300)
    if err > 1e-10 * max(1.0, abs(val)):
        val, err = quad(h, lo, hi, points=pts, epsabs=1e-14, epsrel=1e-14, limit=800)
        if err > 1e-10 * max(1.0, abs(val)):
            raise QuadratureFailureError(f"SDI quadrature error {err:.2e} too large")
    directed = val if alpha_x >= omega_x else -val
    return SDIValue(value=-directed, y_tilde=y_tilde, y_bar=y_bar, quadrature_error=err)


def _presample_slow_singularity(sys: PlanarSystem, hopf: HopfPoint, lo: float, hi: float,
                                n: int = 33) -> None:
    f = sys.f
    fy = f.dy()
    quad_coef = -hopf.cert("f_xx") / (2.0 * hopf.cert("f_y"))
    for x in np.linspace(lo, hi, n):
        if abs(x - hopf.x) < 1e-4 * (1.0 + abs(hi - lo)):
            continue
        y = _newton_branch_y(f, float(x), hopf.y + quad_coef * (float(x) - hopf.x) ** 2)
        if abs(sys.g(float(x), y) * fy(float(x), y)) < 1e-13:
            raise SlowSingularityError(
                f"g * f_y vanishes on the slow segment at x={float(x)!r}"
            )


def tilde_I(sys: PlanarSystem, y: float, hopf: HopfPoint) -> float:
    """I(y, y), the balance functional whose zeros are balanced canard levels."""
    return sdi(sys, y, y, hopf).value


# --------------------------------------------------------------------------
# assumption checks and entry-exit machinery
# --------------------------------------------------------------------------

def check_assumption2(sys: PlanarSystem, hopf: HopfPoint, J: tuple[float, float],
                      samples: int = 64) -> Assumption2Verdict:
    """Sampled sign verdict for tilde-I on J (log-spaced toward y_c)."""
    lo, hi = float(min(J)), float(max(J))
    up = hopf.concavity is Concavity.UP
    if up and lo <= hopf.y:
        raise DomainError("J must lie above y_c for a concave-up critical curve")
    if not up and hi >= hopf.y:
        raise DomainError("J must lie below y_c for a concave-down critical curve")
    offs = np.geomspace(abs(lo - hopf.y) if up else abs(hi - hopf.y),
                        abs(hi - hopf.y) if up else abs(lo - hopf.y), samples)
    ys = hopf.y + offs if up else hopf.y - offs
    vals = np.array([tilde_I(sys, float(yv), hopf) for yv in ys])
    scale = float(np.max(np.abs(vals)))
    zero_tol = max(1e-11, 1e-9 * scale)
    tiny = np.abs(vals) <= zero_tol
    if np.all(tiny):
        return Assumption2Verdict("Violated", y_where=float(ys[0]), samples=samples)
    if np.any(tiny):
        idx = int(np.flatnonzero(tiny)[0])
        return Assumption2Verdict("Violated", y_where=float(ys[idx]), samples=samples)
    signs = np.sign(vals)
    if np.all(signs > 0):
        return Assumption2Verdict("ConstantPos", samples=samples)
    if np.all(signs < 0):
        return Assumption2Verdict("ConstantNeg", samples=samples)
    idx = int(np.flatnonzero(signs[:-1] * signs[1:] < 0)[0]) + 1
    return Assumption2Verdict("Violated", y_where=float(ys[idx]), samples=samples)


def balanced_canard_level(sys: PlanarSystem, hopf: HopfPoint,
                          window: tuple[float, float], samples: int = 64) -> float:
    """Unique zero of tilde-I in the window, Brent-solved to 1e-11."""
    lo, hi = float(min(window)), float(max(window))
    up = hopf.concavity is Concavity.UP
    if (up and lo <= hopf.y) or (not up and hi >= hopf.y):
        raise DomainError("window must lie on the admissible side of y_c")
    ys = np.linspace(lo, hi, samples)
    vals = np.array([tilde_I(sys, float(yv), hopf) for yv in ys])
    scale = float(np.max(np.abs(vals)))
    if scale <= 1e-11:
        raise MultipleRootsError("tilde-I vanishes identically on the window (degenerate)")
    signs = np.sign(np.where(np.abs(vals) <= 1e-11, 0.0, vals))
    nonzero = signs[signs != 0]
    changes = int(np.sum(nonzero[:-1] * nonzero[1:] < 0))
    if changes == 0:
        raise NoBalancedLevelError("tilde-I does not change sign in the window")
    if changes > 1:
        raise MultipleRootsError(f"tilde-I changes sign {changes} times in the window")
    idx = int(np.flatnonzero(signs[:-1] * signs[1:] < 0)[0])
    y_star = brentq(lambda yv: tilde_I(sys, float(yv), hopf),
                    float(ys[idx]), float(ys[idx + 1]), xtol=1e-12, rtol=8.9e-16)
    return float(y_star)


def _limit_of(hopf: HopfPoint, mode: Mode) -> float:
    return hopf.y if isinstance(mode, HopfMode) else mode.y_star


def _next_with_residual(sys, hopf, y, mode, sdi_sign) -> tuple[float, float]:
    limit = _limit_of(hopf, mode)
    span = y - limit
    if span == 0.0:
        raise BracketFailureError("y coincides with the accumulation level")

    if sdi_sign is SDISign.NEG:
        func = lambda yp: sdi(sys, yp, y, hopf).value
    else:
        func = lambda yp: sdi(sys, y, yp, hopf).value

    eps = 1e-13 * abs(span)
    a = limit + math.copysign(max(eps, 1e-15), span)
    b = y - math.copysign(max(eps, 1e-15), span)
    fa, fb = func(a), func(b)
    if fa * fb > 0:
        raise BracketFailureError(
            f"no sign change of I on ({a!r}, {b!r}): I(a)={fa:.3e}, I(b)={fb:.3e}, "
            f"tilde_I(y)={tilde_I(sys, y, hopf):.3e}"
        )
    lo, hi = (a, b) if a < b else (b, a)
    y_next = brentq(func, lo, hi, xtol=1e-14, rtol=8.9e-16)
    residual = abs(func(y_next))
    if residual > 1e-9:
        raise AccuracyError(f"entry-exit residual |I| = {residual:.2e} exceeds 1e-9")
    return float(y_next), float(residual)


def entry_exit_next(sys: PlanarSystem, hopf: HopfPoint, y: float, mode: Mode,
                    sdi_sign: SDISign) -> float:
    """Next element of the entry-exit sequence after y (Brent on the SDI)."""
    return _next_with_residual(sys, hopf, y, mode, sdi_sign)[0]


def entry_exit_sequence(sys: PlanarSystem, hopf: HopfPoint, y0: float, N: int,
                        mode: Mode = HopfMode(), sdi_sign: Optional[SDISign] = None,
                        gap_floor: float = 1e-13) -> EntryExitSequence:
    """Iterate the entry-exit relation N times (or to the gap floor).

    The SDI sign is verified by sampling on (limit, y0] unless supplied;
    a Violated verdict raises AssumptionViolatedError.
    """
    limit = _limit_of(hopf, mode)
    span = y0 - limit
    if span == 0.0:
        raise DomainError("y0 must differ from the accumulation level")
    up = hopf.concavity is Concavity.UP
    if up and span < 0:
        raise DomainError("y0 must lie above the accumulation level (concave up)")
    if not up and span > 0:
        raise DomainError("y0 must lie below the accumulation level (concave down)")

    if sdi_sign is None:
        j_lo = limit + span * 1e-6
        j_hi = y0
        verdict = check_assumption2(sys, hopf, (j_lo, j_hi), samples=32) \
            if isinstance(mode, HopfMode) else _canard_window_verdict(sys, hopf, limit, y0)
        sdi_sign = verdict.sdi_sign

    values = [float(y0)]
    residuals: list[float] = []
    truncated = False
    y = float(y0)
    for _ in range(N):
        y_next, res = _next_with_residual(sys, hopf, y, mode, sdi_sign)
        if abs(y - y_next) < gap_floor:
            truncated = True
            break
        values.append(y_next)
        residuals.append(res)
        y = y_next
    if truncated and len(values) < 16:
        raise TruncatedSequenceError(len(values))
    seq = MonotoneSequence(values=np.asarray(values), limit=limit)
    return EntryExitSequence(
        y0=float(y0),
        values=seq,
        residuals=np.asarray(residuals),
        mode=mode,
        sdi_sign=sdi_sign,
        truncated=truncated,
    )


def _canard_window_verdict(sys, hopf, y_star, y0) -> Assumption2Verdict:
    """Assumption 2' on (y_star, y0]: sampled like Assumption 2 but relative
    to the balanced level instead of the Hopf level."""
    span = y0 - y_star
    offs = np.geomspace(abs(span) * 1e-6, abs(span), 32)
    ys = y_star + math.copysign(1.0, span) * offs
    vals = np.array([tilde_I(sys, float(yv), hopf) for yv in ys])
    scale = float(np.max(np.abs(vals)))
    zero_tol = max(1e-11, 1e-9 * scale)
    if np.any(np.abs(vals) <= zero_tol):
        idx = int(np.flatnonzero(np.abs(vals) <= zero_tol)[0])
        return Assumption2Verdict("Violated", y_where=float(ys[idx]), samples=32)
    signs = np.sign(vals)
    if np.all(signs > 0):
        return Assumption2Verdict("ConstantPos", samples=32)
    if np.all(signs < 0):
        return Assumption2Verdict("ConstantNeg", samples=32)
    idx = int(np.flatnonzero(signs[:-1] * signs[1:] < 0)[0]) + 1
    return Assumption2Verdict("Violated", y_where=float(ys[idx]), samples=32)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

def classify_hopf(d: DimensionEstimate, gate: float = 0.04) -> Classification:
    """Snap a Hopf-mode sequence dimension and bound cyclicity by
    (d+1)/(2(1-d)) = j+1 at the lattice points."""
    return snap_to_lattice(d, HOPF_LATTICE, gate)


def classify_canard(d: DimensionEstimate, gate: float = 0.04) -> Classification:
    """Snap a canard-mode sequence dimension and bound cyclicity by
    (2-d)/(1-d) = j+2 at the lattice points."""
    return snap_to_lattice(d, CANARD_LATTICE, gate)
