"""Numerical integration of planar systems and orbit extraction.

Trajectories carry dense output so that transversal crossings can be
root-polished on the interpolant. Spiral sampling is resampled by angle
(not time) because the dimension estimators need scale-uniform geometric
coverage of each winding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    AccuracyError,
    BlowUpError,
    BudgetExceededError,
    NoCrossingsError,
    NotSpiralingError,
    StepUnderflowError,
    ValidationError,
)
from .models import DegFocusParams, GenTrigTable, PlanarSystem

__all__ = [
    "Trajectory",
    "Section",
    "CrossingSequence",
    "StopCondition",
    "integrate",
    "spiral_sample",
    "section_crossings",
    "radial_map",
]


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped polyline sample of an orbit; ``sol`` is the dense output."""

    t: np.ndarray
    xy: np.ndarray
    tol: float
    center: tuple[float, float] = (0.0, 0.0)
    turns: float = 0.0
    label: str = ""
    sol: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.t) != len(self.xy):
            raise ValidationError("t and xy lengths differ")
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise ValidationError("timestamps must be strictly increasing")

    @property
    def x(self) -> np.ndarray:
        return self.xy[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.xy[:, 1]

    def radii(self) -> np.ndarray:
        cx, cy = self.center
        return np.hypot(self.xy[:, 0] - cx, self.xy[:, 1] - cy)

    def segment_lengths(self) -> np.ndarray:
        d = np.diff(self.xy, axis=0)
        return np.hypot(d[:, 0], d[:, 1])

    def write_ascii(self, path: str, with_time: bool = True) -> None:
        cols = (self.t, self.x, self.y) if with_time else (self.x, self.y)
        data = np.column_stack(cols)
        with open(path, "w") as fh:
            for row in data:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")


@dataclass(frozen=True)
class Section:
    """Oriented ray transversal: base point, unit direction, crossing orientation."""

    base: tuple[float, float]
    direction: tuple[float, float]
    orientation: int = +1

    def __post_init__(self):
        dx, dy = self.direction
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise ValidationError("section direction must be nonzero")
        object.__setattr__(self, "direction", (dx / norm, dy / norm))
        if self.orientation not in (-1, +1):
            raise ValidationError("orientation must be +1 or -1")


@dataclass(frozen=True)
class CrossingSequence:
    coords: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        if len(self.coords) != len(self.times):
            raise ValidationError("coords and times lengths differ")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValidationError("crossing times must be strictly increasing")


class _StopKind(Enum):
    MAX_TIME = "max_time"
    MAX_TURNS = "max_turns"
    RADIUS_BELOW = "radius_below"
    RADIUS_ABOVE = "radius_above"


@dataclass(frozen=True)
class StopCondition:
    kind: _StopKind
    value: float

    @classmethod
    def max_time(cls, t: float) -> "StopCondition":
        return cls(_StopKind.MAX_TIME, float(t))

    @classmethod
    def max_turns(cls, n: float) -> "StopCondition":
        return cls(_StopKind.MAX_TURNS, float(n))

    @classmethod
    def radius_below(cls, r: float) -> "StopCondition":
        return cls(_StopKind.RADIUS_BELOW, float(r))

    @classmethod
    def radius_above(cls, r: float) -> "StopCondition":
        return cls(_StopKind.RADIUS_ABOVE, float(r))


def _augmented_rhs(sys: PlanarSystem, center: tuple[float, float],
                   budget: list, max_evals: int) -> Callable:
    fpoly, gpoly = sys.f, sys.g
    cx, cy = center

    def rhs(t, u):
        budget[0] += 1
        if budget[0] > max_evals:
            raise BudgetExceededError(f"integration exceeded {max_evals} RHS evaluations")
        x, y = u[0], u[1]
        fx = fpoly(x, y)
        gy = gpoly(x, y)
        dx, dy = x - cx, y - cy
        rho2 = dx * dx + dy * dy
        dth = (dx * gy - dy * fx) / rho2 if rho2 > 0 else 0.0
        return (fx, gy, dth)

    return rhs


def integrate(sys: PlanarSystem, init: tuple[float, float], stop: StopCondition,
              tol: float = 1e-10, direction: int = +1, center: tuple[float, float] = (0.0, 0.0),
              max_evals: int = 20_000_000, t_cap: float = 1e9) -> Trajectory:
    """Adaptive embedded Runge-Kutta integration with dense output.

    The third (internal) state component tracks the unwound angle about
    ``center`` so turn-count stops are event-localized like radius stops.
    """
    if not (1e-13 <= tol <= 1e-6):
        raise ValidationError("tol must lie in [1e-13, 1e-6]")
    if direction not in (-1, +1):
        raise ValidationError("direction must be +1 or -1")

    budget = [0]
    rhs = _augmented_rhs(sys, center, budget, max_evals)
    u0 = (float(init[0]), float(init[1]), 0.0)
    cx, cy = center

    events = []
    t_end = direction * t_cap
    if stop.kind is _StopKind.MAX_TIME:
        t_end = direction * abs(stop.value)
    elif stop.kind is _StopKind.MAX_TURNS:
        target = 2.0 * math.pi * stop.value

        def ev_up(t, u):
            return u[2] - target

        def ev_dn(t, u):
            return u[2] + target

        ev_up.terminal = ev_dn.terminal = True
        events += [ev_up, ev_dn]
    elif stop.kind is _StopKind.RADIUS_BELOW:
        r2 = stop.value**2

        def ev_r(t, u):
            return (u[0] - cx) ** 2 + (u[1] - cy) ** 2 - r2

        ev_r.terminal = True
        ev_r.direction = -1.0
        events.append(ev_r)
    elif stop.kind is _StopKind.RADIUS_ABOVE:
        r2 = stop.value**2

        def ev_ra(t, u):
            return (u[0] - cx) ** 2 + (u[1] - cy) ** 2 - r2

        ev_ra.terminal = True
        ev_ra.direction = +1.0
        events.append(ev_ra)

    sol = solve_ivp(rhs, (0.0, t_end), u0, method="DOP853", rtol=tol,
                    atol=tol * 1e-2, dense_output=True, events=events or None)
    if sol.status == -1:
        raise StepUnderflowError(sol.t[-1], sol.y[:, -1])
    if not sol.success and sol.status != 1:
        raise AccuracyError(f"integration failed: {sol.message}")

    ts = sol.t
    ys = sol.y
    if direction < 0:
        ts = ts[::-1]
        ys = ys[:, ::-1]
    turn_count = abs(ys[2, -1] - ys[2, 0]) / (2.0 * math.pi)
    return Trajectory(
        t=ts.copy(),
        xy=np.column_stack([ys[0], ys[1]]),
        tol=tol,
        center=center,
        turns=float(turn_count),
        label=sys.label,
        sol=sol,
    )


def spiral_sample(sys: PlanarSystem, init: tuple[float, float], r_min: float,
                  max_turns: int, center: tuple[float, float] = (0.0, 0.0),
                  points_per_turn: int = 256, tol: float = 1e-10,
                  direction: str = "auto") -> Trajectory:
    """Sample a spiral toward ``center`` (or a cycle) and resample by angle.

    ``direction='auto'`` picks the time direction in which the radius about
    the center shrinks at the initial point; pass 'forward'/'backward' to
    override (needed e.g. inside an unstable limit cycle).
    """
    if r_min <= 0.0:
        raise ValidationError("r_min must be positive")
    if max_turns < 10:
        raise ValidationError("max_turns must be >= 10")
    if points_per_turn < 64:
        raise ValidationError("points_per_turn must be >= 64")

    cx, cy = center
    x0, y0 = float(init[0]), float(init[1])
    if direction == "auto":
        f0, g0 = sys(x0, y0)
        vr = (x0 - cx) * f0 + (y0 - cy) * g0
        sgn = -1 if vr > 0 else +1
    elif direction in ("forward", "backward"):
        sgn = +1 if direction == "forward" else -1
    else:
        raise ValidationError("direction must be 'auto', 'forward' or 'backward'")

    # integrate with both stops armed: radius floor and the turn cap
    budget = [0]
    rhs = _augmented_rhs(sys, center, budget, 50_000_000)
    r2min = r_min**2
    target = 2.0 * math.pi * max_turns

    def ev_radius(t, u):
        return (u[0] - cx) ** 2 + (u[1] - cy) ** 2 - r2min

    ev_radius.terminal = True
    ev_radius.direction = -1.0

    def ev_turns_up(t, u):
        return u[2] - target

    def ev_turns_dn(t, u):
        return u[2] + target

    ev_turns_up.terminal = ev_turns_dn.terminal = True

    sol = solve_ivp(rhs, (0.0, sgn * 1e9), (x0, y0, 0.0), method="DOP853",
                    rtol=tol, atol=tol * 1e-2, dense_output=True,
                    events=[ev_radius, ev_turns_up, ev_turns_dn])
    if sol.status == -1:
        raise StepUnderflowError(sol.t[-1], sol.y[:, -1])
    if sol.status == 0:
        # ran to the time cap without hitting either stop
        raise NotSpiralingError("orbit hit the time cap before any stop condition")

    theta = sol.y[2]
    total_turns = abs(theta[-1]) / (2.0 * math.pi)
    if total_turns < 0.25:
        raise NotSpiralingError(f"winding stalled: {total_turns:.3f} turns")

    # resample on a uniform angle grid via monotone theta(t)
    t_nodes, th_nodes = sol.t, theta
    dth = np.diff(th_nodes)
    if not (np.all(dth >= -1e-12) or np.all(dth <= 1e-12)):
        raise NotSpiralingError("winding is not monotone; cannot resample by angle")
    n_samples = max(2, int(round(total_turns * points_per_turn)) + 1)
    th_targets = np.linspace(th_nodes[0], th_nodes[-1], n_samples)
    if th_nodes[-1] >= th_nodes[0]:
        t_targets = np.interp(th_targets, th_nodes, t_nodes)
    else:
        t_targets = np.interp(th_targets[::-1], th_nodes[::-1], t_nodes[::-1])[::-1]
    states = sol.sol(t_targets)
    ts, xs, ys = t_targets, states[0], states[1]
    if sgn < 0:
        ts, xs, ys = ts[::-1], xs[::-1], ys[::-1]
    # dedupe any repeated interpolation times at the seam
    keep = np.concatenate([[True], np.diff(ts) > 0])
    return Trajectory(
        t=ts[keep].copy(),
        xy=np.column_stack([xs[keep], ys[keep]]),
        tol=tol,
        center=center,
        turns=float(total_turns),
        label=sys.label,
        sol=sol,
    )


def section_crossings(traj: Trajectory, sec: Section, refine: int = 4) -> CrossingSequence:
    """All transversal ray crossings, root-polished on the dense interpolant."""
    if traj.sol is None:
        raise ValidationError("trajectory has no dense output")
    sol = traj.sol
    bx, by = sec.base
    ux, uy = sec.direction
    nx, ny = -uy, ux  # left normal; signed distance from the section line

    def psi(t):
        u = sol.sol(t)
        return nx * (u[0] - bx) + ny * (u[1] - by)

    t_knots = np.asarray(sol.t)
    t_lo, t_hi = min(t_knots[0], t_knots[-1]), max(t_knots[0], t_knots[-1])
    n_grid = max(len(t_knots) * refine, 64)
    tg = np.linspace(t_lo, t_hi, n_grid)
    states = sol.sol(tg)
    vals = nx * (states[0] - bx) + ny * (states[1] - by)

    coords, times = [], []
    sign_change = np.where(vals[:-1] * vals[1:] < 0)[0]
    for i in sign_change:
        t1, t2 = tg[i], tg[i + 1]
        rising = vals[i + 1] > vals[i]
        if (sec.orientation > 0) != rising:
            continue
        t_star = brentq(psi, t1, t2, xtol=1e-13, rtol=8.9e-16)
        u = sol.sol(t_star)
        s = ux * (u[0] - bx) + uy * (u[1] - by)
        if s <= 1e-12:
            continue  # crossed the opposite half of the line, not the ray
        coords.append(s)
        times.append(t_star)
    if not coords:
        raise NoCrossingsError("no transversal crossings of the declared orientation")
    order = np.argsort(times)
    return CrossingSequence(coords=np.asarray(coords)[order], times=np.asarray(times)[order])


def radial_map(p: DegFocusParams, table: GenTrigTable, r0: float, turns: int,
               direct_turns: int = 256):
    """Orbit of the angular-period return map of the reduced radial equation.

    Integrates dr/dphi = sign * Sn^{n-1} Cs^{m-1} r^{2mnk+1} jointly with the
    generalized trig pair for the first ``direct_turns`` periods. The reduced
    equation has the exact invariant that r^{-2mnk} gains a constant increment
    per period; the increment measured on the directly integrated periods is
    verified for constancy and then used to extend the orbit to the requested
    number of turns.
    """
    from .fracdim import MonotoneSequence  # deferred: fracdim imports flow

    if p.k < 1:
        raise ValidationError("radial_map requires k >= 1")
    if table.m != p.m or table.n != p.n:
        raise ValidationError("table (m, n) does not match parameters")
    if r0 <= 0.0:
        raise ValidationError("r0 must be positive")
    if turns < 0:
        raise ValidationError("turns must be nonnegative")
    if turns == 0:
        return MonotoneSequence(values=np.array([float(r0)]),
                                limit=0.0 if p.sign < 0 else math.inf)

    m, n, k, sg = p.m, p.n, p.k, p.sign
    P = 2 * m * n * k
    T = table.period
    n_direct = min(turns, max(direct_turns, 8))

    def rhs(_, u):
        c, s, r = u
        return (
            -n * s ** (2 * n - 1),
            m * c ** (2 * m - 1),
            sg * s ** (n - 1) * c ** (m - 1) * r ** (P + 1),
        )

    t_eval = T * np.arange(n_direct + 1)
    sol = solve_ivp(rhs, (0.0, T * n_direct), (1.0, 0.0, float(r0)), method="DOP853",
                    rtol=1e-12, atol=1e-14, t_eval=t_eval)
    if not sol.success:
        if sg > 0:
            raise BlowUpError(f"radial orbit escaped: {sol.message}")
        raise AccuracyError(f"radial integration failed: {sol.message}")
    r_direct = sol.y[2]
    if not np.all(np.isfinite(r_direct)) or (sg > 0 and r_direct[-1] > 1e6 * r0):
        raise BlowUpError("radial orbit escaped")

    if sg < 0 and not np.all(np.diff(r_direct) < 0):
        raise AccuracyError(
            "radial decay below float resolution at this r0; start nearer r = 1"
        )

    if turns <= n_direct:
        values = r_direct[: turns + 1]
        return MonotoneSequence(values=values.copy(), limit=0.0 if sg < 0 else math.inf)

    # verified per-period invariant: u = r^{-P} gains a constant increment
    if P * abs(math.log(min(r_direct))) > 690.0:
        raise AccuracyError("r^(-2mnk) overflows; start nearer r = 1")
    u_direct = r_direct ** (-float(P))
    incr = np.diff(u_direct)
    incr_mean = float(np.mean(incr))
    if incr_mean == 0.0:
        raise AccuracyError("per-period increment underflows at this r0")
    spread = float(np.max(np.abs(incr - incr_mean)))
    if spread > 1e-8 * abs(incr_mean):
        raise AccuracyError(
            f"per-period increment of r^-2mnk not constant (rel spread {spread / abs(incr_mean):.2e}); "
            "cannot extend the orbit"
        )
    j_ext = np.arange(n_direct + 1, turns + 1, dtype=float)
    u_ext = u_direct[-1] + (j_ext - n_direct) * incr_mean
    if sg > 0 and np.any(u_ext <= 0.0):
        raise BlowUpError("radial orbit escapes in finite angle within the requested turns")
    r_ext = np.exp(-np.log(u_ext) / P)
    values = np.concatenate([r_direct, r_ext])
    if sg < 0 and not np.all(np.diff(values) < 0):
        raise AccuracyError("extended radial orbit not strictly decreasing at float resolution")
    return MonotoneSequence(values=values, limit=0.0 if sg < 0 else math.inf)
