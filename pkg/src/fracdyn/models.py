"""Vector-field model zoo, a tiny two-variable polynomial language, and
generalized trigonometric tables.

All model constructors return plain :class:`PlanarSystem` values built from
:class:`Polynomial2` arithmetic, so a produced system evaluates exactly like
its defining formula (up to floating rounding).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import (
    AccuracyError,
    DomainError,
    NotAccumulatingError,
    PolynomialSyntaxError,
    UnknownVariableError,
    ValidationError,
)

__all__ = [
    "Polynomial2",
    "SystemKind",
    "PlanarSystem",
    "HopfTakensParams",
    "DegFocusParams",
    "GenTrigTable",
    "PowerSpiral",
    "ExpSpiral",
    "ThreeDSpiral",
    "ClosedSpiralKind",
    "parse_poly",
    "poly_from_terms",
    "hopf_takens",
    "degenerate_focus",
    "gen_trig",
    "closed_spiral",
]


# --------------------------------------------------------------------------
# polynomials in x, y
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial2:
    """Polynomial in two variables, stored as merged (coeff, xdeg, ydeg) terms.

    Terms are canonically sorted by (total degree, xdeg, ydeg); no two terms
    share a degree pair and zero coefficients are dropped.
    """

    terms: tuple[tuple[float, int, int], ...]

    def __post_init__(self):
        seen = set()
        for c, i, j in self.terms:
            if i < 0 or j < 0:
                raise ValidationError(f"negative exponent in term {(c, i, j)}")
            if (i, j) in seen:
                raise ValidationError(f"duplicate degree pair {(i, j)}")
            seen.add((i, j))

    # -- evaluation --------------------------------------------------------

    def __call__(self, x, y):
        out = 0.0 * x
        for c, i, j in self.terms:
            out = out + c * x**i * y**j
        return out

    # -- calculus ----------------------------------------------------------

    def dx(self) -> "Polynomial2":
        return poly_from_terms((c * i, i - 1, j) for c, i, j in self.terms if i > 0)

    def dy(self) -> "Polynomial2":
        return poly_from_terms((c * j, i, j - 1) for c, i, j in self.terms if j > 0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Polynomial2") -> "Polynomial2":
        return poly_from_terms(list(self.terms) + list(other.terms))

    def __neg__(self) -> "Polynomial2":
        return poly_from_terms((-c, i, j) for c, i, j in self.terms)

    def __sub__(self, other: "Polynomial2") -> "Polynomial2":
        return self + (-other)

    def __mul__(self, other: Union["Polynomial2", float, int]) -> "Polynomial2":
        if isinstance(other, (int, float)):
            return poly_from_terms((c * other, i, j) for c, i, j in self.terms)
        prod = []
        for c1, i1, j1 in self.terms:
            for c2, i2, j2 in other.terms:
                prod.append((c1 * c2, i1 + i2, j1 + j2))
        return poly_from_terms(prod)

    __rmul__ = __mul__

    def pow(self, k: int) -> "Polynomial2":
        if k < 0:
            raise ValidationError("negative power")
        out = poly_from_terms([(1.0, 0, 0)])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @property
    def degree(self) -> int:
        return max((i + j for _, i, j in self.terms), default=0)

    # -- text form ---------------------------------------------------------

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, i, j in self.terms:
            mono = []
            if i:
                mono.append("x" if i == 1 else f"x^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            mag = abs(c)
            if not mono:
                body = _fmt_coeff(mag)
            elif mag == 1.0:
                body = "*".join(mono)
            else:
                body = "*".join([_fmt_coeff(mag)] + mono)
            parts.append(("-" if c < 0 else "+", body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.pretty()


def _fmt_coeff(c: float) -> str:
    if c == int(c) and abs(c) < 1e16:
        return str(int(c))
    return repr(c)


def poly_from_terms(raw: Iterable[tuple[float, int, int]]) -> Polynomial2:
    """Merge like terms, drop zeros, sort canonically."""
    acc: dict[tuple[int, int], float] = {}
    for c, i, j in raw:
        acc[(i, j)] = acc.get((i, j), 0.0) + float(c)
    terms = tuple(
        (c, i, j)
        for (i, j), c in sorted(acc.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0], kv[0][1]))
        if c != 0.0
    )
    return Polynomial2(terms)


# --------------------------------------------------------------------------
# parser for the ASCII polynomial grammar
#
#   expr   := term (("+"|"-") term)*
#   term   := factor ("*" factor)*
#   factor := number | var | var "^" posint
#   var    := "x" | "y"
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*^]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise PolynomialSyntaxError(f"unexpected character {text[at]!r}", at)
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expr(self) -> Polynomial2:
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.next()
            negate = True
        terms = [self.term()]
        if negate:
            terms[0] = -terms[0]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, _ = self.next()
            t = self.term()
            terms.append(t if op == "+" else -t)
        kind, val, off = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {val!r}", off)
        out = terms[0]
        for t in terms[1:]:
            out = out + t
        return out

    def term(self) -> Polynomial2:
        out = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.next()
            out = out * self.factor()
        return out

    def factor(self) -> Polynomial2:
        kind, val, off = self.next()
        if kind == "num":
            return poly_from_terms([(val, 0, 0)])
        if kind == "name":
            if val not in ("x", "y"):
                raise UnknownVariableError(val, off)
            deg = 1
            if self.peek()[:2] == ("op", "^"):
                self.next()
                k2, v2, o2 = self.next()
                if k2 != "num" or v2 != int(v2) or v2 <= 0:
                    raise PolynomialSyntaxError("exponent must be a positive integer", o2)
                deg = int(v2)
            return poly_from_terms([(1.0, deg, 0) if val == "x" else (1.0, 0, deg)])
        raise PolynomialSyntaxError(f"expected number or variable, got {val!r}", off)


def parse_poly(text: str) -> Polynomial2:
    """Parse ASCII polynomial text in variables x, y (see module grammar)."""
    if not text.strip():
        raise PolynomialSyntaxError("empty polynomial", 0)
    return _Parser(text).expr()


# --------------------------------------------------------------------------
# planar systems
# --------------------------------------------------------------------------

class SystemKind(Enum):
    REGULAR = "regular"
    SLOW_FAST = "slow-fast"


@dataclass(frozen=True)
class PlanarSystem:
    """x' = f, y' = g for regular systems; x' = f, y' = eps*g for slow-fast
    (all critical-curve computations run on the eps = 0 slice)."""

    f: Polynomial2
    g: Polynomial2
    kind: SystemKind = SystemKind.REGULAR
    label: str = ""

    def __call__(self, x, y):
        return self.f(x, y), self.g(x, y)


@dataclass(frozen=True)
class HopfTakensParams:
    l: int
    a: tuple[float, ...]

    def __post_init__(self):
        if self.l < 1:
            raise ValidationError("codimension l must be >= 1")
        if len(self.a) != self.l:
            raise ValidationError(f"need exactly l={self.l} coefficients, got {len(self.a)}")
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))


@dataclass(frozen=True)
class DegFocusParams:
    m: int
    n: int
    k: int
    sign: int = -1

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0 or self.n < 1 or self.n % 2 == 0:
            raise ValidationError("m and n must be odd positive integers")
        if self.k < 0:
            raise ValidationError("k must be a nonnegative integer")
        if self.sign not in (-1, 1):
            raise ValidationError("sign must be +1 or -1")


def hopf_takens(p: HopfTakensParams) -> PlanarSystem:
    """Cartesian form of r' = r(r^{2l} + sum a_i r^{2i}), phi' = 1.

    Returns x' = -y + x*P(x^2+y^2), y' = x + y*P(x^2+y^2) with
    P(s) = s^l + sum_{i<l} a_i s^i.
    """
    s = parse_poly("x^2 + y^2")
    P = s.pow(p.l)
    for i, ai in enumerate(p.a):
        P = P + s.pow(i) * ai
    x = poly_from_terms([(1.0, 1, 0)])
    y = poly_from_terms([(1.0, 0, 1)])
    f = -y + x * P
    g = x + y * P
    return PlanarSystem(f, g, SystemKind.REGULAR, label=f"hopf_takens(l={p.l}, a={list(p.a)})")


def degenerate_focus(p: DegFocusParams) -> PlanarSystem:
    """Degenerate focus family; sign -1 gives the stable focus.

    x' = -n y^{2n-1} +- n x^m y^{n-1} (x^{2m}+y^{2n})^k
    y' =  m x^{2m-1} +- m x^{m-1} y^n (x^{2m}+y^{2n})^k
    """
    m, n, k, sg = p.m, p.n, p.k, p.sign
    core = poly_from_terms([(1.0, 2 * m, 0), (1.0, 0, 2 * n)]).pow(k)
    f = poly_from_terms([(-float(n), 0, 2 * n - 1)]) + (
        core * poly_from_terms([(sg * float(n), m, n - 1)])
    )
    g = poly_from_terms([(float(m), 2 * m - 1, 0)]) + (
        core * poly_from_terms([(sg * float(m), m - 1, n)])
    )
    return PlanarSystem(f, g, SystemKind.REGULAR, label=f"degenerate_focus(m={m}, n={n}, k={k}, sign={sg:+d})")


# --------------------------------------------------------------------------
# generalized trigonometric functions Cs, Sn
# --------------------------------------------------------------------------

def gen_trig_period(m: int, n: int) -> float:
    """Period T = (2/(mn)) * Gamma(1/2m) Gamma(1/2n) / Gamma(1/2m + 1/2n)."""
    am, an = 1.0 / (2 * m), 1.0 / (2 * n)
    return 2.0 / (m * n) * math.gamma(am) * math.gamma(an) / math.gamma(am + an)


@dataclass(frozen=True)
class GenTrigTable:
    """Dense one-period table of the generalized cosine/sine pair.

    Cs' = -n Sn^{2n-1}, Sn' = m Cs^{2m-1}, (Cs, Sn)(0) = (1, 0); the pair
    satisfies Cs^{2m} + Sn^{2n} = 1 and is T-periodic.
    """

    m: int
    n: int
    period: float
    phi: np.ndarray
    cs: np.ndarray
    sn: np.ndarray
    _cs_sp: CubicSpline = field(repr=False, compare=False, default=None)
    _sn_sp: CubicSpline = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self._cs_sp is None:
            object.__setattr__(self, "_cs_sp", CubicSpline(self.phi, self.cs, bc_type="periodic"))
            object.__setattr__(self, "_sn_sp", CubicSpline(self.phi, self.sn, bc_type="periodic"))

    def cs_at(self, phi):
        return self._cs_sp(np.mod(phi, self.period))

    def sn_at(self, phi):
        return self._sn_sp(np.mod(phi, self.period))

    def conservation_defect(self) -> float:
        return float(np.max(np.abs(self.cs ** (2 * self.m) + self.sn ** (2 * self.n) - 1.0)))


def gen_trig(m: int, n: int, grid_size: int = 4096) -> GenTrigTable:
    """Build the table by high-accuracy integration over one period."""
    if m < 1 or m % 2 == 0 or n < 1 or n % 2 == 0:
        raise ValidationError("m and n must be odd positive integers")
    if grid_size < 1000:
        raise ValidationError("grid_size must be >= 1000")
    T = gen_trig_period(m, n)

    def rhs(_, u):
        c, s = u
        return (-n * s ** (2 * n - 1), m * c ** (2 * m - 1))

    phi = np.linspace(0.0, T, grid_size + 1)
    sol = solve_ivp(rhs, (0.0, T), (1.0, 0.0), method="DOP853",
                    rtol=1e-13, atol=1e-14, t_eval=phi, dense_output=False)
    if not sol.success:
        raise AccuracyError(f"gen_trig integration failed: {sol.message}")
    cs, sn = sol.y
    # enforce exact periodicity at the seam for the periodic spline
    if abs(cs[-1] - 1.0) > 1e-9 or abs(sn[-1]) > 1e-9:
        raise AccuracyError(
            f"gen_trig period defect {max(abs(cs[-1] - 1.0), abs(sn[-1])):.2e} exceeds 1e-9"
        )
    cs = cs.copy()
    sn = sn.copy()
    cs[-1], sn[-1] = cs[0], sn[0]
    table = GenTrigTable(m=m, n=n, period=T, phi=phi, cs=cs, sn=sn)
    defect = table.conservation_defect()
    if defect > 1e-9:
        raise AccuracyError(f"gen_trig conservation defect {defect:.2e} exceeds 1e-9")
    return table


def gen_trig_first_return(m: int, n: int) -> float:
    """Cross-check of the period: time of first return of (Cs, Sn) to (1, 0)."""

    def rhs(_, u):
        c, s = u
        return (-n * s ** (2 * n - 1), m * c ** (2 * m - 1))

    def event(t, u):
        return u[1]

    event.direction = 1.0
    T0 = gen_trig_period(m, n)
    sol = solve_ivp(rhs, (0.0, 3.0 * T0), (1.0, 0.0), method="DOP853",
                    rtol=1e-13, atol=1e-14, events=event, dense_output=True)
    for t_ev in sol.t_events[0]:
        if t_ev < 0.25 * T0:
            continue
        c_ev = sol.sol(t_ev)[0]
        if c_ev > 0.5:
            return float(t_ev)
    raise AccuracyError("first return of generalized trig pair not found")


# --------------------------------------------------------------------------
# closed-form spirals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSpiral:
    """r = phi^(-alpha), phi >= 1, alpha in (0, 1]."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValidationError("power spiral requires alpha in (0, 1]")


@dataclass(frozen=True)
class ExpSpiral:
    """r = exp(-beta * phi), beta != 0."""

    beta: float

    def __post_init__(self):
        if self.beta == 0.0:
            raise ValidationError("exponential spiral requires beta != 0")


@dataclass(frozen=True)
class ThreeDSpiral:
    """Planar projection r = (-b2*t + 1)^(-a1/b2), phi = t (unit constants)."""

    a1: float
    b2: float

    def __post_init__(self):
        if self.b2 == 0.0:
            raise ValidationError("b2 must be nonzero")


ClosedSpiralKind = Union[PowerSpiral, ExpSpiral, ThreeDSpiral]


def closed_spiral(kind: ClosedSpiralKind, phi_range: tuple[float, float],
                  samples_per_turn: int = 256):
    """Analytic point samples of the spiral in Cartesian coordinates.

    The angular step is chosen so that arc spacing never exceeds the spacing
    of the widest sampled turn, while every turn keeps at least 64 points.
    ``samples_per_turn`` sets the density of the widest turn.
    """
    from .flow import Trajectory  # deferred: flow depends on models

    lo, hi = float(phi_range[0]), float(phi_range[1])
    if not hi > lo:
        raise DomainError("phi_range must be a nonempty increasing interval")
    if samples_per_turn < 64:
        raise ValidationError("samples_per_turn must be >= 64")

    if isinstance(kind, PowerSpiral):
        if lo < 1.0:
            raise DomainError("power spiral requires phi >= 1")
        r_of = lambda phi: phi ** (-kind.alpha)
    elif isinstance(kind, ExpSpiral):
        r_of = lambda phi: np.exp(-kind.beta * phi)
    elif isinstance(kind, ThreeDSpiral):
        ratio = kind.a1 / kind.b2
        if ratio < 0:
            raise NotAccumulatingError(
                f"a1/b2 = {ratio:.3g} < 0: origin is not an accumulation point"
            )
        base_lo, base_hi = 1.0 - kind.b2 * lo, 1.0 - kind.b2 * hi
        if min(base_lo, base_hi) <= 0.0:
            raise DomainError("t-range crosses the blow-up time of the 3D spiral projection")
        r_of = lambda phi: (1.0 - kind.b2 * phi) ** (-ratio)
    else:
        raise ValidationError(f"unknown spiral kind {kind!r}")

    phis = _angle_grid(r_of, lo, hi, samples_per_turn)
    r = r_of(phis)
    pts_x = r * np.cos(phis)
    pts_y = r * np.sin(phis)
    return Trajectory(
        t=phis,
        xy=np.column_stack([pts_x, pts_y]),
        tol=0.0,
        center=(0.0, 0.0),
        turns=abs(hi - lo) / (2.0 * math.pi),
        label=f"closed_spiral({kind!r})",
    )


def _angle_grid(r_of, lo: float, hi: float, spt: int) -> np.ndarray:
    """Per-turn angular grids: arc spacing capped by the widest turn, >= 64 pts/turn."""
    two_pi = 2.0 * math.pi
    n_turns = int(math.ceil((hi - lo) / two_pi))
    edges = lo + two_pi * np.arange(n_turns + 1)
    edges[-1] = hi
    r_max = max(float(r_of(lo)), float(r_of(hi)))
    chunks = []
    for a, b in zip(edges[:-1], edges[1:]):
        r_here = max(float(r_of(a)), float(r_of(b)))
        pts = max(64, int(math.ceil(spt * r_here / r_max)))
        pts = int(math.ceil(pts * (b - a) / two_pi)) + 1
        chunks.append(np.linspace(a, b, max(pts, 2), endpoint=False))
    chunks.append(np.array([hi]))
    return np.concatenate(chunks)
