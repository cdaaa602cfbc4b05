"""Predictor-corrector tracing of the level curves ``|Gamma| = r`` and ``A = theta``.

Curves are parameterized by x.  At each grid abscissa the previous samples
give a linear predictor for y, Newton in y corrects it, and Brent's method on
an expanded bracket takes over when Newton stalls.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ConvergenceError, ParameterError, PreconditionError, WindowExitError
from .gamma import GammaContext, default_context, mod_bracket_x, mod_bracket_y

__all__ = [
    "CurveKind",
    "Quadrant",
    "TraceConfig",
    "Window",
    "LevelCurve",
    "DerivativeCheck",
    "SandwichReport",
    "trace_mod_level",
    "trace_arg_level",
    "trace_g_level",
    "curve_A_derivative",
    "derivative_bound",
    "sandwich_check",
    "SANDWICH_HALF_WIDTH",
]

SANDWICH_HALF_WIDTH = 2 * math.exp(-4 * math.pi)


class CurveKind(enum.Enum):
    MOD_LEVEL = "mod"
    ARG_LEVEL = "arg"
    G_LEVEL = "bg"


class Quadrant(enum.Enum):
    UPPER_RIGHT = "upper-right"
    UPPER_LEFT = "upper-left"


@dataclass(frozen=True)
class TraceConfig:
    x_step: float = 0.05
    newton_tol: float = 1e-10
    max_newton: int = 30
    y_bracket: float = 0.5

    def __post_init__(self):
        if not (self.x_step > 0 and self.newton_tol > 0 and self.max_newton > 0 and self.y_bracket > 0):
            raise ParameterError("trace configuration entries must be positive")


@dataclass(frozen=True)
class Window:
    x0: float
    x1: float
    y_min: float = 0.0
    y_max: float = math.inf

    def __post_init__(self):
        if self.x0 == self.x1 or not self.y_min < self.y_max:
            raise ParameterError("degenerate window")


@dataclass
class LevelCurve:
    kind: CurveKind
    value: float
    quadrant: Quadrant
    x: np.ndarray
    y: np.ndarray
    residual: np.ndarray
    ctx: GammaContext = field(repr=False, default_factory=default_context)

    def __len__(self):
        return len(self.x)

    @property
    def points(self) -> np.ndarray:
        return self.x + 1j * self.y

    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def phase(self) -> np.ndarray:
        return self.ctx.phase_A(self.points)

    def write_csv(self, path) -> None:
        z = self.points
        A = self.ctx.phase_A(z)
        mod = np.abs(self.ctx.gamma_array(z))
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "residual", "A", "|Gamma|"])
            for row in zip(self.x, self.y, self.residual, A, mod):
                w.writerow([repr(float(v)) for v in row])


class _Level(NamedTuple):
    f: Callable[[float, float], float]
    df: Callable[[float, float], float]


def _mod_level(ctx: GammaContext, r: float) -> _Level:
    target = math.log(r)
    return _Level(lambda x, y: float(ctx.loggamma(np.array([complex(x, y)]))[0].real) - target,
                  mod_bracket_y)


def _arg_level(ctx: GammaContext, theta: float) -> _Level:
    return _Level(lambda x, y: ctx.phase_A(complex(x, y)) - theta, mod_bracket_x)


def _g_level(ctx: GammaContext, theta: float) -> _Level:
    def df(x, y):
        q = np.exp(2j * math.pi * complex(x, y))
        return mod_bracket_x(x, y) + (-2j * math.pi * q / (1 - q)).real

    return _Level(lambda x, y: ctx.phase_Ag(complex(x, y)) - theta, df)


def _bracket(level: _Level, x: float, y: float, win: Window, width: float):
    """Expand around y until the level function changes sign."""
    f0 = level.f(x, y)
    if f0 == 0:
        return y, y
    lo, hi = y, y
    step = width
    for _ in range(60):
        lo = max(win.y_min, lo - step)
        hi = min(win.y_max, hi + step)
        if level.f(x, lo) * f0 <= 0:
            return lo, y
        if level.f(x, hi) * f0 <= 0:
            return y, hi
        if lo == win.y_min and hi == win.y_max:
            break
        step *= 2
    raise WindowExitError(f"no crossing of the level inside the window at x={x:g}", x=x)


def _correct(level: _Level, x: float, guess: float, win: Window, cfg: TraceConfig) -> float:
    y = guess
    for _ in range(cfg.max_newton):
        if not (win.y_min < y < win.y_max):
            break
        fy = level.f(x, y)
        if abs(fy) < 1e-3 * cfg.newton_tol:
            return y
        d = level.df(x, y)
        if d == 0 or not math.isfinite(d):
            break
        step = fy / d
        y -= step
        if abs(step) <= 4e-16 * max(1.0, abs(y)) and abs(level.f(x, y)) < cfg.newton_tol:
            return y
    a, b = _bracket(level, x, min(max(guess, win.y_min), win.y_max), win, cfg.y_bracket)
    if a == b:
        return a
    try:
        return brentq(lambda t: level.f(x, t), a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
    except (ValueError, RuntimeError) as exc:
        raise BracketError(f"bracketing solve failed at x={x:g}: {exc}", x=x) from exc


def _grid(x0: float, x1: float, step: float) -> np.ndarray:
    n = max(1, math.ceil(abs(x1 - x0) / step - 1e-9))
    return np.linspace(x0, x1, n + 1)


def _trace(level: _Level, win: Window, cfg: TraceConfig, y_seed: float | None) -> tuple:
    xs = _grid(win.x0, win.x1, cfg.x_step)
    ys = np.empty_like(xs)
    res = np.empty_like(xs)
    for i, x in enumerate(xs):
        if i == 0:
            if y_seed is None:
                lo = win.y_min if win.y_min > 0 else 1e-9
                a, b = _bracket(level, x, lo, win, cfg.y_bracket)
                y = a if a == b else brentq(lambda t: level.f(x, t), a, b, xtol=1e-15, rtol=1e-15)
                y = _correct(level, x, y, win, cfg)
            else:
                y = _correct(level, x, y_seed, win, cfg)
        else:
            guess = ys[i - 1]
            if i >= 2:
                guess += (ys[i - 1] - ys[i - 2]) / (xs[i - 1] - xs[i - 2]) * (x - xs[i - 1])
            y = _correct(level, x, guess, win, cfg)
        if not (win.y_min < y < win.y_max):
            raise WindowExitError(f"curve leaves the window at x={x:g} (y={y:g})", x=x)
        r = abs(level.f(x, y))
        if not r < cfg.newton_tol:
            raise ConvergenceError(f"residual {r:.3g} above tolerance at x={x:g}")
        ys[i], res[i] = y, r
    return xs, ys, res


def trace_mod_level(r: float, x0: float, x1: float, cfg: TraceConfig | None = None,
                    y_max: float = math.inf, y_seed: float | None = None,
                    ctx: GammaContext | None = None) -> LevelCurve:
    """Trace ``|Gamma(x + iy)| = r`` with y > 0 for x between x0 and x1.

    Residuals are ``|log|Gamma| - log r|``, i.e. relative deviations in the
    modulus.
    """
    cfg = cfg or TraceConfig()
    ctx = ctx or default_context()
    if not r > 0:
        raise ParameterError("r must be positive")
    if min(x0, x1) <= ctx.x0:
        raise PreconditionError(f"mod-level curves are traced right of x0 = {ctx.x0:.10f}")
    win = Window(x0, x1, 0.0, y_max)
    xs, ys, res = _trace(_mod_level(ctx, r), win, cfg, y_seed)
    return LevelCurve(CurveKind.MOD_LEVEL, r, Quadrant.UPPER_RIGHT, xs, ys, res, ctx)


def trace_arg_level(theta: float, quadrant: Quadrant | str, window: Window,
                    cfg: TraceConfig | None = None, y_seed: float | None = None,
                    ctx: GammaContext | None = None) -> LevelCurve:
    """Trace ``A(x + iy) = theta`` across the window; residuals are ``|A - theta|``."""
    cfg = cfg or TraceConfig()
    ctx = ctx or default_context()
    quadrant = Quadrant(quadrant)
    if quadrant is Quadrant.UPPER_RIGHT:
        if min(window.x0, window.x1) <= ctx.x0 or window.y_min < 0 or not theta > 0:
            raise PreconditionError("upper-right traces need x > x0, y > 0 and theta > 0")
    elif window.y_min < 2:
        raise PreconditionError("upper-left traces need y > 2")
    xs, ys, res = _trace(_arg_level(ctx, theta), window, cfg, y_seed)
    return LevelCurve(CurveKind.ARG_LEVEL, theta, quadrant, xs, ys, res, ctx)


def trace_g_level(theta: float, window: Window, cfg: TraceConfig | None = None,
                  y_seed: float | None = None, ctx: GammaContext | None = None) -> LevelCurve:
    """Trace ``A_g(x + iy) = theta`` in the upper half-plane."""
    cfg = cfg or TraceConfig()
    ctx = ctx or default_context()
    if window.y_min < 0:
        raise PreconditionError("g-level curves live in the upper half-plane")
    quadrant = Quadrant.UPPER_LEFT if max(window.x0, window.x1) <= 0 else Quadrant.UPPER_RIGHT
    xs, ys, res = _trace(_g_level(ctx, theta), window, cfg, y_seed)
    return LevelCurve(CurveKind.G_LEVEL, theta, quadrant, xs, ys, res, ctx)


# -- checks --------------------------------------------------------------------

def derivative_bound(x) -> np.ndarray:
    """``2 (log floor(x) - 1)^2``, nan where floor(x) < 3."""
    fx = np.floor(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        b = 2 * (np.log(fx) - 1) ** 2
    return np.where(fx >= 3, b, np.nan)


class DerivativeCheck(NamedTuple):
    x: np.ndarray
    derivative: np.ndarray
    bound: np.ndarray

    @property
    def violations(self) -> np.ndarray:
        mask = ~np.isnan(self.bound) & (self.derivative < self.bound)
        return self.x[mask]

    @property
    def ok(self) -> bool:
        return self.violations.size == 0


def curve_A_derivative(curve: LevelCurve) -> DerivativeCheck:
    """Second-order finite differences of A along a mod-level curve."""
    if curve.kind is not CurveKind.MOD_LEVEL:
        raise PreconditionError("A-derivative checks apply to mod-level curves")
    if len(curve) < 3:
        raise PreconditionError("need at least three samples")
    dA = np.gradient(curve.phase(), curve.x, edge_order=2)
    return DerivativeCheck(curve.x, dA, derivative_bound(curve.x))


@dataclass
class SandwichReport:
    theta: float
    curve: LevelCurve
    deviation: np.ndarray
    half_width: float = SANDWICH_HALF_WIDTH

    @property
    def violations(self) -> np.ndarray:
        return self.curve.points[np.abs(self.deviation) > self.half_width]

    @property
    def ok(self) -> bool:
        return self.violations.size == 0

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.deviation)))


def sandwich_check(theta: float, window: Window, cfg: TraceConfig | None = None,
                   ctx: GammaContext | None = None) -> SandwichReport:
    """Trace ``A_g = theta`` and measure how far A strays from theta on it."""
    if window.y_min < 2:
        raise PreconditionError("the window must lie in Im z > 2")
    curve = trace_g_level(theta, window, cfg, ctx=ctx)
    return SandwichReport(theta, curve, curve.phase() - theta)
