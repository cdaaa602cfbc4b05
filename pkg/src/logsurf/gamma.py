"""Gamma via Stirling's formula, its phase A(z), and the region classifiers.

On the slit plane ``Gamma(z) = sqrt(2 pi) exp((z - 1/2) Log z - z + phi(z))``.
``A(z) = Im((z - 1/2) Log z - z + phi(z))`` is a continuous argument of Gamma
there, and the strips ``2 pi n <= A < 2 pi (n + 1)`` inside a sector around the
positive axis are the regions ``U_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, ParameterError, PoleError
from .stirling import LOG_SQRT_2PI, StirlingEngine, default_engine

__all__ = [
    "GammaContext",
    "RegionSpec",
    "default_context",
    "gamma",
    "gamma_oracle",
    "loggamma",
    "find_x0",
    "phase_A",
    "phase_Ag",
    "classify_Un",
    "classify_Vn",
    "un_index",
    "vn_index",
    "in_sector_inf",
    "dmod_dx",
    "dmod_dy",
    "mod_bracket_x",
    "mod_bracket_y",
    "g_tilde",
    "a_lower_bound",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286061
SQRT_2PI = math.sqrt(2 * math.pi)


def _on_cut(z):
    return (z.imag == 0) & (z.real <= 0)


def _is_pole(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


@dataclass
class GammaContext:
    stirling: StirlingEngine = field(default_factory=default_engine)
    z_min: float = 8.0
    _x0: float | None = field(default=None, repr=False)

    @property
    def x0(self) -> float:
        if self._x0 is None:
            self._x0 = find_x0(self)
        return self._x0

    # -- Gamma -------------------------------------------------------------

    def gamma_array(self, z):
        """Vectorized Gamma; poles give complex infinity."""
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        pole = _is_pole(z)
        out[pole] = complex(np.inf, np.nan)
        cut = _on_cut(z) & ~pole
        direct = ~pole & ~cut & (np.abs(z) >= self.z_min)
        if np.any(direct):
            zd = z[direct]
            with np.errstate(over="ignore"):
                out[direct] = SQRT_2PI * np.exp((zd - 0.5) * np.log(zd) - zd
                                                + self.stirling.phi_array(zd))
        shift = ~pole & ~direct
        if np.any(shift):
            zs = z[shift]
            m = self.stirling.shift_count(zs)
            neg = _on_cut(zs)
            m[neg] = np.ceil(self.z_min - zs.real[neg]).astype(int)
            denom = np.ones(zs.shape, dtype=complex)
            for j in range(int(m.max(initial=0))):
                sel = j < m
                denom[sel] *= zs[sel] + j
            top = zs + m
            with np.errstate(over="ignore"):
                num = SQRT_2PI * np.exp((top - 0.5) * np.log(top) - top + self.stirling.phi_array(top))
            out[shift] = num / denom
        return out

    def gamma(self, z):
        if np.ndim(z) == 0:
            zc = complex(z)
            if _is_pole(np.asarray(zc)):
                raise PoleError(f"Gamma has a pole at {zc.real:g}")
            return complex(self.gamma_array(np.array([zc]))[0])
        z = np.asarray(z, dtype=complex)
        if np.any(_is_pole(z)):
            raise PoleError("Gamma has poles at the nonpositive integers")
        return self.gamma_array(z)

    def loggamma(self, z):
        """Continuous log Gamma on the slit plane; nan on the cut."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = LOG_SQRT_2PI + (z - 0.5) * np.log(z) - z + self.stirling.phi_array(z)
        out[_on_cut(z)] = complex(np.nan, np.nan)
        return out

    def phase_A(self, z):
        """``Im((z - 1/2) Log z - z + phi(z))``; scalars raise on the cut."""
        if np.ndim(z) == 0:
            zc = complex(z)
            if _on_cut(np.asarray(zc)):
                raise DomainError(f"A is undefined on the cut: {zc}")
            return float(self.loggamma(np.array([zc]))[0].imag)
        return self.loggamma(z).imag

    def phase_Ag(self, z):
        """``Im((z - 1/2) Log z - z - phi(-z))``, the phase of g in the upper half-plane."""
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(z.imag <= 0):
            raise DomainError("A_g is used on Im z > 0 only")
        vals = ((z - 0.5) * np.log(z) - z - self.stirling.phi_array(-z)).imag
        return float(vals[0]) if scalar else vals


_DEFAULT: GammaContext | None = None


def default_context() -> GammaContext:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = GammaContext()
    return _DEFAULT


def gamma(z, ctx: GammaContext | None = None):
    return (ctx or default_context()).gamma(z)


def loggamma(z, ctx: GammaContext | None = None):
    return (ctx or default_context()).loggamma(z)


def phase_A(z, ctx: GammaContext | None = None):
    return (ctx or default_context()).phase_A(z)


def phase_Ag(z, ctx: GammaContext | None = None):
    return (ctx or default_context()).phase_Ag(z)


# -- independent oracle --------------------------------------------------------

def gamma_oracle(z, N: int = 2000, K: int = 12):
    """Gamma from the Weierstrass product ``1/Gamma = z e^{gz} prod (1 + z/n) e^{-z/n}``.

    The product is truncated at N factors; the rest of its logarithm,
    ``sum_{k>=2} (-1)^{k+1} z^k / k * zeta(k, N+1)``, is added through Hurwitz
    zeta values.  Meant for tests only.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_pole(z)):
        raise PoleError("Gamma has poles at the nonpositive integers")
    n = np.arange(1, N + 1, dtype=float)
    out = np.empty(z.shape, dtype=complex)
    hz = [special.zeta(k, N + 1) for k in range(2, K + 1)]
    flat, res = z.ravel(), out.reshape(-1)
    for s in range(0, flat.size, 512):
        zc = flat[s:s + 512]
        q = zc[:, None] / n[None, :]
        logs = (np.log1p(q) - q).sum(axis=1)
        tail = sum((-1) ** (k + 1) * zc ** k / k * h for k, h in zip(range(2, K + 1), hz))
        res[s:s + 512] = np.exp(-(np.log(zc) + EULER_GAMMA * zc + logs + tail))
    return complex(out[0]) if scalar else out


# -- x0 ------------------------------------------------------------------------

def find_x0(ctx: GammaContext | None = None, start: float = 1.5, tol: float = 1e-12,
            max_iter: int = 50) -> float:
    """Positive zero of Gamma' by Newton on the logarithmic derivative."""
    ctx = ctx or default_context()
    eng = ctx.stirling
    x = start
    for _ in range(max_iter):
        psi = math.log(x) + (x - 0.5) / x - 1 + eng.phi_derivative(x, 1).real
        dpsi = 1 / x + 0.5 / x ** 2 + eng.phi_derivative(x, 2).real
        step = psi / dpsi
        x -= step
        if abs(step) < 1e-15 * x:
            psi = math.log(x) + (x - 0.5) / x - 1 + eng.phi_derivative(x, 1).real
            g = abs(ctx.gamma(x))
            if g * abs(psi) < tol:
                return x
    raise ConvergenceError("Newton iteration for x0 did not converge")


# -- regions -------------------------------------------------------------------

@dataclass(frozen=True)
class RegionSpec:
    R: float
    alpha: float
    n: int | None = None

    def __post_init__(self):
        if not self.R > 0:
            raise ParameterError("R must be positive")
        if not (0 < self.alpha < math.pi / 2):
            raise ParameterError("alpha must lie in (0, pi/2)")


def in_sector_inf(z, R: float, alpha: float):
    """``|z| > R`` and ``|arg z| < alpha``."""
    z = np.asarray(z, dtype=complex)
    return (np.abs(z) > R) & (np.abs(np.angle(z)) < alpha)


def un_index(z, spec: RegionSpec, tilde: bool = False, ctx: GammaContext | None = None):
    """Vectorized ``floor(A / 2 pi)`` on the region, nan elsewhere."""
    ctx = ctx or default_context()
    z = np.asarray(z, dtype=complex)
    mask = in_sector_inf(z, spec.R, spec.alpha)
    if not tilde:
        mask &= z.real > ctx.x0
    out = np.full(z.shape, np.nan)
    if np.any(mask):
        out[mask] = np.floor(ctx.phase_A(z[mask]) / (2 * math.pi))
    return out


def classify_Un(z: complex, spec: RegionSpec, tilde: bool = False,
                ctx: GammaContext | None = None) -> int | None:
    """n with z in U_n(R, alpha) (or the larger tilde-U_n), None outside the sector."""
    v = un_index(np.array([complex(z)]), spec, tilde, ctx)[0]
    return None if np.isnan(v) else int(v)


def vn_index(z, spec: RegionSpec, ctx: GammaContext | None = None):
    ctx = ctx or default_context()
    z = np.asarray(z, dtype=complex)
    mask = in_sector_inf(-z, spec.R, spec.alpha) & (z.imag > 0)
    out = np.full(z.shape, np.nan)
    if np.any(mask):
        out[mask] = np.floor(ctx.phase_Ag(z[mask]) / (2 * math.pi))
    return out


def classify_Vn(z: complex, spec: RegionSpec, ctx: GammaContext | None = None) -> int | None:
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("V_n lives in the upper half-plane")
    v = vn_index(np.array([z]), spec, ctx)[0]
    return None if np.isnan(v) else int(v)


# -- modulus derivatives -------------------------------------------------------

def _auto_terms(x: float, y: float, err: float = 1e-12) -> int:
    # midpoint tail estimate error ~ scale / (12 N^3)
    scale = abs(x) + y * y + abs(y) + 1.0
    n = (scale / (12 * err)) ** (1 / 3) + abs(x)
    return int(min(max(n, 2 * abs(x) + 10, 1000), 2_000_000))


def mod_bracket_x(x: float, y: float, N: int | None = None) -> float:
    """``d log|Gamma(x+iy)| / dx`` from the Weierstrass product, with integral tail."""
    N = N or _auto_terms(x, y)
    n = np.arange(1, N + 1, dtype=float)
    s = math.fsum(1 / n - (n + x) / ((n + x) ** 2 + y * y))
    a = N + 0.5
    tail = -math.log(a) + 0.5 * math.log((a + x) ** 2 + y * y)
    return -EULER_GAMMA - x / (x * x + y * y) + s + tail


def mod_bracket_y(x: float, y: float, N: int | None = None) -> float:
    """``d log|Gamma(x+iy)| / dy``; negative for y > 0."""
    N = N or _auto_terms(x, y)
    n = np.arange(1, N + 1, dtype=float)
    s = math.fsum(y / ((x + n) ** 2 + y * y))
    a = N + 0.5
    tail = math.pi / 2 - math.atan((x + a) / y) if y else 0.0
    return -y / (x * x + y * y) - s - tail


def dmod_dx(x: float, y: float, N: int | None = None, ctx: GammaContext | None = None) -> float:
    return abs(gamma(complex(x, y), ctx)) * mod_bracket_x(x, y, N)


def dmod_dy(x: float, y: float, N: int | None = None, ctx: GammaContext | None = None) -> float:
    return abs(gamma(complex(x, y), ctx)) * mod_bracket_y(x, y, N)


# -- g and the lower bound -----------------------------------------------------

def g_tilde(z, ctx: GammaContext | None = None):
    """``Gamma(z) (1 - e^{2 pi i z})``."""
    ctx = ctx or default_context()
    if np.ndim(z) == 0:
        zc = complex(z)
        if _on_cut(np.asarray(zc)):
            raise DomainError(f"g is evaluated off the cut only: {zc}")
        return complex(ctx.gamma(zc) * -np.expm1(2j * math.pi * zc))
    z = np.asarray(z, dtype=complex)
    if np.any(_on_cut(z)):
        raise DomainError("g is evaluated off the cut only")
    return ctx.gamma(z) * -np.expm1(2j * np.pi * z)


def a_lower_bound(z: complex, B: float) -> float:
    """``|(x - 1/2) arccot(x/y) + y (log|z| - 1)| - B`` for ``y > 0`` (conjugated when y < 0)."""
    z = complex(z)
    if z.imag == 0:
        raise DomainError("the bound needs Im z != 0")
    x, y = z.real, abs(z.imag)
    arccot = math.pi / 2 - math.atan(x / y)
    return abs((x - 0.5) * arccot + y * (math.log(abs(z)) - 1)) - B
