"""The Stirling function phi, with log Gamma(z) = log(2 pi)/2 + (z - 1/2) log z - z + phi(z).

phi is the Borel-Laplace sum of its divergent asymptotic series
``sum_k B_2k / (2k (2k-1)) z**(1-2k)``.  Concretely it is the Laplace integral
of the Binet kernel ``kappa(t) = (t/(e^t - 1) - 1 + t/2) / t**2`` along a ray in
the right half-plane; the Laplace image of the k-th Taylor term of ``kappa`` is
exactly the k-th term of the asymptotic series.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .quadrature import integrate_panels, panel_rule

__all__ = [
    "BernoulliTable",
    "StirlingSeries",
    "StirlingEngine",
    "AsymptoticValue",
    "bernoulli",
    "bernoulli_numbers",
    "stirling_coeff",
    "stirling_series",
    "kappa",
    "phi",
    "phi2",
    "phi_array",
    "phi_binet",
    "phi_asymptotic",
    "phi_derivative",
    "odd_support_check",
    "empirical_phi_bound",
    "default_engine",
]

LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """Exact ``B_0, ..., B_n`` from ``sum_{j<=m} C(m+1, j) B_j = 0`` (so B_1 = -1/2)."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        if m > 1 and m % 2:
            B.append(Fraction(0))
            continue
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return tuple(B)


@dataclass(frozen=True)
class BernoulliTable:
    """Even Bernoulli numbers ``B_2, ..., B_2K``."""

    K: int
    exact: tuple[Fraction, ...]
    values: tuple[float, ...]

    def __getitem__(self, n: int) -> Fraction:
        """``B_n`` for any ``0 <= n <= 2K``."""
        if n < 0 or n > 2 * self.K:
            raise IndexError(n)
        return bernoulli_numbers(2 * self.K)[n]

    def generating_sum(self, x: float) -> float:
        """Truncated ``sum_k B_2k x**2k / (2k)!``."""
        return math.fsum(float(b * Fraction(x) ** (2 * k) / factorial(2 * k))
                         for k, b in enumerate(self.exact, start=1))


def bernoulli(K: int) -> BernoulliTable:
    if K < 1:
        raise ParameterError("K must be at least 1")
    B = bernoulli_numbers(2 * K)
    exact = tuple(B[2 * k] for k in range(1, K + 1))
    return BernoulliTable(K, exact, tuple(float(b) for b in exact))


@lru_cache(maxsize=None)
def stirling_coeff(k: int) -> Fraction:
    """``c_k = B_2k / (2k (2k - 1))``."""
    if k < 1:
        raise ParameterError("k must be at least 1")
    return bernoulli_numbers(2 * k)[2 * k] / (2 * k * (2 * k - 1))


@dataclass(frozen=True)
class StirlingSeries:
    K: int
    exact: tuple[Fraction, ...]
    coeffs: tuple[float, ...]

    def ratios(self) -> np.ndarray:
        """``|c_{k+1} / c_k|`` for k = 1..K-1; grows without bound."""
        c = np.abs(np.array(self.coeffs))
        return c[1:] / c[:-1]


def stirling_series(K: int) -> StirlingSeries:
    exact = tuple(stirling_coeff(k) for k in range(1, K + 1))
    return StirlingSeries(K, exact, tuple(float(c) for c in exact))


# Taylor coefficients of kappa in t**2, used for |t| < 1 (radius is 2 pi).
_KAPPA_TAYLOR = np.array([float(bernoulli_numbers(2 * k)[2 * k] / factorial(2 * k))
                          for k in range(1, 16)])[::-1]


def kappa(t):
    """Binet kernel ``(1/(e^t - 1) - 1/t + 1/2) / t``, analytic at 0 with value 1/12."""
    t = np.asarray(t, dtype=complex)
    out = np.empty_like(t)
    small = np.abs(t) < 1.0
    out[small] = np.polyval(_KAPPA_TAYLOR, t[small] ** 2)
    tl = t[~small]
    with np.errstate(over="ignore", invalid="ignore"):
        out[~small] = (1.0 / np.expm1(tl) - 1.0 / tl + 0.5) / tl
    return out


class AsymptoticValue(NamedTuple):
    value: complex
    err_bound: float
    terms: int
    degenerate: bool


def _lower_rep(z):
    """Map to the closed lower half-plane; returns (w, flipped)."""
    flip = z.imag > 0
    return np.where(flip, np.conj(z), z), flip


@dataclass
class StirlingEngine:
    """Evaluates phi and its relatives.

    ``z_min`` is the modulus above which the fixed-node Laplace rule is used;
    smaller arguments are moved there by the recurrence of log Gamma.
    ``edges``/``order`` define that rule in the scaled variable
    ``u = Re(z e^{i theta}) |t|``.
    """

    z_min: float = 8.0
    max_rotation: float = 1.2
    edges: tuple[float, ...] = (0.0, 2.0, 6.0, 14.0, 26.0, 45.0)
    order: int = 10
    tol: float = 1e-12
    chunk: int = 8192
    _nodes: np.ndarray = field(init=False, repr=False)
    _weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._nodes, self._weights = panel_rule(self.edges, self.order)

    # -- Laplace integrals -------------------------------------------------

    def binet_fixed(self, z):
        """Rotated-ray Laplace integral of kappa on a fixed rule; needs |z| >~ z_min, Re z >= 0."""
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        flat_in, flat_out = z.ravel(), out.reshape(-1)
        u, w = self._nodes, self._weights
        for s in range(0, flat_in.size, self.chunk):
            zc = flat_in[s:s + self.chunk]
            th = np.clip(-np.angle(zc), -self.max_rotation, self.max_rotation)
            e = np.exp(1j * th)
            zr = zc * e
            c = zr.real
            vals = kappa(u[None, :] * (e / c)[:, None]) * np.exp(-(zr / c)[:, None] * u[None, :])
            flat_out[s:s + self.chunk] = e / c * (vals @ w)
        return out

    def phi_binet(self, z: complex, theta: float = 0.0, tol: float | None = None,
                  with_error: bool = False):
        """Adaptive Laplace integral of kappa along the ray ``arg t = theta``."""
        z = complex(z)
        if not (-math.pi / 2 < theta < math.pi / 2):
            raise ParameterError("direction must lie in (-pi/2, pi/2)")
        e = cmath.exp(1j * theta)
        c = (z * e).real
        if not c > 0:
            raise ConvergenceError(f"Laplace integral diverges: Re(z e^(i theta)) = {c:g} <= 0")
        tol = self.tol if tol is None else tol
        # cut-off where |kappa(T e^{i theta})| e^{-cT} < 1e-18
        T = 41.45 / c
        for _ in range(5):
            T = (41.45 + math.log(abs(kappa(T * e)))) / c

        def integrand(s):
            t = s * e
            return kappa(t) * np.exp(-z * t) * e

        val, err = integrate_panels(integrand, 0.0, T, tol=tol, order=20, panels=4)
        val = complex(val)
        if with_error:
            return val, float(err) + 4 * np.finfo(float).eps * abs(val)
        return val

    def phi_derivative(self, z: complex, n: int = 1, tol: float | None = None) -> complex:
        """``d^n phi / dz^n = int (-t)^n kappa(t) e^{-zt} dt`` along the positive axis."""
        z = complex(z)
        if not z.real > 0:
            raise DomainError("derivative integral needs Re z > 0")
        tol = self.tol if tol is None else tol
        T = max(60.0 / z.real, 1.0)
        val, _ = integrate_panels(lambda t: (-t) ** n * kappa(t) * np.exp(-z * t),
                                  0.0, T, tol=tol, order=20, panels=4)
        return complex(val)

    # -- phi on the slit plane -------------------------------------------

    def _phi_large(self, z):
        """phi for |z| >= z_min off the cut (vectorized, Schwarz-symmetric)."""
        w, flip = _lower_rep(z)
        out = np.empty(w.shape, dtype=complex)
        right = w.real >= 0
        if np.any(right):
            out[right] = self.binet_fixed(w[right])
        left = ~right
        if np.any(left):
            wl = w[left]
            with np.errstate(invalid="ignore"):
                corr = np.log1p(-np.exp(-2j * np.pi * wl))
            vals = -self.binet_fixed(-wl) - corr
            vals[wl.imag == 0] = np.nan
            out[left] = vals
        return np.where(flip, np.conj(out), out)

    def phi_array(self, z):
        """Vectorized phi; points of the cut (-inf, 0] give nan."""
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, np.nan + 0j)
        cut = (z.imag == 0) & (z.real <= 0)
        ok = ~cut & np.isfinite(z)
        big = ok & (np.abs(z) >= self.z_min)
        if np.any(big):
            out[big] = self._phi_large(z[big])
        small = ok & ~big
        if np.any(small):
            out[small] = self._phi_shifted(z[small])
        return out

    def shift_count(self, z):
        """Smallest m >= 0 with |z + m| >= z_min."""
        z = np.asarray(z, dtype=complex)
        y2 = np.minimum(z.imag ** 2, self.z_min ** 2)
        m = np.maximum(np.ceil(np.sqrt(self.z_min ** 2 - y2) - z.real), 0).astype(int)
        m = np.where(np.abs(z) >= self.z_min, 0, m)
        # guard against rounding in the square root
        m = np.where(np.abs(z + m) < self.z_min, m + 1, m)
        return m

    def _phi_shifted(self, z):
        m = self.shift_count(z)
        zm = z + m
        logsum = np.zeros(z.shape, dtype=complex)
        for j in range(int(m.max(initial=0))):
            sel = j < m
            logsum[sel] += np.log(z[sel] + j)
        return (self._phi_large(zm) + (zm - 0.5) * np.log(zm) - (z - 0.5) * np.log(z)
                - m - logsum)

    def phi(self, z):
        """phi on C minus (-inf, 0]; scalars raise DomainError on the cut."""
        if np.ndim(z) == 0:
            zc = complex(z)
            if zc.imag == 0 and zc.real <= 0:
                raise DomainError(f"phi is undefined on the cut: {zc}")
            return complex(self.phi_array(np.array([zc]))[0])
        z = np.asarray(z, dtype=complex)
        if np.any((z.imag == 0) & (z.real <= 0)):
            raise DomainError("phi is undefined on the cut (-inf, 0]")
        return self.phi_array(z)

    def phi2(self, z):
        """The sum in the opposite half-plane of directions: ``-phi(-z)``."""
        if np.ndim(z) == 0:
            zc = complex(z)
            if zc.imag == 0 and zc.real >= 0:
                raise DomainError(f"phi2 is undefined on [0, inf): {zc}")
            return -self.phi(-zc)
        z = np.asarray(z, dtype=complex)
        if np.any((z.imag == 0) & (z.real >= 0)):
            raise DomainError("phi2 is undefined on [0, inf)")
        return -self.phi(-z)


def phi_asymptotic(z: complex, order: int | str = "optimal", max_terms: int = 80) -> AsymptoticValue:
    """Truncated asymptotic series with a bound on the remainder.

    ``order="optimal"`` truncates at ``floor(pi |z|)`` terms (capped at
    ``max_terms``); an integer ``order`` is capped by the same index.  The bound
    is the first omitted term times ``sec(arg z / 2)**(2N+2)`` plus a floating
    point summation allowance; on the positive axis the series alternates and
    the bound is rigorous.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0 and z.real < 0):
        raise DomainError("asymptotic series needs z != 0 and |arg z| < pi")
    r = abs(z)
    n_opt = min(int(math.floor(math.pi * r)), max_terms)
    if order == "optimal":
        N = n_opt
    else:
        N = min(int(order), max(n_opt, 1)) if order != 0 else 0
    inv = 1.0 / z
    inv2 = inv * inv
    power = inv
    terms = []
    for k in range(1, N + 1):
        terms.append(float(stirling_coeff(k)) * power)
        power *= inv2
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    first_omitted = abs(float(stirling_coeff(N + 1))) * r ** (-1 - 2 * N)
    half = abs(cmath.phase(z)) / 2
    sec = 1.0 / math.cos(half)
    trunc = first_omitted * sec ** (2 * N + 2)
    rounding = 4 * np.finfo(float).eps * sum(abs(t) for t in terms)
    return AsymptoticValue(value, trunc + rounding, N, r < 1 or trunc > abs(value))


def odd_support_check(K: int) -> bool:
    """Every term ``c_k (i t)**(1-2k)`` is purely imaginary (exponents are odd)."""
    i_pow = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
    for k in range(1, K + 1):
        re, _ = i_pow[(1 - 2 * k) % 4]
        if stirling_coeff(k) * re != 0:
            return False
    return True


def empirical_phi_bound(engine: "StirlingEngine | None" = None, max_arg: float = 2 * math.pi / 3,
                        r_min: float = 1.0, r_max: float = 1e3, n_r: int = 60, n_arg: int = 61):
    """Sup of |phi| over ``r_min <= |z| <= r_max``, ``|arg z| <= max_arg`` on a log-polar grid."""
    engine = engine or default_engine()
    r = np.geomspace(r_min, r_max, n_r)
    a = np.linspace(-max_arg, max_arg, n_arg)
    z = r[:, None] * np.exp(1j * a[None, :])
    return float(np.max(np.abs(engine.phi_array(z))))


_DEFAULT: StirlingEngine | None = None


def default_engine() -> StirlingEngine:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = StirlingEngine()
    return _DEFAULT


def phi(z):
    return default_engine().phi(z)


def phi2(z):
    return default_engine().phi2(z)


def phi_array(z):
    return default_engine().phi_array(z)


def phi_binet(z, theta: float = 0.0, tol: float | None = None, with_error: bool = False):
    return default_engine().phi_binet(z, theta, tol=tol, with_error=with_error)


def phi_derivative(z, n: int = 1):
    return default_engine().phi_derivative(z, n)
