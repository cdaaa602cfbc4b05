"""Points, charts and generalized sectors on the Riemann surface of the logarithm.

A point of the closed surface is a ``(modulus, argument)`` pair with the
argument kept unreduced, so distinct sheets stay distinct.  The origin is the
single point ``(0, 0)``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "LogPoint",
    "LogVector",
    "SectorSpec",
    "ClassicSectorSpec",
    "DerivedSpecs",
    "SectorClass",
    "ORIGIN",
    "project_pi",
    "lift_pi0",
    "chart_L",
    "chart_E",
    "log_power",
    "rotate_scale",
    "in_sector",
    "in_classic_sector",
    "derive_inner_specs",
]


@dataclass(frozen=True)
class LogPoint:
    mod: float
    arg: float = 0.0

    def __post_init__(self):
        if not (self.mod >= 0.0) or math.isnan(self.arg):
            raise DomainError(f"invalid surface point ({self.mod}, {self.arg})")
        if self.mod == 0.0 and self.arg != 0.0:
            raise DomainError("the origin of the surface has argument 0")

    def conjugate(self) -> "LogPoint":
        return LogPoint(self.mod, -self.arg) if self.mod else self

    def to_json(self) -> dict:
        return {"mod": self.mod, "arg": self.arg}

    @classmethod
    def from_json(cls, obj) -> "LogPoint":
        return cls(float(obj["mod"]), float(obj["arg"]))


ORIGIN = LogPoint(0.0, 0.0)


@dataclass(frozen=True)
class LogVector:
    components: tuple[LogPoint, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ParameterError("a LogVector needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *points) -> "LogVector":
        """Build from LogPoints or ``(mod, arg)`` pairs."""
        return cls(tuple(p if isinstance(p, LogPoint) else LogPoint(*p) for p in points))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    @property
    def moduli(self) -> np.ndarray:
        return np.array([p.mod for p in self.components])

    @property
    def args(self) -> np.ndarray:
        return np.array([p.arg for p in self.components])

    def conjugate(self) -> "LogVector":
        return LogVector(tuple(p.conjugate() for p in self.components))

    def to_json(self) -> list:
        return [p.to_json() for p in self.components]

    @classmethod
    def from_json(cls, obj) -> "LogVector":
        return cls(tuple(LogPoint.from_json(o) for o in obj))


def _as_vector(z) -> LogVector:
    if isinstance(z, LogVector):
        return z
    if isinstance(z, LogPoint):
        return LogVector((z,))
    return LogVector.of(*z)


@dataclass(frozen=True)
class SectorSpec:
    """The data ``(K, R, phi, r, p)`` of a generalized sector and its enlargement."""

    K: tuple[tuple[float, ...], ...]
    R: tuple[float, ...]
    phi: float
    r: float = 2.0
    p: int = 0

    def __post_init__(self):
        K = tuple(tuple(float(c) for c in k) for k in self.K)
        R = tuple(float(c) for c in self.R)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "R", R)
        if not K:
            raise ParameterError("K must be nonempty")
        m = len(R)
        if any(len(k) != m for k in K):
            raise ParameterError("weight vectors and polyradius differ in length")
        if any(c < 0 for k in K for c in k):
            raise ParameterError("weights must be nonnegative")
        if any(not (c > 0) for c in R):
            raise ParameterError("polyradius entries must be positive")
        if not (0.0 < self.phi < math.pi):
            raise ParameterError("phi must lie in (0, pi)")
        if not (self.r > 1.0):
            raise ParameterError("r must exceed 1")
        if self.p < 0 or int(self.p) != self.p:
            raise ParameterError("p must be a natural number")

    @property
    def m(self) -> int:
        return len(self.R)

    @property
    def M(self) -> float:
        return max(sum(k) for k in self.K)


@dataclass(frozen=True)
class ClassicSectorSpec:
    """Polysector ``|z_i| < R_i`` and ``|arg z_i| < rho``."""

    R: tuple[float, ...]
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(float(c) for c in self.R))
        if any(not (c > 0) for c in self.R):
            raise ParameterError("polyradius entries must be positive")
        if not (self.rho > 0):
            raise ParameterError("aperture must be positive")


@dataclass(frozen=True)
class DerivedSpecs:
    M: float
    mu: float
    nu: float
    delta: float
    epsilon: float
    sigma: SectorSpec
    tau_prime: SectorSpec
    tau_double_prime: SectorSpec


class SectorClass(enum.Enum):
    IN_S = "InS"
    IN_DP = "InDp"
    OUTSIDE = "Outside"

    @property
    def in_sp(self) -> bool:
        return self is not SectorClass.OUTSIDE


def project_pi(z: LogPoint) -> complex:
    return complex(z.mod * math.cos(z.arg), z.mod * math.sin(z.arg))


def lift_pi0(w: complex) -> LogPoint:
    w = complex(w)
    if w.imag == 0.0 and w.real <= 0.0:
        raise DomainError(f"{w} lies on the branch cut (-inf, 0]")
    return LogPoint(abs(w), cmath.phase(w))


def chart_L(z: LogPoint) -> complex:
    if z.mod == 0.0:
        raise DomainError("the chart L is undefined at the origin")
    return complex(-math.log(z.mod), z.arg)


def chart_E(w: complex) -> LogPoint:
    w = complex(w)
    return LogPoint(math.exp(-w.real), w.imag)


def log_power(z, k: Sequence[float]) -> LogPoint:
    """``z**k = (prod |z_i|**k_i, sum k_i arg z_i)``."""
    z = _as_vector(z)
    k = [float(c) for c in k]
    if len(k) != len(z):
        raise ParameterError("dimension mismatch")
    if any(c < 0 for c in k):
        raise ParameterError("exponents must be nonnegative")
    mod = 1.0
    arg = 0.0
    for p, c in zip(z, k):
        if p.mod == 0.0:
            if c == 0.0:
                raise DomainError("0**0 on the surface is undefined")
            return ORIGIN
        mod *= p.mod ** c
        arg += c * p.arg
    return LogPoint(mod, arg)


def rotate_scale(z, w: Iterable[complex]) -> LogVector:
    """The coordinatewise product ``z E(i w)``."""
    z = _as_vector(z)
    w = [complex(c) for c in w]
    if len(w) != len(z):
        raise ParameterError("dimension mismatch")
    out = []
    for p, c in zip(z, w):
        if p.mod == 0.0:
            out.append(ORIGIN)
        else:
            out.append(LogPoint(p.mod * math.exp(-c.imag), p.arg + c.real))
    return LogVector(tuple(out))


def in_sector(z, spec: SectorSpec) -> SectorClass:
    """Classify ``z`` against ``S(K,R,phi)`` and its enlargement ``S_p``.

    ``IN_S`` when the point lies in the generalized sector, ``IN_DP`` when it
    lies only in the enlarged sector, i.e. every weight vector is satisfied by
    either the aperture condition or the small-polydisk condition and at least
    one needs the latter.
    """
    z = _as_vector(z)
    if len(z) != spec.m:
        raise ParameterError("dimension mismatch")
    mods = z.moduli
    R = np.asarray(spec.R)
    if not np.all(mods < R):
        return SectorClass.OUTSIDE
    absarg = np.abs(z.args)
    all_s = True
    for k in spec.K:
        kk = np.asarray(k)
        if float(kk @ absarg) < spec.phi:
            continue
        all_s = False
        zk = float(np.prod(mods ** kk))
        Rk = float(np.prod(R ** kk))
        if not (zk < Rk / (spec.p + 1)):
            return SectorClass.OUTSIDE
    return SectorClass.IN_S if all_s else SectorClass.IN_DP


def in_classic_sector(z, spec: ClassicSectorSpec) -> bool:
    z = _as_vector(z)
    if len(z) != len(spec.R):
        raise ParameterError("dimension mismatch")
    return bool(np.all(z.moduli < spec.R) and np.all(np.abs(z.args) < spec.rho))


def derive_inner_specs(tau: SectorSpec, mu: float, nu: float, rho=None) -> DerivedSpecs:
    """Shrunken sectors used to split a multisummable function into real parts.

    Requires ``pi/2 < phi < pi`` and ``0 < mu < nu < (phi - pi/2)/M``.  ``rho``
    is the polyradius of the definability sector (defaults to ``R'``).
    """
    if not (math.pi / 2 < tau.phi < math.pi):
        raise ParameterError("phi must lie in (pi/2, pi)")
    M = tau.M
    if M <= 0:
        raise ParameterError("K must contain a nonzero weight vector")
    bound = (tau.phi - math.pi / 2) / M
    if not (0.0 < mu < nu < bound):
        raise ParameterError(f"need 0 < mu < nu < {bound!r}, got mu={mu!r}, nu={nu!r}")
    delta = tau.phi - M * mu
    eps = tau.phi - M * nu
    if not (math.pi / 2 < eps < delta < tau.phi):
        raise ParameterError("ordering pi/2 < epsilon < delta < phi violated")
    R_prime = tuple(c * math.exp(-nu) for c in tau.R)
    if rho is None:
        rho = R_prime
    rho = tuple(float(c) for c in rho)
    if len(rho) != tau.m or not all(0 < a < b for a, b in zip(rho, tau.R)):
        raise ParameterError("rho must satisfy 0 < rho < R")
    sigma = SectorSpec(tau.K, R_prime, eps, tau.r, tau.p)
    tau1 = SectorSpec(tau.K, rho, mu, tau.r, tau.p)
    tau2 = SectorSpec(tau.K, R_prime, mu, tau.r, tau.p)
    return DerivedSpecs(M, mu, nu, delta, eps, sigma, tau1, tau2)
