"""Mixed generalized power series evaluated on surface points.

A series ``F(X, Y) = sum a X**alpha Y**beta`` has real exponents ``alpha >= 0``
on the generalized indeterminates and natural exponents ``beta`` on the
standard ones.  Only finitely many terms are stored; an optional tail bound
``(r, s) -> float`` bounds the omitted absolute mass ``sum |a| r**alpha s**beta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError, PreconditionError
from .surface import LogPoint, LogVector, chart_E

__all__ = [
    "Term",
    "MixedSeries",
    "ZetaSeries",
    "SplitPair",
    "ZetaValue",
    "eval_series",
    "eval_series_with_bound",
    "series_norm",
    "unit_norm_radius",
    "split_real_imag",
    "zeta_eval",
    "zeta_eval_detailed",
    "leading_factorization",
    "crossing_probe",
    "crossing_values",
]

TailBound = Callable[[np.ndarray, np.ndarray], float]


class Term(NamedTuple):
    alpha: tuple[float, ...]
    beta: tuple[int, ...]
    coeff: complex


def _vec(v, length=None) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if length is not None and a.size == 1 and length > 1:
        a = np.full(length, float(a[0]))
    return a


@dataclass(frozen=True)
class MixedSeries:
    m: int
    n: int
    terms: tuple[Term, ...] = ()
    tail_bound: TailBound | None = field(default=None, compare=False)

    def __post_init__(self):
        terms = []
        seen = set()
        for t in self.terms:
            alpha = tuple(float(a) for a in t[0])
            beta = tuple(int(b) for b in t[1])
            coeff = complex(t[2])
            if len(alpha) != self.m or len(beta) != self.n:
                raise ParameterError("term arity does not match (m, n)")
            if any(a < 0 or math.isnan(a) for a in alpha) or any(b < 0 for b in beta):
                raise ParameterError("exponents must be nonnegative")
            if coeff == 0:
                raise ParameterError("stored coefficients must be nonzero")
            key = (alpha, beta)
            if key in seen:
                raise ParameterError(f"duplicate exponent pair {key}")
            seen.add(key)
            terms.append(Term(alpha, beta, coeff))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def build(cls, m: int, n: int, terms, tail_bound: TailBound | None = None) -> "MixedSeries":
        """Merge terms with identical exponents and drop zero coefficients."""
        acc: dict = {}
        for t in terms:
            key = (tuple(float(a) for a in t[0]), tuple(int(b) for b in t[1]))
            acc[key] = acc.get(key, 0) + complex(t[2])
        return cls(m, n, tuple(Term(a, b, c) for (a, b), c in acc.items() if c != 0), tail_bound)

    @classmethod
    def univariate(cls, coeffs: dict, tail_bound: TailBound | None = None) -> "MixedSeries":
        """``{alpha: a}`` in one generalized indeterminate."""
        return cls.build(1, 0, [((a,), (), c) for a, c in coeffs.items()], tail_bound)

    # -- arrays --------------------------------------------------------------

    @property
    def alphas(self) -> np.ndarray:
        return np.array([t.alpha for t in self.terms], dtype=float).reshape(len(self.terms), self.m)

    @property
    def betas(self) -> np.ndarray:
        return np.array([t.beta for t in self.terms], dtype=int).reshape(len(self.terms), self.n)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=complex)

    @property
    def is_real(self) -> bool:
        return all(t.coeff.imag == 0 for t in self.terms)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, x, y=()) -> complex:
        x = _as_logvector(x, self.m)
        y = np.asarray(y, dtype=complex).reshape(-1)
        if y.size != self.n:
            raise ParameterError(f"expected {self.n} standard arguments, got {y.size}")
        if not self.terms:
            return 0j
        A = self.alphas
        mods = x.moduli
        with np.errstate(divide="ignore"):
            mag = np.prod(np.power(mods[None, :], A), axis=1)
        phase = A @ x.args
        std = np.prod(np.power(y[None, :], self.betas), axis=1) if self.n else 1.0
        vals = self.coeffs * mag * np.exp(1j * phase) * std
        return complex(math.fsum(vals.real), math.fsum(vals.imag))

    def tail(self, r, s=()) -> float:
        if self.tail_bound is None:
            return 0.0
        return float(self.tail_bound(_vec(r, self.m), _vec(s, self.n) if self.n else np.zeros(0)))

    def norm(self, r, s=()) -> float:
        r = _vec(r, self.m)
        s = _vec(s, self.n) if self.n else np.zeros(0)
        if self.terms:
            parts = np.abs(self.coeffs) * np.prod(np.power(r[None, :], self.alphas), axis=1)
            if self.n:
                parts = parts * np.prod(np.power(s[None, :], self.betas), axis=1)
            total = math.fsum(parts)
        else:
            total = 0.0
        return total + self.tail(r, s)

    # -- JSON ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "terms": [{"alpha": list(t.alpha), "beta": list(t.beta),
                           "re": t.coeff.real, "im": t.coeff.imag} for t in self.terms]}

    @classmethod
    def from_json(cls, obj) -> "MixedSeries":
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms = [(t["alpha"], t.get("beta", []), complex(t.get("re", 0.0), t.get("im", 0.0)))
                 for t in obj["terms"]]
        return cls.build(int(obj["m"]), int(obj.get("n", 0)), terms)


def _as_logvector(x, m: int) -> LogVector:
    if isinstance(x, LogPoint):
        x = LogVector((x,))
    elif not isinstance(x, LogVector):
        x = LogVector.of(*x)
    if len(x) != m:
        raise ParameterError(f"expected {m} generalized arguments, got {len(x)}")
    return x


@dataclass(frozen=True)
class ZetaSeries:
    """``sum_{start <= n <= N} X**log(n)`` with a certified bound on the rest.

    ``start=1`` gives the series of the zeta function, ``start=2`` the part
    without constant term.  The omitted mass at radius ``t`` is
    ``sum_{n > N} n**log(t)``; the summand is convex and decreasing in ``n``,
    so it is at most ``int_{N+1/2}^inf x**log(t) dx``.
    """

    N: int
    start: int = 1
    chunk: int = 1 << 20
    m: int = field(default=1, init=False)
    n: int = field(default=0, init=False)

    def __post_init__(self):
        if self.N < 2 or self.start not in (1, 2) or self.N < self.start:
            raise ParameterError("need N >= 2 and start in {1, 2}")

    def _sum(self, s: complex) -> complex:
        """``sum_{start<=n<=N} n**(-s)``."""
        real = complex(s).imag == 0
        total = 0.0 if real else 0j
        for lo in range(self.start, self.N + 1, self.chunk):
            ln = np.log(np.arange(lo, min(lo + self.chunk, self.N + 1), dtype=float))
            if real:
                total += math.fsum(np.exp(-s.real * ln))
            else:
                v = np.exp(-complex(s) * ln)
                total += complex(math.fsum(v.real), math.fsum(v.imag))
        return complex(total)

    def evaluate(self, x, y=()) -> complex:
        x = _as_logvector(x, 1)[0]
        if x.mod == 0:
            return 1.0 + 0j if self.start == 1 else 0j
        return self._sum(complex(-math.log(x.mod), -x.arg))

    def tail(self, r, s=()) -> float:
        lt = math.log(float(_vec(r)[0]))
        if lt >= -1.0:
            return math.inf
        return (self.N + 0.5) ** (1.0 + lt) / (-1.0 - lt)

    def norm(self, r, s=()) -> float:
        t = float(_vec(r)[0])
        tail = self.tail(t)
        if math.isinf(tail):
            return math.inf
        return self._sum(-math.log(t)).real + tail

    def tail_bound(self, r, s=()) -> float:
        return self.tail(r, s)


def eval_series(F, x, y=()) -> complex:
    return F.evaluate(x, y)


def eval_series_with_bound(F, x, y=()) -> tuple[complex, float]:
    """Value and the tail bound evaluated at ``(|x|, |y|)``."""
    x = _as_logvector(x, F.m)
    return F.evaluate(x, y), F.tail(x.moduli, np.abs(np.asarray(y, dtype=complex)))


def series_norm(F, r, s=()) -> float:
    return F.norm(r, s)


def unit_norm_radius(G, rel_tol: float = 1e-10) -> float:
    """``sup {t > 0 : ||G||_t < 1}`` by bisection (the norm increases with t)."""
    if isinstance(G, MixedSeries) and any(
            all(a == 0 for a in t.alpha) and all(b == 0 for b in t.beta) for t in G.terms):
        raise PreconditionError("G must vanish at the origin")

    def f(t):
        return G.norm(np.full(G.m, t), np.full(G.n, t))

    lo = 1.0
    while f(lo) >= 1.0:
        lo /= 2
        if lo < 1e-300:
            return 0.0
    hi = lo * 2
    while f(hi) < 1.0:
        lo = hi
        hi *= 2
        if hi > 1e300:
            return math.inf
    while hi - lo > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if f(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return lo


# -- real/imaginary splitting ------------------------------------------------

@dataclass(frozen=True)
class SplitPair:
    """Real-coefficient series G, H in generalized X and standard (U, Y, V)."""

    G: MixedSeries
    H: MixedSeries
    depth: int
    tail_bound: float

    def evaluate(self, x, u, y=(), v=()) -> complex:
        """``G + iH`` at real ``x > 0``, angles ``u`` and real ``y, v``."""
        xs = LogVector.of(*[(float(a), 0.0) for a in np.atleast_1d(x)])
        std = np.concatenate([np.atleast_1d(u), np.atleast_1d(y), np.atleast_1d(v)]).astype(float)
        std = std[: self.G.n]
        return complex(self.G.evaluate(xs, std).real, self.H.evaluate(xs, std).real)


def _trig_poly(alpha: float, depth: int) -> dict[int, complex]:
    """Taylor polynomial of ``e^{i alpha U}`` to degree ``depth``."""
    if alpha == 0:
        return {0: 1.0 + 0j}
    return {k: (1j * alpha) ** k / factorial(k) for k in range(depth + 1)}


def _poly_product(polys: Sequence[dict]) -> dict[tuple, complex]:
    out: dict[tuple, complex] = {(): 1.0 + 0j}
    for p in polys:
        nxt: dict[tuple, complex] = {}
        for key, c in out.items():
            for e, d in p.items():
                k2 = key + (e,)
                nxt[k2] = nxt.get(k2, 0) + c * d
        out = nxt
    return out


def _exp_partial(x: float, depth: int) -> float:
    return math.fsum(x ** k / factorial(k) for k in range(depth + 1))


def split_real_imag(F: MixedSeries, r_prime, rho, depth: int, s=None) -> SplitPair:
    """Expand ``F((x, u), y + iv)`` into real and imaginary series.

    The angle factor ``e^{i alpha u}`` is replaced by its Taylor polynomial of
    degree ``depth`` in each ``u_j``; ``(y + iv)**beta`` is expanded exactly.
    The returned bound holds for ``0 < x < r_prime``, ``|u| < rho`` and
    ``|y|, |v| < s/2``.
    """
    if not isinstance(F, MixedSeries):
        raise ParameterError("splitting needs a MixedSeries")
    m, n = F.m, F.n
    r_prime = _vec(r_prime, m)
    rho = _vec(rho, m)
    s = _vec(1.0 if s is None else s, n) if n else np.zeros(0)
    if depth < 0:
        raise ParameterError("depth must be nonnegative")
    if not math.isfinite(F.norm(r_prime * np.exp(rho), s)):
        raise ConvergenceError("r' e^rho is outside the polyradius of convergence")

    acc: dict[tuple, complex] = {}
    trunc = 0.0
    for alpha, beta, a in F.terms:
        trig = _poly_product([_trig_poly(al, depth) for al in alpha])
        binoms = [{(bl - q, q): comb(bl, q) * (1j) ** q for q in range(bl + 1)} for bl in beta]
        std = _poly_product(binoms)
        for eu, c1 in trig.items():
            for eyv, c2 in std.items():
                ey = tuple(e[0] for e in eyv)
                ev = tuple(e[1] for e in eyv)
                key = (alpha, tuple(eu) + ey + ev)
                acc[key] = acc.get(key, 0) + a * c1 * c2
        full = math.prod(math.exp(rh * al) for rh, al in zip(rho, alpha))
        kept = math.prod(_exp_partial(rh * al, depth) if al else 1.0 for rh, al in zip(rho, alpha))
        weight = abs(a) * float(np.prod(r_prime ** np.asarray(alpha)))
        if n:
            weight *= float(np.prod(s ** np.asarray(beta)))
        trunc += weight * max(full - kept, 0.0)
    if F.tail_bound is not None:
        trunc += F.tail(r_prime * np.exp(rho), s)

    n_std = m + 2 * n
    G = MixedSeries.build(m, n_std, [(k[0], k[1], c.real) for k, c in acc.items() if c.real != 0])
    H = MixedSeries.build(m, n_std, [(k[0], k[1], c.imag) for k, c in acc.items() if c.imag != 0])
    return SplitPair(G, H, depth, trunc)


# -- zeta ------------------------------------------------------------------

class ZetaValue(NamedTuple):
    value: complex
    err_bound: float
    N: int


def zeta_eval_detailed(w: complex, tol: float = 1e-10, delta: float = 1e-3) -> ZetaValue:
    """zeta(w) for Re w >= 1 + delta through the generalized series ``sum X**log n``.

    The series is summed at the surface point ``(e^{-Re w}, -Im w)`` up to N
    terms, and the rest is replaced by ``N**(1-w)/(w-1) - N**(-w)/2`` whose
    error is at most ``|w| N**(-Re w) / (2 Re w)``.  N is the smallest index
    making that bound smaller than ``tol``.
    """
    w = complex(w)
    sigma = w.real
    if sigma <= 1.0:
        raise DomainError("the Dirichlet series needs Re w > 1")
    if sigma < 1.0 + delta:
        raise DomainError(f"Re w must be at least 1 + {delta:g}")
    N = max(2, math.ceil((abs(w) / (2 * sigma * tol)) ** (1.0 / sigma)))
    point = chart_E(w).conjugate() if w.imag else chart_E(w)
    partial = ZetaSeries(N, start=1).evaluate(point)
    tail = N ** (1 - w) / (w - 1) - N ** (-w) / 2
    bound = abs(w) * N ** (-sigma) / (2 * sigma)
    return ZetaValue(partial + tail, bound, N)


def zeta_eval(w: complex, tol: float = 1e-10, delta: float = 1e-3) -> complex:
    return zeta_eval_detailed(w, tol, delta).value


# -- crossings -------------------------------------------------------------

def leading_factorization(F: MixedSeries):
    """Write ``F - F(0) = a0 X**alpha0 (1 + G)``; returns ``(F(0), alpha0, a0, G)``."""
    if F.m != 1 or F.n != 0:
        raise ParameterError("crossing analysis needs a univariate generalized series")
    const = sum((t.coeff for t in F.terms if t.alpha[0] == 0), 0j)
    rest = [t for t in F.terms if t.alpha[0] > 0]
    if not rest:
        raise PreconditionError("F is constant")
    lead = min(rest, key=lambda t: t.alpha[0])
    alpha0, a0 = lead.alpha[0], lead.coeff
    G = MixedSeries.build(1, 0, [((t.alpha[0] - alpha0,), (), t.coeff / a0)
                                 for t in rest if t is not lead])
    return const, alpha0, a0, G


def crossing_values(F: MixedSeries, modulus: float, t) -> np.ndarray:
    """``(F(gamma(t)) - F(0)) / (a0 |gamma|**alpha0)`` along ``gamma(t) = (modulus, t)``."""
    const, alpha0, a0, _ = leading_factorization(F)
    t = np.asarray(t, dtype=float)
    A = F.alphas[:, 0]
    c = F.coeffs
    keep = A > 0
    vals = (c[keep][None, :] * modulus ** A[keep][None, :]
            * np.exp(1j * np.outer(t, A[keep]))).sum(axis=1)
    return vals / (a0 * modulus ** alpha0)


def crossing_probe(F: MixedSeries, modulus: float, arg_max: float, samples: int | None = None) -> int:
    """Sign changes of ``Im delta(t)`` on the grid ``t_k = arg_max k / samples``.

    Requires ``||G||_modulus < 1`` so that ``1 + G`` never vanishes; then each
    sign change is a crossing of the real axis by the curve.
    """
    const, alpha0, a0, G = leading_factorization(F)
    if not (modulus > 0):
        raise ParameterError("modulus must be positive")
    if G.norm(modulus) >= 1.0:
        raise PreconditionError("||G|| >= 1 on the circle; crossings are not guaranteed")
    if samples is None:
        top = float(F.alphas[:, 0].max())
        samples = max(1000, math.ceil(16 * arg_max * top / math.pi))
    t = arg_max * np.arange(1, samples + 1) / samples
    im = crossing_values(F, modulus, t).imag
    sign = np.sign(im)
    sign = sign[sign != 0]
    return int(np.count_nonzero(sign[1:] != sign[:-1]))
