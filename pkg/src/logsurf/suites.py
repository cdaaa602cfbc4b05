"""Randomized and grid-based invariant suites, shared by the CLI and the tests."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import genseries as gs
from .curves import curve_A_derivative, trace_mod_level
from .gamma import default_context, dmod_dx, dmod_dy, gamma
from .stirling import default_engine, odd_support_check, phi_asymptotic, stirling_coeff
from .surface import LogPoint, LogVector, SectorSpec, derive_inner_specs, in_sector, rotate_scale

__all__ = [
    "Check",
    "SUITES",
    "run_suite",
    "random_sector_family",
    "sample_in_sp",
    "sample_polydisk",
    "sector_mapping_trials",
    "random_finite_series",
]


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


# -- sector mapping---------------------------------------------------------------

def random_sector_family(rng: np.random.Generator):
    """A random ``(tau, mu, nu, derived)`` satisfying the parameter constraints."""
    m = int(rng.integers(1, 4))
    nk = int(rng.integers(1, 4))
    K = []
    for _ in range(nk):
        k = rng.uniform(0, 2, m) * (rng.random(m) < 0.8)
        if not k.any():
            k[rng.integers(m)] = rng.uniform(0.2, 2)
        K.append(tuple(k))
    R = tuple(rng.uniform(0.3, 3.0, m))
    phi = rng.uniform(math.pi / 2 + 0.05, math.pi - 0.01)
    tau = SectorSpec(tuple(K), R, phi, r=float(rng.uniform(1.1, 4)), p=int(rng.integers(0, 4)))
    bound = (phi - math.pi / 2) / tau.M
    nu = rng.uniform(0.05, 0.95) * bound
    mu = rng.uniform(0.05, 0.95) * nu
    return tau, mu, nu, derive_inner_specs(tau, mu, nu)


def sample_in_sp(rng: np.random.Generator, spec: SectorSpec, max_tries: int = 100_000) -> LogVector:
    """Rejection-sample a point of the enlarged sector ``S_p(spec)``."""
    R = np.asarray(spec.R)
    kmin = min(max(k) for k in spec.K)
    arg_scale = 2 * spec.phi / max(kmin, 1e-3)
    for _ in range(max_tries):
        mods = R * np.exp(-rng.exponential(1.5, spec.m))
        args = rng.uniform(-arg_scale, arg_scale, spec.m)
        z = LogVector(tuple(LogPoint(float(a), float(b)) for a, b in zip(mods, args)))
        if in_sector(z, spec).in_sp:
            return z
    raise RuntimeError("rejection sampling found no point of the sector")


def sample_polydisk(rng: np.random.Generator, m: int, radius: float) -> list[complex]:
    rad = radius * np.sqrt(rng.random(m))
    ang = rng.uniform(0, 2 * math.pi, m)
    return [complex(a) for a in rad * np.exp(1j * ang)]


def sector_mapping_trials(samples: int, families: int, seed: int):
    """Count failures of ``z in S_p(sigma), |w_j| < nu  =>  z E(iw) in S_p(tau)``.

    Returns ``(failures, trials, classes)`` where ``classes`` tallies how the
    sampled z were classified against sigma.
    """
    rng = np.random.default_rng(seed)
    per = [samples // families + (i < samples % families) for i in range(families)]
    failures, trials = [], 0
    classes = {"InS": 0, "InDp": 0}
    for count in per:
        tau, mu, nu, d = random_sector_family(rng)
        for _ in range(count):
            z = sample_in_sp(rng, d.sigma)
            classes[in_sector(z, d.sigma).value] += 1
            w = sample_polydisk(rng, tau.m, nu)
            image = rotate_scale(z, w)
            trials += 1
            if not in_sector(image, tau).in_sp:
                failures.append((tau, z, w))
    return failures, trials, classes


# -- finite series ---------------------------------------------------------------

def random_finite_series(rng: np.random.Generator, m: int | None = None, n: int | None = None,
                         terms: int | None = None) -> gs.MixedSeries:
    m = int(rng.integers(1, 3)) if m is None else m
    n = int(rng.integers(0, 2)) if n is None else n
    terms = int(rng.integers(1, 6)) if terms is None else terms
    seen, out = set(), []
    while len(out) < terms:
        alpha = tuple(float(np.round(rng.uniform(0, 2.5), 3)) for _ in range(m))
        beta = tuple(int(b) for b in rng.integers(0, 3, n))
        if (alpha, beta) in seen:
            continue
        seen.add((alpha, beta))
        out.append(gs.Term(alpha, beta, complex(rng.normal(), rng.normal())))
    return gs.MixedSeries(m, n, tuple(out))


# -- suites ----------------------------------------------------------------------

def _suite_sectors(samples: int, seed: int) -> list[Check]:
    failures, trials, classes = sector_mapping_trials(samples, 10, seed)
    return [Check("domain mapping zE(iw) in S_p(tau)", not failures,
                  f"{len(failures)} failures in {trials} trials; sigma classes {classes}")]


def _suite_stirling(samples: int, seed: int) -> list[Check]:
    eng = default_engine()
    rng = np.random.default_rng(seed)
    n = min(samples, 1000)
    z = rng.uniform(-20, 20, n) + 1j * rng.uniform(-20, -0.5, n)
    refl = np.abs(eng.phi(z) + eng.phi(-z) + np.log(1 - np.exp(-2j * np.pi * z)))
    w = rng.uniform(-20, 20, n) + 1j * rng.uniform(0.01, 20, n)
    schwarz = np.abs(eng.phi(np.conj(w)) - np.conj(eng.phi(w)))
    worst = 0.0
    ok_trunc = True
    for x in np.linspace(8, 50, 43):
        a = phi_asymptotic(x)
        b, err = eng.phi_binet(x, with_error=True)
        worst = max(worst, abs(a.value - b) / (a.err_bound + err))
        ok_trunc &= abs(a.value - b) <= a.err_bound + err
    exact = (stirling_coeff(1), stirling_coeff(2), stirling_coeff(3)) == (
        Fraction(1, 12), Fraction(-1, 360), Fraction(1, 1260))
    return [
        Check("reflection identity", bool(refl.max() <= 1e-9), f"max residual {refl.max():.3e}"),
        Check("Schwarz reflection", bool(schwarz.max() <= 1e-12), f"max residual {schwarz.max():.3e}"),
        Check("optimal truncation within its bound", bool(ok_trunc), f"worst ratio {worst:.3f}"),
        Check("exact coefficients c1..c3", exact, "1/12, -1/360, 1/1260"),
        Check("odd support of the series", odd_support_check(20), "K = 20"),
    ]


def _suite_gamma(samples: int, seed: int) -> list[Check]:
    ctx = default_context()
    xs = np.linspace(-10, 10, 40)
    z = (xs[None, :] + 1j * xs[:, None]).ravel()
    z = z[~((z.imag == 0) & (z.real <= 0))]
    g0, g1 = ctx.gamma_array(z), ctx.gamma_array(z + 1)
    fe = np.abs(g1 - z * g0) / np.abs(g1)
    conj = np.abs(ctx.gamma_array(np.conj(z)) - np.conj(g0)) / np.abs(g0)
    grid = [(x, y) for x in np.linspace(-8, 8, 9) for y in (2, 3, 5, 8)]
    dx_bad = int(sum(dmod_dx(x, y) <= 0 for x, y in grid))
    dy_bad = int(sum(dmod_dy(x, y) >= 0 for x in np.linspace(-8, 8, 9) for y in (0.1, 0.5, 2, 5)))
    x0 = ctx.x0
    return [
        Check("functional equation on 40x40 grid", bool(fe.max() <= 1e-9), f"max rel residual {fe.max():.3e}"),
        Check("conjugation symmetry", bool(conj.max() <= 1e-12), f"max rel residual {conj.max():.3e}"),
        Check("d|Gamma|/dx > 0 for y >= 2", dx_bad == 0, f"{dx_bad} violations"),
        Check("d|Gamma|/dy < 0 for y > 0", dy_bad == 0, f"{dy_bad} violations"),
        Check("x0 in (1.46, 1.47)", 1.46 < x0 < 1.47, f"x0 = {x0:.12f}"),
    ]


def _suite_zeta(samples: int, seed: int) -> list[Check]:
    z2, z3 = gs.zeta_eval(2), gs.zeta_eval(3)
    e2 = abs(z2 - math.pi ** 2 / 6)
    e3 = abs(z3 - 1.2020569031595942)
    radius = gs.unit_norm_radius(gs.ZetaSeries(100_000, start=2))
    return [
        Check("zeta(2) = pi^2/6", e2 <= 1e-7, f"error {e2:.3e}"),
        Check("zeta(3)", e3 <= 1e-7, f"error {e3:.3e}"),
        Check("unit-norm radius of zeta - 1", abs(radius - 0.17752439569098) <= 1e-6, f"radius {radius:.12f}"),
    ]


def _suite_series(samples: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = max(1, min(samples, 200) // 10)
    for _ in range(count):
        F = random_finite_series(rng)
        pair = gs.split_real_imag(F, [0.8] * F.m, [0.3] * F.m, depth=12, s=[1.0] * F.n)
        for _ in range(10):
            x = rng.uniform(0.05, 0.8, F.m)
            u = rng.uniform(-0.3, 0.3, F.m)
            y = rng.uniform(-0.5, 0.5, F.n)
            v = rng.uniform(-0.5, 0.5, F.n)
            w = LogVector.of(*zip(x.tolist(), u.tolist()))
            val = F.evaluate(w, (y + 1j * v).tolist())
            gh = pair.evaluate(x, u, y, v)
            dev = max(abs(val.real - gh.real), abs(val.imag - gh.imag))
            worst = max(worst, dev / pair.tail_bound if pair.tail_bound else dev)
    return [Check("real/imaginary split within certified tail", worst <= 1, f"worst deviation/bound {worst:.3f}")]


def _suite_curves(samples: int, seed: int) -> list[Check]:
    c = trace_mod_level(abs(gamma(2 + 1j)), 2, 10)
    d = curve_A_derivative(c)
    return [
        Check("mod-level residuals < 1e-10", bool(c.residual.max() < 1e-10), f"max {c.residual.max():.3e}"),
        Check("mod-level slopes positive", bool(c.slopes().min() > 0), f"min slope {c.slopes().min():.4f}"),
        Check("A-derivative bound for x >= 4", bool(d.ok), f"{d.violations.size} violations"),
    ]


SUITES: dict[str, Callable[[int, int], list[Check]]] = {
    "sectors": _suite_sectors,
    "stirling": _suite_stirling,
    "gamma": _suite_gamma,
    "zeta": _suite_zeta,
    "series": _suite_series,
    "curves": _suite_curves,
}


def run_suite(name: str, samples: int = 1000, seed: int = 20240531) -> list[Check]:
    return SUITES[name](samples, seed)
