"""Command-line front end.

Values that start with a minus sign and contain a comma or an imaginary part
must be attached with ``=``, e.g. ``--z=-3+2i`` or ``--window=-7,7,-7,7``.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import genseries as gs
from .curves import Quadrant, TraceConfig, Window, sandwich_check, trace_arg_level, trace_mod_level
from .errors import LogSurfError
from .gamma import RegionSpec, a_lower_bound, classify_Un, classify_Vn, default_context, gamma, phase_A
from .render import FUNCTIONS, Overlay, RenderSpec, region_overlays, render, write_image
from .stirling import default_engine, phi_asymptotic
from .suites import SUITES, run_suite
from .surface import LogPoint, LogVector

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240531

_COMPLEX = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        (?:(?P<sign>[+-])(?P<im>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?[ij])?
      | (?P<pure>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij]
    )\s*$""",
    re.VERBOSE,
)


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` also accepted)."""
    m = _COMPLEX.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    if m.group("re") is not None:
        im = 0.0
        if m.group("sign"):
            im = float(m.group("im") or 1.0) * (-1 if m.group("sign") == "-" else 1)
        return complex(float(m.group("re")), im)
    pure = m.group("pure")
    if pure in ("", "+"):
        return 1j
    if pure == "-":
        return -1j
    return complex(0.0, float(pure))


def _floats(count: int):
    def parse(text: str):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers") from None
        if len(vals) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers")
        return tuple(vals)
    return parse


def _size(text: str):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("size must look like 512x512") from None
    return w, h


def _surface_point(text: str) -> LogPoint:
    try:
        mod, arg = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("surface points are written MOD:ARG") from None
    return LogPoint(mod, arg)


def fmt_real(x: float, digits: int) -> str:
    return f"{x:.{digits}g}"


def fmt_complex(z: complex, digits: int) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.{digits}g}{sign}{abs(z.imag):.{digits}g}i"


# -- subcommands -------------------------------------------------------------------

def cmd_eval(args) -> int:
    with (sys.stdin if args.series == "-" else open(args.series)) as fh:
        F = gs.MixedSeries.from_json(json.load(fh))
    x = LogVector(tuple(args.x))
    value, bound = gs.eval_series_with_bound(F, x, args.y or ())
    print(f"value {fmt_complex(value, args.digits)}")
    print(f"bound {bound:.3e}")
    return EXIT_OK


def cmd_zeta(args) -> int:
    res = gs.zeta_eval_detailed(args.z, tol=args.tol)
    print(fmt_complex(res.value, args.digits))
    if args.verbose:
        print(f"terms {res.N}  error bound {res.err_bound:.3e}")
    return EXIT_OK


def cmd_gamma(args) -> int:
    print(fmt_complex(gamma(args.z), args.digits))
    if args.phase:
        print(f"A {fmt_real(phase_A(args.z), args.digits)}")
    return EXIT_OK


def cmd_phi(args) -> int:
    if args.method == "asymptotic":
        res = phi_asymptotic(args.z)
        print(fmt_complex(res.value, args.digits))
        print(f"terms {res.terms}  error bound {res.err_bound:.3e}" + ("  (degenerate)" if res.degenerate else ""))
    else:
        print(fmt_complex(default_engine().phi(args.z), args.digits))
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = TraceConfig(x_step=args.step, newton_tol=args.tol)
    if args.kind == "mod":
        curve = trace_mod_level(args.value, args.x0, args.x1, cfg, y_max=args.ymax)
    elif args.kind == "arg":
        quadrant = Quadrant.UPPER_LEFT if max(args.x0, args.x1) <= 0 else Quadrant.UPPER_RIGHT
        ymin = args.ymin if args.ymin is not None else (2.0 if quadrant is Quadrant.UPPER_LEFT else 0.0)
        curve = trace_arg_level(args.value, quadrant, Window(args.x0, args.x1, ymin, args.ymax), cfg)
    else:
        ymin = args.ymin if args.ymin is not None else 2.0
        report = sandwich_check(args.value, Window(args.x0, args.x1, ymin, args.ymax), cfg)
        curve = report.curve
        print(f"# max |A - theta| on the curve: {report.max_deviation:.3e} "
              f"(band {report.half_width:.3e}) {'ok' if report.ok else 'VIOLATED'}", file=sys.stderr)
    if args.out:
        curve.write_csv(args.out)
        print(f"wrote {len(curve)} samples to {args.out}")
    else:
        A = curve.phase()
        mod = np.abs(default_context().gamma_array(curve.points))
        print("x,y,residual,A,|Gamma|")
        for row in zip(curve.x, curve.y, curve.residual, A, mod):
            print(",".join(fmt_real(v, args.digits) for v in row))
    if args.kind == "bg" and not report.ok:
        return EXIT_NUMERIC
    return EXIT_OK


def _overlay(text: str, R: float, alpha: float) -> Overlay:
    if text == "sector":
        return region_overlays(R, alpha)[0]
    m = re.fullmatch(r"Un=(-?\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(f"unknown overlay {text!r}")
    return region_overlays(R, alpha, int(m.group(1)))[1]


def cmd_render(args) -> int:
    overlays = [_overlay(text, args.R, args.alpha) for text in args.overlay or ()]
    spec = RenderSpec(args.window, args.size, args.style, overlays=tuple(overlays))
    write_image(render(FUNCTIONS[args.fn], spec), args.out)
    print(f"wrote {spec.resolution[0]}x{spec.resolution[1]} image to {args.out}")
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = RegionSpec(args.R, args.alpha)
    if args.fn == "gamma":
        n = classify_Un(args.z, spec, tilde=args.tilde)
    else:
        n = classify_Vn(args.z, spec)
    print("outside" if n is None else n)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        for check in run_suite(name, args.samples, args.seed):
            failed += not check.passed
            print(f"{'PASS' if check.passed else 'FAIL'} [{name}] {check.name}: {check.detail}")
    return EXIT_NUMERIC if failed else EXIT_OK


def _probe_series():
    return {
        "X^0.5 + 0.1 X^1.5": gs.MixedSeries.univariate({0.5: 1.0, 1.5: 0.1}),
        "X + 0.3 X^2": gs.MixedSeries.univariate({1.0: 1.0, 2.0: 0.3}),
        "X^(1/3) - 0.2 X^(4/3) + 0.05 X^(7/3)": gs.MixedSeries.univariate({1 / 3: 1.0, 4 / 3: -0.2, 7 / 3: 0.05}),
    }


def cmd_probe(args) -> int:
    print("crossing counts of Im(F(x)/x^alpha0 - a0) over |arg x| <= argMax")
    print(f"{'series':40s} {'argMax/pi':>10s} {'count':>8s}")
    for label, F in _probe_series().items():
        for k in args.arg_max:
            n = gs.crossing_probe(F, args.modulus, k * math.pi)
            print(f"{label:40s} {k:10g} {n:8d}")
    print()
    print("phase of Gamma along t e^{3 pi i/4} against the lower bound")
    print(f"{'t':>10s} {'|A|':>16s} {'bound':>16s}")
    direction = np.exp(0.75j * math.pi)
    for t in np.geomspace(10, args.t_max, args.points):
        z = complex(t * direction)
        print(f"{t:10.4g} {abs(phase_A(z)):16.{args.digits}g} {a_lower_bound(z, args.B):16.{args.digits}g}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logsurf", description=__doc__.splitlines()[0])
    p.add_argument("--digits", type=int, default=10, help="significant digits in printed numbers")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a series given as JSON")
    s.add_argument("--series", required=True, help="JSON file, or - for stdin")
    s.add_argument("--x", type=_surface_point, action="append", required=True, metavar="MOD:ARG")
    s.add_argument("--y", type=parse_complex, action="append", metavar="a+bi")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("zeta", help="zeta through its Dirichlet series")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("gamma", help="Gamma via Stirling's formula")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--phase", action="store_true", help="also print A(z)")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("phi", help="the Stirling remainder phi")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--method", choices=("binet", "asymptotic"), default="binet")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("trace", help="trace a level curve and print CSV")
    s.add_argument("--kind", choices=("mod", "arg", "bg"), required=True)
    s.add_argument("--value", type=float, required=True)
    s.add_argument("--x0", type=float, required=True)
    s.add_argument("--x1", type=float, required=True)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--ymin", type=float)
    s.add_argument("--ymax", type=float, default=math.inf)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--out", help="CSV output path (default: stdout)")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("render", help="domain colouring to a PNG file")
    s.add_argument("--fn", choices=sorted(FUNCTIONS), required=True)
    s.add_argument("--window", type=_floats(4), default=(-7.0, 7.0, -7.0, 7.0), metavar="XMIN,XMAX,YMIN,YMAX")
    s.add_argument("--size", type=_size, default=(512, 512), metavar="WxH")
    s.add_argument("--style", choices=("gradient", "contour"), default="gradient")
    s.add_argument("--overlay", action="append", metavar="sector|Un=N")
    s.add_argument("--R", type=float, default=2 / 3)
    s.add_argument("--alpha", type=float, default=14 * math.pi / 30)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("classify", help="strip index n of a point, or 'outside'")
    s.add_argument("--fn", choices=("gamma", "g"), default="gamma")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tilde", action="store_true", help="drop the Re z > x0 condition")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", help="run an invariant suite")
    s.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("probe", help="crossing counts and phase growth tables")
    s.add_argument("--modulus", type=float, default=0.5)
    s.add_argument("--arg-max", type=float, nargs="+", default=[100.0, 200.0], metavar="K",
                   help="multiples of pi")
    s.add_argument("--B", type=float, default=0.1, help="bound on |phi| used in the lower bound")
    s.add_argument("--t-max", type=float, default=1e4)
    s.add_argument("--points", type=int, default=9)
    s.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        print(f"logsurf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LogSurfError, ArithmeticError) as exc:
        print(f"logsurf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"logsurf: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
