"""Command-line front end.

Exit codes: 0 success, 1 usage or parameter error, 2 numerical
non-convergence, 3 verification failure.
"""

import argparse
import csv
import math
import sys

from . import __version__
from .analysis import bounds_report, coefficient_ladder, shape_derivative
from .eigenfunction import certify, normalize, series_from_eigvec
from .exceptions import InvalidAnnulus, NoConvergence, SteklovError
from .geometry import Annulus
from .spectral import solve_first_eigenvalue
from .sweep import SweepSpec, adjacent_increases, run_sweep, write_csv, write_svg

EXIT_OK, EXIT_USAGE, EXIT_NOCONV, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(key, value):
    if isinstance(value, float):
        value = f"{value:.15g}"
    print(f"{key}={value}")


def _annulus(args):
    return Annulus(args.r1, args.r2, args.t)


def _solve(args):
    return solve_first_eigenvalue(_annulus(args), tol=args.tol, n_max=args.n_max)


def cmd_eig(args):
    res = _solve(args)
    _emit("sigma", res.sigma)
    _emit("n_final", res.n_final)
    for n, _, delta in res.history[1:]:
        _emit(f"delta_n{n}", delta)
    if args.certify:
        if res.n_final == 0:
            _emit("certify", "skipped (concentric closed form)")
        else:
            cert = certify(res.frame, res.sigma)
            _emit("m_final", cert.m_final)
            _emit("I_final", cert.I_final)
            _emit("E_final", cert.E_final)
            _emit("certified", str(cert.passed).lower())
            if not cert.passed:
                return EXIT_NOCONV
    return EXIT_OK


def cmd_sweep(args):
    spec = SweepSpec(args.r1, args.r2, args.t_frac_start, args.t_frac_end, args.steps,
                     args.tol, args.n_max)
    rows = run_sweep(spec, workers=args.workers)
    write_csv(rows, args.out)
    if args.svg:
        write_svg(rows, args.svg, title=f"r1={args.r1:g}, r2={args.r2:g}")
    failed = [r for r in rows if not r.converged]
    for r in failed:
        print(f"not converged: t_frac={r.t_frac:.12g} n={r.n_final}", file=sys.stderr)
    inc = adjacent_increases(rows)
    print(f"rows={len(rows)} adjacent_increases={inc} not_converged={len(failed)}")
    return EXIT_NOCONV if failed else EXIT_OK


def cmd_bounds(args):
    a = _annulus(args)
    b = bounds_report(a)
    _emit("upper_M", b.upper_M)
    _emit("concentric", b.concentric)
    _emit("liminf_lower", b.liminf_lower)
    _emit("cap", b.cap)
    return EXIT_OK


def cmd_derivative(args):
    a = _annulus(args)
    if a.is_concentric:
        _emit("dsigma_dt", 0.0)
        return EXIT_OK
    res = _solve(args)
    _emit("sigma", res.sigma)
    _emit("dsigma_dt", shape_derivative(normalize(series_from_eigvec(res.frame, res.eig))))
    return EXIT_OK


def cmd_ladder(args):
    a = _annulus(args)
    if a.is_concentric:
        raise InvalidAnnulus("the ladder needs t > 0")
    res = _solve(args)
    lad = coefficient_ladder(a, res.sigma, n_max=args.rows)
    _emit("sigma", res.sigma)
    _emit("n0", lad.n0)
    _emit("L_inf", lad.L_inf)
    _emit("U_inf", lad.U_inf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("n", "T", "F", "L", "U"))
            for i in range(len(lad.T)):
                w.writerow([i + 1] + [f"{v:.12g}" for v in (lad.T[i], lad.F[i], lad.L[i], lad.U[i])])
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_checks

    results = run_checks(quick=args.quick)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.2f}s) {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed))
        return EXIT_VERIFY
    return EXIT_OK


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    p = _Parser(prog="steklov-annulus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def radii(sp, with_t=True):
        sp.add_argument("--r1", type=float, required=True, help="inner radius")
        sp.add_argument("--r2", type=float, required=True, help="outer radius")
        if with_t:
            sp.add_argument("--t", type=float, required=True, help="center offset")

    def numerics(sp):
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--n-max", type=_positive_int, default=4096)

    sp = sub.add_parser("eig", help="first eigenvalue of one annulus")
    radii(sp)
    numerics(sp)
    sp.add_argument("--certify", action="store_true", help="Rayleigh-quotient certificate")
    sp.set_defaults(func=cmd_eig)

    sp = sub.add_parser("sweep", help="eigenvalue over a grid of offsets, written as CSV")
    radii(sp, with_t=False)
    sp.add_argument("--t-frac-start", type=float, default=0.0)
    sp.add_argument("--t-frac-end", type=float, default=0.98)
    sp.add_argument("--steps", type=int, default=50)
    numerics(sp)
    sp.add_argument("--out", required=True, help="CSV path")
    sp.add_argument("--svg", help="optional SVG plot path")
    sp.add_argument("--workers", type=_positive_int, default=None, help="process count (default: all CPUs)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bounds", help="a priori bounds")
    radii(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("derivative", help="d sigma / d t from the eigenfunction series")
    radii(sp)
    numerics(sp)
    sp.set_defaults(func=cmd_derivative)

    sp = sub.add_parser("ladder", help="coefficient-ratio ladder at the first eigenvalue")
    radii(sp)
    numerics(sp)
    sp.add_argument("--rows", type=_positive_int, default=None, help="ladder length (default n0 + 201)")
    sp.add_argument("--out", help="CSV path for n, T, F, L, U")
    sp.set_defaults(func=cmd_ladder)

    sp = sub.add_parser("verify", help="run the self-check suite")
    sp.add_argument("--quick", action="store_true", help="reduced grids")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (InvalidAnnulus, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SteklovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
