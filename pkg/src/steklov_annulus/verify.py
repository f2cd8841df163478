"""Self-check suite run by ``steklov-annulus verify``.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs the
whole list.  ``quick=True`` shrinks the grids so the suite finishes in a
few seconds.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .analysis import (
    coefficient_ladder,
    eigenvalue_by_continued_fraction,
    fixed_points,
    forward_ratios,
    liminf_lower,
    shape_derivative,
)
from .eigenfunction import certify, evaluate, normalize, series_from_eigvec
from .geometry import Annulus, bipolar_frame
from .spectral import (
    determinant_identity_residual,
    finite_section,
    smallest_eigpair,
    solve_first_eigenvalue,
)
from .sweep import SweepSpec, adjacent_increases, run_sweep

# (t / (r2 - r1), converged sigma) for r1 = 1, r2 = 3
REFERENCE_SIGMA = (
    (0.2, 0.280415816559),
    (0.4, 0.243981314075),
    (0.6, 0.211194759856),
    (0.8, 0.183167795551),
    (0.98, 0.161288441909),
)
# sigma_{1, 2^k} for k = 3..7 at t / (r2 - r1) = 0.8
TRAJECTORY_08 = (
    0.185487114250,
    0.183172148523,
    0.183167795557,
    0.183167795551,
    0.183167795551,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


def _timed(name, fn):
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)


def check_frame_consistency(n_samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        r1, r2 = np.sort(rng.uniform(0.05, 5.0, 2))
        if r2 - r1 < 1e-3:
            continue
        t = rng.uniform(1e-3, 0.999) * (r2 - r1)
        f = bipolar_frame(Annulus(r1, r2, t))
        errs = (
            abs(r1 * math.sinh(f.xi1) - f.alpha) / f.alpha,
            abs(r2 * math.sinh(f.xi2) - f.alpha) / f.alpha,
            # coth(xi2) - coth(xi1) = sinh(xi1 - xi2) / (sinh xi1 sinh xi2), free of cancellation
            abs(f.alpha * math.sinh(f.gap) / (math.sinh(f.xi1) * math.sinh(f.xi2)) - t) / t,
        )
        worst = max(worst, *errs)
        if not 0.0 < f.xi2 < f.xi1:
            return False, f"xi ordering broken at {(r1, r2, t)}"
    return worst <= 1e-12, f"max relative error {worst:.2e}"


def check_determinant_identity(ns=range(1, 65)):
    worst = 0.0
    for ratio in (0.1, 0.3, 0.5, 0.7, 0.9):
        for frac in (0.05, 0.25, 0.5, 0.75, 0.95):
            f = bipolar_frame(Annulus(ratio, 1.0, frac * (1.0 - ratio)))
            for n in ns:
                worst = max(worst, determinant_identity_residual(f, n))
    return worst <= 1e-10, f"max log-residual {worst:.2e}"


def check_reference_values():
    errs = []
    for frac, ref in REFERENCE_SIGMA:
        res = solve_first_eigenvalue(Annulus(1.0, 3.0, 2.0 * frac))
        errs.append(abs(res.sigma - ref))
    res = solve_first_eigenvalue(Annulus(1.0, 3.0, 1.6))
    traj = [abs(s - ref) for (_, s, _), ref in zip(res.history, TRAJECTORY_08)]
    worst = max(errs + traj)
    return worst <= 1e-9, f"max abs error {worst:.2e}"


def check_ladder_sandwich(ts=(0.4, 1.0, 1.6), sigma_shift=0.0, span=200):
    """Sandwich ``U_{n+1} < F_n < U_inf`` on the backward ladder and on a forward window.

    The forward window starts from the explicit ``F_1`` and runs
    ``12 / xi2`` steps past ``n0``; it stays inside the sandwich only when
    sigma is an eigenvalue, which is what makes ``sigma_shift`` a working
    negative control.
    """
    notes = []
    ok = True
    for t in ts:
        a = Annulus(1.0, 3.0, t)
        sigma = solve_first_eigenvalue(a).sigma + sigma_shift
        lad = coefficient_ladder(a, sigma, n_max=None)
        n0 = max(lad.n0, 1)
        for n in range(n0, n0 + span + 1):
            if not lad.U[n] < lad.F[n - 1] < lad.U_inf:
                ok = False
                notes.append(f"t={t}: backward sandwich fails at n={n}")
                break
        f = bipolar_frame(a)
        w = n0 + int(math.ceil(12.0 / f.xi2))
        F = forward_ratios(f, sigma, w + 1)
        for n in range(n0, w + 1):
            if not fixed_points(f, sigma, n + 1)[1] < F[n - 1] < lad.U_inf:
                ok = False
                notes.append(f"t={t}: forward sandwich fails at n={n}")
                break
    return ok, "; ".join(notes) or f"sandwich holds for t in {tuple(ts)}"


def check_ratio_limit(ts=(0.4, 1.0, 1.6), span=200):
    """``F_n -> -exp(-xi2)`` with an ``O(1/n)`` gap that shrinks monotonically."""
    worst = 0.0
    for t in ts:
        a = Annulus(1.0, 3.0, t)
        sigma = solve_first_eigenvalue(a).sigma
        n_max = 4 * (span + 50)
        lad = coefficient_ladder(a, sigma, n_max=n_max)
        n = np.arange(1, n_max + 1)
        gap = np.abs(lad.F - lad.U_inf)
        tail = slice(lad.n0 + span - 1, None)
        if np.any(np.diff(gap[tail]) > 0):
            return False, f"t={t}: |F_n - U_inf| not decreasing"
        scaled = gap[tail] * n[tail]
        worst = max(worst, float(scaled.max() / scaled.min()))
    return worst <= 2.0, f"n |F_n - U_inf| varies by factor {worst:.3f} over the tail"


def check_derivative(ts=(0.4, 0.8, 1.2), h=1e-5):
    worst = 0.0
    for t in ts:
        res = solve_first_eigenvalue(Annulus(1.0, 3.0, t))
        series = shape_derivative(normalize(series_from_eigvec(res.frame, res.eig)))
        fd = (solve_first_eigenvalue(Annulus(1.0, 3.0, t + h)).sigma
              - solve_first_eigenvalue(Annulus(1.0, 3.0, t - h)).sigma) / (2 * h)
        if not (series < 0 and fd < 0):
            return False, f"t={t}: derivative not negative ({series:.3e}, {fd:.3e})"
        worst = max(worst, abs(series - fd) / abs(fd))
    return worst <= 1e-5, f"max relative difference {worst:.2e}"


def check_oracle_equivalence():
    worst = 0.0
    for frac, _ in REFERENCE_SIGMA:
        a = Annulus(1.0, 3.0, 2.0 * frac)
        worst = max(worst, abs(eigenvalue_by_continued_fraction(a) - solve_first_eigenvalue(a).sigma))
    return worst <= 1e-9, f"max |cf - fs| {worst:.2e}"


def check_certificate(t=1.2, N=64):
    f = bipolar_frame(Annulus(1.0, 3.0, t))
    sigma_N = smallest_eigpair(finite_section(f, N)).sigma
    cert = certify(f, sigma_N)
    below = [m for m, I_m, _ in cert.gaps if I_m < sigma_N - 1e-13]
    ok = cert.passed and not below
    return ok, f"E={cert.E_final:.2e} at m={cert.m_final}"


def check_positivity(t=1.2, n_xi=64, n_theta=128):
    res = solve_first_eigenvalue(Annulus(1.0, 3.0, t))
    s = normalize(series_from_eigvec(res.frame, res.eig))
    f = res.frame
    xi = np.linspace(f.xi2, f.xi1, n_xi)
    th = np.linspace(-math.pi, math.pi, n_theta, endpoint=False) + math.pi / n_theta
    X, TH = np.meshgrid(xi, th, indexing="ij")
    low = float(np.min(evaluate(s, X, TH)))
    return low >= -1e-10, f"min u on grid {low:.2e}"


def check_bound_chain(steps=50, radii=((1.0, 3.0), (0.2, 1.0), (0.4, 1.0), (0.6, 1.0), (0.8, 1.0))):
    notes = []
    for r1, r2 in radii:
        rows = run_sweep(SweepSpec(r1, r2, 0.0, 0.98, steps))
        for row in rows:
            cap = min(row.upper_M, row.concentric)
            if row.sigma > cap + 1e-10:
                notes.append(f"({r1},{r2},t={row.t:.4g}) sigma above min(M, sigma0)")
        inc = adjacent_increases(rows)
        if inc:
            notes.append(f"({r1},{r2}) {inc} adjacent increases")
        if (r1, r2) == (1.0, 3.0) and rows[-1].sigma <= liminf_lower(r1, r2):
            notes.append("sigma at t_frac=0.98 below the thin-gap bound")
    return not notes, "; ".join(notes) or f"{len(radii)} sweeps of {steps} points consistent"


def run_checks(quick=False):
    checks = [
        ("frame_consistency", lambda: check_frame_consistency(100 if quick else 1000)),
        ("determinant_identity", lambda: check_determinant_identity((1, 2, 8, 64) if quick else range(1, 65))),
        ("reference_values", check_reference_values),
        ("ladder_sandwich", check_ladder_sandwich),
        ("ratio_limit", check_ratio_limit),
        ("derivative_vs_fd", check_derivative),
        ("oracle_equivalence", check_oracle_equivalence),
        ("rayleigh_certificate", check_certificate),
        ("positivity", check_positivity),
        ("bound_chain", lambda: check_bound_chain(
            10 if quick else 50, ((1.0, 3.0),) if quick else
            ((1.0, 3.0), (0.2, 1.0), (0.4, 1.0), (0.6, 1.0), (0.8, 1.0)))),
    ]
    return [_timed(name, fn) for name, fn in checks]
