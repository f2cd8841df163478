"""Offset sweeps with CSV and SVG output."""

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from .analysis import bounds_report, shape_derivative
from .eigenfunction import normalize, series_from_eigvec
from .exceptions import NoConvergence
from .geometry import Annulus
from .spectral import solve_first_eigenvalue

CSV_HEADER = (
    "r1",
    "r2",
    "t",
    "t_frac",
    "n_final",
    "sigma",
    "last_delta",
    "upper_M",
    "concentric",
    "liminf_lower",
    "dsigma_dt",
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid of offsets ``t = t_frac * (r2 - r1)``, ``steps`` points from start to end inclusive."""

    r1: float
    r2: float
    t_frac_start: float = 0.0
    t_frac_end: float = 0.98
    steps: int = 50
    tol: float = 1e-12
    n_max: int = 4096

    def __post_init__(self):
        Annulus(self.r1, self.r2, 0.0)
        if not 0.0 <= self.t_frac_start <= self.t_frac_end < 1.0:
            raise ValueError(
                f"need 0 <= t_frac_start <= t_frac_end < 1, got {self.t_frac_start}, {self.t_frac_end}"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.n_max < 8 or self.n_max & (self.n_max - 1):
            raise ValueError(f"n_max must be a power of two >= 8, got {self.n_max}")

    def t_fracs(self):
        if self.steps == 1:
            return [self.t_frac_start]
        return np.linspace(self.t_frac_start, self.t_frac_end, self.steps).tolist()


@dataclass(frozen=True)
class SweepRow:
    r1: float
    r2: float
    t: float
    t_frac: float
    n_final: int
    sigma: float
    last_delta: float
    upper_M: float
    concentric: float
    liminf_lower: float
    dsigma_dt: float
    converged: bool = True

    def csv_fields(self):
        return [_fmt(v) for v in astuple(self)[: len(CSV_HEADER)]]


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.12g}"


def evaluate_point(r1, r2, t_frac, tol=1e-12, n_max=4096):
    """One sweep row; a point that fails to converge is returned with ``converged=False``."""
    t = t_frac * (r2 - r1)
    a = Annulus(r1, r2, t)
    b = bounds_report(a)
    try:
        res = solve_first_eigenvalue(a, tol=tol, n_max=n_max)
    except NoConvergence as exc:
        n, sigma, delta = exc.history[-1]
        return SweepRow(r1, r2, t, t_frac, n, sigma, delta, b.upper_M, b.concentric,
                        b.liminf_lower, math.nan, converged=False)
    if a.is_concentric:
        # sigma is even in t and smooth, so its derivative vanishes at t = 0
        dsigma = 0.0
    else:
        dsigma = shape_derivative(normalize(series_from_eigvec(res.frame, res.eig)))
    return SweepRow(r1, r2, t, t_frac, res.n_final, res.sigma, res.last_delta,
                    b.upper_M, b.concentric, b.liminf_lower, dsigma)


def _point(args):
    return evaluate_point(*args)


def run_sweep(spec, workers=None):
    """Evaluate every grid point of ``spec``; rows come back in ascending ``t``.

    ``workers=1`` runs serially; otherwise a process pool of ``workers``
    (default: CPU count) is used and results are merged in input order.
    """
    jobs = [(spec.r1, spec.r2, tf, spec.tol, spec.n_max) for tf in spec.t_fracs()]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(jobs) == 1:
        return [_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_point, jobs))


def adjacent_increases(rows):
    """Number of neighbouring pairs where sigma does not strictly decrease."""
    s = [r.sigma for r in rows]
    return sum(1 for x, y in zip(s, s[1:]) if y >= x)


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(r.csv_fields())


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = [f.name for f in fields(SweepRow)][: len(CSV_HEADER)]
        out = []
        for rec in reader:
            vals = [int(rec[k]) if k == "n_final" else float(rec[k]) for k in names]
            out.append(SweepRow(*vals))
        return out


def svg_plot(rows, title="", width=640, height=400):
    """Standalone SVG line plot of sigma against t_frac."""
    pad = 56
    xs = [r.t_frac for r in rows]
    ys = [r.sigma for r in rows]
    x0, x1 = 0.0, 1.0
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y0, y1 = y0 - 0.5 * abs(y0 or 1.0), y1 + 0.5 * abs(y1 or 1.0)
    span_y = y1 - y0
    y0 -= 0.05 * span_y
    y1 += 0.05 * span_y

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for i in range(6):
        xv = x0 + i * (x1 - x0) / 5
        parts.append(
            f'<text x="{px(xv):.2f}" y="{height - pad + 18}" font-size="11" '
            f'text-anchor="middle">{xv:.1f}</text>'
        )
        yv = y0 + i * (y1 - y0) / 5
        parts.append(
            f'<text x="{pad - 6}" y="{py(yv) + 4:.2f}" font-size="11" '
            f'text-anchor="end">{yv:.4f}</text>'
        )
    parts.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{pts}"/>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="#1f4e9c"/>')
    parts.append(
        f'<text x="{width / 2}" y="{height - 12}" font-size="12" text-anchor="middle">'
        "t / (r2 - r1)</text>"
    )
    parts.append(
        f'<text x="16" y="{height / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {height / 2})">sigma_1</text>'
    )
    if title:
        parts.append(f'<text x="{width / 2}" y="24" font-size="14" text-anchor="middle">{title}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(rows, path, title=""):
    with open(path, "w", newline="") as fh:
        fh.write(svg_plot(rows, title))
