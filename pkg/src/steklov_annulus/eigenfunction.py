"""The first eigenfunction as a bipolar Fourier series.

Inside the annulus (``xi2 <= xi <= xi1``) the first eigenfunction reads ::

    u(xi, theta) = a0 (1 - xi / xi1) - sum_k (2/k) A_k sinh(k (xi1 - xi)) cos(k theta)

which vanishes on the inner circle ``xi = xi1`` term by term.  The
coefficients come from the lowest eigenvector of a finite section.  Mode
amplitudes decay geometrically while ``sinh(k (xi1 - xi))`` grows, so every
product of a coefficient with a hyperbolic factor is formed in log scale.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import FrameMismatch, OutOfDomain, QuadratureStall, ZeroFunction
from .geometry import BipolarFrame
from .spectral import EigenResult, finite_section, mode_weights, smallest_eigpair

__all__ = [
    "EigenfunctionSeries",
    "Certificate",
    "series_from_eigvec",
    "boundary_integral",
    "normalize",
    "evaluate",
    "boundary_flux",
    "rayleigh_quotient",
    "trace_coefficients",
    "certificate_gaps",
    "certify",
]

_QUAD_RTOL = 1e-13
_QUAD_MAX_LEVEL = 20


@dataclass(frozen=True, eq=False)
class EigenfunctionSeries:
    """Truncated series of the first eigenfunction.

    ``A[k - 1]`` holds ``A_k = k a_k exp(k xi1)`` for ``k = 1 .. n - 1``.
    """

    sigma: float
    a0: float
    A: np.ndarray
    frame: BipolarFrame
    normalized: bool = False

    @property
    def n_modes(self):
        return len(self.A) + 1

    def scaled(self, factor):
        """Copy with every coefficient multiplied by ``factor`` (drops the normalized flag)."""
        return replace(self, a0=self.a0 * factor, A=self.A * factor, normalized=False)


@dataclass(frozen=True)
class Certificate:
    """Rayleigh-quotient certificate for a converged eigenvalue.

    ``gaps`` lists ``(m, I_m, |sigma_N - I_m|)`` for every ``m`` tried.
    """

    sigma_N: float
    m_final: int
    I_final: float
    E_final: float
    gaps: tuple
    passed: bool


def _hyp_times(coef, k, s, kind):
    """``coef * sinh(k s)`` or ``coef * cosh(k s)`` without intermediate overflow."""
    coef = np.asarray(coef, dtype=float)
    x = np.asarray(k, dtype=float) * s
    out = np.zeros(np.broadcast(coef, x).shape)
    nz = coef != 0.0
    if not np.any(nz):
        return out
    c = np.broadcast_to(coef, out.shape)[nz]
    xx = np.broadcast_to(x, out.shape)[nz]
    tail = np.exp(-2.0 * xx)
    factor = -np.expm1(-2.0 * xx) if kind == "sinh" else 1.0 + tail
    with np.errstate(over="ignore"):
        out[nz] = np.sign(c) * np.exp(np.log(np.abs(c)) + xx - math.log(2.0)) * factor
    return out


def _cosine_sum(coef, theta):
    """``sum_k coef[k] cos(k theta)`` summed from the top mode down, compensated."""
    theta = np.asarray(theta, dtype=float)
    coef = np.asarray(coef, dtype=float)
    nz = np.flatnonzero(coef)
    if nz.size == 0:
        return np.zeros_like(theta)
    total = np.zeros_like(theta)
    comp = np.zeros_like(theta)
    for k in range(int(nz[-1]), 0, -1):
        if coef[k] == 0.0:
            continue
        term = coef[k] * np.cos(k * theta)
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
    return (total + comp) + coef[0]


def series_from_eigvec(f, e):
    """Series whose outer trace is ``sum_k c_k cos(k theta) / d_k``.

    The constant mode fixes ``a0 (1 - xi2/xi1) = c_0 / d_0``; mode ``k``
    fixes ``-(2/k) A_k sinh(k (xi1 - xi2)) = c_k / d_k``.
    """
    if not isinstance(e, EigenResult):
        raise TypeError("expected an EigenResult")
    c = np.asarray(e.coeffs, dtype=float)
    if c.shape != (e.n,):
        raise FrameMismatch(f"eigenvector has shape {c.shape}, expected ({e.n},)")
    d = mode_weights(f, e.n).d
    p = c / d
    a0 = p[0] / (1.0 - f.xi2 / f.xi1)
    k = np.arange(1, e.n, dtype=float)
    g = f.gap
    # A_k = -k p_k / (2 sinh(k g)) = -k p_k exp(-k g) / (1 - exp(-2 k g))
    A = -k * p[1:] * np.exp(-k * g) / -np.expm1(-2.0 * k * g)
    return EigenfunctionSeries(e.sigma, a0, A, f, False)


def _level_coefficients(s, xi):
    """Cosine coefficients of ``u(xi, .)``."""
    f = s.frame
    k = np.arange(1, s.n_modes, dtype=float)
    coef = np.empty(s.n_modes)
    coef[0] = s.a0 * (1.0 - xi / f.xi1)
    coef[1:] = -(2.0 / k) * _hyp_times(s.A, k, f.xi1 - xi, "sinh")
    return coef


def trace_coefficients(s):
    """Cosine coefficients of the outer trace ``u(xi2, .)``."""
    return _level_coefficients(s, s.frame.xi2)


def _flux_coefficients(s):
    """Cosine coefficients of ``du/dxi`` on the outer circle: ``-a0/xi1`` and ``2 A~_k``."""
    f = s.frame
    k = np.arange(1, s.n_modes, dtype=float)
    coef = np.empty(s.n_modes)
    coef[0] = -s.a0 / f.xi1
    coef[1:] = 2.0 * _hyp_times(s.A, k, f.gap, "cosh")
    return coef


def boundary_integral(f, g):
    """Integral of ``g`` over the outer circle, ``int g(theta) h(xi2, theta) dtheta``.

    Periodic trapezoid rule on ``2**m`` nodes, doubling ``m`` until the
    relative change drops below ``1e-13``.

    Parameters
    ----------
    f : BipolarFrame
    g : callable
        Vectorized, ``2 pi``-periodic function of ``theta``.

    Raises
    ------
    QuadratureStall
        If ``2**20`` nodes do not settle the value.
    """
    c2 = math.cosh(f.xi2)

    def weighted(theta):
        return np.asarray(g(theta), dtype=float) * f.alpha / (c2 + np.cos(theta))

    m = 3
    n = 2**m
    theta = -math.pi + 2.0 * math.pi * np.arange(n) / n
    vals = weighted(theta)
    total = float(np.sum(vals))
    total_abs = float(np.sum(np.abs(vals)))
    prev = 2.0 * math.pi * total / n
    while m < _QUAD_MAX_LEVEL:
        m += 1
        n *= 2
        mids = -math.pi + 2.0 * math.pi * np.arange(1, n, 2) / n
        vals = weighted(mids)
        total += float(np.sum(vals))
        total_abs += float(np.sum(np.abs(vals)))
        cur = 2.0 * math.pi * total / n
        scale = max(abs(cur), 2.0 * math.pi * total_abs / n)
        if abs(cur - prev) <= _QUAD_RTOL * scale:
            return cur
        prev = cur
    raise QuadratureStall(f"trapezoid rule not settled at 2**{_QUAD_MAX_LEVEL} nodes")


def _trace_fn(s):
    coef = trace_coefficients(s)
    return lambda theta: _cosine_sum(coef, theta)


def normalize(s):
    """Scale ``s`` so that ``int u^2 dS = 1`` and ``int u dS > 0`` on the outer circle."""
    trace = _trace_fn(s)
    sq = boundary_integral(s.frame, lambda th: trace(th) ** 2)
    if not (sq > 0.0 and math.isfinite(sq)):
        raise ZeroFunction("outer trace is numerically zero")
    mean = boundary_integral(s.frame, trace)
    factor = 1.0 / math.sqrt(sq)
    if mean < 0.0:
        factor = -factor
    return replace(s, a0=s.a0 * factor, A=s.A * factor, normalized=True)


def evaluate(s, xi, theta):
    """Value of the series at bipolar point(s) ``(xi, theta)``.

    Raises
    ------
    OutOfDomain
        If any ``xi`` lies outside ``[xi2, xi1]``.
    """
    f = s.frame
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(theta, dtype=float))
    slack = 1e-14 * f.xi1
    if np.any(xi < f.xi2 - slack) or np.any(xi > f.xi1 + slack):
        raise OutOfDomain(f"xi must lie in [{f.xi2}, {f.xi1}]")
    out = np.empty(xi.shape)
    for level in np.unique(xi):
        mask = xi == level
        coef = _level_coefficients(s, min(max(float(level), f.xi2), f.xi1))
        out[mask] = _cosine_sum(coef, theta[mask])
    return out if out.ndim else float(out)


def boundary_flux(s, theta):
    """Outward normal derivative on the outer circle, ``-(cosh xi2 + cos theta)/alpha * du/dxi``."""
    f = s.frame
    theta = np.asarray(theta, dtype=float)
    dxi = _cosine_sum(_flux_coefficients(s), theta)
    out = -(math.cosh(f.xi2) + np.cos(theta)) / f.alpha * dxi
    return out if out.ndim else float(out)


def rayleigh_quotient(s):
    """Rayleigh quotient ``int |grad u|^2 / int_{outer} u^2 dS`` of the series.

    The Dirichlet energy equals ``-int u du/dxi dtheta`` on the outer circle
    (``u = 0`` on the inner one), which cosine orthogonality turns into
    ``2 pi p_0^2 / (xi1 - xi2) + pi sum_k k p_k^2 / tanh(k (xi1 - xi2))``
    with ``p_k`` the trace coefficients.  Any truncated series is an
    admissible test function, so the result bounds the first eigenvalue
    from above.
    """
    f = s.frame
    p = trace_coefficients(s)
    k = np.arange(1, len(p), dtype=float)
    energy = 2.0 * math.pi * p[0] ** 2 / f.gap
    energy += math.pi * float(np.sum(k * p[1:] ** 2 / np.tanh(k * f.gap)))
    trace = _trace_fn(s)
    mass = boundary_integral(f, lambda th: trace(th) ** 2)
    if not mass > 0.0:
        raise ZeroFunction("outer trace is numerically zero")
    return energy / mass


def certificate_gaps(f, sigma_N, ms):
    """``(m, I_m, |sigma_N - I_m|)`` for each section size ``m`` in ``ms``."""
    out = []
    for m in ms:
        e = smallest_eigpair(finite_section(f, int(m)))
        I_m = rayleigh_quotient(series_from_eigvec(f, e))
        out.append((int(m), I_m, abs(sigma_N - I_m)))
    return out


def certify(f, sigma_N, threshold=1e-12, m_max=1024):
    """Raise ``m`` one at a time until ``|sigma_N - I_m| < threshold`` or ``m_max`` is hit."""
    gaps = []
    for m in range(1, m_max + 1):
        gaps.extend(certificate_gaps(f, sigma_N, [m]))
        if gaps[-1][2] < threshold:
            break
    m, I_m, E = gaps[-1]
    return Certificate(sigma_N, m, I_m, E, tuple(gaps), E < threshold)
