"""Coefficient ladders, analytic bounds, the shape derivative and an independent eigenvalue oracle.

The scaled coefficients ``A~_n = A_n cosh(n (xi1 - xi2))`` of the first
eigenfunction obey the three-term recurrence ::

    A~_{n+2} = -T_{n+1} A~_{n+1} - A~_n,
    T_n = 2 cosh(xi2) - (2 alpha sigma / n) tanh(n (xi1 - xi2)).

The eigenfunction picks out the *minimal* solution, whose ratios
``F_n = A~_{n+1} / A~_n`` tend to ``-exp(-xi2)``.  Forward iteration drifts
onto the dominant solution (ratio ``-exp(xi2)``), so ratios are always
taken from the backward recursion ``F_{n-1} = -1 / (T_n + F_n)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .eigenfunction import EigenfunctionSeries
from .exceptions import (
    DivisionNearZero,
    InvalidAnnulus,
    NoRootInBracket,
    NotNormalized,
)
from .geometry import Annulus, bipolar_frame
from .spectral import concentric_eigenvalue

__all__ = [
    "CoefficientLadder",
    "BoundsReport",
    "AsymptoticLadder",
    "t_sequence",
    "ladder_forward",
    "forward_ratios",
    "f_ratio_backward",
    "f1_explicit",
    "fixed_points",
    "n0_threshold",
    "coefficient_ladder",
    "upper_bound_M",
    "concentric_value",
    "liminf_lower",
    "bounds_report",
    "shape_derivative",
    "eigenvalue_by_continued_fraction",
    "asymptotic_ladder",
]

_TINY_DENOM = 1e-300
_QUAD_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class CoefficientLadder:
    """Ladder diagnostics for one eigenvalue.

    ``T``, ``L`` and ``U`` are indexed from ``n = 1``; ``F[i]`` is
    ``F_{i+1}`` from the backward recursion.
    """

    sigma: float
    T: np.ndarray
    F: np.ndarray
    L: np.ndarray
    U: np.ndarray
    L_inf: float
    U_inf: float
    n0: int


@dataclass(frozen=True)
class BoundsReport:
    upper_M: float
    concentric: float
    liminf_lower: float

    @property
    def cap(self):
        """``min(M(t), sigma^0)``, the best available a priori upper bound."""
        return min(self.upper_M, self.concentric)


@dataclass(frozen=True, eq=False)
class AsymptoticLadder:
    """Small-gap predictions ``T_n ~ 2 + c R_n eps`` and ``U_n ~ -exp(-sqrt(R_n^+) xi2)``."""

    R: np.ndarray
    predicted_T: np.ndarray
    predicted_U: np.ndarray
    eps: float


def _annulus(a):
    return a if isinstance(a, Annulus) else Annulus(*a)


def t_sequence(f, sigma, n_max):
    """``T_1 .. T_{n_max}``."""
    n = np.arange(1, n_max + 1, dtype=float)
    return 2.0 * math.cosh(f.xi2) - 2.0 * f.alpha * sigma / n * np.tanh(n * f.gap)


def _t(f, sigma, n):
    return 2.0 * math.cosh(f.xi2) - 2.0 * f.alpha * sigma / n * math.tanh(n * f.gap)


def _first_two(f, sigma, a0):
    c2 = math.cosh(f.xi2)
    A1 = a0 * c2 / f.xi1 - a0 * f.alpha * sigma * (1.0 - f.xi2 / f.xi1)
    A2 = a0 / f.xi1 + 2.0 * f.alpha * sigma * A1 * math.tanh(f.gap) - 2.0 * A1 * c2
    return A1, A2


def f1_explicit(f, sigma):
    """``F_1 = A~_2 / A~_1`` from the closed-form first two coefficients (``a0`` cancels)."""
    A1, A2 = _first_two(f, sigma, 1.0)
    return A2 / A1


def ladder_forward(f, sigma, a0, n_max):
    """``A~_1 .. A~_{n_max}`` by forward recursion from the closed-form start.

    Forward iteration is unstable for the minimal solution; it is kept as
    a negative control.  ``n_max`` is capped where the dominant branch,
    growing like ``exp(n xi2)``, would overflow.
    """
    if a0 == 0.0:
        raise ValueError("a0 must be nonzero")
    cap = int(600.0 / f.xi2) if f.xi2 > 0 else n_max
    n_max = max(2, min(n_max, cap))
    out = [0.0] * n_max
    out[0], out[1] = _first_two(f, sigma, a0)
    for n in range(1, n_max - 1):
        # out[n + 1] = A~_{n+2}
        out[n + 1] = -out[n] * _t(f, sigma, n + 1) - out[n - 1]
    return np.array(out)


def forward_ratios(f, sigma, n_max):
    """``F_1 .. F_{n_max}`` by the forward map ``F_n = -T_n - 1 / F_{n-1}``."""
    F = [f1_explicit(f, sigma)]
    for n in range(2, n_max + 1):
        F.append(-_t(f, sigma, n) - 1.0 / F[-1])
    return np.array(F)


def f_ratio_backward(f, sigma, n_lo, n_hi, seed=None):
    """``F_{n_lo} .. F_{n_hi}`` of the minimal solution by backward recursion.

    The tail is seeded with ``F_{n_hi} = -exp(-xi2)`` (or ``seed``).  The
    backward map contracts, so values far below ``n_hi`` forget the seed.

    Raises
    ------
    DivisionNearZero
        If ``|T_n + F_n|`` falls below ``1e-300``, which happens only for
        ``sigma`` far from the spectrum.
    """
    if not 1 <= n_lo <= n_hi:
        raise ValueError(f"need 1 <= n_lo <= n_hi, got {n_lo}, {n_hi}")
    F = -math.exp(-f.xi2) if seed is None else float(seed)
    out = [0.0] * (n_hi - n_lo + 1)
    out[-1] = F
    for n in range(n_hi, n_lo, -1):
        den = _t(f, sigma, n) + F
        if abs(den) < _TINY_DENOM:
            raise DivisionNearZero(f"T_{n} + F_{n} = {den:.3e}")
        F = -1.0 / den
        out[n - 1 - n_lo] = F
    return np.array(out)


def fixed_points(f, sigma, n):
    """Fixed points ``(L_n, U_n)`` of ``x -> -T_n - 1/x``; ``(-1, -1)`` when ``T_n <= 2``."""
    T = _t(f, sigma, n)
    if T <= 2.0:
        return -1.0, -1.0
    L = -0.5 * (T + math.sqrt((T - 2.0) * (T + 2.0)))
    return L, 1.0 / L


def n0_threshold(a, f, sigma_cap):
    """Smallest integer ``n0 >= alpha * cap / (sqrt((alpha/r2)^2 + 1) - 1)``; then ``T_n > 2`` for ``n >= n0``."""
    a = _annulus(a)
    if sigma_cap <= 0.0:
        return 0
    x = f.alpha / a.r2
    # sqrt(1 + x^2) - 1 without cancellation
    denom = x * x / (math.sqrt(1.0 + x * x) + 1.0)
    return int(math.ceil(f.alpha * sigma_cap / denom))


def coefficient_ladder(a, sigma, n_max=None, tail=None):
    """Assemble ``T``, backward ``F``, fixed points and ``n0`` for annulus ``a`` at ``sigma``."""
    a = _annulus(a)
    f = bipolar_frame(a)
    n0 = n0_threshold(a, f, bounds_report(a).cap)
    if n_max is None:
        n_max = n0 + 201
    if tail is None:
        tail = 64 + int(math.ceil(40.0 / f.xi2))
    T = t_sequence(f, sigma, n_max)
    F = f_ratio_backward(f, sigma, 1, n_max + tail)[:n_max]
    LU = [fixed_points(f, sigma, n) for n in range(1, n_max + 1)]
    L = np.array([p[0] for p in LU])
    U = np.array([p[1] for p in LU])
    return CoefficientLadder(sigma, T, F, L, U, -math.exp(f.xi2), -math.exp(-f.xi2), n0)


def concentric_value(r1, r2):
    """``1 / (r2 ln(r2 / r1))``, the largest first eigenvalue over all offsets."""
    Annulus(r1, r2, 0.0)
    return concentric_eigenvalue(float(r1), float(r2))


def liminf_lower(r1, r2):
    """Lower bound ``r1 / (2 r2 (r2 - r1))`` for the eigenvalue as the gap closes."""
    Annulus(r1, r2, 0.0)
    return r1 / (2.0 * r2 * (r2 - r1))


def _chord_integral(r2, t):
    """``int_0^pi sqrt(r2^2 - 2 r2 t cos phi + t^2) dphi`` by Gauss-Legendre with node doubling."""

    def gl(n):
        x, w = np.polynomial.legendre.leggauss(n)
        phi = 0.5 * math.pi * (x + 1.0)
        return 0.5 * math.pi * float(np.dot(w, np.sqrt(r2 * r2 - 2.0 * r2 * t * np.cos(phi) + t * t)))

    n = 16
    prev = gl(n)
    while n < 1 << 14:
        n *= 2
        cur = gl(n)
        if abs(cur - prev) <= _QUAD_RTOL * abs(cur):
            return cur
        prev = cur
    return cur


def upper_bound_M(a):
    """Test-function upper bound ``M(t)`` from ``v = |x - (t, 0)| - r1``.

    ``M(t) = pi (r2^2 - r1^2) / (2 pi r2 (r2^2 + r1^2 + t^2) - 4 r1 r2 J(t))``
    with ``J(t) = int_0^pi sqrt(r2^2 - 2 r2 t cos phi + t^2) dphi``.
    """
    a = _annulus(a)
    r1, r2, t = a.r1, a.r2, a.t
    J = _chord_integral(r2, t)
    den = 2.0 * math.pi * r2 * (r2 * r2 + r1 * r1 + t * t) - 4.0 * r1 * r2 * J
    return math.pi * (r2 * r2 - r1 * r1) / den


def bounds_report(a):
    a = _annulus(a)
    return BoundsReport(upper_bound_M(a), concentric_value(a.r1, a.r2), liminf_lower(a.r1, a.r2))


def shape_derivative(s):
    """Derivative of the first eigenvalue with respect to the offset ``t``.

    Parameters
    ----------
    s : EigenfunctionSeries
        Normalized series (``int_{outer} u^2 dS = 1``).

    Returns
    -------
    float
        ``-(2 pi / alpha) (-a0^2/xi1^2 + (2 a0/xi1) A_1 cosh xi1
        - 2 sum_n (A_n^2 + A_n A_{n+1} cosh xi1))``.  The leading minus
        accounts for the bipolar frame placing the inner disk at ``-t``
        along the first axis, so increasing ``t`` moves it in the ``-e1``
        direction.

    Raises
    ------
    NotNormalized
        If ``s`` has not been through :func:`normalize`.
    """
    if not isinstance(s, EigenfunctionSeries):
        raise TypeError("expected an EigenfunctionSeries")
    if not s.normalized:
        raise NotNormalized("shape derivative needs the normalized eigenfunction")
    f = s.frame
    ch = math.cosh(f.xi1)
    A = np.append(s.A, 0.0)
    lead = -s.a0**2 / f.xi1**2 + 2.0 * s.a0 / f.xi1 * A[0] * ch
    acc = 0.0
    for n in range(len(A) - 1):
        term = A[n] * A[n] + A[n] * A[n + 1] * ch
        acc += term
        if n > 0 and abs(term) < 1e-16 * abs(acc):
            break
    return -(2.0 * math.pi / f.alpha) * (lead - 2.0 * acc)


def _cf_residual(f, sigma, n_hi):
    # A~_2 - F_1 A~_1: zero exactly where the explicit start matches the minimal tail.
    # Clearing the A~_1 denominator removes the pole of F_1 at sigma = M_1.
    A1, A2 = _first_two(f, sigma, 1.0)
    F1 = f_ratio_backward(f, sigma, 1, n_hi)[0]
    return A2 - F1 * A1


def eigenvalue_by_continued_fraction(a, bracket=None, tol=1e-13, n_hi=None):
    """First eigenvalue as the root of the continued-fraction matching condition.

    Independent of the finite-section solver: the explicit ratio
    ``F_1 = A~_2 / A~_1`` must equal the ``F_1`` of the minimal solution
    obtained by backward recursion.  The root is bracketed and bisected.

    Raises
    ------
    NoRootInBracket
        If the residual has the same sign at both bracket ends.
    """
    a = _annulus(a)
    f = bipolar_frame(a)
    lo, hi = bracket if bracket is not None else (1e-6, concentric_value(a.r1, a.r2))
    if n_hi is None:
        n0 = n0_threshold(a, f, concentric_value(a.r1, a.r2))
        n_hi = n0 + 64 + int(math.ceil(40.0 / f.xi2))
    r_lo = _cf_residual(f, lo, n_hi)
    r_hi = _cf_residual(f, hi, n_hi)
    if r_lo == 0.0:
        return lo
    if r_hi == 0.0:
        return hi
    if (r_lo > 0) == (r_hi > 0):
        raise NoRootInBracket(f"residual has one sign on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        r_mid = _cf_residual(f, mid, n_hi)
        if r_mid == 0.0:
            return mid
        if (r_mid > 0) == (r_lo > 0):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def asymptotic_ladder(a, f, sigma, n_max):
    """Thin-gap expansions of ``T_n`` and ``U_n`` through ``R_n``."""
    a = _annulus(a)
    if a.eps <= 0.0:
        raise InvalidAnnulus("gap must be positive")
    r1, r2 = a.r1, a.r2
    n = np.arange(1, n_max + 1, dtype=float)
    s = n * f.gap
    R = 1.0 - sigma * 2.0 * r2 * (r2 - r1) / r1 * np.tanh(s) / s
    T_hat = 2.0 + 2.0 * r1 / (r2 * (r2 - r1)) * R * a.eps
    U_hat = -np.exp(-np.sqrt(np.maximum(R, 0.0)) * f.xi2)
    return AsymptoticLadder(R, T_hat, U_hat, a.eps)

