"""Finite sections of the Dirichlet-to-Neumann operator and their lowest eigenpair.

In the cosine basis ``cos(k theta) / d_k`` on the outer circle the
Dirichlet-to-Neumann operator of the annulus is a symmetric tridiagonal
matrix.  Its ``n x n`` leading block ``M_n`` is built by
:func:`finite_section`; the smallest eigenvalue of ``M_n`` decreases to the
first Steklov-Dirichlet eigenvalue as ``n`` grows.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceFailure, NoConvergence
from .geometry import Annulus, BipolarFrame, bipolar_frame

__all__ = [
    "ModeWeights",
    "TridiagonalSection",
    "EigenResult",
    "ConvergedEigenvalue",
    "mode_weights",
    "finite_section",
    "sturm_count",
    "smallest_eigpair",
    "solve_first_eigenvalue",
    "determinant_identity_residual",
    "concentric_eigenvalue",
]

_EIG_RTOL = 1e-14
_MAX_BISECTIONS = 200


@dataclass(frozen=True, eq=False)
class ModeWeights:
    """Squared basis normalizers ``d_0^2, ..., d_{n-1}^2``."""

    d2: np.ndarray

    @property
    def d(self):
        return np.sqrt(self.d2)

    def __len__(self):
        return len(self.d2)


@dataclass(frozen=True, eq=False)
class TridiagonalSection:
    n: int
    diag: np.ndarray
    off: np.ndarray
    frame: BipolarFrame
    weights: ModeWeights

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.off * x[1:]
        y[1:] += self.off * x[:-1]
        return y

    def dense(self):
        """Dense copy of the matrix, for tests and small diagnostics."""
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Smallest eigenpair of a finite section.

    ``coeffs`` are the coordinates of the unit eigenvector in the basis
    ``cos(k theta) / d_k``; the sign is fixed by ``coeffs[0] >= 0``.
    """

    n: int
    sigma: float
    coeffs: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True, eq=False)
class ConvergedEigenvalue:
    """Outcome of truncation doubling.

    ``history`` holds ``(n, sigma_n, delta)`` per doubling step, with
    ``delta = sigma_{n/2} - sigma_n`` (``nan`` on the first step).  For a
    concentric annulus the exact value is returned with ``n_final = 0`` and
    an empty history.
    """

    sigma: float
    n_final: int
    history: list = field(default_factory=list)
    annulus: Annulus = None
    frame: BipolarFrame = None
    eig: EigenResult = None

    @property
    def last_delta(self):
        if not self.history:
            return 0.0
        return self.history[-1][2]


def concentric_eigenvalue(r1, r2):
    """Closed form ``1 / (r2 ln(r2 / r1))`` of the concentric annulus."""
    return 1.0 / (r2 * math.log(r2 / r1))


def mode_weights(f, n):
    """Weights ``d_0^2 = 1/(xi1 - xi2)`` and ``d_k^2 = k / (2 tanh(k (xi1 - xi2)))``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    g = f.gap
    k = np.arange(n, dtype=float)
    d2 = np.empty(n)
    d2[0] = 1.0 / g
    d2[1:] = k[1:] / (2.0 * np.tanh(k[1:] * g))
    return ModeWeights(d2)


def finite_section(f, n):
    """The ``n x n`` finite section ``M_n`` for frame ``f``.

    Diagonal ``cosh(xi2) d_0^2 / alpha`` then ``2 cosh(xi2) d_k^2 / alpha``;
    off-diagonal ``d_k d_{k+1} / alpha``.
    """
    w = mode_weights(f, n)
    c2 = math.cosh(f.xi2)
    diag = 2.0 * c2 * w.d2 / f.alpha
    diag[0] = c2 * w.d2[0] / f.alpha
    d = w.d
    off = d[:-1] * d[1:] / f.alpha
    return TridiagonalSection(n, diag, off, f, w)


def _pivmin(m):
    scale = max(float(np.max(np.abs(m.diag))), float(np.max(np.abs(m.off), initial=0.0)))
    return np.finfo(float).tiny * max(1.0, scale * scale)


def _count(diag, off2, x, pivmin):
    # number of negative LDL^T pivots of M - x I == number of eigenvalues < x
    neg = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        neg += 1
    for i in range(1, len(diag)):
        q = diag[i] - x - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            neg += 1
    return neg


def sturm_count(m, x):
    """Number of eigenvalues of ``m`` strictly below ``x`` (Sturm sequence count)."""
    return _count(m.diag.tolist(), (m.off**2).tolist(), float(x), _pivmin(m))


def _shifted_solve(diag, off, x, b, pivmin):
    """Solve ``(M - x I) y = b`` by LDL^T without pivoting; tiny pivots are regularized."""
    n = len(diag)
    q = [0.0] * n
    y = list(b)
    q[0] = diag[0] - x
    if abs(q[0]) < pivmin:
        q[0] = pivmin
    for i in range(1, n):
        l = off[i - 1] / q[i - 1]
        q[i] = diag[i] - x - l * off[i - 1]
        if abs(q[i]) < pivmin:
            q[i] = pivmin
        y[i] -= l * y[i - 1]
    y[n - 1] /= q[n - 1]
    for i in range(n - 2, -1, -1):
        y[i] = y[i] / q[i] - off[i] / q[i] * y[i + 1]
    return np.array(y)


def smallest_eigpair(m, upper=None):
    """Smallest eigenpair of a positive definite tridiagonal section.

    The eigenvalue is located by bisection on the Sturm count, starting
    from ``[0, min(diag)]`` (or ``upper`` if it is tighter), to relative
    width ``1e-14``.  The eigenvector comes from inverse iteration with the
    converged lower end as shift.

    Parameters
    ----------
    m : TridiagonalSection
    upper : float, optional
        Known upper bound for the smallest eigenvalue, e.g. the value of a
        smaller section.

    Returns
    -------
    EigenResult

    Raises
    ------
    ConvergenceFailure
        If the section is not positive definite, bisection does not close
        the bracket, or inverse iteration cannot reach the residual bound.
    """
    diag = m.diag.tolist()
    off = m.off.tolist()
    off2 = [o * o for o in off]
    pivmin = _pivmin(m)
    if m.n == 1:
        return EigenResult(1, diag[0], np.ones(1), 0.0)
    if _count(diag, off2, 0.0, pivmin) != 0:
        raise ConvergenceFailure("finite section is not positive definite")

    lo = 0.0
    hi = min(diag)
    if upper is not None and 0.0 < upper < hi:
        hi = upper
    for _ in range(64):
        if _count(diag, off2, hi, pivmin) >= 1:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ConvergenceFailure("could not bracket the smallest eigenvalue")

    for _ in range(_MAX_BISECTIONS):
        if hi - lo <= _EIG_RTOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if _count(diag, off2, mid, pivmin) >= 1:
            hi = mid
        else:
            lo = mid
    else:
        raise ConvergenceFailure("bisection budget exhausted")
    sigma = 0.5 * (lo + hi)

    x = np.full(m.n, 1.0 / math.sqrt(m.n))
    # 1e-12 sigma is below the rounding floor once ||M|| is huge (thin gaps, large n)
    norm = float(np.max(np.abs(m.diag))) + 2.0 * float(np.max(np.abs(m.off)))
    tol = max(1e-12 * sigma, 8.0 * np.finfo(float).eps * norm)
    res = math.inf
    for _ in range(6):
        x = _shifted_solve(diag, off, lo, x.tolist(), pivmin)
        x /= np.linalg.norm(x)
        res = float(np.linalg.norm(m.matvec(x) - sigma * x))
        if res <= tol:
            break
    else:
        raise ConvergenceFailure(f"inverse iteration residual {res:.3e} above {tol:.3e}")
    if x[0] < 0.0:
        x = -x
    return EigenResult(m.n, sigma, x, res)


def solve_first_eigenvalue(a, tol=1e-12, n_max=4096, relative=False, n_start=8):
    """First Steklov-Dirichlet eigenvalue by truncation doubling.

    Sections of size ``n = 8, 16, 32, ...`` are solved until two
    consecutive values differ by less than ``tol`` (absolute, or relative
    to the newer value when ``relative`` is true).

    Parameters
    ----------
    a : Annulus or tuple (r1, r2, t)
    tol : float, default 1e-12
    n_max : int, default 4096
        Largest section size tried; must be a power of two.
    relative : bool, default False

    Returns
    -------
    ConvergedEigenvalue

    Raises
    ------
    NoConvergence
        If ``n_max`` is reached before the stopping test passes.
    """
    if not isinstance(a, Annulus):
        a = Annulus(*a)
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if n_max < n_start or n_max & (n_max - 1):
        raise ValueError(f"n_max must be a power of two >= {n_start}, got {n_max}")
    if a.is_concentric:
        return ConvergedEigenvalue(concentric_eigenvalue(a.r1, a.r2), 0, [], a, None, None)

    f = bipolar_frame(a)
    history = []
    prev = None
    n = n_start
    while n <= n_max:
        eig = smallest_eigpair(finite_section(f, n), upper=None if prev is None else prev.sigma)
        if prev is None:
            delta = math.nan
        else:
            delta = prev.sigma - eig.sigma
        history.append((n, eig.sigma, delta))
        if prev is not None:
            gap = abs(delta) / eig.sigma if relative else abs(delta)
            if gap < tol:
                return ConvergedEigenvalue(eig.sigma, n, history, a, f, eig)
        prev = eig
        n *= 2
    raise NoConvergence(
        f"no convergence to tol={tol:g} up to n_max={n_max} for {a}", history
    )


def _log_cosh(x):
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def determinant_identity_residual(f, n):
    """Log-domain mismatch between ``det M_n`` and its closed form.

    ``det M_n = alpha^-n * prod(d_k^2) * cosh(n xi2)``.  The left side is
    accumulated through the tridiagonal determinant recurrence in ratio
    form, so neither side overflows.

    Returns
    -------
    float
        ``|log det M_n - log(closed form)|``, which is the relative error
        of the determinant to first order.
    """
    m = finite_section(f, n)
    diag = m.diag.tolist()
    off2 = (m.off**2).tolist()
    log_det = 0.0
    sign = 1.0
    r = diag[0]
    log_det += math.log(abs(r))
    sign *= math.copysign(1.0, r)
    for i in range(1, n):
        r = diag[i] - off2[i - 1] / r
        log_det += math.log(abs(r))
        sign *= math.copysign(1.0, r)
    if sign < 0:
        return math.inf
    rhs = -n * math.log(f.alpha) + float(np.sum(np.log(m.weights.d2))) + _log_cosh(n * f.xi2)
    return abs(log_det - rhs)
