"""Annulus geometry and the bipolar coordinate frame.

The annulus is bounded by an outer circle of radius ``r2`` and an inner
circle of radius ``r1`` whose center is offset by ``t``.  For ``t > 0``
both circles are level curves ``xi = xi2`` (outer) and ``xi = xi1`` (inner)
of bipolar coordinates with poles at ``(+-alpha, 0)``.  In that frame the
outer circle is centered at ``(alpha * coth(xi2), 0)`` and the inner one at
``(alpha * coth(xi1), 0)``, i.e. the inner disk is shifted by ``-t`` along
the first axis.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateFrame, InvalidAnnulus

__all__ = [
    "Annulus",
    "BipolarFrame",
    "AsymptoticFrame",
    "bipolar_frame",
    "to_cartesian",
    "scale_factor",
    "asymptotic_frame",
]


@dataclass(frozen=True)
class Annulus:
    """Eccentric annulus ``B(0, r2) \\ closure(B(t e1, r1))``.

    Raises :class:`InvalidAnnulus` on construction unless
    ``0 < r1 < r2`` and ``0 <= t < r2 - r1``.
    """

    r1: float
    r2: float
    t: float = 0.0

    def __post_init__(self):
        r1, r2, t = (float(v) for v in (self.r1, self.r2, self.t))
        if not all(math.isfinite(v) for v in (r1, r2, t)):
            raise InvalidAnnulus(f"non-finite annulus parameters ({r1}, {r2}, {t})")
        if not 0.0 < r1 < r2:
            raise InvalidAnnulus(f"need 0 < r1 < r2, got r1={r1}, r2={r2}")
        if not 0.0 <= t < r2 - r1:
            raise InvalidAnnulus(f"need 0 <= t < r2 - r1 = {r2 - r1}, got t={t}")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "t", t)

    @property
    def eps(self):
        """Width of the narrowest gap, ``r2 - r1 - t``."""
        return self.r2 - self.r1 - self.t

    @property
    def t_frac(self):
        return self.t / (self.r2 - self.r1)

    @property
    def is_concentric(self):
        return self.t == 0.0


@dataclass(frozen=True)
class BipolarFrame:
    """Bipolar frame ``(alpha, xi1, xi2)`` with ``0 < xi2 < xi1``."""

    alpha: float
    xi1: float
    xi2: float

    @property
    def gap(self):
        """Coordinate width ``xi1 - xi2`` of the annulus."""
        return self.xi1 - self.xi2

    def center(self, xi):
        """Abscissa ``alpha * coth(xi)`` of the center of the circle ``xi``."""
        return self.alpha / math.tanh(xi)

    def radius(self, xi):
        return self.alpha / math.sinh(xi)


@dataclass(frozen=True)
class AsymptoticFrame:
    """Leading small-gap terms of the bipolar frame."""

    r_star: float
    alpha_hat: float
    xi_hat_1: float
    xi_hat_2: float


def _as_annulus(a):
    if isinstance(a, Annulus):
        return a
    return Annulus(*a)


def bipolar_frame(a):
    """Bipolar frame of an eccentric annulus.

    Parameters
    ----------
    a : Annulus or tuple (r1, r2, t)
        Annulus with ``t > 0``.

    Returns
    -------
    BipolarFrame

    Raises
    ------
    DegenerateFrame
        If ``t == 0``; the poles run off to infinity and the concentric
        closed form has to be used instead.
    """
    a = _as_annulus(a)
    if a.t == 0.0:
        raise DegenerateFrame("bipolar frame is undefined for a concentric annulus")
    r1, r2, t = a.r1, a.r2, a.t
    # factored differences of squares; (r2 - r1 - t) is the small factor near touching
    outer = math.sqrt((r2 + r1 - t) * (r2 + r1 + t))
    inner = math.sqrt(a.eps * (r2 - r1 + t))
    alpha = outer * inner / (2.0 * t)
    # asinh is the cancellation-free form of ln(x + sqrt(x^2 + 1))
    return BipolarFrame(alpha, math.asinh(alpha / r1), math.asinh(alpha / r2))


def to_cartesian(f, xi, theta):
    """Map bipolar coordinates to Cartesian ``(x1, x2)``; broadcasts over arrays."""
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    den = np.cosh(xi) + np.cos(theta)
    return f.alpha * np.sinh(xi) / den, f.alpha * np.sin(theta) / den


def scale_factor(f, xi, theta):
    """Common scale factor ``h = alpha / (cosh xi + cos theta)``."""
    return f.alpha / (np.cosh(np.asarray(xi, dtype=float)) + np.cos(theta))


def asymptotic_frame(a):
    """Leading-order frame for a thin gap: ``alpha ~ r* sqrt(eps)``, ``xi_j ~ r*/r_j sqrt(eps)``."""
    a = _as_annulus(a)
    r_star = math.sqrt(2.0 * a.r1 * a.r2 / (a.r2 - a.r1))
    root = math.sqrt(a.eps)
    return AsymptoticFrame(
        r_star=r_star,
        alpha_hat=r_star * root,
        xi_hat_1=r_star / a.r1 * root,
        xi_hat_2=r_star / a.r2 * root,
    )
