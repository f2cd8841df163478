import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steklov_annulus import Annulus, DegenerateFrame, InvalidAnnulus, asymptotic_frame, bipolar_frame
from steklov_annulus.eigenfunction import boundary_integral
from steklov_annulus.geometry import scale_factor, to_cartesian


@st.composite
def annuli(draw):
    r1 = draw(st.floats(0.05, 5.0))
    r2 = r1 + draw(st.floats(1e-2, 5.0))
    t = draw(st.floats(1e-3, 0.999)) * (r2 - r1)
    return Annulus(r1, r2, t)


@pytest.mark.parametrize("args", [(0.0, 1.0, 0.0), (3.0, 1.0, 0.0), (1.0, 1.0, 0.0),
                                  (1.0, 3.0, 2.0), (1.0, 3.0, -0.1), (1.0, math.nan, 0.0)])
def test_invalid_annulus(args):
    with pytest.raises(InvalidAnnulus):
        Annulus(*args)


def test_invalid_annulus_is_value_error():
    with pytest.raises(ValueError):
        Annulus(2.0, 1.0)


def test_eps_and_t_frac():
    a = Annulus(1.0, 3.0, 1.5)
    assert a.eps == 0.5
    assert a.t_frac == 0.75
    assert Annulus(1.0, 3.0).is_concentric


def test_frame_example_values(frame_131):
    assert frame_131.alpha == pytest.approx(math.sqrt(45.0) / 2.0, rel=1e-14)
    assert frame_131.alpha == pytest.approx(3.354101966, abs=1e-9)
    assert frame_131.xi2 == pytest.approx(0.962423650, abs=1e-9)
    assert frame_131.xi1 == pytest.approx(1.924847300, abs=1e-9)


def test_frame_degenerate_at_zero_offset():
    with pytest.raises(DegenerateFrame):
        bipolar_frame(Annulus(1.0, 3.0, 0.0))


def test_frame_accepts_tuple():
    assert bipolar_frame((1.0, 3.0, 1.0)) == bipolar_frame(Annulus(1.0, 3.0, 1.0))


def test_frame_tuple_validated():
    with pytest.raises(InvalidAnnulus):
        bipolar_frame((1.0, 3.0, 5.0))


def test_alpha_grows_as_offset_vanishes():
    ts = [1.0, 0.1, 1e-2, 1e-4, 1e-8]
    alphas = [bipolar_frame(Annulus(1.0, 3.0, t)).alpha for t in ts]
    assert all(b > a for a, b in zip(alphas, alphas[1:]))
    assert alphas[-1] > 1e7


@settings(max_examples=300, deadline=None)
@given(annuli())
def test_frame_invariants(a):
    f = bipolar_frame(a)
    assert 0.0 < f.xi2 < f.xi1
    assert a.r1 * math.sinh(f.xi1) == pytest.approx(f.alpha, rel=1e-13)
    assert a.r2 * math.sinh(f.xi2) == pytest.approx(f.alpha, rel=1e-13)
    # coth(xi2) - coth(xi1) in the form sinh(xi1 - xi2) / (sinh xi1 sinh xi2)
    offset = f.alpha * math.sinh(f.gap) / (math.sinh(f.xi1) * math.sinh(f.xi2))
    assert offset == pytest.approx(a.t, rel=1e-12)


def test_center_offset_direct_form(frame_131):
    assert frame_131.center(frame_131.xi2) - frame_131.center(frame_131.xi1) == pytest.approx(1.0, rel=1e-13)
    assert frame_131.radius(frame_131.xi2) == pytest.approx(3.0, rel=1e-14)
    assert frame_131.radius(frame_131.xi1) == pytest.approx(1.0, rel=1e-14)


def test_to_cartesian_axis_points(frame_131):
    f = frame_131
    for xi in (0.3, f.xi2, f.xi1):
        x, y = to_cartesian(f, xi, 0.0)
        assert x == pytest.approx(f.alpha * math.tanh(xi / 2), rel=1e-14)
        assert y == 0.0
        x, y = to_cartesian(f, xi, math.pi)
        assert x == pytest.approx(f.alpha / math.tanh(xi / 2), rel=1e-14)
        assert abs(y) < 1e-12


@pytest.mark.parametrize("t", [0.2, 1.0, 1.9])
def test_boundary_points_on_circles(t):
    f = bipolar_frame(Annulus(1.0, 3.0, t))
    th = np.linspace(-math.pi, math.pi, 257)[1:]
    for xi, r in ((f.xi2, 3.0), (f.xi1, 1.0)):
        x, y = to_cartesian(f, xi, th)
        dist = np.hypot(x - f.center(xi), y)
        assert np.max(np.abs(dist - r)) <= 1e-12 * max(1.0, f.center(xi))
    # the inner circle sits at -t relative to the outer center
    assert f.center(f.xi1) - f.center(f.xi2) == pytest.approx(-t, rel=1e-12)


def test_scale_factor_values(frame_131):
    f = frame_131
    assert scale_factor(f, 0.7, math.pi / 2) == pytest.approx(f.alpha / math.cosh(0.7), rel=1e-14)
    assert scale_factor(f, 50.0, 0.3) < 1e-20


def test_scale_factor_gives_circumference(frame_131):
    length = boundary_integral(frame_131, lambda th: np.ones_like(th))
    assert length == pytest.approx(2.0 * math.pi * 3.0, abs=1e-10)


def test_asymptotic_frame_values():
    af = asymptotic_frame(Annulus(1.0, 3.0, 2.0 - 1e-4))
    assert af.r_star == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert af.xi_hat_1 == pytest.approx(af.r_star * 1e-2, rel=1e-12)
    assert af.xi_hat_2 == pytest.approx(af.r_star / 3 * 1e-2, rel=1e-12)


def test_asymptotic_frame_sqrt_scaling():
    a = asymptotic_frame(Annulus(1.0, 3.0, 2.0 - 0.02))
    b = asymptotic_frame(Annulus(1.0, 3.0, 2.0 - 0.01))
    assert a.alpha_hat / b.alpha_hat == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_asymptotic_frame_order():
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        a = Annulus(1.0, 3.0, 2.0 - eps)
        err = abs(bipolar_frame(a).alpha - asymptotic_frame(a).alpha_hat)
        ratios.append(err / eps**1.5)
    assert max(ratios) / min(ratios) <= 4.0


def test_asymptotic_frame_positive():
    af = asymptotic_frame(Annulus(0.5, 0.7, 0.1))
    assert min(af.r_star, af.alpha_hat, af.xi_hat_1, af.xi_hat_2) > 0
