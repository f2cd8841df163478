import math

import numpy as np
import pytest

from steklov_annulus import Annulus, bipolar_frame
from steklov_annulus.eigenfunction import (
    _cosine_sum,
    _hyp_times,
    boundary_flux,
    boundary_integral,
    certificate_gaps,
    certify,
    evaluate,
    normalize,
    rayleigh_quotient,
    series_from_eigvec,
    trace_coefficients,
)
from steklov_annulus.exceptions import FrameMismatch, OutOfDomain, QuadratureStall, ZeroFunction
from steklov_annulus.spectral import EigenResult, mode_weights


def test_unit_vector_series(frame_1312):
    f = frame_1312
    e = EigenResult(5, 0.2, np.array([1.0, 0, 0, 0, 0]))
    s = series_from_eigvec(f, e)
    d0 = mode_weights(f, 1).d[0]
    assert s.a0 == pytest.approx(1.0 / d0 / (1.0 - f.xi2 / f.xi1), rel=1e-15)
    assert np.all(s.A == 0.0)
    assert s.n_modes == 5


def test_shape_mismatch(frame_1312):
    with pytest.raises(FrameMismatch):
        series_from_eigvec(frame_1312, EigenResult(4, 0.2, np.ones(3)))
    with pytest.raises(TypeError):
        series_from_eigvec(frame_1312, np.ones(3))


def test_trace_round_trip(frame_1312, eig_1312, series_1312, thetas):
    d = mode_weights(frame_1312, eig_1312.n).d
    k = np.arange(eig_1312.n)
    basis = (eig_1312.coeffs / d) @ np.cos(np.outer(k, thetas))
    series = evaluate(series_1312, np.full_like(thetas, frame_1312.xi2), thetas)
    assert np.max(np.abs(series - basis)) <= 1e-12


def test_dirichlet_trace(frame_1312, series_1312, normalized_1312, thetas):
    for s in (series_1312, normalized_1312):
        scale = max(abs(s.a0), np.max(np.abs(s.A)))
        u = evaluate(s, np.full_like(thetas, frame_1312.xi1), thetas)
        assert np.max(np.abs(u)) <= 1e-12 * scale


def test_out_of_domain(series_1312, frame_1312):
    with pytest.raises(OutOfDomain):
        evaluate(series_1312, frame_1312.xi1 + 1e-6, 0.0)
    with pytest.raises(OutOfDomain):
        evaluate(series_1312, frame_1312.xi2 - 1e-6, 0.0)


def test_evaluate_scalar_and_broadcast(series_1312, frame_1312):
    v = evaluate(series_1312, frame_1312.xi2, 0.3)
    assert isinstance(v, float)
    grid = evaluate(series_1312, np.full((2, 3), frame_1312.xi2), np.full((2, 3), 0.3))
    assert grid.shape == (2, 3) and np.all(grid == v)


def _five_point(s, xi, th, h):
    return (evaluate(s, xi + h, th) + evaluate(s, xi - h, th) + evaluate(s, xi, th + h)
            + evaluate(s, xi, th - h) - 4 * evaluate(s, xi, th)) / h**2


def test_harmonic(normalized_1312, frame_1312):
    # the plain stencil carries an h^2 truncation term, so combine steps h and h/2
    f, s, h = frame_1312, normalized_1312, 1e-3
    scale = abs(s.a0)
    for xi in np.linspace(f.xi2 + 0.01, f.xi1 - 0.01, 5):
        for th in (-2.0, 0.0, 1.0, 3.0):
            lap = (4 * _five_point(s, xi, th, h / 2) - _five_point(s, xi, th, h)) / 3
            assert abs(lap) <= 1e-6 * scale


def test_weight_integrals(frame_1312):
    f = frame_1312
    r2 = f.alpha / math.sinh(f.xi2)
    assert boundary_integral(f, lambda th: np.ones_like(th)) == pytest.approx(2 * math.pi * r2, abs=1e-10)
    assert boundary_integral(f, lambda th: math.cosh(f.xi2) + np.cos(th)) == pytest.approx(
        2 * math.pi * f.alpha, rel=1e-14)
    # alpha / (cosh x + cos th) = r2 (1 + 2 sum_k (-1)^k e^{-k x} cos k th)
    assert boundary_integral(f, np.cos) == pytest.approx(-2 * math.pi * r2 * math.exp(-f.xi2), rel=1e-13)
    assert boundary_integral(f, lambda th: np.cos(3 * th)) == pytest.approx(
        -2 * math.pi * r2 * math.exp(-3 * f.xi2), rel=1e-12)


def test_quadrature_stall(frame_1312):
    rng = np.random.default_rng(0)
    with pytest.raises(QuadratureStall):
        boundary_integral(frame_1312, lambda th: rng.standard_normal(np.shape(th)))


def test_normalization(normalized_1312, series_1312, frame_1312):
    s = normalized_1312
    tr = trace_coefficients(s)
    val = boundary_integral(frame_1312, lambda th: _cosine_sum(tr, th) ** 2)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert boundary_integral(frame_1312, lambda th: _cosine_sum(tr, th)) > 0
    doubled = normalize(series_1312.scaled(2.0))
    flipped = normalize(series_1312.scaled(-3.0))
    for other in (doubled, flipped):
        assert other.a0 == pytest.approx(s.a0, rel=1e-14)
        np.testing.assert_allclose(other.A, s.A, rtol=1e-13, atol=1e-300)


def test_normalize_idempotent(normalized_1312):
    again = normalize(normalized_1312)
    assert abs(again.a0 - normalized_1312.a0) <= 2 * np.spacing(abs(normalized_1312.a0))
    assert np.all(np.abs(again.A - normalized_1312.A) <= 2 * np.spacing(np.abs(normalized_1312.A)))


def test_zero_function(series_1312):
    with pytest.raises(ZeroFunction):
        normalize(series_1312.scaled(0.0))
    with pytest.raises(ZeroFunction):
        rayleigh_quotient(series_1312.scaled(0.0))


def test_positivity(normalized_1312, frame_1312):
    f = frame_1312
    xi = np.linspace(f.xi2, f.xi1, 64)
    th = np.linspace(-math.pi, math.pi, 128, endpoint=False) + math.pi / 128
    X, TH = np.meshgrid(xi, th, indexing="ij")
    assert np.min(evaluate(normalized_1312, X, TH)) >= -1e-10


def test_robin_condition(normalized_1312, frame_1312, thetas):
    s = normalized_1312
    flux = boundary_flux(s, thetas)
    u = evaluate(s, np.full_like(thetas, frame_1312.xi2), thetas)
    assert np.max(np.abs(flux - s.sigma * u)) <= 1e-8
    np.testing.assert_allclose(boundary_flux(s, -thetas), flux, rtol=0, atol=1e-15)


def test_flux_pairing(normalized_1312, frame_1312):
    s = normalized_1312
    val = boundary_integral(frame_1312, lambda th: boundary_flux(s, th) * evaluate(
        s, np.full_like(th, frame_1312.xi2), th))
    assert val == pytest.approx(s.sigma, abs=1e-9)


def test_energy_closed_form_vs_quadrature(normalized_1312, frame_1312):
    f, s = frame_1312, normalized_1312
    k = np.arange(1, s.n_modes, dtype=float)
    x, w = np.polynomial.legendre.leggauss(60)
    xis = 0.5 * f.gap * x + 0.5 * (f.xi1 + f.xi2)
    ws = 0.5 * f.gap * w
    n_th = 256
    th = -math.pi + 2 * math.pi * np.arange(n_th) / n_th
    energy = 0.0
    for xi, wx in zip(xis, ws):
        cosh_k = _hyp_times(s.A, k, f.xi1 - xi, "cosh")
        sinh_k = _hyp_times(s.A, k, f.xi1 - xi, "sinh")
        u_xi = -s.a0 / f.xi1 + 2 * cosh_k @ np.cos(np.outer(k, th))
        u_th = 2 * sinh_k @ np.sin(np.outer(k, th))
        energy += wx * np.sum(u_xi**2 + u_th**2) * 2 * math.pi / n_th
    # normalized, so the quotient equals the energy
    assert rayleigh_quotient(s) == pytest.approx(energy, rel=1e-8)


def test_rayleigh_scale_invariant(series_1312):
    base = rayleigh_quotient(series_1312)
    for c in (2.0, -0.5, 1e6):
        assert rayleigh_quotient(series_1312.scaled(c)) == pytest.approx(base, rel=4e-16)


def test_rayleigh_bounds_section(frame_1312, eig_1312):
    gaps = certificate_gaps(frame_1312, eig_1312.sigma, range(1, 25))
    assert all(I_m >= eig_1312.sigma - 1e-13 for _, I_m, _ in gaps)


def test_certificate(frame_1312, eig_1312):
    cert = certify(frame_1312, eig_1312.sigma)
    assert cert.passed and cert.E_final < 1e-12
    E = [g for _, _, g in cert.gaps]
    assert all(b < a for a, b in zip(E, E[1:]))
    assert cert.m_final == len(cert.gaps)


def test_certificate_gives_up(frame_1312, eig_1312):
    cert = certify(frame_1312, eig_1312.sigma, m_max=5)
    assert not cert.passed and cert.m_final == 5


def test_hyp_times_no_overflow():
    out = _hyp_times(np.array([1e-300, 0.0, -2.0]), np.array([700.0, 800.0, 1.0]), 1.0, "sinh")
    assert out[0] == pytest.approx(1e-300 * math.sinh(700.0), rel=1e-12)
    assert out[1] == 0.0
    assert out[2] == pytest.approx(-2.0 * math.sinh(1.0), rel=1e-15)


def test_cosine_sum_matches_direct():
    rng = np.random.default_rng(3)
    c = rng.standard_normal(20) * 0.5 ** np.arange(20)
    th = np.linspace(-3, 3, 31)
    direct = c @ np.cos(np.outer(np.arange(20), th))
    np.testing.assert_allclose(_cosine_sum(c, th), direct, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("t", [0.2, 1.9])
def test_other_offsets_positive(t):
    f = bipolar_frame(Annulus(1.0, 3.0, t))
    from steklov_annulus import solve_first_eigenvalue
    res = solve_first_eigenvalue(Annulus(1.0, 3.0, t))
    s = normalize(series_from_eigvec(f, res.eig))
    th = np.linspace(-math.pi, math.pi, 65)
    assert np.min(evaluate(s, np.full_like(th, f.xi2), th)) > 0
