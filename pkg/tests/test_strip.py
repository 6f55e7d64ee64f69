import math

import numpy as np
import pytest
from conftest import COTH1
from hypothesis import given, settings
from hypothesis import strategies as st

from stripwaves import spectral as sp
from stripwaves.errors import GraphConditionWarning, ParameterError, SingularTransformError
from stripwaves.spectral import SpectralFunction
from stripwaves.strip import (
    ComplexBoundaryFunction,
    StripPoint,
    boundary_trace,
    build_W,
    check_derivative_identity,
    check_product_identity,
    check_transform_identity,
    contour_pairing_check,
    extend,
    plotnikov_forward,
    plotnikov_inverse,
    product_identity_mean_gap,
)
from stripwaves.verify import random_mean_free

COS = SpectralFunction.from_trig(cos=[1.0])


def dirichlet_oracle(u, D, x, y):
    # harmonic phi with trace u on y = 0 and zero on y = -D, plus its conjugate psi
    n = np.arange(-u.n_max, u.n_max + 1)
    c = u.full()
    phi = psi = 0j
    for nn, cn in zip(n, c):
        if nn == 0:
            continue
        s = math.sinh(nn * D)
        e = cn * np.exp(1j * nn * x)
        phi += e * math.sinh(nn * (y + D)) / s
        psi += 1j * e * math.cosh(nn * (y + D)) / s
    return phi.real + 1j * psi.real


def flip_even(f, D):
    C = sp.apply_strip_hilbert(f, D)
    n = np.arange(C.n_max + 1)
    return SpectralFunction(np.where(n % 2 == 0, -C.coeffs, C.coeffs))


# ----------------------------------------------------------------------------
# Extension and traces
# ----------------------------------------------------------------------------


def test_extend_top_boundary():
    x = np.linspace(0, 2 * np.pi, 9)
    vals = extend(COS, 1.0, x + 0j)
    assert np.allclose(vals, np.cos(x) - 1j * COTH1 * np.sin(x), atol=1e-14)
    assert extend(COS, 1.0, StripPoint(0.3, 0.0)) == pytest.approx(math.cos(0.3) - 1j * COTH1 * math.sin(0.3))


def test_extend_bottom_is_imaginary():
    x = np.linspace(0, 2 * np.pi, 17)
    vals = extend(COS, 1.0, x - 1j)
    assert np.max(np.abs(vals.real)) < 1e-12


def test_extend_matches_dirichlet_series():
    u = SpectralFunction.from_trig(sin=[0, 1.0])
    val = extend(u, 1.0, StripPoint(math.pi / 4, -0.5))
    assert val == pytest.approx(dirichlet_oracle(u, 1.0, math.pi / 4, -0.5), abs=1e-13)


def test_extend_random_interior(rng):
    u = random_mean_free(rng, 10)
    for z in [0.4 - 0.1j, 2.0 - 0.7j, 5.0 - 1.9j]:
        assert extend(u, 2.0, z) == pytest.approx(dirichlet_oracle(u, 2.0, z.real, z.imag), abs=1e-11)


def test_extend_errors():
    with pytest.raises(ValueError):
        extend(COS + 1.0, 1.0, 0j)
    with pytest.raises(ValueError):
        extend(COS, 1.0, 0.1j)
    with pytest.raises(ValueError):
        extend(COS, 1.0, -1.5j)
    with pytest.raises(ParameterError):
        extend(COS, 0.0, 0j)


def test_extend_wide_strip_no_overflow():
    u = SpectralFunction.from_trig(cos=np.ones(64))
    vals = extend(u, 30.0, np.array([0.1 - 15j, 0.2 - 30j]))
    assert np.all(np.isfinite(vals))


def test_boundary_trace():
    t = boundary_trace(COS, 1.0)
    assert np.allclose(t.real.cos_coefficients(), [1.0])
    assert np.allclose(t.imag.sin_coefficients(), [-COTH1])
    z = boundary_trace(SpectralFunction.zeros(4), 1.0)
    assert z.real.max_abs_coeff() == 0 and z.imag.max_abs_coeff() == 0
    with pytest.raises(ValueError):
        boundary_trace(COS + 2.0, 1.0)


def test_boundary_trace_matches_extend(rng):
    u = random_mean_free(rng, 12)
    M = 64
    assert np.max(np.abs(boundary_trace(u, 0.8).samples(M) - extend(u, 0.8, sp.grid(M) + 0j))) < 1e-12


def test_complex_boundary_function_serialization():
    t = boundary_trace(COS, 1.0)
    d = t.to_dict()
    assert set(d) == {"re", "im"}
    back = ComplexBoundaryFunction.from_dict(d)
    assert np.array_equal(back.imag.coeffs, t.imag.coeffs)


# ----------------------------------------------------------------------------
# W
# ----------------------------------------------------------------------------


def test_build_W_flat():
    W = build_W(SpectralFunction.zeros(4), 2.0, 1.0)
    assert np.allclose(W.samples(16), 0.5)


def test_build_W_first_order():
    eps = 1e-3
    W = build_W(COS * eps, 1.0, 1.0)
    assert np.allclose(W.real.cos_coefficients(), [eps * COTH1])
    assert np.allclose(W.imag.sin_coefficients(), [-eps])
    assert W.real.coeffs[0] == 1.0


def test_build_W_min_real():
    W = build_W(COS * 0.01, 1.0, 1.0)
    assert W.min_real() == pytest.approx(1 - 0.01 * COTH1, abs=1e-12)
    assert W.min_real() == pytest.approx(0.98687, abs=1e-5)


def test_build_W_flags_non_graph():
    with pytest.warns(GraphConditionWarning):
        W = build_W(COS * 2.0, 1.0, 1.0)
    assert W.min_real() < 0


# ----------------------------------------------------------------------------
# Plotnikov transform
# ----------------------------------------------------------------------------


def test_forward_flat():
    u = SpectralFunction.from_trig(cos=[0.3, -1.0], sin=[0, 0, 2.0])
    W = build_W(SpectralFunction.zeros(3), 4.0, 1.0)
    assert np.allclose(plotnikov_forward(u, W, 1.0).coeffs, (u / 4.0).coeffs)


def test_forward_composition():
    eps, D = 0.05, 1.0
    w = COS * eps
    W = build_W(w, 1.0, D)
    P = plotnikov_forward(COS, W, D, n_out=2)
    wp = sp.derivative(w)
    ref = sp.multiply(COS, sp.apply_strip_hilbert(wp, D) + 1.0, 2) + sp.multiply(wp, sp.apply_strip_hilbert(COS, D), 2)
    assert np.max(np.abs(P.coeffs - ref.coeffs)) < 1e-15
    # closed form: cos x + eps coth(1) (cos^2 x - sin^2 x) = cos x + eps coth(1) cos 2x
    assert np.allclose(P.cos_coefficients(), [1.0, eps * COTH1], atol=1e-15)


def test_forward_is_mean_free(rng):
    W = build_W(random_mean_free(rng, 6, decay=0.5, even=True) * 0.05, 1.0, 0.7)
    u = random_mean_free(rng, 6)
    P = plotnikov_forward(u, W, 0.7, n_out=12)
    assert P.is_mean_free


def test_inverse_flat():
    q = SpectralFunction.from_trig(cos=[1.0, 0.5])
    W = build_W(SpectralFunction.zeros(2), 3.0, 1.0)
    assert np.allclose(plotnikov_inverse(q, W, 1.0).coeffs, (q * 3.0).coeffs, atol=1e-15)


@pytest.mark.parametrize("D", [0.5, 1.0, 2.0])
def test_round_trips(rng, D):
    w = random_mean_free(rng, 5, 16, 0.5, even=True) * 0.08
    W = build_W(w, 1.0, D)
    u = random_mean_free(rng, 10, 32)
    back = plotnikov_inverse(plotnikov_forward(u, W, D, n_out=32), W, D, n_out=32)
    assert (back - u).max_abs_coeff() < 1e-10
    q = random_mean_free(rng, 4, 6)
    qi = plotnikov_inverse(q, W, D, n_out=160)
    # the inverse is not band-limited; its tail is geometrically small
    assert (plotnikov_forward(qi, W, D, n_out=6) - q).max_abs_coeff() < 1e-10


def test_naive_inverse_misses_a_rank_one_term(rng):
    D = 1.0
    w = random_mean_free(rng, 4, 8, 0.5, even=True) * 0.1
    W = build_W(w, 1.0, D)
    u = random_mean_free(rng, 6, 64)
    q = plotnikov_forward(u, W, D, n_out=64)
    M = 512
    naive = sp.analyze(np.real(boundary_trace(q, D).samples(M) / W.samples(M)), 64)
    assert (naive - u).max_abs_coeff() > 1e-5
    assert (plotnikov_inverse(q, W, D, n_out=64) - u).max_abs_coeff() < 1e-10


def test_inverse_singular():
    with pytest.warns(GraphConditionWarning):
        W = build_W(COS * 2.0, 1.0, 1.0)
    with pytest.raises(SingularTransformError):
        plotnikov_inverse(COS, W, 1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_forward_linearity(a, b, seed):
    rng = np.random.default_rng(seed)
    W = build_W(random_mean_free(rng, 4, decay=0.5, even=True) * 0.05, 1.0, 1.0)
    u, v = random_mean_free(rng, 6), random_mean_free(rng, 6)
    lhs = plotnikov_forward(u * a + v * b, W, 1.0, n_out=10)
    rhs = plotnikov_forward(u, W, 1.0, n_out=10) * a + plotnikov_forward(v, W, 1.0, n_out=10) * b
    assert (lhs - rhs).max_abs_coeff() < 1e-13


# ----------------------------------------------------------------------------
# Identities
# ----------------------------------------------------------------------------


def test_product_identity_cos():
    D = 1.0
    lhs = sp.apply_strip_hilbert(sp.multiply(COS, sp.apply_strip_hilbert(COS, D), 2) * 2.0, D)
    assert lhs.cos_coefficients()[1] == pytest.approx(-(1 + COTH1**2) / 2)
    assert check_product_identity(COS, COS, D) < 1e-13


def test_product_identity_zero():
    assert check_product_identity(SpectralFunction.zeros(4), COS, 1.0) == 0
    assert check_product_identity(COS, SpectralFunction.zeros(4), 1.0) == 0


def test_product_identity_sweep(rng):
    worst = 0.0
    for i in range(100):
        D = (0.5, 1.0, 2.0)[i % 3]
        worst = max(worst, check_product_identity(random_mean_free(rng, 32), random_mean_free(rng, 32), D))
    assert worst < 1e-10


def test_product_identity_mean_gap(rng):
    # the printed identity drops the mean of C(u)C(v) - uv; it is generally nonzero
    D = 0.9
    u, v = random_mean_free(rng, 8), random_mean_free(rng, 8)
    n = np.arange(1, 9)
    expected = 2 * np.sum((1 / np.tanh(n * D) ** 2 - 1) * u.coeffs[1:] * np.conj(v.coeffs[1:])).real
    gap = product_identity_mean_gap(u, v, D)
    assert gap == pytest.approx(expected, rel=1e-12)
    assert abs(gap) > 1e-3


def test_product_identity_detects_mutation(rng):
    u, v = random_mean_free(rng, 8), random_mean_free(rng, 8)
    assert check_product_identity(u, v, 1.0, hilbert=flip_even) > 1e-3


def test_transform_identity_up_to_constant(rng):
    D = 1.0
    w = random_mean_free(rng, 5, decay=0.5, even=True) * 0.05
    W = build_W(w, 1.0, D)
    u = random_mean_free(rng, 8)
    rest, const = check_transform_identity(u, W, D)
    assert rest < 1e-10
    n = max(u.n_max, w.n_max)
    wp = sp.derivative(w)
    kappa = sp.mean(sp.multiply(sp.apply_strip_hilbert(u, D), sp.apply_strip_hilbert(wp, D), 2 * n) - sp.multiply(u, wp, 2 * n))
    assert const == pytest.approx(1j * kappa, abs=1e-13)
    assert abs(kappa) > 1e-4


def test_derivative_identity(rng):
    W = build_W(random_mean_free(rng, 5, decay=0.5, even=True) * 0.05, 1.0, 1.3)
    assert check_derivative_identity(random_mean_free(rng, 8), W, 1.3) < 1e-9


def test_contour_pairing_cos():
    F = boundary_trace(COS, 1.0)
    pair, cont = contour_pairing_check(F, F, 1.0, 512)
    assert pair < 1e-8 and cont < 1e-8


def test_contour_pairing_zero():
    Z = boundary_trace(SpectralFunction.zeros(3), 1.0)
    F = boundary_trace(COS, 1.0)
    assert contour_pairing_check(Z, F, 1.0) == (0.0, 0.0)


def test_contour_pairing_random(rng):
    for D in (0.5, 1.0, 2.0):
        F = boundary_trace(random_mean_free(rng, 8), D)
        G = boundary_trace(random_mean_free(rng, 8), D)
        pair, cont = contour_pairing_check(F, G, D)
        assert pair < 1e-8 and cont < 1e-8


def test_contour_pairing_rejects_non_extension():
    bad = ComplexBoundaryFunction(COS, COS)
    with pytest.raises(ValueError):
        contour_pairing_check(bad, bad, 1.0)
