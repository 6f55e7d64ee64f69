"""
Holomorphic extensions to the strip S_D = {-D < y < 0} and the Plotnikov
transform built on them.

For mean-free u the extension is

    E_D[u](z) = - sum_{n != 0} exp(-nD) / sinh(nD) * u_n * exp(i n z),

whose trace on y = 0 is u - i C_D(u) and whose real part vanishes on y = -D.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import spectral as sp
from .errors import GraphConditionWarning, ParameterError, SingularTransformError
from .spectral import SpectralFunction

_MEAN_TOL = 1e-12


class StripPoint(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ComplexBoundaryFunction:
    """Complex 2*pi-periodic trace ``real + i imag`` on the line y = 0."""

    real: SpectralFunction
    imag: SpectralFunction

    def __post_init__(self):
        n = max(self.real.n_max, self.imag.n_max)
        object.__setattr__(self, "real", self.real.resize(n))
        object.__setattr__(self, "imag", self.imag.resize(n))

    @property
    def n_max(self) -> int:
        return self.real.n_max

    def samples(self, M: int) -> np.ndarray:
        return self.real.samples(M) + 1j * self.imag.samples(M)

    def derivative(self) -> "ComplexBoundaryFunction":
        return ComplexBoundaryFunction(sp.derivative(self.real), sp.derivative(self.imag))

    def min_real(self, M=None) -> float:
        M = M or sp.product_grid(self.n_max)
        return float(np.min(self.real.samples(M)))

    def to_dict(self) -> dict:
        return {"re": self.real.to_dict(), "im": self.imag.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(SpectralFunction.from_dict(d["re"]), SpectralFunction.from_dict(d["im"]))


def _require_mean_free(u: SpectralFunction, name="u") -> SpectralFunction:
    scale = max(1.0, u.max_abs_coeff())
    if abs(sp.mean(u)) > _MEAN_TOL * scale:
        raise ValueError(f"{name} must be mean-free, mean = {sp.mean(u):.3e}")
    return u.mean_free()


def _analyze_complex(values: np.ndarray, n_max: int) -> np.ndarray:
    """Two-sided coefficients (n = -n_max..n_max) of complex samples."""
    M = values.size
    F = np.fft.fft(values) / M
    return np.concatenate([F[M - n_max :], F[: n_max + 1]])


# ============================================================================
# Extension and traces
# ============================================================================


def extension_factor(n, D, y):
    """exp(-nD) exp(-ny) / sinh(nD) written without overflow, n != 0, y <= 0."""
    n = np.asarray(n, dtype=float)
    a = np.abs(n)
    denom = -np.expm1(-2 * a * D)
    pos = -2 * np.exp(-a * (2 * D + y)) / denom
    neg = 2 * np.exp(a * y) / denom
    return np.where(n > 0, pos, neg)


def extend(u: SpectralFunction, D: float, z) -> complex:
    """Value of the holomorphic extension of a mean-free ``u`` at ``z``.

    ``z`` is a :class:`StripPoint`, a complex number ``x + iy`` or an array
    of complex numbers, with ``-D <= y <= 0``.
    """
    if not D > 0:
        raise ParameterError(f"strip width must be positive, got {D}")
    u = _require_mean_free(u)
    if isinstance(z, StripPoint):
        z = complex(z.x, z.y)
    z = np.asarray(z, dtype=complex)
    y = z.imag
    if np.any(y > 1e-14 * D) or np.any(y < -D * (1 + 1e-14)):
        raise ValueError("point lies outside the closed strip")
    y = np.clip(y, -D, 0.0)
    n = np.arange(1, u.n_max + 1)
    x = z.real[..., None]
    yy = y[..., None]
    c = u.coeffs[1:]
    terms = extension_factor(n, D, yy) * c * np.exp(1j * n * x)
    terms = terms + extension_factor(-n, D, yy) * np.conj(c) * np.exp(-1j * n * x)
    out = terms.sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def boundary_trace(u: SpectralFunction, D: float) -> ComplexBoundaryFunction:
    """Trace of E_D[u] on y = 0: ``(u, -C_D u)``."""
    u = _require_mean_free(u)
    return ComplexBoundaryFunction(u, -sp.apply_strip_hilbert(u, D))


def build_W(w: SpectralFunction, k: float, D: float, warn=True) -> ComplexBoundaryFunction:
    """W = 1/k + C_D(w') + i w' on the top boundary.

    A warning is issued when min Re W <= 0 (surface not a graph); W is
    returned regardless.
    """
    w = _require_mean_free(w, "w")
    wp = sp.derivative(w)
    W = ComplexBoundaryFunction(sp.apply_strip_hilbert(wp, D) + 1.0 / k, wp)
    if warn and W.min_real() <= 0:
        warnings.warn("graph condition violated: min Re W <= 0", GraphConditionWarning, stacklevel=2)
    return W


# ============================================================================
# Plotnikov transform
# ============================================================================


def plotnikov_forward(u: SpectralFunction, W: ComplexBoundaryFunction, D: float, n_out=None) -> SpectralFunction:
    """P[u] = Re{W E_D[u]} = u Re W + Im W * C_D(u) for mean-free u."""
    u = _require_mean_free(u)
    if n_out is None:
        n_out = max(u.n_max, W.n_max)
    Cu = sp.apply_strip_hilbert(u, D)
    p = sp.multiply(u, W.real, n_out) + sp.multiply(Cu, W.imag, n_out)
    return p.mean_free()


def _kappa(f: SpectralFunction, wp: SpectralFunction, D: float) -> float:
    # imaginary constant in E[P f] - W E[f]: mean of C(f) C(w') - f w'
    a, b = f._aligned(wp)
    n = np.arange(1, a.size)
    if n.size == 0:
        return 0.0
    weight = sp.coth_safe(n * D) ** 2 - 1.0
    return float(2 * np.sum(weight * a[1:] * np.conj(b[1:])).real)


def plotnikov_inverse(q: SpectralFunction, W: ComplexBoundaryFunction, D: float, n_out=None) -> SpectralFunction:
    """Inverse Plotnikov transform of a mean-free ``q``.

    The naive formula Re{E_D[q] / W} is exact only when the imaginary
    constant kappa(u) = [C(u) C(w') - u w'] vanishes. In general
    E_D[P u] = W E_D[u] + i kappa(u), which gives

        u = u0 - kappa(u0) f / (1 + kappa(f)),
        u0 = Re{E_D[q] / W},   f = Re{i / W},

    a rank-one correction applied here. Division by W is samplewise.
    """
    q = _require_mean_free(q, "q")
    if n_out is None:
        n_out = max(q.n_max, W.n_max)
    M = sp.product_grid(n_out, W.n_max, q.n_max)
    Ws = W.samples(M)
    if np.min(Ws.real) <= 0:
        raise SingularTransformError("min Re W <= 0; Plotnikov transform is singular")
    Eq = q.samples(M) - 1j * sp.apply_strip_hilbert(q, D).samples(M)
    u0 = sp.analyze(np.real(Eq / Ws), n_out)
    f = sp.analyze(np.real(1j / Ws), n_out)
    wp = W.imag
    k0, kf = _kappa(u0, wp, D), _kappa(f, wp, D)
    u = u0 - f * (k0 / (1.0 + kf))
    scale = max(1.0, q.max_abs_coeff())
    if abs(sp.mean(u)) > 1e-10 * scale:
        raise SingularTransformError(f"inverse transform left a mean of {sp.mean(u):.3e}")
    return u.mean_free()


# ============================================================================
# Identity checks
# ============================================================================


def check_product_identity(u: SpectralFunction, v: SpectralFunction, D: float, hilbert=None) -> float:
    """Max coefficient residual of C(uCv + vCu) - [CuCv - uv] modulo the mean.

    ``hilbert`` substitutes the strip Hilbert transform (mutation testing).
    """
    H = hilbert or sp.apply_strip_hilbert
    u = _require_mean_free(u)
    v = _require_mean_free(v, "v")
    n = u.n_max + v.n_max
    Cu, Cv = H(u, D), H(v, D)
    lhs = H(sp.multiply(u, Cv, n) + sp.multiply(v, Cu, n), D)
    rhs = (sp.multiply(Cu, Cv, n) - sp.multiply(u, v, n)).mean_free()
    return float(np.max(np.abs((lhs - rhs).coeffs)))


def product_identity_mean_gap(u: SpectralFunction, v: SpectralFunction, D: float) -> float:
    """Mean of C(u)C(v) - uv, the constant missing from the product identity."""
    n = u.n_max + v.n_max
    Cu, Cv = sp.apply_strip_hilbert(u, D), sp.apply_strip_hilbert(v, D)
    return sp.mean(sp.multiply(Cu, Cv, n) - sp.multiply(u, v, n))


def check_transform_identity(u: SpectralFunction, W: ComplexBoundaryFunction, D: float):
    """Compare E_D[P u] with W E_D[u] on the boundary.

    Returns ``(nonconstant_residual, constant)``: the largest non-constant
    Fourier mode of the difference, and the constant mode (expected to be
    purely imaginary, equal to i * [C(u) C(w') - u w']).
    """
    u = _require_mean_free(u)
    n_out = u.n_max + W.n_max
    P = plotnikov_forward(u, W, D, n_out=n_out)
    M = sp.product_grid(n_out)
    lhs = boundary_trace(P, D).samples(M)
    rhs = W.samples(M) * boundary_trace(u, D).samples(M)
    c = _analyze_complex(lhs - rhs, n_out)
    const = c[n_out]
    rest = np.delete(c, n_out)
    return float(np.max(np.abs(rest))), complex(const)


def check_derivative_identity(u: SpectralFunction, W: ComplexBoundaryFunction, D: float) -> float:
    """Largest non-constant mode of E[P(u)'] - (W E[u'] + W' E[u])."""
    u = _require_mean_free(u)
    n_out = u.n_max + W.n_max
    Pp = sp.derivative(plotnikov_forward(u, W, D, n_out=n_out))
    M = sp.product_grid(n_out)
    lhs = boundary_trace(Pp, D).samples(M)
    rhs = W.samples(M) * boundary_trace(sp.derivative(u), D).samples(M)
    rhs = rhs + W.derivative().samples(M) * boundary_trace(u, D).samples(M)
    c = _analyze_complex(lhs - rhs, n_out)
    return float(np.max(np.abs(np.delete(c, n_out))))


def _as_extension(F: ComplexBoundaryFunction, D: float):
    """Split a trace into (mean-free real part, imaginary constant)."""
    re = _require_mean_free(F.real, "Re F")
    kappa = sp.mean(F.imag)
    expected = -sp.apply_strip_hilbert(re, D)
    gap = (F.imag - kappa).mean_free() - expected
    if gap.max_abs_coeff() > 1e-10 * max(1.0, F.imag.max_abs_coeff()):
        raise ValueError("trace is not the boundary value of a strip extension")
    return re, kappa


def contour_pairing_check(F: ComplexBoundaryFunction, G: ComplexBoundaryFunction, D: float, nodes=512):
    """Residuals of the boundary pairing lemma and Cauchy's theorem.

    ``F`` and ``G`` are traces of extensions E_D[f] + i*const, so their real
    parts vanish on y = -D. Returns

    * ``|int Im(F* G) dx - 2 int Re F Im G dx|`` on y = 0, and
    * ``|oint F G dz|`` around the rectangle (0,0) -> (2 pi,0) -> (2 pi,-D)
      -> (0,-D) -> (0,0), by the trapezoid rule with ``nodes`` points per
      edge (periodic rule on the horizontal edges).
    """
    f, kf = _as_extension(F, D)
    g, kg = _as_extension(G, D)
    n = max(f.n_max, g.n_max)
    M = max(nodes, sp.product_grid(n))
    x = sp.grid(M)
    Fs, Gs = F.samples(M), G.samples(M)
    h = 2 * np.pi / M
    pairing = abs(h * np.sum(np.imag(np.conj(Fs) * Gs)) - 2 * h * np.sum(Fs.real * Gs.imag))

    def field(z):
        return (extend(f, D, z) + 1j * kf) * (extend(g, D, z) + 1j * kg)

    xs = sp.grid(nodes)
    hx = 2 * np.pi / nodes
    top = hx * np.sum(field(xs + 0j))
    bottom = -hx * np.sum(field(xs - 1j * D))
    ys = np.linspace(0.0, -D, nodes)
    wts = np.full(nodes, abs(ys[1] - ys[0]))
    wts[[0, -1]] /= 2
    # dz = i dy along the vertical edges; right edge descends, left ascends
    right = np.sum(wts * field(2 * np.pi + 1j * ys)) * (-1j)
    left = np.sum(wts * field(0.0 + 1j * ys)) * (1j)
    contour = abs(top + right + bottom + left)
    del x
    return float(pairing), float(contour)
