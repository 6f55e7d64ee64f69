"""
Truncated Fourier representation of real 2*pi-periodic functions.

A real function is stored through its non-negative Fourier coefficients

    f(x) = sum_{n=-N}^{N} c_n exp(i n x),     c_{-n} = conj(c_n),

so only ``c_0 .. c_N`` are kept and Hermitian symmetry holds by construction.
Coefficients are the source of truth; sample grids are built on demand.

The two Fourier multipliers of the strip problem live here as well:

    C_D : exp(i n x) -> -i coth(n D) exp(i n x)      (n != 0, zero on means)
    G_D : exp(i n x) ->  n coth(n D) exp(i n x)      (1/D on means)
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, TruncationError

DEFAULT_TRUNCATION = 128
_COTH_SWITCH = 20.0


# ============================================================================
# Data types
# ============================================================================


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Real 2*pi-periodic function held as Fourier coefficients c_0..c_N.

    Parameters
    ----------
    coeffs : array_like of complex, shape (N+1,)
        Coefficients for n = 0..N. Negative modes are implied by Hermitian
        symmetry. ``coeffs[0]`` must be real (imaginary part below 1e-12
        relative to the largest coefficient); it is stored as exactly real.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise TruncationError("need at least the mean coefficient")
        scale = max(1.0, float(np.max(np.abs(c))))
        if abs(c[0].imag) > 1e-12 * scale:
            raise ValueError(f"mean coefficient must be real, got {c[0]!r}")
        c[0] = c[0].real
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, n_max: int) -> "SpectralFunction":
        return cls(np.zeros(n_max + 1, dtype=complex))

    @classmethod
    def constant(cls, value: float, n_max: int = 0) -> "SpectralFunction":
        c = np.zeros(n_max + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def from_trig(cls, cos=(), sin=(), mean=0.0, n_max=None) -> "SpectralFunction":
        """Build ``mean + sum_j cos[j-1] cos(jx) + sin[j-1] sin(jx)``."""
        a = np.asarray(cos, dtype=float)
        b = np.asarray(sin, dtype=float)
        n = max(a.size, b.size)
        if n_max is None:
            n_max = n
        if n > n_max:
            raise TruncationError(f"{n} modes do not fit in order {n_max}")
        c = np.zeros(n_max + 1, dtype=complex)
        c[0] = mean
        c[1 : a.size + 1] += a / 2
        c[1 : b.size + 1] += -0.5j * b
        return cls(c)

    # -- basic properties ---------------------------------------------------

    @property
    def n_max(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_mean_free(self) -> bool:
        return bool(self.coeffs[0] == 0)

    @property
    def is_even(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def full(self) -> np.ndarray:
        """Coefficients for n = -N..N."""
        c = self.coeffs
        return np.concatenate([np.conj(c[:0:-1]), c])

    def cos_coefficients(self) -> np.ndarray:
        """a_j, j = 1..N, in ``sum a_j cos(jx)``."""
        return 2 * self.coeffs[1:].real

    def sin_coefficients(self) -> np.ndarray:
        """b_j, j = 1..N, in ``sum b_j sin(jx)``."""
        return -2 * self.coeffs[1:].imag

    def resize(self, n_max: int) -> "SpectralFunction":
        """Zero-pad or truncate to order ``n_max``."""
        c = np.zeros(n_max + 1, dtype=complex)
        m = min(n_max, self.n_max) + 1
        c[:m] = self.coeffs[:m]
        return SpectralFunction(c)

    def mean_free(self) -> "SpectralFunction":
        """Copy with the mean coefficient set to exactly zero."""
        c = self.coeffs.copy()
        c[0] = 0
        return SpectralFunction(c)

    def samples(self, M: int) -> np.ndarray:
        """Values on the grid x_j = 2*pi*j/M as a plain array."""
        if M < 2 * self.n_max + 1:
            raise TruncationError(f"grid of {M} points cannot resolve order {self.n_max}")
        X = np.zeros(M // 2 + 1, dtype=complex)
        X[: self.n_max + 1] = self.coeffs * M
        return np.fft.irfft(X, n=M)

    def evaluate(self, x) -> np.ndarray:
        """Direct summation at arbitrary points (O(N) per point)."""
        x = np.asarray(x, dtype=float)
        n = np.arange(1, self.n_max + 1)
        phase = np.exp(1j * np.multiply.outer(x, n))
        return self.coeffs[0].real + 2 * np.real(phase @ self.coeffs[1:])

    # -- arithmetic ---------------------------------------------------------

    def _aligned(self, other):
        n = max(self.n_max, other.n_max)
        return self.resize(n).coeffs, other.resize(n).coeffs

    def __add__(self, other):
        if isinstance(other, SpectralFunction):
            a, b = self._aligned(other)
            return SpectralFunction(a + b)
        c = self.coeffs.copy()
        c[0] += other
        return SpectralFunction(c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SpectralFunction(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralFunction):
            return multiply(self, scalar)
        return SpectralFunction(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SpectralFunction(self.coeffs / float(scalar))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "re": [float(v) for v in self.coeffs.real],
            "im": [float(v) for v in self.coeffs.imag],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralFunction":
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
        if re.size != d["n_max"] + 1 or im.size != re.size:
            raise ValueError("coefficient arrays do not match n_max")
        return cls(re + 1j * im)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SpectralFunction":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"SpectralFunction(n_max={self.n_max})"


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Real samples on the uniform grid x_j = 2*pi*j/M (M even)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 2 or v.size % 2:
            raise TruncationError(f"grid size must be even and >= 2, got {v.size}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return grid(self.M)


def grid(M: int) -> np.ndarray:
    return 2 * np.pi * np.arange(M) / M


# ============================================================================
# Synthesis / analysis
# ============================================================================


def to_samples(f: SpectralFunction, M: int) -> SampledFunction:
    """Evaluate ``f`` on an M-point grid.

    The inverse real FFT is used, so the result is real by construction;
    Hermitian symmetry cannot be broken by the coefficient storage.
    """
    return SampledFunction(f.samples(M))


def analyze(values, n_max: int) -> SpectralFunction:
    """Fourier coefficients 0..n_max of real samples on a uniform grid."""
    v = np.asarray(values, dtype=float)
    M = v.size
    if M < 2 * n_max + 1:
        raise TruncationError(f"{M} samples cannot determine order {n_max}")
    c = np.fft.rfft(v)[: n_max + 1] / M
    return SpectralFunction(c)


def from_samples(s, n_max: int) -> SpectralFunction:
    """Coefficients c_n = (1/M) sum_j s_j exp(-i n x_j), n = 0..n_max."""
    values = s.values if isinstance(s, SampledFunction) else s
    return analyze(values, n_max)


# ============================================================================
# Calculus
# ============================================================================


def derivative(f: SpectralFunction) -> SpectralFunction:
    n = np.arange(f.n_max + 1)
    return SpectralFunction(1j * n * f.coeffs)


def mean(f: SpectralFunction) -> float:
    return float(f.coeffs[0].real)


def inner_product(f: SpectralFunction, g: SpectralFunction) -> float:
    """<f, g> = int_0^{2 pi} f g dx = 2 pi sum_n f_n conj(g_n)."""
    a, b = f._aligned(g)
    s = a[0].real * b[0].real + 2 * np.sum(a[1:] * np.conj(b[1:])).real
    return float(2 * np.pi * s)


def multiply(f: SpectralFunction, g: SpectralFunction, n_out=None, method="fft") -> SpectralFunction:
    """Coefficients of the pointwise product ``f * g``.

    ``n_out`` defaults to ``max(f.n_max, g.n_max)``; the result is exact
    (alias-free) for every retained mode, and equals the full product when
    ``n_out >= f.n_max + g.n_max``.

    ``method="fft"`` samples both factors on a 4*max(N) grid; ``"direct"``
    convolves the coefficient sequences. The two paths agree to rounding.
    """
    if n_out is None:
        n_out = max(f.n_max, g.n_max)
    if method == "direct":
        full = np.convolve(f.full(), g.full())
        centre = f.n_max + g.n_max
        c = np.zeros(n_out + 1, dtype=complex)
        m = min(n_out, centre)
        c[: m + 1] = full[centre : centre + m + 1]
        return SpectralFunction(c)
    if method != "fft":
        raise ValueError(f"unknown product method {method!r}")
    M = product_grid(f.n_max, g.n_max, n_out)
    return analyze(f.samples(M) * g.samples(M), n_out)


def product_grid(*orders) -> int:
    """Even grid size 4*max(order); alias-free for products of two factors."""
    return max(4 * max(max(orders), 1), 4)


# ============================================================================
# Fourier multipliers
# ============================================================================


def coth_safe(x):
    """Hyperbolic cotangent without overflow; odd symmetry is exact.

    For |x| > 20 uses ``sign(x) * (1 + 2 / (exp(2|x|) - 1))``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ParameterError("coth is undefined at 0")
    ax = np.abs(x)
    with np.errstate(over="ignore"):
        big = 1.0 + 2.0 / np.expm1(2 * np.minimum(ax, 700.0))
    small = 1.0 / np.tanh(np.where(ax > _COTH_SWITCH, 1.0, ax))
    out = np.sign(x) * np.where(ax > _COTH_SWITCH, big, small)
    return out if out.ndim else float(out)


def _check_width(D):
    if not D > 0:
        raise ParameterError(f"strip width must be positive, got {D}")


def strip_hilbert_symbol(n_max: int, D: float) -> np.ndarray:
    """Multiplier -i coth(nD) for n = 0..n_max (zero at n = 0)."""
    _check_width(D)
    s = np.zeros(n_max + 1, dtype=complex)
    s[1:] = -1j * coth_safe(D * np.arange(1, n_max + 1))
    return s


def dtn_symbol(n_max: int, D: float) -> np.ndarray:
    """Multiplier n coth(nD) for n = 0..n_max, with the limit 1/D at n = 0."""
    _check_width(D)
    n = np.arange(1, n_max + 1)
    s = np.empty(n_max + 1)
    s[0] = 1.0 / D
    s[1:] = n * coth_safe(D * n)
    return s


def apply_strip_hilbert(f: SpectralFunction, D: float) -> SpectralFunction:
    """Hilbert transform for the strip of width D; the mean is discarded."""
    return SpectralFunction(strip_hilbert_symbol(f.n_max, D) * f.coeffs)


def apply_dtn(f: SpectralFunction, D: float) -> SpectralFunction:
    """Dirichlet-to-Neumann operator of the strip of width D."""
    return SpectralFunction(dtn_symbol(f.n_max, D) * f.coeffs)
