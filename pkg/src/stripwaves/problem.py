"""
Conformal formulation of periodic finite-depth gravity waves.

The unknown is the mean-free even function w, with v = w + h the vertical
coordinate of the free surface in conformal variables and D = kh the width
of the conformal strip. The governing equation is

    R(w) = mu C(w') - w/k - w C(w') - C(w w') + [w C(w')] = 0,

where C = C_D and [.] denotes the mean over one period.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import spectral as sp
from .errors import NonPhysicalStateError, ParameterError
from .spectral import SpectralFunction
from .strip import build_W


@dataclass(frozen=True)
class WaveParameters:
    """Physical and conformal constants.

    ``Q`` is always derived from ``mu``. ``m`` and ``B`` are optional and
    are normally filled from the constraint by :func:`with_flux`.
    """

    k: float = 1.0
    h: float = 1.0
    g: float = 1.0
    mu: float = 0.0
    m: float | None = None
    B: float | None = None

    def __post_init__(self):
        for name in ("k", "h", "g"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ParameterError(f"{name} must be positive, got {val}")
        if not np.isfinite(self.mu):
            raise ParameterError("mu must be finite")

    @property
    def D(self) -> float:
        return self.k * self.h

    @property
    def Q(self) -> float:
        return self.g * self.mu + 2 * self.g * self.h

    def with_mu(self, mu: float) -> "WaveParameters":
        return replace(self, mu=float(mu), m=None, B=None)

    def to_dict(self) -> dict:
        return {"k": self.k, "h": self.h, "g": self.g, "mu": self.mu, "m": self.m, "B": self.B}


@dataclass(frozen=True)
class WaveState:
    params: WaveParameters
    w: SpectralFunction = field(default_factory=lambda: SpectralFunction.zeros(sp.DEFAULT_TRUNCATION))

    def __post_init__(self):
        scale = max(1.0, self.w.max_abs_coeff())
        if abs(sp.mean(self.w)) > 1e-12 * scale:
            raise ValueError("w must be mean-free")
        object.__setattr__(self, "w", self.w.mean_free())

    @classmethod
    def trivial(cls, params: WaveParameters, n_max: int = sp.DEFAULT_TRUNCATION) -> "WaveState":
        return cls(params, SpectralFunction.zeros(n_max)).with_flux()

    @property
    def n_max(self) -> int:
        return self.w.n_max

    @property
    def v(self) -> SpectralFunction:
        return self.w + self.params.h

    def with_flux(self) -> "WaveState":
        """Copy with ``m`` and ``B`` recomputed from the constraint."""
        m, B = mass_flux_from_constraint(self)
        return WaveState(replace(self.params, m=m, B=B), self.w)

    def regularity_margin(self, M=None) -> float:
        """Q/(2g) - h - max w; positive for a regularly parametrized surface."""
        M = M or sp.product_grid(self.n_max)
        p = self.params
        return p.Q / (2 * p.g) - p.h - float(np.max(self.w.samples(M)))

    def to_dict(self) -> dict:
        d = self.params.to_dict()
        d["w"] = self.w.to_dict()
        return d

    @classmethod
    def from_dict(cls, d) -> "WaveState":
        p = WaveParameters(d["k"], d["h"], d["g"], d["mu"], d.get("m"), d.get("B"))
        return cls(p, SpectralFunction.from_dict(d["w"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "WaveState":
        return cls.from_dict(json.loads(text))


# ============================================================================
# Equation and linearization
# ============================================================================


def residual(state: WaveState, method: str = "fft") -> SpectralFunction:
    """Residual of the governing equation, truncated to the order of w.

    ``method`` selects the product evaluation ("fft" dealiased sampling or
    "direct" coefficient convolution).
    """
    p, w = state.params, state.w
    N, D = w.n_max, p.D
    wp = sp.derivative(w)
    Cwp = sp.apply_strip_hilbert(wp, D)
    wCwp = sp.multiply(w, Cwp, 2 * N, method=method)
    wwp = sp.multiply(w, wp, N, method=method)
    R = p.mu * Cwp - w / p.k - wCwp.resize(N) - sp.apply_strip_hilbert(wwp, D)
    return (R + sp.mean(wCwp)).mean_free()


def residual_jacobian(state: WaveState, u: SpectralFunction, method: str = "fft") -> SpectralFunction:
    """Frechet derivative of the residual in w along the mean-free direction u."""
    p, w = state.params, state.w
    N, D = max(w.n_max, u.n_max), p.D
    u = u.resize(N)
    w = w.resize(N)
    C = sp.apply_strip_hilbert
    Cwp = C(sp.derivative(w), D)
    Cup = C(sp.derivative(u), D)
    a = sp.multiply(u, Cwp, 2 * N, method=method)
    b = sp.multiply(w, Cup, 2 * N, method=method)
    wu = sp.multiply(w, u, N, method=method)
    dR = p.mu * Cup - u / p.k - a.resize(N) - b.resize(N) - C(sp.derivative(wu), D)
    return (dR + sp.mean(a) + sp.mean(b)).mean_free()


def residual_mu_derivative(state: WaveState) -> SpectralFunction:
    """Derivative of the residual with respect to mu: C(w')."""
    return sp.apply_strip_hilbert(sp.derivative(state.w), state.params.D)


# ============================================================================
# Constraint, Bernoulli law, functional
# ============================================================================


def _flux_integrand(state: WaveState, M: int) -> np.ndarray:
    p = state.params
    W = build_W(state.w, p.k, p.D, warn=False)
    Ws = W.samples(M)
    return (p.Q - 2 * p.g * state.v.samples(M)) * np.abs(Ws) ** 2


def mass_flux_from_constraint(state: WaveState):
    """``(m, B)`` from the scalar constraint.

    (v')^2 + G(v)^2 equals |W|^2 identically because G(v) = 1/k + C(w').
    """
    p = state.params
    M = sp.product_grid(state.n_max + 1)
    radicand = float(np.mean(_flux_integrand(state, M)))
    if radicand < 0:
        raise NonPhysicalStateError(f"negative flux radicand {radicand:.3e}")
    m = p.D * math.sqrt(radicand)
    B = radicand / p.g
    return m, B


def bernoulli_residual(state: WaveState, M=None) -> float:
    """max |(Q - 2gv)((v')^2 + G(v)^2) - gB| over the sample grid.

    The first factor is formed from G(v) independently of W; the second
    evaluation path via |W|^2 is compared in :func:`bernoulli_residual_W`.
    """
    p = state.params
    M = M or sp.product_grid(state.n_max + 1)
    _, B = mass_flux_from_constraint(state)
    v = state.v
    vp = sp.derivative(v).samples(M)
    Gv = sp.apply_dtn(v, p.D).samples(M)
    lhs = (p.Q - 2 * p.g * v.samples(M)) * (vp**2 + Gv**2)
    return float(np.max(np.abs(lhs - p.g * B)))


def bernoulli_residual_W(state: WaveState, M=None) -> float:
    """max |(Q - 2gv)|W|^2 - gB| over the sample grid."""
    p = state.params
    M = M or sp.product_grid(state.n_max + 1)
    _, B = mass_flux_from_constraint(state)
    return float(np.max(np.abs(_flux_integrand(state, M) - p.g * B)))


def bernoulli_derivative_residual(state: WaveState, M=None) -> float:
    """max |w' |W|^2 - B Re(W'/W)| with B = m^2/((kh)^2 g)."""
    p = state.params
    M = M or sp.product_grid(state.n_max + 1)
    _, B = mass_flux_from_constraint(state)
    W = build_W(state.w, p.k, p.D, warn=False)
    Ws, Wps = W.samples(M), W.derivative().samples(M)
    wp = sp.derivative(state.w).samples(M)
    return float(np.max(np.abs(wp * np.abs(Ws) ** 2 - B * np.real(Wps / Ws))))


def functional_lambda(state: WaveState, m=None) -> float:
    """Lambda = int (Qv - g v^2)(1/k + C(w')) + m^2/(kh) dx.

    ``m`` defaults to ``state.params.m`` and then to the constraint value.
    """
    p = state.params
    if m is None:
        m = p.m if p.m is not None else mass_flux_from_constraint(state)[0]
    M = sp.product_grid(state.n_max + 1)
    v = state.v.samples(M)
    G = 1.0 / p.k + residual_mu_derivative(state).samples(M)
    integrand = (p.Q * v - p.g * v**2) * G + m**2 / p.D
    return float(2 * np.pi * np.mean(integrand))


# ============================================================================
# Derived physical quantities
# ============================================================================


class Surface(NamedTuple):
    X: np.ndarray
    Y: np.ndarray
    min_graph: float
    is_graph: bool


def surface_points(state: WaveState, M: int = 256) -> Surface:
    """Free surface samples (x/k + C(w)(x), h + w(x)) at x_j = 2 pi j / M.

    ``min_graph`` is min Re W; ``is_graph`` also requires X increasing.
    """
    p = state.params
    x = sp.grid(M)
    X = x / p.k + sp.apply_strip_hilbert(state.w, p.D).evaluate(x)
    Y = state.v.evaluate(x)
    W = build_W(state.w, p.k, p.D, warn=False)
    mg = W.min_real()
    monotone = bool(np.all(np.diff(X) > 0))
    return Surface(X, Y, mg, bool(mg > 0 and monotone))


def write_surface_csv(surface: Surface, path) -> None:
    with open(path, "w") as fh:
        fh.write("X,Y\n")
        for X, Y in zip(surface.X, surface.Y):
            fh.write(f"{X:.17g},{Y:.17g}\n")


def mean_depth_and_speed(state: WaveState):
    """Physical mean depth d = h + k [w C(w')] and speed c = m/h."""
    p = state.params
    N = state.n_max
    wCwp = sp.multiply(state.w, residual_mu_derivative(state), 2 * N)
    d = p.h + p.k * sp.mean(wCwp)
    m = p.m if p.m is not None else mass_flux_from_constraint(state)[0]
    return d, m / p.h


def symbol_compare(D: float, n_max: int):
    """Rows ``(n, n coth(nD), |n|)`` for n = -n_max..n_max; n = 0 gives 1/D."""
    if not D > 0:
        raise ParameterError(f"strip width must be positive, got {D}")
    rows = []
    for n in range(-n_max, n_max + 1):
        fin = 1.0 / D if n == 0 else float(n * sp.coth_safe(n * D))
        rows.append((n, fin, float(abs(n))))
    return rows
