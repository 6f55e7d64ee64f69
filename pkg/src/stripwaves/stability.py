"""
Variational stability of the flat state and of the bifurcating branch.

Two quadratic forms are assembled on the mean-free basis
{cos jx, sin jx}, j = 1..N (cosines first):

* the direct second variation
      u -> 2 int [(Q - 2gv) u C(u') - g (1/k + C(w')) u^2] dx,
* the transformed operator L u = C(u') - Phi u + [Phi u], with the
  potential Phi = Im(W'/W) + |W|^2 Re(W) / B.

They are related by the Plotnikov transform, with a constant factor of
2gB between the form of P[u] and the form of L at u.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import spectral as sp
from .continuation import Branch, critical_mu
from .eigen import jacobi_eigh
from .errors import ParameterError, SingularTransformError
from .problem import WaveParameters, WaveState, mass_flux_from_constraint
from .spectral import SpectralFunction
from .strip import build_W, plotnikov_forward

DEFAULT_SEED = 0x5EED


# ============================================================================
# Data types
# ============================================================================


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Symmetric matrix of a quadratic form on the mean-free basis.

    ``basis_norm_sq`` is the squared L2 norm of each basis function: pi for
    the raw basis {cos jx, sin jx}, 1 for its orthonormal rescaling. The
    eigenvalues of the underlying operator are those of
    ``entries / basis_norm_sq``.
    """

    entries: np.ndarray
    basis_order: int
    basis_norm_sq: float = 1.0
    label: str = ""

    def __post_init__(self):
        A = np.array(self.entries, dtype=float)
        if A.shape != (2 * self.basis_order, 2 * self.basis_order):
            raise ValueError("matrix size does not match basis order")
        asym = float(np.max(np.abs(A - A.T))) if A.size else 0.0
        if asym >= 1e-10 * max(1.0, float(np.max(np.abs(A))) if A.size else 1.0):
            raise ValueError(f"matrix not symmetric: {asym:.3e}")
        A = (A + A.T) / 2
        A.flags.writeable = False
        object.__setattr__(self, "entries", A)

    def operator_eigenvalues(self) -> np.ndarray:
        return symmetric_eigen(self)[0] / self.basis_norm_sq


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    n_negative: int
    n_zero: int
    lambda_min: float
    prediction: float | None = None
    classification: str = "stable"
    zero_tol: float = 0.0

    @classmethod
    def from_eigenvalues(cls, ev, zero_tol: float, prediction=None) -> "StabilityReport":
        ev = np.sort(np.asarray(ev, dtype=float))
        n_neg = int(np.sum(ev < -zero_tol))
        n_zero = int(np.sum(np.abs(ev) <= zero_tol))
        if n_neg:
            cls_ = "unstable"
        elif n_zero:
            cls_ = "neutral"
        else:
            cls_ = "stable"
        lam = float(ev[0]) if ev.size else float("nan")
        return cls(ev, n_neg, n_zero, lam, prediction, cls_, zero_tol)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "n_negative": self.n_negative,
            "n_zero": self.n_zero,
            "lambda_min": self.lambda_min,
            "prediction": self.prediction,
            "classification": self.classification,
            "zero_tol": self.zero_tol,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ============================================================================
# Basis and quadrature helpers
# ============================================================================


def _basis_samples(n_basis: int, M: int) -> np.ndarray:
    x = sp.grid(M)
    j = np.arange(1, n_basis + 1)[:, None]
    return np.vstack([np.cos(j * x), np.sin(j * x)])


def _gram(a: SpectralFunction, n_basis: int) -> np.ndarray:
    """G[i, l] = int a phi_i phi_l over the raw basis (exact quadrature)."""
    M = sp.product_grid(a.n_max + 2 * n_basis)
    Bm = _basis_samples(n_basis, M)
    return (2 * np.pi / M) * (Bm * a.samples(M)) @ Bm.T


def _cd_symbol(n_basis: int, D: float) -> np.ndarray:
    # C(d/dx) acts as j coth(jD) on both cos jx and sin jx
    s = sp.dtn_symbol(n_basis, D)[1:]
    return np.concatenate([s, s])


def _basis_order(state: WaveState, basis_order):
    n = state.n_max if basis_order is None else int(basis_order)
    if n < 1:
        raise ParameterError("basis order must be positive")
    return n


# ============================================================================
# Potential and operators
# ============================================================================


def plotnikov_potential(state: WaveState, n_out=None) -> SpectralFunction:
    """Phi = Im(W'/W) + |W|^2 Re(W) / B, re-analyzed to order ``n_out``.

    ``n_out`` defaults to twice the truncation of w, enough for exact
    quadrature of Phi against products of two basis functions.
    """
    p = state.params
    n_out = 2 * state.n_max if n_out is None else n_out
    W = build_W(state.w, p.k, p.D, warn=False)
    M = sp.product_grid(n_out, W.n_max)
    Ws, Wps = W.samples(M), W.derivative().samples(M)
    if np.min(Ws.real) <= 0:
        raise SingularTransformError("graph condition violated; potential undefined")
    _, B = mass_flux_from_constraint(state)
    if B <= 0:
        raise SingularTransformError("Bernoulli constant must be positive")
    phi = np.imag(Wps / Ws) + np.abs(Ws) ** 2 * Ws.real / B
    return sp.analyze(phi, n_out)


def assemble_direct_form(state: WaveState, basis_order=None) -> OperatorMatrix:
    """Matrix of the direct second variation on the raw basis.

    The bilinear form obtained by polarizing the integrand is not symmetric;
    its symmetric part carries the quadratic form.
    """
    p = state.params
    nb = _basis_order(state, basis_order)
    q = p.g * (p.mu - 2 * state.w)  # Q - 2gv
    r = p.g * (1.0 / p.k + sp.apply_strip_hilbert(sp.derivative(state.w), p.D))
    A = 2 * (_gram(q, nb) * _cd_symbol(nb, p.D)[None, :] - _gram(r, nb))
    return OperatorMatrix((A + A.T) / 2, nb, math.pi, "direct")


def assemble_transformed_operator(state: WaveState, basis_order=None, potential=None) -> OperatorMatrix:
    """Matrix of L = C(d/dx) - Phi + [Phi .] on the orthonormal basis.

    On mean-free basis functions the mean correction has zero pairing, so it
    drops out of the matrix.
    """
    nb = _basis_order(state, basis_order)
    phi = plotnikov_potential(state) if potential is None else potential
    A = np.diag(_cd_symbol(nb, state.params.D)) - _gram(phi, nb) / math.pi
    return OperatorMatrix(A, nb, 1.0, "transformed")


def symmetric_eigen(A, method: str = "jacobi"):
    """Ascending eigenvalues and eigenvectors of ``A.entries`` (or an array).

    ``method="lapack"`` uses numpy's symmetric solver instead.
    """
    if method not in ("jacobi", "lapack"):
        raise ValueError(f"unknown eigen method {method!r}")
    solve = jacobi_eigh if method == "jacobi" else np.linalg.eigh
    if not isinstance(A, OperatorMatrix):
        return solve(np.asarray(A, dtype=float))
    M, N = A.entries, A.basis_order
    # even states: cos and sin blocks decouple up to rounding
    if np.max(np.abs(M[:N, N:])) > 1e-13 * max(1.0, float(np.max(np.abs(M)))):
        return solve(M)
    ec, Vc = solve(M[:N, :N])
    es, Vs = solve(M[N:, N:])
    ev = np.concatenate([ec, es])
    V = np.zeros_like(M)
    V[:N, :N], V[N:, N:] = Vc, Vs
    idx = np.argsort(ev, kind="stable")
    return ev[idx], V[:, idx]


def default_zero_tol(A: OperatorMatrix) -> float:
    return 1e-9 * max(1.0, float(np.linalg.norm(A.entries, 2)) / A.basis_norm_sq)


def report(A: OperatorMatrix, prediction=None, zero_tol=None, method="jacobi") -> StabilityReport:
    ev = symmetric_eigen(A, method)[0] / A.basis_norm_sq
    zt = default_zero_tol(A) if zero_tol is None else zero_tol
    return StabilityReport.from_eigenvalues(ev, zt, prediction)


# ============================================================================
# Form equivalence
# ============================================================================


def direct_form_value(state: WaveState, u: SpectralFunction) -> float:
    """2 int [(Q - 2gv) u C(u') - g (1/k + C(w')) u^2] dx by exact quadrature."""
    p = state.params
    n = max(u.n_max, state.n_max)
    M = sp.product_grid(2 * n + state.n_max)
    us = u.samples(M)
    Cup = sp.apply_strip_hilbert(sp.derivative(u), p.D).samples(M)
    q = p.g * (p.mu - 2 * state.w.samples(M))
    r = p.g * (1.0 / p.k + sp.apply_strip_hilbert(sp.derivative(state.w), p.D).samples(M))
    return float(2 * np.pi * np.mean(2 * (q * us * Cup - r * us**2)))


def transformed_form_value(state: WaveState, u: SpectralFunction, potential=None) -> float:
    """int u C(u') - Phi u^2 dx."""
    p = state.params
    phi = plotnikov_potential(state) if potential is None else potential
    M = sp.product_grid(2 * u.n_max + phi.n_max)
    us = u.samples(M)
    Cup = sp.apply_strip_hilbert(sp.derivative(u), p.D).samples(M)
    return float(2 * np.pi * np.mean(us * Cup - phi.samples(M) * us**2))


def form_equivalence_check(state: WaveState, trials: int = 100, seed: int = DEFAULT_SEED, order=None):
    """Ratio of the direct form at P[u] to 2B times the transformed form at u.

    Random mean-free u of order ``order`` (default N/4, at least 4) with
    geometrically decaying coefficients. Returns ``(mean ratio, spread)``
    where spread = (max - min) / |mean|. Near-zero denominators are
    redrawn.
    """
    p = state.params
    order = max(4, state.n_max // 4) if order is None else order
    rng = np.random.default_rng(seed)
    W = build_W(state.w, p.k, p.D, warn=False)
    _, B = mass_flux_from_constraint(state)
    phi = plotnikov_potential(state)
    ratios = []
    decay = 0.7 ** np.arange(order)
    while len(ratios) < trials:
        c = (rng.standard_normal(order) + 1j * rng.standard_normal(order)) * decay
        u = SpectralFunction(np.concatenate([[0.0], c]))
        Pu = plotnikov_forward(u, W, p.D, n_out=u.n_max + W.n_max)
        den = 2 * B * transformed_form_value(state, u, phi)
        if abs(den) < 1e-14:
            continue
        ratios.append(direct_form_value(state, Pu) / den)
    r = np.array(ratios)
    mean = float(np.mean(r))
    return mean, float((np.max(r) - np.min(r)) / abs(mean))


# ============================================================================
# Flat state
# ============================================================================


def trivial_spectrum(params: WaveParameters, N: int = sp.DEFAULT_TRUNCATION, zero_tol: float = 1e-12) -> StabilityReport:
    """Closed-form spectrum 2g(mu n coth(nkh) - 1/k), each value twice."""
    lam = 2 * params.g * (params.mu * sp.dtn_symbol(N, params.D)[1:] - 1.0 / params.k)
    return StabilityReport.from_eigenvalues(np.repeat(lam, 2), zero_tol)


class TrivialVariation(NamedTuple):
    cond_w: bool
    cond_h: bool
    h_coefficient: float
    m: float
    region: str


def trivial_flux(params: WaveParameters, relation: str = "head") -> float:
    """Mass flux of the flat state.

    ``relation="head"`` uses Q = 2gh + (m/(kh))^2, i.e. m = kh sqrt(g mu);
    ``relation="constraint"`` uses the scalar constraint, m = h sqrt(g mu).
    The two agree only for k = 1.
    """
    if params.mu < 0:
        raise ParameterError("mu must be non-negative for a flat state")
    if relation == "head":
        return params.k * params.h * math.sqrt(params.g * params.mu)
    if relation == "constraint":
        return params.h * math.sqrt(params.g * params.mu)
    raise ValueError(f"unknown flux relation {relation!r}")


def trivial_full_variation(params: WaveParameters, relation: str = "head") -> TrivialVariation:
    """Stability conditions of the flat state under w- and h-variations.

    cond_w: the w-spectrum 2g(mu n coth(nkh) - 1/k) is strictly positive,
    i.e. mu > tanh(kh)/k. cond_h: m^2 > g h^3, the sign of the h-direction
    coefficient. The region is "both", "w_only" or "none".
    """
    k, h, g = params.k, params.h, params.g
    m = trivial_flux(params, relation)
    coef = 2 * math.pi * 2 * (m**2 / (k * h**3) - g / k)
    cond_w = params.mu > math.tanh(k * h) / k
    cond_h = m**2 > g * h**3
    region = "both" if cond_w and cond_h else ("w_only" if cond_w else "none")
    return TrivialVariation(cond_w, cond_h, coef, m, region)


# ============================================================================
# Perturbation theory at the first bifurcation point
# ============================================================================


@dataclass(frozen=True)
class PerturbationPrediction:
    """Second-order prediction for the two eigenvalues leaving zero.

    ``c1`` is the first-harmonic coefficient of Phi per unit eps,
    ``lambda2_unit`` the second-order coefficient per unit scaled amplitude
    c1 * eps (L2-normalized kernel vectors), and ``u1_coefficient`` the
    cos 2x (resp. sin 2x) coefficient of the first-order eigenvector
    correction per unit xi_c (resp. xi_s) and unit scaled amplitude.
    """

    c1: float
    lambda2_unit: float
    u1_coefficient: float
    predictor: Callable[[float], float] = field(repr=False)

    def __call__(self, eps):
        return self.predictor(eps)


def perturbation_prediction(params: WaveParameters, rtol: float = 1e-9) -> PerturbationPrediction:
    k, h = params.k, params.h
    mu_star = critical_mu(1, k, h)
    if abs(params.mu - mu_star) > rtol * mu_star:
        raise ParameterError(f"mu = {params.mu} is not the first dispersion point {mu_star}")
    B = params.mu / k**2
    D = k * h
    c1 = 3 * sp.coth_safe(D) / (B * k**2) - k
    gap = 2 * sp.coth_safe(2 * D) - 1.0 / (B * k**3)
    lam2 = -1.0 / (4 * gap)
    u1 = 0.5 / gap

    def predictor(eps):
        return lam2 * (c1 * np.asarray(eps)) ** 2 + 0.0

    return PerturbationPrediction(float(c1), float(lam2), float(u1), predictor)


# ============================================================================
# Spectra along a branch
# ============================================================================


@dataclass(frozen=True)
class BranchSpectrum:
    eps: float
    report: StabilityReport
    prediction: float
    rel_err: float
    direct_lambda_min: float
    eigenvector: np.ndarray = field(repr=False)

    @property
    def lambda_min(self) -> float:
        return self.report.lambda_min


def _rel_err(lam, pred, zero_tol):
    if pred == 0:
        return 0.0 if abs(lam) <= zero_tol else float("inf")
    return abs(lam - pred) / abs(pred)


def spectrum_along_branch(b: Branch, basis_order=None, method: str = "jacobi") -> list:
    """Transformed-operator spectrum (full Phi) at every point of a mode-1 branch."""
    if b.mode != 1:
        raise ParameterError("the perturbation prediction covers the first branch only")
    pred = perturbation_prediction(b.params.with_mu(critical_mu(1, b.params.k, b.params.h)))
    out = []
    for pt in b.points:
        A = assemble_transformed_operator(pt.state, basis_order)
        ev, V = symmetric_eigen(A, method)
        zt = default_zero_tol(A)
        p_eps = float(pred(pt.eps))
        rep = StabilityReport.from_eigenvalues(ev, zt, p_eps)
        Ad = assemble_direct_form(pt.state, basis_order)
        dmin = float(symmetric_eigen(Ad, method)[0][0] / Ad.basis_norm_sq)
        out.append(BranchSpectrum(pt.eps, rep, p_eps, _rel_err(rep.lambda_min, p_eps, zt), dmin, V[:, 0]))
    return out
