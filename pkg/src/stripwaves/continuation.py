"""
Bifurcation from the flat state and continuation of the mode-n branch.

Newton works in the even cosine subspace with the cos(nx) coefficient
pinned to the amplitude eps. Writing w = eps * psi with psi = cos(nx) + phi
and phi free of cos(nx), the solver drives

    F(phi, mu) = R(eps * psi, mu) / eps

to zero. For eps != 0 this has the same roots as R; at eps = 0 it reduces
to the linearization at rest, whose root is the dispersion point mu_n*.
The scaling keeps the Jacobian regular uniformly as eps -> 0.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import spectral as sp
from .errors import ContinuationError, ParameterError
from .problem import (
    WaveParameters,
    WaveState,
    bernoulli_residual,
    mean_depth_and_speed,
    residual,
    residual_jacobian,
    residual_mu_derivative,
)
from .spectral import SpectralFunction
from .strip import build_W

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 25


def critical_mu(n: int, k: float = 1.0, h: float = 1.0) -> float:
    """Dispersion point mu_n* = tanh(nkh)/(nk)."""
    if n < 1:
        raise ParameterError(f"mode must be >= 1, got {n}")
    if not (k > 0 and h > 0):
        raise ParameterError("k and h must be positive")
    return math.tanh(n * k * h) / (n * k)


@dataclass(frozen=True)
class BranchPoint:
    eps: float
    mu: float
    state: WaveState
    residual_norm: float
    newton_iters: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "mu": self.mu,
            "residual_norm": self.residual_norm,
            "newton_iters": self.newton_iters,
            "diagnostics": self.diagnostics,
            "state": self.state.to_dict(),
        }

    @classmethod
    def from_dict(cls, d) -> "BranchPoint":
        return cls(
            d["eps"], d["mu"], WaveState.from_dict(d["state"]), d["residual_norm"],
            d["newton_iters"], d.get("diagnostics", {}),
        )


@dataclass
class Branch:
    mode: int
    points: list
    params: WaveParameters
    complete: bool = True

    def __post_init__(self):
        eps = [p.eps for p in self.points]
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ValueError("branch amplitudes must be strictly increasing")

    @property
    def eps(self) -> np.ndarray:
        return np.array([p.eps for p in self.points])

    @property
    def mu(self) -> np.ndarray:
        return np.array([p.mu for p in self.points])

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "params": self.params.to_dict(),
            "complete": self.complete,
            "points": [p.to_dict() for p in self.points],
        }

    @classmethod
    def from_dict(cls, d) -> "Branch":
        pd = d["params"]
        params = WaveParameters(pd["k"], pd["h"], pd["g"], pd["mu"], pd.get("m"), pd.get("B"))
        pts = [BranchPoint.from_dict(p) for p in d["points"]]
        return cls(d["mode"], pts, params, d.get("complete", True))

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load_json(cls, path) -> "Branch":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def csv_rows(self):
        for p in self.points:
            d = p.diagnostics
            yield (p.eps, p.mu, p.residual_norm, d.get("min_graph", float("nan")), d.get("dmean", float("nan")))

    def write_csv(self, path, header_comment=None) -> None:
        with open(path, "w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["eps", "mu", "residual", "min_graph", "dmean"])
            for row in self.csv_rows():
                wr.writerow([f"{v:.17g}" for v in row])


# ============================================================================
# Newton corrector
# ============================================================================


def _scaled_system(params, mode, eps, psi: SpectralFunction, mu):
    """Scaled residual F and Jacobian on the pinned cosine unknowns."""
    N = psi.n_max
    p = params.with_mu(mu)
    lin_state = WaveState(p, SpectralFunction.zeros(N))
    state = WaveState(p, psi * eps)
    if eps != 0:
        F = residual(state) / eps
    else:
        F = residual_jacobian(lin_state, psi)
    J = np.empty((N, N))
    for j in range(1, N + 1):
        if j == mode:
            # d/dmu of R(eps psi)/eps is C(psi'), independent of eps
            col = sp.apply_strip_hilbert(sp.derivative(psi), p.D)
        else:
            e = SpectralFunction.from_trig(cos=np.eye(N)[j - 1], n_max=N)
            col = residual_jacobian(state, e)
        J[:, j - 1] = col.cos_coefficients()
    return F.cos_coefficients(), J, state


def newton_solve(initial: WaveState, mode: int, eps: float, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> BranchPoint:
    """Solve the governing equation with the cos(nx) coefficient pinned to eps.

    The initial guess supplies mu and the shape of w; its cosine profile is
    rescaled so that its cos(nx) coefficient equals eps. Convergence is
    declared when the coefficient max-norm of R (of F at eps = 0) is below
    ``tol``. Each step is halved up to 10 times if it does not decrease the
    residual.
    """
    N = initial.n_max
    if not 1 <= mode <= N:
        raise ParameterError(f"mode {mode} outside truncation {N}")
    a = initial.w.cos_coefficients()
    if a[mode - 1] != 0:
        phi = a / a[mode - 1]
    else:
        phi = np.zeros(N)
    phi[mode - 1] = 1.0
    mu = float(initial.params.mu)
    params = initial.params
    scale = abs(eps) if eps != 0 else 1.0

    def make_psi(ph):
        return SpectralFunction.from_trig(cos=ph, n_max=N)

    F, J, state = _scaled_system(params, mode, eps, make_psi(phi), mu)
    res = scale * np.max(np.abs(F))
    it = 0
    while it < max_iter:
        if res <= tol and it > 0:
            break
        try:
            dz = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            last = BranchPoint(eps, mu, state, res, it)
            raise ContinuationError(f"singular Jacobian at eps={eps}", last) from exc
        step = 1.0
        for _ in range(11):
            phi_new = phi + step * dz
            phi_new[mode - 1] = 1.0
            mu_new = mu + step * dz[mode - 1]
            F_new, J_new, state_new = _scaled_system(params, mode, eps, make_psi(phi_new), mu_new)
            res_new = scale * np.max(np.abs(F_new))
            if res_new < res or res_new <= tol:
                break
            step /= 2
        phi, mu, F, J, state, res = phi_new, mu_new, F_new, J_new, state_new, res_new
        it += 1
        if res <= tol:
            break
    if not res <= tol:
        last = BranchPoint(eps, mu, state, res, it)
        raise ContinuationError(f"Newton did not converge at eps={eps}: residual {res:.3e}", last)
    state = state.with_flux()
    return BranchPoint(eps, mu, state, float(res), it, point_diagnostics(state))


def point_diagnostics(state: WaveState) -> dict:
    p = state.params
    W = build_W(state.w, p.k, p.D, warn=False)
    d, c = mean_depth_and_speed(state)
    M = sp.product_grid(state.n_max)
    return {
        "min_graph": W.min_real(),
        "bernoulli": bernoulli_residual(state),
        "regular": bool(p.mu / 2 > float(np.max(state.w.samples(M)))),
        "dmean": d - p.h,
        "speed": c,
    }


# ============================================================================
# Branch tracing
# ============================================================================


def trace_branch(mode: int = 1, eps_max: float = 0.05, steps: int = 10, base: WaveParameters | None = None,
                 n_trunc: int = sp.DEFAULT_TRUNCATION, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> Branch:
    """Natural continuation at eps_j = j * eps_max / steps, j = 0..steps.

    The eps = 0 point is the bifurcation point itself. If ``eps_max`` is 0
    a single trivial point is returned. A Newton failure truncates the
    branch with a warning; ``Branch.complete`` is then False.
    """
    base = base or WaveParameters()
    mu_star = critical_mu(mode, base.k, base.h)
    init = WaveState(base.with_mu(mu_star), SpectralFunction.from_trig(cos=np.eye(n_trunc)[mode - 1], n_max=n_trunc))
    levels = [0.0] if eps_max == 0 else [j * eps_max / steps for j in range(steps + 1)]
    points = []
    guess = init
    for eps in levels:
        try:
            pt = newton_solve(guess, mode, eps, tol, max_iter)
        except ContinuationError as exc:
            warnings.warn(f"branch truncated at eps={eps}: {exc}", RuntimeWarning, stacklevel=2)
            return Branch(mode, points, base, complete=False)
        points.append(pt)
        if eps != 0:
            guess = pt.state
        else:
            # carry the scaled shape: unit cos(nx) plus the eps = 0 profile
            guess = WaveState(base.with_mu(pt.mu), init.w)
    return Branch(mode, points, base)


@dataclass(frozen=True)
class BranchValidation:
    observed_order: float
    pairwise_orders: list
    mu_slope: float
    mu_curvature: float
    max_residual: float
    max_bernoulli: float
    passed: bool


def branch_validate(b: Branch, min_order: float = 1.9) -> BranchValidation:
    """Fit ||w_eps - eps cos(nx)||_2 ~ eps^p and the mu(eps) curve.

    ``mu_slope`` and ``mu_curvature`` come from a least-squares fit of
    mu - mu_n* = s eps + c eps^2 and are reported, not asserted.
    """
    if len(b.points) < 3:
        raise ValueError("branch validation needs at least 3 points")
    max_res = max(p.residual_norm for p in b.points)
    max_bern = max(p.diagnostics.get("bernoulli", 0.0) for p in b.points)
    pts = [p for p in b.points if p.eps != 0]
    if not pts:
        return BranchValidation(float("nan"), [], 0.0, 0.0, max_res, max_bern, True)
    eps = np.array([p.eps for p in pts])
    dev = []
    for p in pts:
        lead = SpectralFunction.from_trig(cos=np.eye(p.state.n_max)[b.mode - 1] * p.eps, n_max=p.state.n_max)
        diff = p.state.w - lead
        dev.append(math.sqrt(sp.inner_product(diff, diff)))
    dev = np.array(dev)
    pairwise = [float(np.log(dev[i + 1] / dev[i]) / np.log(eps[i + 1] / eps[i])) for i in range(len(eps) - 1)]
    order = float(np.polyfit(np.log(eps), np.log(dev), 1)[0]) if len(eps) > 1 else float("nan")
    mu_star = critical_mu(b.mode, b.params.k, b.params.h)
    A = np.column_stack([eps, eps**2])
    slope, curv = np.linalg.lstsq(A, np.array([p.mu for p in pts]) - mu_star, rcond=None)[0]
    ok = bool(len(eps) < 2 or order >= min_order)
    return BranchValidation(order, pairwise, float(slope), float(curv), max_res, max_bern, ok)
