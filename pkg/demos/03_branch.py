# %% [markdown]
# The first bifurcating branch
#
# Flat water is a solution for every mu. At mu_1* = tanh(kh)/k the
# linearization acquires a kernel and a branch of periodic waves bifurcates.
# The branch is traced by pinning the cos x coefficient to eps and solving
# for the remaining coefficients together with mu.

# %%
import math

import numpy as np
from _plot import figure

from stripwaves.continuation import branch_validate, trace_branch
from stripwaves.problem import WaveParameters, surface_points

b = trace_branch(1, eps_max=0.05, steps=10, base=WaveParameters(), n_trunc=64)
print(f"{'eps':>6} {'mu - tanh(1)':>14} {'residual':>10} {'Bernoulli':>10}")
for pt in b.points:
    print(f"{pt.eps:6.3f} {pt.mu - math.tanh(1):14.6e} {pt.residual_norm:10.1e} {pt.diagnostics['bernoulli']:10.1e}")

# %% [markdown]
# The profile approaches eps cos x at second order and mu moves
# quadratically away from the bifurcation value. The Bernoulli residual is
# an independent check: the solver never evaluates it.

# %%
v = branch_validate(b)
print("observed order:", round(v.observed_order, 4), " mu curvature:", round(v.mu_curvature, 4))

plt, path = figure()
if plt is not None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(b.eps, b.mu, "o-")
    ax1.set_xlabel("eps")
    ax1.set_ylabel("mu")
    s = surface_points(b.points[-1].state, 256)
    ax2.plot(s.X, s.Y)
    ax2.set_xlabel("X")
    ax2.set_ylabel("Y")
    ax2.set_title(f"surface at eps = {b.points[-1].eps:.2f}")
    fig.tight_layout()
    fig.savefig(path("branch.png"), dpi=120)
    print("wrote", path("branch.png"))
