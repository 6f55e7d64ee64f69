# %% [markdown]
# Fourier multipliers of the conformal strip
#
# A mean-free function u on the circle extends harmonically into the strip
# of width D. Its harmonic conjugate on the top boundary is C_D u, the
# strip Hilbert transform, with symbol -i coth(nD). The Dirichlet-Neumann
# map G_D has symbol n coth(nD), plus 1/D on the mean.

# %%
import math

import numpy as np
from _plot import figure

from stripwaves import spectral as sp
from stripwaves.problem import symbol_compare
from stripwaves.spectral import SpectralFunction

D = 1.0
u = SpectralFunction.from_trig(cos=[1.0, 0.0, 0.5], sin=[0.0, 0.25])
Cu = sp.apply_strip_hilbert(u, D)
print("u     cos:", u.cos_coefficients(), " sin:", u.sin_coefficients())
print("C_D u cos:", Cu.cos_coefficients(), " sin:", Cu.sin_coefficients())
print("coth(1) =", 1 / math.tanh(1), " coth(3) =", 1 / math.tanh(3))

# %% [markdown]
# G_D f equals C_D(f') plus the mean over D. The relation holds exactly
# because both sides are diagonal in the Fourier basis.

# %%
f = u + 0.3
gap = (sp.apply_dtn(f, D) - (sp.apply_strip_hilbert(sp.derivative(f), D) + sp.mean(f) / D)).max_abs_coeff()
print("max |G f - C f' - mean/D| =", gap)

# %% [markdown]
# Finite versus infinite depth. In infinite depth the symbol is |n| and
# vanishes at n = 0. In finite depth the n = 0 value is 1/D and every other
# value is at least coth(D) > 1, so the symbol is bounded away from zero.

# %%
rows = symbol_compare(D, 8)
print(f"{'n':>3} {'n coth(nD)':>12} {'|n|':>5}")
for n, fin, inf in rows:
    print(f"{n:>3} {fin:>12.6f} {inf:>5.1f}")

plt, path = figure()
if plt is not None:
    n, fin, inf = np.array(rows).T
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(n, fin, "o-", label="finite depth, D = 1")
    ax.plot(n, inf, "s--", label="infinite depth")
    ax.set_xlabel("n")
    ax.set_ylabel("symbol")
    ax.legend()
    fig.savefig(path("symbols.png"), dpi=120)
    print("wrote", path("symbols.png"))
