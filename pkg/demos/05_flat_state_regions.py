# %% [markdown]
# Stability regions of flat water
#
# At w = 0 the second variation in w is diagonal with eigenvalues
# 2g(mu n coth(nkh) - 1/k), each twice. Including variations of the
# conformal depth h adds the coefficient 2 pi 2 (m^2/(k h^3) - g/k).

# %%
import math

import numpy as np
from _plot import figure

from stripwaves.continuation import critical_mu
from stripwaves.problem import WaveParameters
from stripwaves.stability import trivial_full_variation, trivial_spectrum

for label, mu in [("1.2 mu1*", 1.2 * critical_mu(1)), ("mu1*", critical_mu(1)), ("mu2*", critical_mu(2))]:
    rep = trivial_spectrum(WaveParameters(mu=mu), 32)
    print(f"{label:>9}: {rep.classification:>8}, {rep.n_negative} negative, {rep.n_zero} zero")

# %% [markdown]
# Each eigenvalue grows with mu, so the w-spectrum is positive exactly
# above the dispersion curve mu = tanh(kh)/k. The h-condition m^2 > g h^3
# picks out a subregion (mu > h at k = 1).

# %%
hs = np.linspace(0.05, 2.0, 120)
mus = np.linspace(0.05, 2.0, 120)
code = {"none": 0, "w_only": 1, "both": 2}
grid = np.array([[code[trivial_full_variation(WaveParameters(h=h, mu=mu)).region] for h in hs] for mu in mus])
for name, c in code.items():
    print(f"{name:>7}: {np.mean(grid == c):.1%} of the grid")

plt, path = figure()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.contourf(hs, mus, grid, levels=[-0.5, 0.5, 1.5, 2.5], colors=["white", "lightblue", "steelblue"])
    ax.plot(hs, np.tanh(hs), "k--", lw=1, label="mu = tanh(h)")
    ax.set_xlabel("h")
    ax.set_ylabel("mu")
    ax.legend()
    fig.savefig(path("regions.png"), dpi=120)
    print("wrote", path("regions.png"))
