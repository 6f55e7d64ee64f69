# %% [markdown]
# The transform P[u] = u Re W + Im W C(u)
#
# W = 1/k + C(w') + i w' is the boundary value of the conformal map
# derivative. P intertwines the two quadratic forms of the stability
# analysis. It is invertible when Re W > 0; the inverse needs a rank-one
# correction because P only fixes C(P[u]) up to a constant.

# %%
import numpy as np

from stripwaves.continuation import critical_mu, newton_solve
from stripwaves.problem import WaveParameters, WaveState
from stripwaves.spectral import SpectralFunction
from stripwaves.strip import build_W, check_product_identity, plotnikov_forward, plotnikov_inverse

p = WaveParameters(mu=critical_mu(1))
guess = WaveState(p, SpectralFunction.from_trig(cos=[1.0], n_max=32))
state = newton_solve(guess, 1, 0.02).state
W = build_W(state.w, p.k, p.D)
print("min Re W on the branch point eps = 0.02:", W.min_real())

# %% [markdown]
# Round trip through the transform.

# %%
rng = np.random.default_rng(0x5EED)
c = np.zeros(17, dtype=complex)
c[1:] = (rng.standard_normal(16) + 1j * rng.standard_normal(16)) * 0.7 ** np.arange(16)
u = SpectralFunction(c)
Pu = plotnikov_forward(u, W, p.D, n_out=96)
back = plotnikov_inverse(Pu, W, p.D, n_out=16)
print("round-trip error:", (back - u).max_abs_coeff())

# %% [markdown]
# The product identity behind the transform: C(u C v + v C u) agrees with
# C u C v - u v up to its mean.

# %%
v = SpectralFunction(np.conj(c) * 0.5)
print("product identity defect:", check_product_identity(u, v, p.D))
