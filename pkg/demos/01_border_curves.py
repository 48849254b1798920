# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# ## Convergence border
#
# The iteration is predicted to converge when `F / (mu^4 nu) < 1`. For a
# given amplitude and viscosity the border sits at `mu = (F / nu)^(1/4)`;
# everything above that width is inside the convergence region.

# %%
import matplotlib.pyplot as plt
import numpy as np

from picard_ns import border_mu, convergence_predicate, dot_set_mu, sample_set
from picard_ns.sweep import emit_border_curves

pairs, viscosities = sample_set()
print(len(pairs), "amplitude pairs; viscosities", viscosities)

# %% [markdown]
# Amplitudes follow `10**k / n`, so the smallest is `0.2` (n=5, k=0) and the
# largest `1000` (n=1, k=3). On the `nu = 0.01` curve those map to the two
# ends of the width range.

# %%
print("mu at F=0.2:  ", border_mu(0.2, 0.01))
print("mu at F=1000: ", border_mu(1000.0, 0.01))
print("on the curve counts as convergent?", convergence_predicate(1.0, border_mu(1.0, 0.01), 0.01))
print("5% above it?", convergence_predicate(1.0, dot_set_mu(1.0, 1.05), 0.01))

# %%
tables = emit_border_curves(viscosities)
fig, ax = plt.subplots(figsize=(6, 4))
for nu, t in tables.items():
    ax.semilogx(t[:, 0], t[:, 1], label=f"nu = {nu}")
Fs = np.array([F for _, F in pairs])
ax.semilogx(Fs, [dot_set_mu(F) for F in Fs], "k.", label="sample points")
ax.set(xlabel="F", ylabel="mu")
ax.legend()
fig.savefig("border_curves.png", dpi=100, bbox_inches="tight")
