# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# ## Checking the solver
#
# Three independent checks back the spectral solver:
#
# * diffusion of a Gaussian against the spreading closed form,
# * a constant single-mode force against its exact ODE solution,
# * a second-order finite-difference projection solver on coarse grids.

# %%
from picard_ns import ForceParams, GridSpec, TimeGrid
from picard_ns.oracles import fd_refinement, heat_oracle, run_oracle_gate, single_mode_oracle

print(heat_oracle(GridSpec(8.0, 256), TimeGrid(1.0, 200), nu=0.01).summary())
print(single_mode_oracle((1, 0), 0.1, TimeGrid(1.0, 200)).summary())

# %% [markdown]
# The finite-difference discrepancy should fall by about four when `dx`
# halves.

# %%
errs, slope = fd_refinement(ForceParams(1, 1.0, 2.0, 0.1), L=2.0, resolutions=(16, 32, 64))
print("discrepancies:", errs)
print("fitted order:", slope)

# %%
for report in run_oracle_gate():
    print(report.summary())
