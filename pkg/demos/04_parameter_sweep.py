# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# ## A reduced sweep
#
# The full sweep covers 5 modes x 4 amplitudes x 6 viscosities at N=256
# (`sweep run --out results`). Here a coarse version runs in a few
# seconds and writes the same file set.

# %%
from pathlib import Path

from picard_ns.plotting import plot_directory
from picard_ns.sweep import SweepConfig, emit_reports, run_sweep

cfg = SweepConfig(N=64, L=4.0, steps=50, exponents=(0, 1), viscosities=(0.01, 0.3, 1.5), margin=1.05)
report = run_sweep(cfg)
for r in report.records:
    print(f"n={r.n} F={r.F:<8.4g} nu={r.nu:<5} predicted={r.predicted_convergent!s:5} ratio={r.ratio:.3e}")

# %%
out = Path("sweep_demo")
for path in emit_reports(report, out):
    print(path)
for path in plot_directory(out, out):
    print(path)
