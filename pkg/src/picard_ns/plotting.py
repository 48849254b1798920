"""Line charts from a sweep output directory (needs matplotlib)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .sweep import read_csv, read_records  # noqa: E402


def _floats(rows, col):
    return np.array([float(r[col]) for r in rows])


def plot_directory(indir, outdir) -> list[Path]:
    indir, outdir = Path(indir), Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    borders = sorted(indir.glob("border_*.csv"), key=lambda p: float(p.stem.split("_", 1)[1]))
    if borders:
        fig, ax = plt.subplots(figsize=(6, 4))
        for path in borders:
            _, rows = read_csv(path)
            ax.semilogx(_floats(rows, 0), _floats(rows, 1), label=f"nu = {path.stem.split('_', 1)[1]}")
        ax.set(xlabel="F", ylabel="mu", title="border F / (mu^4 nu) = 1")
        ax.legend()
        path = outdir / "borders.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    records_path = indir / "records.csv"
    records = [r for r in read_records(records_path) if not r.degenerate] if records_path.exists() else []
    for n in sorted({r.n for r in records}):
        recs = [r for r in records if r.n == n]
        nus = sorted({r.nu for r in recs})
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 7))
        lowest = [r for r in recs if r.nu == nus[0]]
        top.loglog([r.F for r in lowest], [r.max_u1 for r in lowest], "r.-", label="max |u1|")
        top.loglog([r.F for r in lowest], [r.max_u2star for r in lowest], "b.-", label="max |u2*|")
        top.set(xlabel="F", ylabel="amplitude", title=f"n = {n}, nu = {nus[0]}")
        top.legend()
        for F in sorted({r.F for r in recs}):
            line = sorted((r for r in recs if r.F == F), key=lambda r: r.nu)
            bottom.semilogy([r.nu for r in line], [r.max_u1 for r in line], "r.-")
            bottom.semilogy([r.nu for r in line], [r.max_u2star for r in line], "b.--")
        bottom.set(xlabel="nu", ylabel="amplitude (red u1, blue u2*)")
        path = outdir / f"amplitudes_n{n}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    for prof in sorted(indir.glob("profiles_n*.csv")):
        _, rows = read_csv(prof)
        if not rows:
            continue
        F, nu = _floats(rows, 1), _floats(rows, 3)
        # largest amplitude at the smallest viscosity
        sel = [i for i in range(len(rows)) if F[i] == F.max() and nu[i] == nu.min()]
        r, phi = _floats(rows, 4)[sel], _floats(rows, 5)[sel]
        a1, a2 = _floats(rows, 6)[sel], _floats(rows, 7)[sel]
        fig, ax = plt.subplots(figsize=(6, 4))
        for radius in np.unique(r):
            m = r == radius
            ax.plot(phi[m], a1[m], "r-", lw=1)
            ax.plot(phi[m], a2[m], "b--", lw=1)
        ax.set(xlabel="phi", ylabel="|u| (red u1, blue u2*)", title=f"{prof.stem}, F = {F.max():g}")
        path = outdir / f"{prof.stem}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
