"""Independent checks of the spectral solver against closed forms and a finite-difference solver."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .picard import _first_stream, stokes_solve
from .spectral import ForceParams, GridSpec, TimeGrid, VelocityField, march_stokes, transform_forward, transform_inverse

HEAT_TOL = 1e-8
SINGLE_MODE_TOL = 1e-8
FD_TOL = 5e-2


@dataclass(frozen=True)
class OracleReport:
    name: str
    params: dict = field(default_factory=dict)
    error_l2: float = 0.0
    error_max: float = 0.0
    tolerance: float = 0.0

    @property
    def error(self) -> float:
        return max(self.error_l2, self.error_max)

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return (f"{status} {self.name}({args}): l2={self.error_l2:.3e} "
                f"max={self.error_max:.3e} tol={self.tolerance:.1e}")


def _rel_errors(num: np.ndarray, exact: np.ndarray) -> tuple[float, float]:
    diff = num - exact
    l2 = np.sqrt(np.sum(diff**2) / np.sum(exact**2))
    mx = np.abs(diff).max() / np.abs(exact).max()
    return float(l2), float(mx)


def heat_oracle(grid: GridSpec, tg: TimeGrid, nu: float, mu: float = 2.0) -> OracleReport:
    """Diffuse ``exp(-mu^2 r^2)`` with the Stokes stepper and compare with the spreading Gaussian.

    The exact solution is ``exp(-mu^2 r^2 / s) / s`` with ``s = 1 + 4 mu^2 nu t``,
    so the origin amplitude is ``1 / s``. Errors are the worst over all steps.
    """
    x, y = grid.xy
    r2 = x**2 + y**2
    zero = np.zeros(grid.spectral_shape, complex)
    initial = (transform_forward(np.exp(-mu**2 * r2), grid), zero)
    origin = (grid.N // 2, grid.N // 2)
    worst_l2 = worst_max = 0.0
    for _, t, uh in march_stokes(lambda m, t: (zero, zero), nu, grid, tg, initial=initial):
        s = 1.0 + 4.0 * mu**2 * nu * t
        u = transform_inverse(uh[0], grid)
        l2, _ = _rel_errors(u, np.exp(-mu**2 * r2 / s) / s)
        worst_l2 = max(worst_l2, l2)
        worst_max = max(worst_max, abs(u[origin] - 1.0 / s) * s)
    return OracleReport("heat_oracle", dict(N=grid.N, L=grid.L, steps=tg.steps, t_final=tg.t_final,
                                            nu=nu, mu=mu), worst_l2, worst_max, HEAT_TOL)


def single_mode_oracle(
    k: tuple[int, int],
    nu: float,
    tg: TimeGrid,
    grid: GridSpec | None = None,
    amplitude: float = 1.0,
    store_every: int = 1,
) -> OracleReport:
    """Constant divergence-free force ``A e_perp cos(k.x)`` against ``A (1 - exp(-nu k^2 t)) / (nu k^2)``.

    ``k`` is the integer mode pair; the physical wavenumber is ``pi k / L``.
    """
    grid = grid or GridSpec()
    if k == (0, 0):
        raise ValueError("single-mode oracle needs a nonzero wavenumber")
    kx, ky = (np.pi / grid.L) * np.asarray(k, dtype=float)
    kk = np.hypot(kx, ky)
    x, y = grid.xy
    phase = np.cos(kx * x + ky * y)
    ex, ey = -ky / kk, kx / kk
    force = VelocityField(amplitude * ex * phase, amplitude * ey * phase)
    hist = stokes_solve(lambda t: force, nu, grid, tg, store_every)
    lam = nu * kk**2
    worst_l2 = worst_max = 0.0
    for t, u in zip(hist.times[1:], hist.fields[1:]):
        a = amplitude * (1.0 - np.exp(-lam * t)) / lam if lam > 0 else amplitude * t
        num = np.stack([u.ux, u.uy])
        exact = np.stack([a * ex * phase, a * ey * phase])
        l2, mx = _rel_errors(num, exact)
        worst_l2, worst_max = max(worst_l2, l2), max(worst_max, mx)
    return OracleReport("single_mode_oracle", dict(k=tuple(k), nu=nu, steps=tg.steps, t_final=tg.t_final,
                                                   N=grid.N, L=grid.L), worst_l2, worst_max, SINGLE_MODE_TOL)


def fd_first_iterate_max(p: ForceParams, grid: GridSpec, tg: TimeGrid) -> float:
    """Space-time max of ``|u1|`` from a centred finite-difference projection scheme.

    Heun's method (explicit, same stability bound as forward Euler) on
    ``u_t = nu lap u + f``, each stage followed by a pressure solve with the
    5-point Laplacian and centred gradient/divergence.
    """
    if grid.N > 64:
        raise ValueError(f"finite-difference oracle is limited to N <= 64, got N={grid.N}")
    dx, dt = grid.dx, tg.dt
    dt_max = dx**2 / (4.0 * p.nu)
    if dt > dt_max:
        raise ValueError(f"explicit diffusion needs dt <= {dt_max:.6g} "
                         f"(steps >= {int(np.ceil(tg.t_final / dt_max))}), got dt={dt:.6g}")

    def ddx(f, axis):
        return (np.roll(f, -1, axis) - np.roll(f, 1, axis)) / (2 * dx)

    def lap(f):
        return (np.roll(f, 1, 0) + np.roll(f, -1, 0) + np.roll(f, 1, 1) + np.roll(f, -1, 1) - 4 * f) / dx**2

    # the periodic 5-point Laplacian is circulant, so its system is solved by DFT
    theta = 2 * np.pi * np.fft.fftfreq(grid.N)
    sx, sy = np.meshgrid(np.sin(theta / 2) ** 2, np.sin(theta / 2) ** 2, indexing="ij")
    symbol = -4.0 * (sx + sy) / dx**2
    symbol[0, 0] = 1.0

    def project(ux, uy):
        rhs_hat = np.fft.fft2(ddx(ux, 0) + ddx(uy, 1))
        rhs_hat[0, 0] = 0.0
        pres = np.fft.ifft2(rhs_hat / symbol).real
        return ux - ddx(pres, 0), uy - ddx(pres, 1)

    x, y = grid.xy
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    f_r = p.F * r ** (p.n + 1) * np.exp(-p.mu**2 * r**2) * np.cos(p.n * phi)
    fx, fy = f_r * np.cos(phi), f_r * np.sin(phi)

    ux = np.zeros_like(x)
    uy = np.zeros_like(x)
    peak = 0.0
    def rhs(ux, uy, t):
        s = 1.0 / (4 * p.mu**2 * p.nu * t + 1.0) ** 2
        return p.nu * lap(ux) + s * fx, p.nu * lap(uy) + s * fy

    for m in range(tg.steps):
        t = m * dt
        ax, ay = rhs(ux, uy, t)
        vx, vy = project(ux + dt * ax, uy + dt * ay)
        bx, by = rhs(vx, vy, t + dt)
        ux, uy = project(ux + 0.5 * dt * (ax + bx), uy + 0.5 * dt * (ay + by))
        peak = max(peak, float(np.hypot(ux, uy).max()))
    return peak


def spectral_first_iterate_max(p: ForceParams, grid: GridSpec, tg: TimeGrid, stride: int = 1) -> float:
    """Space-time max of ``|u1|`` over every ``stride``-th grid point of the spectral solution."""
    peak = 0.0
    for _, u in _first_stream(p, grid, tg):
        peak = max(peak, float(u.magnitude()[::stride, ::stride].max()))
    return peak


def fd_oracle(
    p: ForceParams,
    grid: GridSpec,
    tg: TimeGrid,
    reference_N: int = 128,
    reference_tg: TimeGrid | None = None,
) -> OracleReport:
    """Relative discrepancy in ``max|u1|`` between the FD solver and the spectral solver.

    The spectral reference runs on the same box at ``reference_N`` and is
    sampled at the coarse grid points only.
    """
    if reference_N % grid.N:
        raise ValueError("reference resolution must be a multiple of the coarse resolution")
    fd = fd_first_iterate_max(p, grid, tg)
    ref = spectral_first_iterate_max(p, GridSpec(grid.L, reference_N), reference_tg or tg, reference_N // grid.N)
    if ref == 0:
        err = 0.0 if fd == 0 else float("inf")
    else:
        err = abs(fd - ref) / ref
    return OracleReport("fd_oracle", dict(n=p.n, F=p.F, mu=p.mu, nu=p.nu, N=grid.N, L=grid.L,
                                          steps=tg.steps), err, err, FD_TOL)


def fd_refinement(
    p: ForceParams, L: float = 2.0, resolutions=(32, 64), tg: TimeGrid | None = None, reference_N: int = 128
) -> tuple[list[float], float]:
    """FD discrepancies over successively halved ``dx`` and the fitted log-log slope.

    The default box is small so that ``N <= 64`` already resolves the
    force well enough for the asymptotic second-order regime.
    """
    tg = tg or TimeGrid(1.0, 1000)
    errs = [fd_oracle(p, GridSpec(L, n), tg, reference_N).error_max for n in resolutions]
    dxs = [2 * L / n for n in resolutions]
    slope = float(np.polyfit(np.log(dxs), np.log(errs), 1)[0])
    return errs, slope


SLOPE_TARGET, SLOPE_TOL = 2.0, 0.3


def fd_refinement_report(p: ForceParams | None = None, L: float = 2.0, resolutions=(32, 64)) -> OracleReport:
    """Observed FD order as a report; the error is the distance of the slope from 2."""
    p = p or ForceParams(1, 1.0, 2.0, 0.1)
    errs, slope = fd_refinement(p, L, resolutions)
    dev = abs(slope - SLOPE_TARGET)
    return OracleReport("fd_refinement", dict(n=p.n, F=p.F, mu=p.mu, nu=p.nu, L=L, N=tuple(resolutions),
                                              discrepancies=tuple(round(e, 6) for e in errs),
                                              slope=round(slope, 4)), dev, dev, SLOPE_TOL)


def run_oracle_gate() -> list[OracleReport]:
    """All oracle checks at their default settings."""
    p = ForceParams(1, 1.0, 2.0, 0.1)
    return [
        heat_oracle(GridSpec(8.0, 256), TimeGrid(1.0, 200), nu=0.01, mu=2.0),
        single_mode_oracle((1, 0), 0.1, TimeGrid(1.0, 200)),
        fd_oracle(p, GridSpec(8.0, 64), TimeGrid(1.0, 200)),
        fd_refinement_report(p),
    ]
