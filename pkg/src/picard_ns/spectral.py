"""Periodic-box spectral machinery for the 2-D incompressible Stokes problem.

The whole-plane problem is truncated to the periodic box ``[-L, L)^2``.
Coefficients use the mean-preserving normalisation ``rfft2(f) / N**2`` so
that a constant field ``c`` maps to a single zero-mode coefficient ``c``.
Only the half spectrum ``m_y >= 0`` is stored; the coefficients at ``-k``
are the conjugates of those at ``k`` and are implied.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator

import numpy as np
import scipy.fft as sfft


class SolverError(RuntimeError):
    """Raised when a time march produces non-finite values."""


@dataclass(frozen=True)
class GridSpec:
    """Square periodic grid on ``[-L, L)^2`` with ``N`` points per axis.

    Arrays are indexed ``[i, j]`` with ``x = -L + i*dx`` and ``y = -L + j*dx``.
    """

    L: float = 8.0
    N: int = 256

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"half width must be positive, got L={self.L}")
        if self.N < 16 or self.N % 2:
            raise ValueError(f"resolution must be even and >= 16, got N={self.N}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.N)

    @cached_property
    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    @cached_property
    def mode_index(self) -> np.ndarray:
        """Integer mode numbers in FFT order, covering ``[-N/2, N/2)``."""
        return np.fft.fftfreq(self.N, d=1.0 / self.N)

    @cached_property
    def half_mode_index(self) -> np.ndarray:
        """Non-negative mode numbers ``0..N/2`` along the halved (y) axis."""
        return np.arange(self.N // 2 + 1, dtype=float)

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return self.N, self.N // 2 + 1

    @cached_property
    def k(self) -> tuple[np.ndarray, np.ndarray]:
        s = np.pi / self.L
        return np.meshgrid(self.mode_index * s, self.half_mode_index * s, indexing="ij")

    @cached_property
    def k_deriv(self) -> tuple[np.ndarray, np.ndarray]:
        # Nyquist lines dropped so derivatives of real fields stay real
        nyq = self.N // 2
        s = np.pi / self.L
        mx = np.where(np.abs(self.mode_index) == nyq, 0.0, self.mode_index)
        my = np.where(self.half_mode_index == nyq, 0.0, self.half_mode_index)
        return np.meshgrid(mx * s, my * s, indexing="ij")

    @cached_property
    def k2(self) -> np.ndarray:
        kx, ky = self.k
        return kx**2 + ky**2

    @cached_property
    def nyquist_free(self) -> np.ndarray:
        """False on the Nyquist row and column, where ``-k`` aliases onto ``k``."""
        nyq = self.N // 2
        mx, my = np.meshgrid(self.mode_index, self.half_mode_index, indexing="ij")
        return (np.abs(mx) != nyq) & (my != nyq)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        mx, my = np.meshgrid(self.mode_index, self.half_mode_index, indexing="ij")
        return np.maximum(np.abs(mx), np.abs(my)) <= self.N / 3


def required_resolution(mu: float, L: float, tol: float = 1e-7, floor: int = 16) -> int:
    """Smallest power-of-two ``N`` whose cutoff resolves ``exp(-mu^2 r^2)`` to ``tol``.

    The Gaussian's spectrum falls as ``exp(-k^2 / (4 mu^2))``, so the cutoff
    ``pi N / (2 L)`` must reach ``2 mu sqrt(ln(1/tol))``.
    """
    need = 4.0 * L * mu * np.sqrt(np.log(1.0 / tol)) / np.pi
    n = floor
    while n < need:
        n *= 2
    return n


@dataclass(frozen=True)
class TimeGrid:
    t_final: float = 1.0
    steps: int = 200

    def __post_init__(self):
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.t_final / self.steps

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)


@dataclass(frozen=True)
class ForceParams:
    """Radial force family: mode ``n``, amplitude ``F``, width ``mu``, viscosity ``nu``."""

    n: int
    F: float
    mu: float
    nu: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"mode n must be a positive integer, got {self.n}")
        if not self.F >= 0:
            raise ValueError(f"amplitude F must be non-negative, got {self.F}")
        if not self.mu > 0:
            raise ValueError(f"width mu must be positive, got {self.mu}")
        if not self.nu > 0:
            raise ValueError(f"viscosity nu must be positive, got {self.nu}")


@dataclass
class VelocityField:
    """Two-component real field, optionally carrying its spectral coefficients."""

    ux: np.ndarray
    uy: np.ndarray
    spectral: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @classmethod
    def from_spectral(cls, uh: tuple[np.ndarray, np.ndarray], grid: GridSpec) -> "VelocityField":
        return cls(transform_inverse(uh[0], grid), transform_inverse(uh[1], grid), uh)

    def to_spectral(self, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
        if self.spectral is None:
            self.spectral = (transform_forward(self.ux, grid), transform_forward(self.uy, grid))
        return self.spectral

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.ux, self.uy)

    def max_magnitude(self) -> float:
        return float(self.magnitude().max())

    def scaled(self, alpha: float) -> "VelocityField":
        spec = None if self.spectral is None else (alpha * self.spectral[0], alpha * self.spectral[1])
        return VelocityField(alpha * self.ux, alpha * self.uy, spec)


def _check_shape(f: np.ndarray, shape: tuple[int, int]):
    if f.shape != shape:
        raise ValueError(f"array shape {f.shape} does not match expected {shape}")


def transform_forward(f: np.ndarray, grid: GridSpec) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    _check_shape(f, (grid.N, grid.N))
    return sfft.rfft2(f, norm="forward")


def transform_inverse(fh: np.ndarray, grid: GridSpec) -> np.ndarray:
    _check_shape(fh, grid.spectral_shape)
    return sfft.irfft2(fh, s=(grid.N, grid.N), norm="forward")


def full_spectrum(fh: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Expand a half spectrum to all ``N x N`` coefficients (FFT order)."""
    _check_shape(fh, grid.spectral_shape)
    full = np.empty((grid.N, grid.N), dtype=complex)
    full[:, : fh.shape[1]] = fh
    neg = -np.arange(fh.shape[1], grid.N)
    full[:, fh.shape[1]:] = np.conj(fh[-np.arange(grid.N)[:, None] % grid.N, neg % grid.N])
    return full


def leray_project(uh: tuple[np.ndarray, np.ndarray], grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Remove the gradient part: ``u - k (k.u) / |k|^2``; the mean passes through.

    Nyquist-line coefficients are dropped: the projector is not symmetric
    under ``k -> -k`` there, so they would leave a divergent real field.
    """
    kx, ky = grid.k
    k2 = grid.k2
    inv = np.divide(1.0, k2, out=np.zeros_like(k2), where=k2 > 0)
    kdotu = (kx * uh[0] + ky * uh[1]) * inv
    keep = grid.nyquist_free
    return (uh[0] - kx * kdotu) * keep, (uh[1] - ky * kdotu) * keep


def divergence(uh: tuple[np.ndarray, np.ndarray], grid: GridSpec) -> np.ndarray:
    kx, ky = grid.k
    return transform_inverse(1j * (kx * uh[0] + ky * uh[1]), grid)


def force_shape(p: ForceParams, grid: GridSpec) -> VelocityField:
    """Time-independent part of the radial force, ``F r^(n+1) e^(-mu^2 r^2) cos(n phi) e_r``."""
    x, y = grid.xy
    r2 = x**2 + y**2
    phi = np.arctan2(y, x)
    # f_r * (x/r, y/r) = F r^n e^(-mu^2 r^2) cos(n phi) * (x, y); zero at r = 0
    g = p.F * r2 ** (p.n / 2) * np.exp(-p.mu**2 * r2) * np.cos(p.n * phi)
    return VelocityField(g * x, g * y)


def time_kernel(p: ForceParams, t: float) -> float:
    return 1.0 / (4.0 * p.mu**2 * p.nu * t + 1.0) ** 2


def evaluate_force(p: ForceParams, t: float, grid: GridSpec) -> VelocityField:
    if t < 0:
        raise ValueError(f"force time must be non-negative, got t={t}")
    return force_shape(p, grid).scaled(time_kernel(p, t))


def convective_term(u: VelocityField, grid: GridSpec) -> VelocityField:
    """Dealiased ``(u . grad) u``; differentiation in spectral space, products in physical space."""
    kx, ky = grid.k_deriv
    uxh, uyh = u.to_spectral(grid)
    dux_dx = transform_inverse(1j * kx * uxh, grid)
    dux_dy = transform_inverse(1j * ky * uxh, grid)
    duy_dx = transform_inverse(1j * kx * uyh, grid)
    duy_dy = transform_inverse(1j * ky * uyh, grid)
    nx = u.ux * dux_dx + u.uy * dux_dy
    ny = u.ux * duy_dx + u.uy * duy_dy
    mask = grid.dealias_mask
    return VelocityField.from_spectral(
        (transform_forward(nx, grid) * mask, transform_forward(ny, grid) * mask), grid
    )


SpectralForce = Callable[[int, float], tuple[np.ndarray, np.ndarray]]


def march_stokes(
    force: SpectralForce,
    nu: float,
    grid: GridSpec,
    tg: TimeGrid,
    initial: tuple[np.ndarray, np.ndarray] | None = None,
) -> Iterator[tuple[int, float, tuple[np.ndarray, np.ndarray]]]:
    """Yield ``(m, t_m, u_hat)`` for ``m = 0..steps``, starting from rest
    unless ``initial`` coefficients are given.

    ``force(m, t_m)`` returns the spectral force at step ``m``; it is
    Leray-projected here. Diffusion is integrated exactly and the Duhamel
    integral by the trapezoidal rule on each step.
    """
    decay = np.exp(-nu * grid.k2 * tg.dt)
    half = 0.5 * tg.dt
    if initial is None:
        uh = (np.zeros(grid.spectral_shape, complex), np.zeros(grid.spectral_shape, complex))
    else:
        uh = tuple(np.asarray(c, dtype=complex) for c in initial)
    fh = leray_project(force(0, 0.0), grid)
    yield 0, 0.0, uh
    for m in range(1, tg.steps + 1):
        t = m * tg.dt
        fh_next = leray_project(force(m, t), grid)
        uh = tuple(decay * (u + half * f) + half * g for u, f, g in zip(uh, fh, fh_next))
        if not (np.isfinite(uh[0]).all() and np.isfinite(uh[1]).all()):
            raise SolverError(f"non-finite velocity at step {m} (t={t:.6g})")
        fh = fh_next
        yield m, t, uh
