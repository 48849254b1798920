"""Two-step Picard iteration: first iterate ``u1`` and second-step increment ``u2*``.

``u1`` solves the Stokes problem driven by the radial force from rest.
``u2*`` solves the Stokes problem driven by ``-(u1 . grad) u1`` from rest,
so the second iterate is ``u1 + u2*`` and ``max|u2*| / max|u1|`` measures
how strongly the iteration contracts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .spectral import (
    ForceParams,
    GridSpec,
    TimeGrid,
    VelocityField,
    convective_term,
    divergence,
    force_shape,
    march_stokes,
    time_kernel,
    transform_forward,
)

STORE_EVERY = 5


@dataclass
class VelocityHistory:
    """Thinned time history of a velocity field.

    ``max_magnitude`` is accumulated over every time step, including the
    ones that were not stored. At every storage step ``max|div u|`` is
    tracked; ``max_rel_divergence`` reports it against the run's
    ``max|u|`` rather than the (possibly long-decayed) snapshot peak.
    With ``keep_fields=False`` only the final field is retained.
    """

    grid: GridSpec
    tg: TimeGrid
    store_every: int = STORE_EVERY
    keep_fields: bool = True
    steps: list[int] = field(default_factory=list)
    fields: list[VelocityField] = field(default_factory=list)
    max_magnitude: float = 0.0
    max_abs_divergence: float = 0.0

    def __post_init__(self):
        if self.store_every < 1:
            raise ValueError(f"store_every must be >= 1, got {self.store_every}")

    def record(self, m: int, u: VelocityField):
        peak = u.max_magnitude()
        self.max_magnitude = max(self.max_magnitude, peak)
        last = m == self.tg.steps
        if m % self.store_every == 0 or last:
            if peak > 0:
                self.max_abs_divergence = max(self.max_abs_divergence, max_divergence(u, self.grid))
            if self.keep_fields or last:
                self.steps.append(m)
                self.fields.append(u)

    @property
    def max_rel_divergence(self) -> float:
        if self.max_magnitude == 0:
            return 0.0
        return self.max_abs_divergence / self.max_magnitude

    @property
    def times(self) -> np.ndarray:
        return np.asarray(self.steps) * self.tg.dt

    @property
    def final(self) -> VelocityField:
        return self.fields[-1]

    def at_step(self, m: int) -> VelocityField:
        """Field at step ``m``, linearly interpolated in time between stored steps."""
        j = int(np.searchsorted(self.steps, m))
        if j < len(self.steps) and self.steps[j] == m:
            return self.fields[j]
        if j == 0 or j == len(self.steps):
            raise ValueError(f"step {m} outside stored history")
        m0, m1 = self.steps[j - 1], self.steps[j]
        w = (m - m0) / (m1 - m0)
        a, b = self.fields[j - 1], self.fields[j]
        return VelocityField((1 - w) * a.ux + w * b.ux, (1 - w) * a.uy + w * b.uy)


def max_divergence(u: VelocityField, grid: GridSpec) -> float:
    """Spectrally evaluated ``max|div u|``, re-transformed from the physical values."""
    uh = (transform_forward(u.ux, grid), transform_forward(u.uy, grid))
    return float(np.abs(divergence(uh, grid)).max())


def stokes_solve(
    force: Callable[[float], VelocityField],
    nu: float,
    grid: GridSpec,
    tg: TimeGrid,
    store_every: int = 1,
) -> VelocityHistory:
    """Solve ``u_t = nu lap u + P f`` from rest; ``force(t)`` gives the physical force."""

    def spectral_force(m, t):
        return force(t).to_spectral(grid)

    hist = VelocityHistory(grid, tg, store_every)
    for m, _, uh in march_stokes(spectral_force, nu, grid, tg):
        hist.record(m, VelocityField.from_spectral(uh, grid))
    return hist


def _first_stream(p: ForceParams, grid: GridSpec, tg: TimeGrid) -> Iterator[tuple[int, VelocityField]]:
    # the force separates into a fixed spatial shape times a time kernel
    gx, gy = force_shape(p, grid).to_spectral(grid)

    def spectral_force(m, t):
        s = time_kernel(p, t)
        return s * gx, s * gy

    for m, _, uh in march_stokes(spectral_force, p.nu, grid, tg):
        yield m, VelocityField.from_spectral(uh, grid)


def _increment_stream(
    u1_at: Callable[[int], VelocityField], nu: float, grid: GridSpec, tg: TimeGrid
) -> Iterator[tuple[int, VelocityField]]:
    def spectral_force(m, t):
        cx, cy = convective_term(u1_at(m), grid).spectral
        return -cx, -cy

    for m, _, uh in march_stokes(spectral_force, nu, grid, tg):
        yield m, VelocityField.from_spectral(uh, grid)


def first_iterate(
    p: ForceParams, grid: GridSpec, tg: TimeGrid, store_every: int = STORE_EVERY
) -> VelocityHistory:
    """Stokes response to the radial force from rest."""
    hist = VelocityHistory(grid, tg, store_every)
    for m, u in _first_stream(p, grid, tg):
        hist.record(m, u)
    return hist


def second_increment(
    u1: VelocityHistory, p: ForceParams, grid: GridSpec, tg: TimeGrid, store_every: int = STORE_EVERY
) -> VelocityHistory:
    """Increment driven by ``-(u1 . grad) u1``.

    ``u1`` values at steps that were not stored are linearly interpolated in
    time, so the result is exact only for a history with ``store_every=1``.
    """
    if u1.grid != grid or u1.tg != tg:
        raise ValueError("u1 history was computed on a different grid or time grid")
    hist = VelocityHistory(grid, tg, store_every)
    for m, u in _increment_stream(u1.at_step, p.nu, grid, tg):
        hist.record(m, u)
    return hist


@dataclass
class IterationResult:
    params: ForceParams
    u1_history: VelocityHistory
    u2star_history: VelocityHistory

    @property
    def max_u1(self) -> float:
        return self.u1_history.max_magnitude

    @property
    def max_u2star(self) -> float:
        return self.u2star_history.max_magnitude

    @property
    def ratio(self) -> float | None:
        return self.max_u2star / self.max_u1 if self.max_u1 > 0 else None

    @property
    def degenerate(self) -> bool:
        """No measurable first iterate despite a nonzero force."""
        return self.max_u1 == 0 and self.params.F > 0


def run_iteration(
    p: ForceParams, grid: GridSpec, tg: TimeGrid, store_every: int = STORE_EVERY, keep_fields: bool = True
) -> IterationResult:
    """First iterate and increment, marched in lockstep.

    Each ``u1`` step is handed straight to the increment's force, so the
    increment sees ``u1`` at every step regardless of ``store_every``.
    """
    u1 = VelocityHistory(grid, tg, store_every, keep_fields)
    stream = _first_stream(p, grid, tg)

    def u1_at(m):
        m1, u = next(stream)
        assert m1 == m
        u1.record(m, u)
        return u

    u2 = VelocityHistory(grid, tg, store_every, keep_fields)
    for m, u in _increment_stream(u1_at, p.nu, grid, tg):
        u2.record(m, u)
    return IterationResult(p, u1, u2)


@dataclass(frozen=True)
class ProfileSample:
    r: float
    phi: float
    amp1: float
    amp2: float


def _interpolator(u: VelocityField, grid: GridSpec) -> RegularGridInterpolator:
    return RegularGridInterpolator((grid.axis, grid.axis), u.magnitude(), method="linear")


def extract_profiles(
    res: IterationResult, radii: Sequence[float], angles: Sequence[float]
) -> list[ProfileSample]:
    """Bilinearly interpolated ``|u1|`` and ``|u2*|`` at the final time on polar points."""
    grid = res.u1_history.grid
    radii = [float(r) for r in radii]
    for r in radii:
        if not 0 <= r <= grid.L - grid.dx:
            raise ValueError(f"radius {r} outside the sampled grid [0, {grid.L - grid.dx}]")
    amp1 = _interpolator(res.u1_history.final, grid)
    amp2 = _interpolator(res.u2star_history.final, grid)
    out = []
    for r in radii:
        phis = np.asarray(angles, dtype=float)
        pts = np.column_stack([r * np.cos(phis), r * np.sin(phis)])
        for phi, a1, a2 in zip(phis, amp1(pts), amp2(pts)):
            out.append(ProfileSample(r, float(phi), float(a1), float(a2)))
    return out
