"""Analytic convergence border ``F / (mu^4 nu) = 1`` and the sampled parameter set."""
from __future__ import annotations

from dataclasses import dataclass

MODES = (1, 2, 3, 4, 5)
EXPONENTS = (0, 1, 2, 3)
VISCOSITIES = (0.01, 0.1, 0.3, 0.75, 1.0, 1.5)
DOT_NU = 0.01


def _require_positive(**values):
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")


def border_mu(F: float, nu: float) -> float:
    """Width ``mu`` on the border curve, ``(F / nu) ** 0.25``."""
    _require_positive(F=F, nu=nu)
    return (F / nu) ** 0.25


def border_value(F: float, mu: float, nu: float) -> float:
    _require_positive(F=F, mu=mu, nu=nu)
    return F / (mu**4 * nu)


def convergence_predicate(F: float, mu: float, nu: float) -> bool:
    """True iff ``F / (mu^4 nu) < 1``; points on the border are not convergent."""
    return border_value(F, mu, nu) < 1.0


def amplitude(n: int, k: int) -> float:
    return 10.0**k / n


def sample_set(
    modes=MODES, exponents=EXPONENTS
) -> tuple[list[tuple[int, float]], list[float]]:
    """The ``(n, 10**k / n)`` amplitude pairs, ordered by mode then exponent, and the viscosities."""
    pairs = [(n, amplitude(n, k)) for n in modes for k in exponents]
    return pairs, list(VISCOSITIES)


def dot_set_mu(F: float, margin: float = 1.0) -> float:
    """``margin`` times the border width at ``nu = 0.01``.

    ``margin = 1`` sits on the curve, anything larger is strictly inside
    the convergence region.
    """
    if margin < 1:
        raise ValueError(f"margin must be >= 1, got {margin}")
    return margin * border_mu(F, DOT_NU)


@dataclass(frozen=True)
class BorderPoint:
    F: float
    nu: float

    @property
    def mu_border(self) -> float:
        return border_mu(self.F, self.nu)


@dataclass(frozen=True)
class SweepRecord:
    n: int
    k: int | None
    F: float
    mu: float
    nu: float
    mu_border: float
    predicted_convergent: bool
    max_u1: float
    max_u2star: float
    ratio: float | None
    degenerate: bool

    @classmethod
    def failed(cls, n, k, F, mu, nu) -> "SweepRecord":
        nan = float("nan")
        return cls(n, k, F, mu, nu, border_mu(F, nu), convergence_predicate(F, mu, nu),
                   nan, nan, None, True)
