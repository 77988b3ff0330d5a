"""Attractive inverse-square potential in momentum space.

Natural units hbar = m = 1 throughout.  The potential strength is
parametrized by a single positive real number nu; the dimensionless
coefficient c = -1/4 - nu**2 is always in the supercritical regime
c < -1/4 where the potential is singular and requires renormalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

TWO_PI_SQ = 2.0 * math.pi**2


@dataclass(frozen=True)
class PotentialParams:
    """Strength of the 1/r^2 potential.

    nu is the only free input; c is derived so the supercritical
    constraint c = -1/4 - nu**2 can never be violated.
    """

    nu: float
    c: float = field(init=False)

    def __post_init__(self):
        if not (self.nu > 0.0):
            raise DomainError(f"nu must be positive, got {self.nu}")
        object.__setattr__(self, "c", -0.25 - self.nu**2)


def potential_momentum(q: float, params: PotentialParams) -> float:
    """Momentum-space potential 2*pi^2*c/q; strictly negative for q > 0."""
    if q <= 0.0:
        raise DomainError(f"momentum transfer must be positive, got {q}")
    return TWO_PI_SQ * params.c / q


def swave_kernel_f(p: float, q: float) -> float:
    """S-wave projected kernel 1/max(p, q).

    Symmetric and continuous, with a derivative kink at p = q where both
    branches agree on 1/p.
    """
    if p <= 0.0 or q <= 0.0:
        raise DomainError(f"kernel arguments must be positive, got ({p}, {q})")
    return 1.0 / max(p, q)


def counterterm_value(cutoff: float, h: float, params: PotentialParams) -> float:
    """Momentum-independent contact term 2*pi^2*c*h/cutoff."""
    if cutoff <= 0.0:
        raise DomainError(f"cutoff must be positive, got {cutoff}")
    return TWO_PI_SQ * params.c * h / cutoff
