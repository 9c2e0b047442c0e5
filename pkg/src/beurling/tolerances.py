"""Numerical tolerances shared by the exact engine and the oracle.

None of these thresholds come from the mathematics, which is exact; they are
choices made for double precision inputs given as explicit points.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    match: float = 1e-9  # point identification: zeros, jet bases, cycle images
    vanish: float = 1e-9  # relative threshold for a vanishing Taylor coefficient
    angle: float = 1e-9  # angular distance for identifying atoms on the circle
    mass: float = 1e-9  # relative slack when comparing atom masses
    jet_order_cap: int = 64

    def with_cap(self, cap: int) -> "Tolerances":
        return replace(self, jet_order_cap=int(cap))


DEFAULT = Tolerances()

PROFILES: dict[str, Tolerances] = {
    "default": DEFAULT,
    "strict": Tolerances(match=1e-12, vanish=1e-12, angle=1e-12, mass=1e-12),
    "loose": Tolerances(match=1e-6, vanish=1e-6, angle=1e-6, mass=1e-6),
}
