"""Numerical cross-checks of containment verdicts.

Containment holds exactly when f = (theta1∘phi)/theta2 is bounded on the
disk, and then sup |f| <= 1.  The oracle samples log|f| on polar grids that
are densified around the zeros and atoms of theta2.  Working with log-moduli
keeps the singular factors, which underflow long before the boundary, on a
representable scale.

The oracle never overrides the exact engine; it exists to catch
implementation bugs and to give evidence where the engine declines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .containment import AtomCheck, Problem, Verdict, ZeroCheck
from .inner import AtomicMeasure, InnerFunction, SelfMap, pushforward
from .moebius import Moebius

BOUNDED_EPS = 1e-6
BLOWUP_THRESHOLD = 10.0
ZERO_REFINE_SHRINK = 1e-6
ATOM_WINDOW = 2 * np.pi * 64 / 8192  # half-width in radians

BOUNDED = "bounded_consistent"
BLOWUP = "blowup_detected"
INCONCLUSIVE = "inconclusive"

CONSISTENT = "consistent"
CONTRADICTION = "contradiction"
SOFT_INCONCLUSIVE = "soft-inconclusive"


@dataclass(frozen=True)
class GridSpec:
    radii: tuple = (0.9, 0.99, 0.999, 0.9999)
    angular_count: int = 2048
    exclusion_radius: float = 1e-3
    refine_factor: int = 4

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii or any(not 0.0 < r < 1.0 for r in radii):
            raise ValueError("grid radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("grid radii must be strictly increasing")
        if self.exclusion_radius <= 0:
            raise ValueError("exclusion radius must be positive")
        if self.angular_count < 8:
            raise ValueError("need at least 8 angles per circle")
        object.__setattr__(self, "radii", radii)

    def base_points(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.angular_count) / self.angular_count
        return (np.array(self.radii)[:, None] * np.exp(1j * theta)[None, :]).ravel()

    def _local_count(self) -> int:
        return self.refine_factor * max(16, self.angular_count // 32)

    def around_zero(
        self, w: complex, inner_radius: Optional[float] = None, ring_count: int = 8
    ) -> np.ndarray:
        """Rings around an interior point, from just outside the exclusion disk outward."""
        r0 = 1.5 * self.exclusion_radius if inner_radius is None else inner_radius
        rings = np.geomspace(r0, max(r0 * 2, 0.1 * (1 - abs(w)) + r0), ring_count)
        psi = 2 * np.pi * np.arange(self._local_count()) / self._local_count()
        pts = (w + rings[:, None] * np.exp(1j * psi)[None, :]).ravel()
        return pts[np.abs(pts) < 1.0]

    def around_atom(self, angle: float, radii: Optional[Sequence[float]] = None) -> np.ndarray:
        """Fixed-width angular window around a boundary point at 4x the base density.

        The window width does not depend on the density, so doubling the
        angular count yields a superset of the points.
        """
        step = 2 * np.pi / (self.angular_count * self.refine_factor)
        half = int(ATOM_WINDOW / step + 1e-9)
        offsets = step * np.arange(-half, half + 1)
        rs = np.array(self.radii if radii is None else radii)
        return (rs[:, None] * np.exp(1j * (angle + offsets))[None, :]).ravel()

    def points_for(self, theta2: InnerFunction) -> np.ndarray:
        parts = [self.base_points()]
        parts += [self.around_zero(w) for w in theta2.blaschke.zeros]
        parts += [self.around_atom(t) for t, _ in theta2.measure.atoms]
        return np.concatenate(parts)


@dataclass(frozen=True)
class OracleReport:
    sup_estimate: float
    argmax: Optional[complex]
    samples_used: int
    flag: str
    log_sup: float = -math.inf

    @property
    def bounded_consistent(self) -> bool:
        return self.flag == BOUNDED

    @property
    def blowup_detected(self) -> bool:
        return self.flag == BLOWUP

    @property
    def inconclusive(self) -> bool:
        return self.flag == INCONCLUSIVE


def _flag(sup: float) -> str:
    if sup <= 1.0 + BOUNDED_EPS:
        return BOUNDED
    if sup > BLOWUP_THRESHOLD:
        return BLOWUP
    return INCONCLUSIVE


def log_quotient(theta1: InnerFunction, phi: SelfMap, theta2: InnerFunction, z) -> np.ndarray:
    """log|theta1(phi(z))| - log|theta2(z)| at each point."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(invalid="ignore"):
        return theta1.log_abs(phi(z)) - theta2.log_abs(z)


def evaluate_points(
    theta1: InnerFunction,
    phi: SelfMap,
    theta2: InnerFunction,
    points: np.ndarray,
    exclusions: Sequence[tuple[complex, float]] = (),
) -> OracleReport:
    """Maximize log|f| over the points lying outside every (center, radius) disk."""
    pts = np.asarray(points, dtype=complex)
    keep = np.abs(pts) < 1.0
    for center, radius in exclusions:
        keep &= np.abs(pts - center) > radius
    pts = pts[keep]
    if pts.size == 0:
        return OracleReport(math.nan, None, 0, INCONCLUSIVE)
    lq = log_quotient(theta1, phi, theta2, pts)
    finite = ~np.isnan(lq)
    if not finite.any():
        return OracleReport(math.nan, None, 0, INCONCLUSIVE)
    i = int(np.nanargmax(lq))
    log_sup = float(lq[i])
    sup = math.exp(log_sup) if log_sup < 700 else math.inf
    return OracleReport(sup, complex(pts[i]), int(finite.sum()), _flag(sup), log_sup)


def _zero_exclusions(theta2: InnerFunction, radius: float) -> list[tuple[complex, float]]:
    return [(w, radius) for w in theta2.blaschke.zeros]


def sup_quotient(
    theta1: InnerFunction, phi: SelfMap, theta2: InnerFunction, grid: GridSpec = GridSpec()
) -> OracleReport:
    """Estimate sup |(theta1∘phi)/theta2| over the grid."""
    return evaluate_points(
        theta1, phi, theta2, grid.points_for(theta2),
        _zero_exclusions(theta2, grid.exclusion_radius),
    )


def refine_near_witness(
    problem: Problem, verdict: Verdict, grid: GridSpec = GridSpec()
) -> Optional[OracleReport]:
    """Re-sample close to the engine's witness.

    Near a witness zero the exclusion disk shrinks a millionfold and the
    rings are spaced geometrically down to it; near a witness atom the radii
    run out to 1 - 1e-4 inside a fine angular window.
    """
    w = verdict.witness
    if w is None:
        return None
    theta2 = problem.theta2
    excl = _zero_exclusions(theta2, grid.exclusion_radius)
    if isinstance(w, ZeroCheck):
        inner = grid.exclusion_radius * ZERO_REFINE_SHRINK
        pts = grid.around_zero(w.point, inner_radius=1.5 * inner, ring_count=24)
        excl = [(c, inner if abs(c - w.point) <= 1e-12 else r) for c, r in excl]
    elif isinstance(w, AtomCheck):
        pts = grid.around_atom(w.angle, 1.0 - np.geomspace(0.1, 1e-4, 13))
    else:
        raise TypeError(f"unsupported witness {w!r}")
    return evaluate_points(problem.theta1, problem.phi, theta2, pts, excl)


@dataclass(frozen=True)
class CrossCheck:
    status: str
    report: OracleReport
    refined: Optional[OracleReport] = None


def cross_validate(
    verdict: Verdict,
    report: OracleReport,
    problem: Optional[Problem] = None,
    grid: GridSpec = GridSpec(),
    refine: bool = True,
) -> CrossCheck:
    """Compare an exact verdict with an oracle report.

    A refuted verdict whose grid stayed bounded is re-sampled once near the
    witness when the problem is supplied.
    """
    if verdict.contained:
        if report.blowup_detected:
            return CrossCheck(CONTRADICTION, report)
        if report.bounded_consistent:
            return CrossCheck(CONSISTENT, report)
        return CrossCheck(SOFT_INCONCLUSIVE, report)
    if report.blowup_detected:
        return CrossCheck(CONSISTENT, report)
    if refine and problem is not None:
        fine = refine_near_witness(problem, verdict, grid)
        if fine is not None and fine.blowup_detected:
            return CrossCheck(CONSISTENT, report, fine)
        return CrossCheck(SOFT_INCONCLUSIVE, report, fine)
    return CrossCheck(SOFT_INCONCLUSIVE, report)


# ---------------------------------------------------------------------------
# Boundary behaviour and modulus identities


@dataclass(frozen=True)
class RadialLimit:
    value: complex
    converged: bool
    radii_used: int


def radial_limit_estimate(
    f: Union[SelfMap, InnerFunction], t: complex, depth: int = 30, tol: float = 1e-6
) -> RadialLimit:
    """Follow f along r_j = 1 - 2^-j, j = 4..depth, toward the boundary point t."""
    if depth < 4:
        raise ValueError("depth must be at least 4")
    t = complex(t) / abs(complex(t))
    prev = None
    for j in range(4, depth + 1):
        val = complex(f((1.0 - 2.0 ** -j) * t))
        if prev is not None and abs(val - prev) < tol:
            return RadialLimit(val, True, j - 3)
        prev = val
    return RadialLimit(prev, False, depth - 3)


def modulus_identity_check(
    mu: AtomicMeasure,
    phi: Moebius,
    nu: Optional[AtomicMeasure] = None,
    samples: int = 100,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """max over random interior z of ||S_mu(phi(z))| - |S_nu(z)|| / |S_nu(z)|."""
    rng = np.random.default_rng(0) if rng is None else rng
    nu = pushforward(mu, phi) if nu is None else nu
    r = np.sqrt(rng.uniform(0.0, 1.0, samples)) * 0.999
    z = r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, samples))
    diff = mu.log_abs(phi(z)) - nu.log_abs(z)
    return float(np.max(np.abs(np.expm1(diff)))) if samples else 0.0
