"""Automorphisms of the unit disk.

Every automorphism is stored in the normal form

    z -> gamma * (a - z) / (1 - conj(a) * z),   |gamma| = 1, |a| < 1,

so ``Moebius(a=a)`` is the basic factor B_a and the identity is
``Moebius(gamma=-1, a=0)``.  Composition goes through 2x2 matrices and is
brought back to normal form by locating the zero of the composite.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateInputError, DomainError, NotAutomorphismError
from .jets import Jet, jet_div
from .tolerances import DEFAULT

UNIMODULAR_TOL = 1e-12
BOUNDARY_TOL = 1e-9
IDENTITY_TOL = 1e-12
DOUBLE_ROOT_TOL = 1e-10


def _check_disk(z, slack: float = 1e-12):
    if np.any(np.abs(z) > 1.0 + slack):
        raise DomainError("point outside the closed unit disk")


@dataclass(frozen=True)
class Moebius:
    gamma: complex = 1.0
    a: complex = 0.0

    def __post_init__(self):
        g, a = complex(self.gamma), complex(self.a)
        if abs(abs(g) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"gamma must be unimodular, got |gamma| = {abs(g)}")
        if not abs(a) < 1.0:
            raise ValueError(f"a must lie in the open disk, got |a| = {abs(a)}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "a", a)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        _check_disk(z)
        out = self.gamma * (self.a - z) / (1.0 - self.a.conjugate() * z)
        return complex(out) if out.ndim == 0 else out

    def matrix(self) -> np.ndarray:
        return np.array([[-self.gamma, self.gamma * self.a], [-self.a.conjugate(), 1.0]])

    @property
    def is_identity(self) -> bool:
        return abs(self.a) <= IDENTITY_TOL and abs(self.gamma + 1.0) <= IDENTITY_TOL

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return moebius_compose(self, other)

    def inverse(self) -> "Moebius":
        return moebius_inverse(self)

    def jet(self, at: complex, order: int) -> Jet:
        return moebius_jet(self, at, order)


def identity() -> Moebius:
    return Moebius(gamma=-1.0, a=0.0)


def rotation(lam: complex) -> Moebius:
    """z -> lam * z."""
    return Moebius(gamma=-complex(lam), a=0.0)


def blaschke_factor(a: complex) -> Moebius:
    """B_a(z) = (a - z) / (1 - conj(a) z)."""
    return Moebius(gamma=1.0, a=a)


def moebius_eval(m: Moebius, z):
    return m(z)


def from_matrix(M, tol: float = DEFAULT.match) -> Moebius:
    """Normal form of z -> (p z + q) / (r z + s), if it is a disk automorphism.

    The zero -q/p becomes ``a``, ``gamma`` is read off the ratio -p/s, and the
    denominator is checked against the form 1 - conj(a) z.
    """
    (p, q), (r, s) = np.asarray(M, dtype=complex)
    if p == 0 or s == 0:
        raise NotAutomorphismError("map sends 0 or infinity to the wrong place")
    a = -q / p
    if not abs(a) < 1.0:
        raise NotAutomorphismError(f"zero {a} lies outside the disk")
    gamma = -p / s
    if abs(abs(gamma) - 1.0) > tol:
        raise NotAutomorphismError(f"|gamma| = {abs(gamma)} is not unimodular")
    if abs(r / s + a.conjugate()) > tol:
        raise NotAutomorphismError("denominator is not of the form 1 - conj(a) z")
    return Moebius(gamma=gamma / abs(gamma), a=a)


def moebius_compose(m1: Moebius, m2: Moebius) -> Moebius:
    """The automorphism acting as m1∘m2."""
    return from_matrix(m1.matrix() @ m2.matrix())


def moebius_inverse(m: Moebius) -> Moebius:
    # m(0) = gamma*a is the zero of the inverse, and the inverse sends 0 back to a
    return Moebius(gamma=m.gamma.conjugate(), a=m.gamma * m.a)


def moebius_jet(m: Moebius, at: complex, order: int) -> Jet:
    at = complex(at)
    if not abs(at) < 1.0:
        raise DomainError("jets are taken at interior points only")
    num = np.zeros(order + 1, dtype=complex)
    den = np.zeros(order + 1, dtype=complex)
    num[0] = m.gamma * (m.a - at)
    den[0] = 1.0 - m.a.conjugate() * at
    if order >= 1:
        num[1] = -m.gamma
        den[1] = -m.a.conjugate()
    return jet_div(Jet(at, num), Jet(at, den))


@dataclass(frozen=True)
class FixedPoint:
    point: complex
    location: str  # "interior" or "boundary"


@dataclass(frozen=True)
class AutomorphismClass:
    tag: str  # identity | elliptic | parabolic | hyperbolic
    fixed_points: tuple[FixedPoint, ...] = ()

    @property
    def interior_fixed_point(self) -> Optional[complex]:
        for fp in self.fixed_points:
            if fp.location == "interior":
                return fp.point
        return None


def _location(z: complex) -> Optional[str]:
    r = abs(z)
    if abs(r - 1.0) <= BOUNDARY_TOL:
        return "boundary"
    return "interior" if r < 1.0 else None


def fixed_points(m: Moebius) -> list[complex]:
    """Finite roots of conj(a) z^2 - (1 + gamma) z + gamma a = 0."""
    A = m.a.conjugate()
    B = -(1.0 + m.gamma)
    C = m.gamma * m.a
    if abs(A) <= IDENTITY_TOL:
        # the second fixed point sits at infinity
        return [] if abs(B) <= IDENTITY_TOL else [-C / B]
    disc = B * B - 4 * A * C
    if abs(disc) <= DOUBLE_ROOT_TOL:
        return [-B / (2 * A)] * 2
    root = cmath.sqrt(disc)
    # pick the sign that avoids cancellation, then use Vieta for the other root
    q = -0.5 * (B + root if abs(B + root) >= abs(B - root) else B - root)
    return [q / A, C / q]


def classify(m: Moebius) -> AutomorphismClass:
    if m.is_identity:
        return AutomorphismClass("identity")
    roots = fixed_points(m)
    located = [(z, _location(z)) for z in roots]
    interior = [z for z, loc in located if loc == "interior"]
    boundary = [z for z, loc in located if loc == "boundary"]
    if interior:
        return AutomorphismClass("elliptic", (FixedPoint(interior[0], "interior"),))
    if len(boundary) == 2 and abs(boundary[0] - boundary[1]) <= np.sqrt(DOUBLE_ROOT_TOL):
        return AutomorphismClass("parabolic", (FixedPoint(boundary[0], "boundary"),))
    if len(boundary) == 2:
        return AutomorphismClass(
            "hyperbolic", tuple(FixedPoint(z, "boundary") for z in boundary)
        )
    raise NotAutomorphismError(f"fixed points {roots} fit no automorphism class")


def swap_map(a: complex, b: complex, eps: float = DEFAULT.match) -> Moebius:
    """The automorphism B_a∘B_c∘B_a, c = B_a(b), which interchanges a and b."""
    a, b = complex(a), complex(b)
    if abs(a - b) <= eps:
        raise DegenerateInputError("swap_map needs two distinct points; use identity()")
    Ba = blaschke_factor(a)
    c = Ba(b)
    return Ba @ blaschke_factor(c) @ Ba


def _to_zero_one_inf(z1: complex, z2: complex, z3: complex) -> np.ndarray:
    """Matrix of the Moebius map z1 -> 0, z2 -> 1, z3 -> infinity."""
    return np.array([[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)


def three_point_matrix(src: Sequence[complex], dst: Sequence[complex]) -> np.ndarray:
    """Matrix of the unique sphere Moebius map with src[i] -> dst[i], i < 3."""
    S = _to_zero_one_inf(*src)
    T = _to_zero_one_inf(*dst)
    return np.linalg.inv(T) @ S


def cycle_map(points: Sequence[complex], tol: float = DEFAULT.match) -> Optional[Moebius]:
    """The automorphism sending p_i -> p_{i+1} and p_n -> p_1, or None.

    Three correspondences fix a Moebius map of the sphere; the candidate is
    accepted only if it preserves the disk, cycles every point and is
    elliptic.
    """
    pts = [complex(p) for p in points]
    n = len(pts)
    if n < 2:
        raise ValueError("cycle_map needs at least two points")
    if any(not abs(p) < 1.0 for p in pts):
        raise DomainError("cycle points must lie in the open disk")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= tol:
                raise DegenerateInputError("cycle points must be distinct")
    if n == 2:
        return swap_map(pts[0], pts[1])
    src = pts[:3]
    dst = [pts[(i + 1) % n] for i in range(3)]
    try:
        cand = from_matrix(three_point_matrix(src, dst), tol=tol)
    except NotAutomorphismError:
        return None
    images = cand(np.array(pts))
    targets = np.roll(np.array(pts), -1)
    if np.max(np.abs(images - targets)) > tol:
        return None
    if classify(cand).tag != "elliptic":
        return None
    return cand
