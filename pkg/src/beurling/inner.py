"""Finite Blaschke products, atomic singular inner functions and self-maps.

A Blaschke product is stored as gamma * prod (alpha_i B_{a_i})^{m_i} with
alpha_i = |a_i|/a_i (alpha_i = -1 when a_i = 0), so each normalized factor is
the automorphism ``Moebius(gamma=alpha_i, a=a_i)``.  Singular inner functions
are restricted to finite atomic measures,

    S_mu(z) = exp(-sum_k w_k (t_k + z) / (t_k - z)),   t_k = exp(i angle_k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, JetOrderExceeded
from .jets import Jet, jet_compose, jet_div, jet_exp, jet_pow, jet_rescale, order_of_vanishing
from .moebius import Moebius, moebius_compose
from .tolerances import DEFAULT, Tolerances

TWO_PI = 2.0 * math.pi
ANGLE_DISTINCT_TOL = 1e-12


def _as_array(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _out(arr: np.ndarray):
    return complex(arr) if arr.ndim == 0 else arr


def _check_closed_disk(z: np.ndarray):
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("point outside the closed unit disk")


def normalize_angle(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t


def angular_distance(s: float, t: float) -> float:
    d = abs(normalize_angle(s) - normalize_angle(t))
    return min(d, TWO_PI - d)


def zero_normalizer(a: complex) -> complex:
    """alpha = |a|/a, or -1 at the origin, making alpha*B_a(z) ~ (z - a) near a."""
    return -1.0 + 0j if a == 0 else abs(a) / a


# ---------------------------------------------------------------------------
# Blaschke products


@dataclass(frozen=True)
class BlaschkeProduct:
    factors: tuple = ()  # ((a_i, m_i), ...)
    gamma: complex = 1.0

    def __post_init__(self):
        facs = tuple((complex(a), int(m)) for a, m in self.factors)
        for a, m in facs:
            if not abs(a) < 1.0:
                raise ValueError(f"zero {a} is not inside the open disk")
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")
        for i in range(len(facs)):
            for j in range(i + 1, len(facs)):
                if abs(facs[i][0] - facs[j][0]) <= DEFAULT.match:
                    raise ValueError(f"repeated zero {facs[i][0]}; merge multiplicities")
        g = complex(self.gamma)
        if abs(abs(g) - 1.0) > 1e-12:
            raise ValueError("gamma must be unimodular")
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_raw(cls, factors: Sequence, gamma: complex = 1.0) -> "BlaschkeProduct":
        """Build gamma * prod B_{a_i}^{m_i} with the un-normalized factors B_a."""
        g = complex(gamma)
        for a, m in factors:
            g *= zero_normalizer(complex(a)).conjugate() ** int(m)
        return cls(tuple(factors), g / abs(g))

    @property
    def zeros(self) -> tuple[complex, ...]:
        return tuple(a for a, _ in self.factors)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def mult(self, w: complex, eps: float = DEFAULT.match) -> int:
        for a, m in self.factors:
            if abs(a - w) <= eps:
                return m
        return 0

    def match_zero(self, w: complex, eps: float = DEFAULT.match) -> Optional[int]:
        """Index of the zero within eps of w, if any."""
        for i, (a, _) in enumerate(self.factors):
            if abs(a - w) <= eps:
                return i
        return None

    def factor(self, i: int) -> Moebius:
        a = self.factors[i][0]
        return Moebius(gamma=zero_normalizer(a), a=a)

    def __call__(self, z):
        z = _as_array(z)
        _check_closed_disk(z)
        out = np.full(z.shape, self.gamma, dtype=complex)
        for i, (a, m) in enumerate(self.factors):
            out = out * self.factor(i)(z) ** m
        return _out(out)

    def log_abs(self, z) -> np.ndarray:
        z = _as_array(z)
        out = np.zeros(z.shape)
        with np.errstate(divide="ignore"):
            for a, m in self.factors:
                out = out + m * np.log(np.abs((a - z) / (1.0 - a.conjugate() * z)))
        return out

    def jet(self, at: complex, order: int) -> Jet:
        out = Jet.constant(self.gamma, at, order)
        for i, (_, m) in enumerate(self.factors):
            out = out * jet_pow(self.factor(i).jet(at, order), m)
        return out

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        merged: list[list] = [[a, m] for a, m in self.factors]
        for b, n in other.factors:
            for entry in merged:
                if abs(entry[0] - b) <= DEFAULT.match:
                    entry[1] += n
                    break
            else:
                merged.append([b, n])
        return BlaschkeProduct(tuple(map(tuple, merged)), self.gamma * other.gamma)


def blaschke_eval(B: BlaschkeProduct, z):
    return B(z)


# ---------------------------------------------------------------------------
# Atomic singular measures


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple = ()  # ((angle_k, weight_k), ...)

    def __post_init__(self):
        atoms = tuple((normalize_angle(t), float(w)) for t, w in self.atoms)
        for _, w in atoms:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"atom weights must be positive and finite, got {w}")
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                if angular_distance(atoms[i][0], atoms[j][0]) <= ANGLE_DISTINCT_TOL:
                    raise ValueError(f"repeated atom at angle {atoms[i][0]}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * np.array([t for t, _ in self.atoms], dtype=float))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    @property
    def total_mass(self) -> float:
        return float(sum(w for _, w in self.atoms))

    def mass_at(self, angle: float, eps: float = DEFAULT.angle) -> float:
        return sum(w for t, w in self.atoms if angular_distance(t, angle) <= eps)

    def _check_off_atoms(self, z: np.ndarray):
        for t in self.points:
            if np.any(np.abs(z - t) <= 1e-12):
                raise DomainError(f"singular inner function evaluated at its atom {t}")

    def __call__(self, z):
        z = _as_array(z)
        _check_closed_disk(z)
        self._check_off_atoms(z)
        expo = np.zeros(z.shape, dtype=complex)
        for t, w in zip(self.points, self.weights):
            expo = expo - w * (t + z) / (t - z)
        return _out(np.exp(expo))

    def log_abs(self, z) -> np.ndarray:
        """log|S_mu(z)| = -sum w_k (1 - |z|^2) / |t_k - z|^2 (Poisson kernel form)."""
        z = _as_array(z)
        out = np.zeros(z.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            for t, w in zip(self.points, self.weights):
                out = out - w * (1.0 - np.abs(z) ** 2) / np.abs(t - z) ** 2
        return out

    def jet(self, at: complex, order: int) -> Jet:
        expo = Jet.constant(0.0, at, order)
        zj = Jet.variable(at, order)
        for t, w in zip(self.points, self.weights):
            expo = expo - w * jet_div(t + zj, t - zj)
        return jet_exp(expo)

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        merged = [[t, w] for t, w in self.atoms]
        for s, v in other.atoms:
            for entry in merged:
                if angular_distance(entry[0], s) <= ANGLE_DISTINCT_TOL:
                    entry[1] += v
                    break
            else:
                merged.append([s, v])
        return AtomicMeasure(tuple(map(tuple, merged)))

    def scaled(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(tuple((t, w * factor) for t, w in self.atoms))


def singular_eval(mu: AtomicMeasure, z):
    return mu(z)


# ---------------------------------------------------------------------------
# Inner functions


@dataclass(frozen=True)
class InnerFunction:
    blaschke: BlaschkeProduct = field(default_factory=BlaschkeProduct)
    measure: AtomicMeasure = field(default_factory=AtomicMeasure)
    alpha: complex = 1.0

    def __post_init__(self):
        a = complex(self.alpha)
        if abs(abs(a) - 1.0) > 1e-12:
            raise ValueError("alpha must be unimodular")
        object.__setattr__(self, "alpha", a)

    @property
    def is_constant(self) -> bool:
        return not self.blaschke.factors and not self.measure.atoms

    @property
    def unimodular_constant(self) -> complex:
        return self.alpha * self.blaschke.gamma

    def __call__(self, z):
        z = _as_array(z)
        return _out(self.alpha * _as_array(self.blaschke(z)) * _as_array(self.measure(z)))

    def log_abs(self, z) -> np.ndarray:
        return self.blaschke.log_abs(z) + self.measure.log_abs(z)

    def jet(self, at: complex, order: int) -> Jet:
        return self.alpha * self.blaschke.jet(at, order) * self.measure.jet(at, order)

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        return InnerFunction(
            self.blaschke * other.blaschke, self.measure + other.measure, self.alpha * other.alpha
        )


def inner_from_blaschke(B: BlaschkeProduct) -> InnerFunction:
    return InnerFunction(blaschke=B)


def inner_from_measure(mu: AtomicMeasure, alpha: complex = 1.0) -> InnerFunction:
    return InnerFunction(measure=mu, alpha=alpha)


# ---------------------------------------------------------------------------
# Structured self-maps of the disk


class SelfMap:
    """A holomorphic self-map of the disk built from a few structured pieces."""

    def __call__(self, z):
        raise NotImplementedError

    def jet(self, at: complex, order: int) -> Jet:
        raise NotImplementedError

    def constant_value(self) -> Optional[complex]:
        """The value of the map if it is constant, else None."""
        return None

    def as_moebius(self) -> Optional[Moebius]:
        """The map as a disk automorphism, when it is one."""
        return None


def _jet_point(at) -> complex:
    at = complex(at)
    if not abs(at) < 1.0:
        raise DomainError("jets are taken at interior points only")
    return at


@dataclass(frozen=True)
class Identity(SelfMap):
    def __call__(self, z):
        z = _as_array(z)
        _check_closed_disk(z)
        return _out(z.copy())

    def jet(self, at, order):
        return Jet.variable(_jet_point(at), order)

    def as_moebius(self):
        return Moebius(gamma=-1.0, a=0.0)


@dataclass(frozen=True)
class Constant(SelfMap):
    c: complex

    def __post_init__(self):
        c = complex(self.c)
        if not abs(c) < 1.0:
            raise ValueError("a constant self-map must take a value inside the disk")
        object.__setattr__(self, "c", c)

    def __call__(self, z):
        z = _as_array(z)
        _check_closed_disk(z)
        return _out(np.full(z.shape, self.c, dtype=complex))

    def jet(self, at, order):
        return Jet.constant(self.c, _jet_point(at), order)

    def constant_value(self):
        return self.c


@dataclass(frozen=True)
class Mob(SelfMap):
    m: Moebius

    def __call__(self, z):
        return self.m(z)

    def jet(self, at, order):
        return self.m.jet(_jet_point(at), order)

    def as_moebius(self):
        return self.m


@dataclass(frozen=True)
class Inner(SelfMap):
    theta: InnerFunction

    def __post_init__(self):
        if self.theta.is_constant:
            raise ValueError("a unimodular constant is not a self-map of the disk")

    def __call__(self, z):
        return self.theta(z)

    def jet(self, at, order):
        return self.theta.jet(_jet_point(at), order)

    def as_moebius(self):
        B = self.theta.blaschke
        if self.theta.measure.atoms or B.degree != 1:
            return None
        f = B.factor(0)
        return Moebius(gamma=f.gamma * self.theta.unimodular_constant, a=f.a)


@dataclass(frozen=True)
class Scale(SelfMap):
    """z -> s*z with 0 < |s| <= 1; compose it after another map to scale it."""

    s: complex

    def __post_init__(self):
        s = complex(self.s)
        if not 0.0 < abs(s) <= 1.0 + 1e-12:
            raise ValueError(f"scale factor must satisfy 0 < |s| <= 1, got {s}")
        object.__setattr__(self, "s", s)

    def __call__(self, z):
        z = _as_array(z)
        _check_closed_disk(z)
        return _out(self.s * z)

    def jet(self, at, order):
        return self.s * Jet.variable(_jet_point(at), order)

    def as_moebius(self):
        if abs(abs(self.s) - 1.0) <= 1e-12:
            return Moebius(gamma=-self.s / abs(self.s), a=0.0)
        return None


@dataclass(frozen=True)
class Chain(SelfMap):
    """maps[0] ∘ maps[1] ∘ ... ∘ maps[-1], written left to right as in f∘g."""

    maps: tuple

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("an empty chain; use Identity()")
        if not all(isinstance(m, SelfMap) for m in maps):
            raise TypeError("chain elements must be SelfMap instances")
        object.__setattr__(self, "maps", maps)

    def __call__(self, z):
        out = z
        for m in reversed(self.maps):
            out = m(out)
        return out

    def jet(self, at, order):
        j = self.maps[-1].jet(at, order)
        for m in reversed(self.maps[:-1]):
            j = jet_compose(m.jet(j.value, order), j)
        return j

    def constant_value(self):
        # everything to the left of the innermost constant sees one point
        for i in range(len(self.maps) - 1, -1, -1):
            c = self.maps[i].constant_value()
            if c is not None:
                out = c
                for m in reversed(self.maps[:i]):
                    out = m(out)
                return complex(out)
        return None

    def as_moebius(self):
        out = None
        for m in self.maps:
            mm = m.as_moebius()
            if mm is None:
                return None
            out = mm if out is None else moebius_compose(out, mm)
        return out


def selfmap_eval(phi: SelfMap, z):
    return phi(z)


def selfmap_jet(phi: SelfMap, at: complex, order: int) -> Jet:
    return phi.jet(at, order)


# ---------------------------------------------------------------------------
# Multiplicity of zeros of B∘phi


def mult_of_composite(
    B: BlaschkeProduct,
    phi: SelfMap,
    w: complex,
    order: Optional[int] = None,
    tol: Tolerances = DEFAULT,
) -> Union[int, float]:
    """Multiplicity of w as a zero of B∘phi; ``math.inf`` when B∘phi ≡ 0.

    If phi(w) = a_k, B∘phi = (alpha_k B_{a_k}∘phi)^{m_k} * (nonvanishing at w),
    and B_{a_k} has a simple zero, so the multiplicity is m_k * ord_w(phi - a_k).
    Raises JetOrderExceeded if the jet of order ``order`` is entirely zero.
    """
    w = complex(w)
    c = phi.constant_value()
    if c is not None:
        return math.inf if B.match_zero(c, tol.match) is not None else 0
    k = B.match_zero(complex(phi(w)), tol.match)
    if k is None:
        return 0
    a_k, m_k = B.factors[k]
    if order is None:
        order = max(m for _, m in B.factors) + 2
    shifted = jet_rescale(phi.jet(w, order) - a_k, 1.0 - abs(w))
    ord_ = order_of_vanishing(shifted, tol.vanish)
    if ord_ is None:
        raise JetOrderExceeded(order, f"phi - {a_k} vanishes to order > {order} at {w}")
    return m_k * ord_


# ---------------------------------------------------------------------------
# Pushforward of atomic measures under automorphisms


def pushforward(mu: AtomicMeasure, phi: Moebius) -> AtomicMeasure:
    """Measure nu with (S_mu∘phi) H^p = S_nu H^p.

    nu(E) = integral over phi(E) of (1 - |phi(0)|^2)/|t - phi(0)|^2 dmu(t), so
    each atom t_k moves to phi^{-1}(t_k) with its weight scaled by the kernel.
    """
    if not mu.atoms:
        return AtomicMeasure()
    if phi.is_identity:
        return mu
    p0 = complex(phi(0.0))
    inv = phi.inverse()
    pts = mu.points
    s = np.asarray(inv(pts))
    kernel = (1.0 - abs(p0) ** 2) / np.abs(pts - p0) ** 2
    angles = np.angle(s)
    return AtomicMeasure(tuple(zip(angles.tolist(), (mu.weights * kernel).tolist())))
