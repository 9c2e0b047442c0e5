"""Explicit self-maps phi with C_phi(B H^p) ⊆ B H^p, and rigidity scans.

Kinds of generated maps (B_a is the basic automorphism (a - z)/(1 - conj(a) z)):

``one_zero``          B = B_a^m:          phi = B_a∘psi∘B_a with psi(0) = 0
``two_zero_equal``    B = (B_a B_b)^n:    B_a∘(B_a B_b g), B_b∘(B_a B_b g), I, swap
``two_zero_unequal``  B = B_a^m B_b^n:    B_a∘(B_a B_b g), B_b∘(B_a^k B_b g), I
                      with m > n and k = ceil(m/n)
``fix_all_to_aj``     every zero to a_j:  B_{a_j}∘(h prod B_{a_i}^{k_i}), k_i = ceil(m_i/m_j)
``max_mult_selfmap``  m_k maximal:        B_{a_k}∘B

g and h range over the closed unit ball of H^infinity.  Only a parameterized
pool of representatives is generated: nonzero constants, monomials lam*z^d,
finite Blaschke products and atomic singular inner functions, optionally
scaled.  Users can pass their own as a SelfMap.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .containment import Verdict, auto_monotonicity, decide_blaschke
from .errors import StructuralError
from .inner import (
    AtomicMeasure,
    BlaschkeProduct,
    Chain,
    Constant,
    Identity,
    Inner,
    InnerFunction,
    Mob,
    Scale,
    SelfMap,
)
from .moebius import Moebius, blaschke_factor, cycle_map, swap_map
from .tolerances import DEFAULT, Tolerances

KINDS = ("one_zero", "two_zero_equal", "two_zero_unequal", "fix_all_to_aj", "max_mult_selfmap")
MAX_SCAN_ZEROS = 8

BallElement = Union[complex, float, SelfMap, None]


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    zeros: tuple
    mults: tuple
    inner: BallElement = None  # psi for one_zero, g or h otherwise
    branch: Optional[str] = None
    j: Optional[int] = None
    exponent_override: Optional[int] = None  # negative controls only
    gamma: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        validate_spec(self)

    def blaschke(self) -> BlaschkeProduct:
        return BlaschkeProduct(tuple(zip(self.zeros, self.mults)), self.gamma)


_BRANCHES = {
    "two_zero_equal": ("to_a", "to_b", "identity", "swap"),
    "two_zero_unequal": ("to_a", "to_b", "identity"),
}


def validate_spec(spec: FamilySpec) -> None:
    if spec.kind not in KINDS:
        raise ValueError(f"unknown family kind {spec.kind!r}")
    if len(spec.zeros) != len(spec.mults) or not spec.zeros:
        raise ValueError("zeros and mults must be nonempty and of equal length")
    if any(m < 1 for m in spec.mults):
        raise ValueError("multiplicities must be positive")
    n = len(spec.zeros)
    if spec.kind == "one_zero" and n != 1:
        raise ValueError("one_zero takes exactly one zero")
    if spec.kind in _BRANCHES:
        if n != 2:
            raise ValueError(f"{spec.kind} takes exactly two zeros")
        if spec.branch not in _BRANCHES[spec.kind]:
            raise ValueError(f"{spec.kind} branch must be one of {_BRANCHES[spec.kind]}")
    if spec.kind == "two_zero_equal" and spec.mults[0] != spec.mults[1]:
        raise ValueError("two_zero_equal needs equal multiplicities")
    if spec.kind == "two_zero_unequal" and not spec.mults[0] > spec.mults[1] >= 1:
        raise ValueError("two_zero_unequal needs m > n >= 1")
    if spec.kind == "fix_all_to_aj" and (spec.j is None or not 0 <= spec.j < n):
        raise ValueError("fix_all_to_aj needs a target index j in range")
    if spec.exponent_override is not None and spec.exponent_override < 0:
        raise ValueError("exponent override must be nonnegative")


def ceil_div(m: int, n: int) -> int:
    return -(-m // n)


def _scaled_inner(h: BallElement) -> tuple[complex, Optional[InnerFunction]]:
    """Write h in the unit ball as s * theta with |s| <= 1 and theta inner (or None)."""
    if h is None:
        return 1.0, None
    if isinstance(h, (int, float, complex)):
        c = complex(h)
        if abs(c) > 1.0 + 1e-12:
            raise ValueError("constant ball element must satisfy |c| <= 1")
        return c, None
    if isinstance(h, Constant):
        return h.c, None
    if isinstance(h, Identity):
        return 1.0, InnerFunction(BlaschkeProduct(((0.0, 1),), -1.0))
    if isinstance(h, Scale):
        return h.s, InnerFunction(BlaschkeProduct(((0.0, 1),), -1.0))
    if isinstance(h, Mob):
        return 1.0, InnerFunction(BlaschkeProduct(((h.m.a, 1),), h.m.gamma / _alpha(h.m.a)))
    if isinstance(h, Inner):
        return 1.0, h.theta
    if isinstance(h, Chain) and len(h.maps) == 2 and isinstance(h.maps[0], Scale):
        s, theta = _scaled_inner(h.maps[1])
        if theta is not None:
            return h.maps[0].s * s, theta
    raise ValueError(f"cannot express {h!r} as a scaled inner function")


def _alpha(a: complex) -> complex:
    return -1.0 + 0j if a == 0 else abs(a) / a


def _times_ball(h: BallElement, B: BlaschkeProduct) -> SelfMap:
    """The self-map h*B for h in the closed unit ball and B nonconstant."""
    s, theta = _scaled_inner(h)
    if s == 0:
        return Constant(0.0)
    prod = InnerFunction(B) if theta is None else theta * InnerFunction(B)
    if abs(abs(s) - 1.0) <= 1e-12:
        prod = InnerFunction(prod.blaschke, prod.measure, prod.alpha * s / abs(s))
        return Inner(prod)
    return Chain((Scale(s), Inner(prod)))


def _outer_then(a: complex, inner_map: SelfMap) -> SelfMap:
    """B_a∘inner_map, folding constants."""
    c = inner_map.constant_value()
    if c is not None:
        return Constant(blaschke_factor(a)(c))
    return Chain((Mob(blaschke_factor(a)), inner_map))


def generate(spec: FamilySpec) -> SelfMap:
    kind = spec.kind
    if kind == "one_zero":
        (a,) = spec.zeros
        psi = spec.inner
        if not isinstance(psi, SelfMap):
            raise ValueError("one_zero needs psi given as a SelfMap")
        if abs(complex(psi(0.0))) > DEFAULT.match:
            raise ValueError("one_zero needs psi(0) = 0")
        Ba = Mob(blaschke_factor(a))
        return Chain((Ba, psi, Ba))

    if kind in ("two_zero_equal", "two_zero_unequal"):
        a, b = spec.zeros
        m, n = spec.mults
        if spec.branch == "identity":
            return Identity()
        if spec.branch == "swap":
            return Mob(swap_map(a, b))
        if spec.branch == "to_a":
            ka = 1 if spec.exponent_override is None else spec.exponent_override
            return _outer_then(a, _times_ball(spec.inner, _raw((a, ka), (b, 1))))
        k = ceil_div(m, n) if kind == "two_zero_unequal" else 1
        if spec.exponent_override is not None:
            k = spec.exponent_override
        return _outer_then(b, _times_ball(spec.inner, _raw((a, k), (b, 1))))

    if kind == "fix_all_to_aj":
        mj = spec.mults[spec.j]
        ks = [ceil_div(mi, mj) for mi in spec.mults]
        if spec.exponent_override is not None:
            # lower the exponent at the first zero needing more than one factor
            for i, k in enumerate(ks):
                if k > 1:
                    ks[i] = spec.exponent_override
                    break
        return _outer_then(
            spec.zeros[spec.j], _times_ball(spec.inner, _raw(*zip(spec.zeros, ks)))
        )

    # max_mult_selfmap
    k = int(np.argmax(spec.mults))
    return Chain((Mob(blaschke_factor(spec.zeros[k])), Inner(InnerFunction(spec.blaschke()))))


def _raw(*pairs) -> BlaschkeProduct:
    """prod B_{a}^{k} over pairs with k > 0, using un-normalized factors."""
    kept = [(a, k) for a, k in pairs if k > 0]
    if not kept:
        raise StructuralError("the product has no factors left")
    return BlaschkeProduct.from_raw(kept)


def verify_family_roundtrip(
    spec: FamilySpec, B: Optional[BlaschkeProduct] = None, tol: Tolerances = DEFAULT
) -> Verdict:
    """Run the exact engine on (B, generate(spec), B)."""
    B = spec.blaschke() if B is None else B
    for z, m in zip(spec.zeros, spec.mults):
        if B.mult(z) != m:
            raise StructuralError(f"B has multiplicity {B.mult(z)} at {z}, the family spec lists {m}")
    if len(B.factors) != len(spec.zeros):
        raise StructuralError("B has zeros the family spec does not list")
    return decide_blaschke(B, generate(spec), B, tol)


# ---------------------------------------------------------------------------
# Pools of ball elements


def random_disk_point(rng: np.random.Generator, rmax: float = 0.8) -> complex:
    r = rmax * math.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def random_unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def random_blaschke(
    rng: np.random.Generator, nzeros: int, max_mult: int = 2, rmax: float = 0.8,
    include_origin: bool = False,
) -> BlaschkeProduct:
    zeros = [0.0] if include_origin else []
    while len(zeros) < nzeros:
        z = random_disk_point(rng, rmax)
        if all(abs(z - w) > 0.05 for w in zeros):
            zeros.append(z)
    mults = rng.integers(1, max_mult + 1, len(zeros))
    return BlaschkeProduct(tuple(zip(zeros, mults.tolist())), random_unimodular(rng))


def random_measure(rng: np.random.Generator, natoms: int, wmax: float = 1.0) -> AtomicMeasure:
    angles = np.sort(rng.uniform(0, 2 * np.pi, natoms))
    return AtomicMeasure(tuple(zip(angles.tolist(), rng.uniform(0.1, wmax, natoms).tolist())))


def psi_pool(rng: np.random.Generator) -> SelfMap:
    """A random self-map fixing 0: lam*z^d, a Blaschke product through 0, or a scaled one."""
    choice = rng.integers(3)
    if choice == 0:
        d = int(rng.integers(1, 4))
        return Inner(InnerFunction(BlaschkeProduct(((0.0, d),), random_unimodular(rng))))
    B = random_blaschke(rng, int(rng.integers(1, 3)), include_origin=True)
    if choice == 1:
        return Inner(InnerFunction(B))
    return Chain((Scale(rng.uniform(0.3, 1.0) * random_unimodular(rng)), Inner(InnerFunction(B))))


def ball_pool(rng: np.random.Generator) -> BallElement:
    """A random element of the closed unit ball of H^infinity from the documented pool."""
    choice = rng.integers(5)
    if choice == 0:
        return rng.uniform(0.3, 1.0) * random_unimodular(rng)
    if choice == 1:
        d = int(rng.integers(1, 3))
        return Inner(InnerFunction(BlaschkeProduct(((0.0, d),), random_unimodular(rng))))
    if choice == 2:
        return Inner(InnerFunction(random_blaschke(rng, int(rng.integers(1, 3)))))
    if choice == 3:
        return Inner(InnerFunction(measure=random_measure(rng, int(rng.integers(1, 3)), 0.5)))
    return Chain((Scale(rng.uniform(0.3, 1.0)), Inner(InnerFunction(random_blaschke(rng, 1)))))


# ---------------------------------------------------------------------------
# Rigidity: no nontrivial automorphism leaves B H^p invariant


def multiplicity_hypothesis(mults: Sequence[int]) -> bool:
    """Top multiplicities strictly increasing: m_{n-2} < m_{n-1} < m_n (m_1 < m_2 if n = 2)."""
    ms = sorted(mults)
    if len(ms) < 2:
        return False
    if len(ms) == 2:
        return ms[0] < ms[1]
    return ms[-3] < ms[-2] < ms[-1]


@dataclass(frozen=True)
class ScanRow:
    permutation: tuple  # image index of each zero
    candidate: Optional[Moebius]
    contained: Optional[bool]  # engine verdict for a realizable candidate
    reason: str


@dataclass(frozen=True)
class RigidityReport:
    rows: tuple
    random_trials: int
    random_contained: int

    @property
    def realizable(self) -> tuple:
        return tuple(r for r in self.rows if r.candidate is not None)

    @property
    def passing_nontrivial(self) -> tuple:
        return tuple(r for r in self.rows if r.contained)

    @property
    def all_refuted(self) -> bool:
        return not self.passing_nontrivial and self.random_contained == 0


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i]
        out.append(cyc)
    return out


def automorphism_rigidity_scan(
    B: BlaschkeProduct,
    trials: int = 20,
    rng: Optional[np.random.Generator] = None,
    tol: Tolerances = DEFAULT,
) -> RigidityReport:
    """Try every permutation of the zeros that an automorphism could realize.

    An automorphism permutes Z(B) bijectively.  Two fixed zeros force the
    identity, and any nontrivial cycle determines the map (at most one
    self-map cycles given points), so each permutation has at most one
    candidate.  Every realizable nontrivial candidate is run through the
    engine, along with ``trials`` random automorphisms.
    """
    zeros = list(B.zeros)
    n = len(zeros)
    if n > MAX_SCAN_ZEROS:
        raise ValueError(f"rigidity scan supports at most {MAX_SCAN_ZEROS} zeros")
    if not multiplicity_hypothesis([m for _, m in B.factors]):
        raise ValueError("multiplicities do not satisfy the strict top-order hypothesis")
    rng = np.random.default_rng(0) if rng is None else rng
    pts = np.array(zeros)
    cache: dict = {}
    rows = []
    for perm in itertools.permutations(range(n)):
        if all(perm[i] == i for i in range(n)):
            continue
        cycles = _cycles(perm)
        fixed = sum(1 for c in cycles if len(c) == 1)
        if fixed >= 2:
            rows.append(ScanRow(perm, None, None, "two fixed zeros force the identity"))
            continue
        longest = max(cycles, key=len)
        key = tuple(longest)
        if key not in cache:
            cache[key] = cycle_map([zeros[i] for i in longest], tol.match)
        cand = cache[key]
        if cand is None:
            rows.append(ScanRow(perm, None, None, "no automorphism cycles these zeros"))
            continue
        if np.max(np.abs(cand(pts) - pts[list(perm)])) > tol.match:
            rows.append(ScanRow(perm, None, None, "cycle map does not realize the permutation"))
            continue
        v = decide_blaschke(B, Mob(cand), B, tol)
        reason = "refuted by multiplicities"
        if not v.contained:
            try:
                bad = [r for r in auto_monotonicity(B, cand, tol) if not r.ok]
                if bad:
                    reason = f"monotonicity fails at {bad[0].zero}: {bad[0].mult} > {bad[0].image_mult}"
            except StructuralError:
                pass
        rows.append(ScanRow(perm, cand, v.contained, reason if not v.contained else "contained"))
    random_contained = 0
    for _ in range(trials):
        m = Moebius(random_unimodular(rng), random_disk_point(rng, 0.95))
        if m.is_identity:
            continue
        if decide_blaschke(B, Mob(m), B, tol).contained:
            random_contained += 1
    return RigidityReport(tuple(rows), trials, random_contained)
