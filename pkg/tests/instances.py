"""Random instance generators shared by the test modules."""
from __future__ import annotations

import math

import numpy as np

from beurling.families import (
    FamilySpec,
    ball_pool,
    ceil_div,
    generate,
    psi_pool,
    random_blaschke,
    random_disk_point,
    random_measure,
    random_unimodular,
)
from beurling.inner import (
    AtomicMeasure,
    BlaschkeProduct,
    Chain,
    Identity,
    Inner,
    InnerFunction,
    Mob,
    Scale,
    pushforward,
)
from beurling.moebius import Moebius, blaschke_factor, cycle_map, rotation

__all__ = [
    "random_disk_point", "random_unimodular", "random_blaschke", "random_measure",
    "random_moebius", "distinct_points", "random_family_spec", "negative_control_spec",
    "random_selfmap", "engine_instance", "elliptic_singular_instance",
    "contained_oracle_instance", "refuted_oracle_instance", "rigidity_blaschke",
]

FAMILY_KINDS = ("one_zero", "two_zero_equal", "two_zero_unequal", "fix_all_to_aj",
                "max_mult_selfmap")


def random_moebius(rng, rmax=0.9) -> Moebius:
    return Moebius(random_unimodular(rng), random_disk_point(rng, rmax))


def distinct_points(rng, n, rmax=0.8, sep=0.1):
    pts = []
    while len(pts) < n:
        z = random_disk_point(rng, rmax)
        if all(abs(z - w) > sep for w in pts):
            pts.append(z)
    return pts


# ---------------------------------------------------------------------------
# Family specs


def random_family_spec(rng, kind=None) -> FamilySpec:
    kind = FAMILY_KINDS[rng.integers(len(FAMILY_KINDS))] if kind is None else kind
    g = random_unimodular(rng)
    if kind == "one_zero":
        return FamilySpec(kind, (random_disk_point(rng),), (int(rng.integers(1, 5)),),
                          inner=psi_pool(rng), gamma=g)
    if kind == "two_zero_equal":
        m = int(rng.integers(1, 4))
        branch = ("to_a", "to_b", "identity", "swap")[rng.integers(4)]
        return FamilySpec(kind, tuple(distinct_points(rng, 2)), (m, m), inner=ball_pool(rng),
                          branch=branch, gamma=g)
    if kind == "two_zero_unequal":
        n = int(rng.integers(1, 4))
        m = n + int(rng.integers(1, 6))
        branch = ("to_a", "to_b", "identity")[rng.integers(3)]
        return FamilySpec(kind, tuple(distinct_points(rng, 2)), (m, n), inner=ball_pool(rng),
                          branch=branch, gamma=g)
    if kind == "fix_all_to_aj":
        count = int(rng.integers(1, 5))
        mults = tuple(int(x) for x in rng.integers(1, 6, count))
        inner = ball_pool(rng) if rng.uniform() < 0.9 else 0.0
        return FamilySpec(kind, tuple(distinct_points(rng, count)), mults, inner=inner,
                          j=int(rng.integers(count)), gamma=g)
    count = int(rng.integers(1, 5))
    mults = tuple(int(x) for x in rng.integers(1, 6, count))
    return FamilySpec(kind, tuple(distinct_points(rng, count)), mults, gamma=g)


def negative_control_spec(rng) -> FamilySpec:
    """A family shape with one exponent lowered so that a derivative condition fails."""
    g = random_unimodular(rng)
    if rng.uniform() < 0.5:
        n = int(rng.integers(1, 4))
        m = n + int(rng.integers(1, 6))  # k = ceil(m/n) >= 2
        k = ceil_div(m, n)
        override = k - 1 if rng.uniform() < 0.5 else 1  # k-1, or a nonzero first derivative
        return FamilySpec("two_zero_unequal", tuple(distinct_points(rng, 2)), (m, n),
                          inner=ball_pool(rng), branch="to_b", exponent_override=override,
                          gamma=g)
    count = int(rng.integers(2, 5))
    mj = int(rng.integers(1, 3))
    mults = [mj] + [int(x) for x in rng.integers(1, 7, count - 1)]
    mults[1] = max(mults[1], mj + 1)  # guarantees some k_i = ceil(m_i/m_j) > 1
    first = next(i for i, mi in enumerate(mults) if ceil_div(mi, mj) > 1)
    k = ceil_div(mults[first], mj)
    override = k - 1 if rng.uniform() < 0.5 else 1
    return FamilySpec("fix_all_to_aj", tuple(distinct_points(rng, count)), tuple(mults),
                      inner=ball_pool(rng), j=0, exponent_override=override, gamma=g)


# ---------------------------------------------------------------------------
# Structured self-maps


def _leaf(rng, allow_atoms=True):
    choice = rng.integers(6 if allow_atoms else 5)
    if choice == 0:
        return Identity()
    if choice == 1:
        return Mob(random_moebius(rng, 0.7))
    if choice == 2:
        return Inner(InnerFunction(random_blaschke(rng, int(rng.integers(1, 4)), 2, 0.7)))
    if choice == 3:
        return Scale(rng.uniform(0.4, 1.0) * random_unimodular(rng))
    if choice == 4:
        return Chain((Scale(rng.uniform(0.4, 0.9)), Mob(random_moebius(rng, 0.7))))
    mu = random_measure(rng, int(rng.integers(1, 3)), 0.5)
    B = random_blaschke(rng, int(rng.integers(0, 2)), 2, 0.7)
    return Inner(InnerFunction(B, mu, random_unimodular(rng)))


def random_selfmap(rng, max_depth=3, allow_atoms=True):
    depth = int(rng.integers(1, max_depth + 1))
    maps = tuple(_leaf(rng, allow_atoms) for _ in range(depth))
    return maps[0] if depth == 1 else Chain(maps)


# ---------------------------------------------------------------------------
# Engine instances (B, phi) for B H^p -> B H^p


def _collapse_instance(rng):
    """phi = B_{a_k}∘(prod B_{a_i}^{e_i}) sends zeros with e_i > 0 to a_k."""
    B = random_blaschke(rng, int(rng.integers(1, 5)), 4)
    k = int(rng.integers(len(B.factors)))
    exps = [int(x) for x in rng.integers(0, 4, len(B.factors))]
    if rng.uniform() < 0.7:
        exps = [max(e, 1) for e in exps]
    if not any(exps):
        exps[k] = 1
    inner = BlaschkeProduct.from_raw([(a, e) for (a, _), e in zip(B.factors, exps) if e > 0])
    phi = Chain((Mob(blaschke_factor(B.zeros[k])), Inner(InnerFunction(inner))))
    if rng.uniform() < 0.3:
        phi = Chain((Mob(blaschke_factor(B.zeros[k])),
                     Scale(rng.uniform(0.3, 1.0)), Inner(InnerFunction(inner))))
    return B, phi


def _symmetric_blaschke(rng, n, mults=None):
    """Zeros on one orbit of an elliptic automorphism of order n."""
    omega = random_disk_point(rng, 0.5)
    r = rng.uniform(0.2, 0.7)
    t0 = rng.uniform(0, 2 * np.pi)
    Bw = blaschke_factor(omega)
    zeros = [Bw(r * np.exp(1j * (t0 + 2 * np.pi * k / n))) for k in range(n)]
    if mults is None:
        mults = [int(x) for x in rng.integers(1, 4, n)]
    return BlaschkeProduct(tuple(zip(zeros, mults)), random_unimodular(rng))


def engine_instance(rng):
    """A (B, phi) pair from a mix of family members, controls and perturbations."""
    kind = rng.integers(6)
    if kind == 0:
        spec = random_family_spec(rng)
        return spec.blaschke(), generate(spec)
    if kind == 1:
        spec = negative_control_spec(rng)
        return spec.blaschke(), generate(spec)
    if kind == 2:
        return _collapse_instance(rng)
    if kind == 3:
        # automorphisms cycling a symmetric zero set, with random multiplicities
        n = int(rng.integers(2, 5))
        B = _symmetric_blaschke(rng, n)
        m = cycle_map(B.zeros)
        return B, Mob(m if m is not None else random_moebius(rng))
    if kind == 4:
        # a contained member perturbed by a small rotation about one zero
        spec = random_family_spec(rng)
        a = spec.zeros[0]
        Ba = blaschke_factor(a)
        eps = rng.choice([1e-3, 1e-2, 0.1])
        wobble = Moebius(-np.exp(1j * eps), 0.0)  # z -> e^{i eps} z
        conj = Chain((Mob(Ba), Mob(wobble), Mob(Ba)))  # fixes a, moves nearby points
        return spec.blaschke(), Chain((conj, generate(spec)))
    B = random_blaschke(rng, int(rng.integers(1, 4)), 3)
    return B, random_selfmap(rng, 2)


# ---------------------------------------------------------------------------
# Singular instances


def elliptic_singular_instance(rng):
    """(mu1, phi, mu2, lam, nu1, nu2) with phi = B_w∘(lam z)∘B_w and nu_i the conjugated measures."""
    omega = random_disk_point(rng, 0.7) if rng.uniform() < 0.9 else 0j
    k = int(rng.integers(2, 7))
    lam = np.exp(2j * np.pi * rng.integers(1, k) / k) if rng.uniform() < 0.5 else random_unimodular(rng)
    if abs(lam - 1) < 1e-6:
        lam = -1.0 + 0j
    lam_angle = math.atan2(lam.imag, lam.real)
    nu1 = random_measure(rng, int(rng.integers(1, 5)), 2.0)
    atoms2 = []
    for t, w in nu1.atoms:
        if rng.uniform() < 0.6:
            s = t - lam_angle  # nu1 evaluated at lam*s
            scale = rng.uniform(0.1, 0.95) if rng.uniform() < 0.7 else rng.uniform(1.05, 2.0)
            atoms2.append((s, w * scale))
    if rng.uniform() < 0.2:
        atoms2.append((rng.uniform(0, 2 * np.pi), rng.uniform(0.1, 1.0)))
    try:
        nu2 = AtomicMeasure(tuple(atoms2))
    except ValueError:
        nu2 = AtomicMeasure(tuple(atoms2[:1]))
    Bw = blaschke_factor(omega)
    mu1 = pushforward(nu1, Bw)
    mu2 = pushforward(nu2, Bw)
    phi = Bw @ rotation(lam) @ Bw
    return mu1, phi, mu2, lam, nu1, nu2


# ---------------------------------------------------------------------------
# Oracle instances: (theta1, phi, theta2) with a known engine verdict


def contained_oracle_instance(rng):
    kind = rng.integers(3)
    if kind == 0:
        spec = random_family_spec(rng)
        B = InnerFunction(spec.blaschke())
        return B, generate(spec), B
    if kind == 1:
        # automorphism: theta2 built from the pulled-back zeros and pushed-forward atoms
        m = random_moebius(rng, 0.7)
        B1 = random_blaschke(rng, int(rng.integers(1, 3)), 2, 0.7)
        mu1 = random_measure(rng, int(rng.integers(1, 3)), 0.3)
        inv = m.inverse()
        zeros2 = [(complex(inv(a)), int(rng.integers(1, mult + 1))) for a, mult in B1.factors]
        nu = pushforward(mu1, m)
        atoms2 = tuple((t, w * rng.uniform(0.2, 1.0)) for t, w in nu.atoms)
        t1 = InnerFunction(B1, mu1)
        t2 = InnerFunction(BlaschkeProduct(tuple(zeros2), random_unimodular(rng)),
                           AtomicMeasure(atoms2))
        return t1, Mob(m), t2
    # Blaschke target with an extra singular factor upstairs
    spec = random_family_spec(rng)
    B = spec.blaschke()
    mu = random_measure(rng, 1, 0.3)
    return InnerFunction(B, mu), generate(spec), InnerFunction(B)


def refuted_oracle_instance(rng):
    kind = rng.integers(3)
    if kind == 0:
        spec = negative_control_spec(rng)
        B = InnerFunction(spec.blaschke())
        return B, generate(spec), B
    if kind == 1:
        B, phi = _collapse_instance(rng)
        return InnerFunction(B), phi, InnerFunction(B)
    # automorphism with an atom deficit
    m = random_moebius(rng, 0.7)
    mu1 = random_measure(rng, int(rng.integers(1, 3)), 1.0)
    nu = pushforward(mu1, m)
    atoms2 = [(t, w * rng.uniform(0.2, 1.0)) for t, w in nu.atoms]
    t, w = atoms2[0]
    atoms2[0] = (t, w + rng.uniform(0.2, 1.0))
    B1 = random_blaschke(rng, 1, 2, 0.7)
    t2 = InnerFunction(BlaschkeProduct(((complex(m.inverse()(B1.zeros[0])), 1),)),
                       AtomicMeasure(tuple(atoms2)))
    return InnerFunction(B1, mu1), Mob(m), t2


# ---------------------------------------------------------------------------
# Rigidity


def rigidity_blaschke(rng, max_zeros=6):
    """A Blaschke product with strictly increasing top three multiplicities."""
    n = int(rng.integers(2, max_zeros + 1))
    if n == 2:
        lo = int(rng.integers(1, 3))
        mults = [lo, lo + int(rng.integers(1, 3))]
    else:
        rest = [int(x) for x in rng.integers(1, 3, n - 3)]
        base = max(rest, default=0)
        mults = rest + [base + 1, base + 2, base + 3]
    mults = [mults[i] for i in rng.permutation(n)]
    if rng.uniform() < 0.5:
        return _symmetric_blaschke(rng, n, mults)
    return BlaschkeProduct(tuple(zip(distinct_points(rng, n), mults)), random_unimodular(rng))

