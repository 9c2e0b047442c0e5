"""Exact decisions for C_phi(theta1 H^p) ⊆ theta2 H^p.

Every route reduces containment to finitely many integer or mass
comparisons:

* Blaschke targets: mult_{B2}(w) <= mult_{B1∘phi}(w) for every zero w of B2.
* Automorphisms: the Blaschke and singular parts split, and the singular
  part becomes atomwise domination of mu2 by the pushforward of mu1.

Anything else (a non-automorphic phi against a target with a singular
factor) is declined rather than guessed; see ``beurling.oracle``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import EngineDeclined, InconclusiveError, JetOrderExceeded, ModeError, StructuralError
from .inner import (
    AtomicMeasure,
    BlaschkeProduct,
    InnerFunction,
    Mob,
    SelfMap,
    mult_of_composite,
    pushforward,
)
from .jets import jet_rescale
from .moebius import Moebius, blaschke_factor, classify, moebius_compose
from .tolerances import DEFAULT, Tolerances

MODES = ("auto", "blaschke-only", "singular-only", "split")

CONSTANT_MAP_NOTE = "constant map onto a zero: theta1∘phi ≡ 0 counts as contained"


@dataclass(frozen=True)
class ZeroCheck:
    point: complex
    required: int
    observed: Union[int, float]  # math.inf when theta1∘phi vanishes identically
    image: Optional[complex] = None

    @property
    def ok(self) -> bool:
        return self.observed >= self.required

    @property
    def margin(self) -> Union[int, float]:
        return self.observed - self.required


@dataclass(frozen=True)
class AtomCheck:
    angle: float
    required: float
    available: float
    ok: bool

    @property
    def margin(self) -> float:
        return self.available - self.required


@dataclass(frozen=True)
class Verdict:
    contained: bool
    zero_checks: tuple = ()
    atom_checks: tuple = ()
    route: str = ""
    notes: tuple = ()

    @property
    def deficits(self) -> tuple:
        return tuple(c for c in self.zero_checks + self.atom_checks if not c.ok)

    @property
    def witness(self):
        """The first failing comparison, or None when contained."""
        d = self.deficits
        return d[0] if d else None

    @property
    def boundary_case(self) -> bool:
        if not self.contained:
            return False
        return any(c.margin == 0 for c in self.zero_checks) or any(
            abs(c.margin) <= DEFAULT.mass * max(c.required, 1.0) for c in self.atom_checks
        )


@dataclass(frozen=True)
class Problem:
    theta1: InnerFunction
    phi: SelfMap
    theta2: InnerFunction
    mode: str = "auto"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ModeError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode in ("split", "singular-only") and self.phi.as_moebius() is None:
            raise ModeError(f"mode {self.mode!r} needs phi to be a disk automorphism")


# ---------------------------------------------------------------------------
# Blaschke routes


def _mult_with_escalation(
    B: BlaschkeProduct, phi: SelfMap, w: complex, required: int, tol: Tolerances
) -> Union[int, float]:
    k = B.match_zero(complex(phi(w)), tol.match) if phi.constant_value() is None else None
    m_k = B.factors[k][1] if k is not None else 1
    order = -(-required // m_k) + 2
    while True:
        try:
            return mult_of_composite(B, phi, w, order=order, tol=tol)
        except JetOrderExceeded:
            if order >= tol.jet_order_cap:
                raise InconclusiveError(
                    f"order of vanishing at {w} exceeds the jet order cap {tol.jet_order_cap}"
                ) from None
            order = min(2 * order, tol.jet_order_cap)


def decide_blaschke(
    B1: BlaschkeProduct, phi: SelfMap, B2: BlaschkeProduct, tol: Tolerances = DEFAULT
) -> Verdict:
    """Containment of B1 H^p in B2 H^p under C_phi via zero multiplicities."""
    checks = []
    for w, r in B2.factors:
        observed = _mult_with_escalation(B1, phi, w, r, tol)
        checks.append(ZeroCheck(w, r, observed, complex(phi(w))))
    notes = ()
    if phi.constant_value() is not None and any(math.isinf(c.observed) for c in checks):
        notes = (CONSTANT_MAP_NOTE,)
    return Verdict(all(c.ok for c in checks), tuple(checks), (), "multiplicity", notes)


def _first_nonvanishing_derivative(phi: SelfMap, w: complex, count: int, tol: Tolerances):
    """Smallest l in 1..count with phi^(l)(w) != 0, or None if all vanish."""
    if count <= 0 or phi.constant_value() is not None:
        return None
    j = jet_rescale(phi.jet(w, count + 2), 1.0 - abs(w))
    coeffs = abs(j.coeffs[1:])
    threshold = tol.vanish * max(1.0, float(coeffs.max()))
    for l, c in enumerate(coeffs[:count], start=1):
        if c > threshold:
            return l
    return None


def decide_derivative(B: BlaschkeProduct, phi: SelfMap, tol: Tolerances = DEFAULT) -> Verdict:
    """Invariance of B H^p via derivatives of phi at the zeros of B.

    phi must map the zero set into itself; at a zero a_i with image a_k and
    m_i > m_k, the derivatives phi^(l)(a_i), 1 <= l <= ceil(m_i/m_k) - 1,
    must all vanish.  ``observed`` in a passing check is the lower bound
    m_k * ceil(m_i/m_k) that the vanishing derivatives guarantee.
    """
    checks = []
    const = phi.constant_value()
    for w, m_i in B.factors:
        image = complex(phi(w))
        k = B.match_zero(image, tol.match)
        if k is None:
            checks.append(ZeroCheck(w, m_i, 0, image))
            continue
        if const is not None:
            checks.append(ZeroCheck(w, m_i, math.inf, image))
            continue
        m_k = B.factors[k][1]
        need = -(-m_i // m_k)  # ceil(m_i / m_k)
        first = _first_nonvanishing_derivative(phi, w, need - 1, tol) if m_i > m_k else None
        observed = m_k * need if first is None else m_k * first
        checks.append(ZeroCheck(w, m_i, observed, image))
    notes = ()
    if const is not None and any(math.isinf(c.observed) for c in checks):
        notes = (CONSTANT_MAP_NOTE,)
    return Verdict(all(c.ok for c in checks), tuple(checks), (), "derivative", notes)


@dataclass(frozen=True)
class MonotonicityRow:
    zero: complex
    mult: int
    image: complex
    image_mult: int

    @property
    def ok(self) -> bool:
        return self.mult <= self.image_mult


def auto_monotonicity(B: BlaschkeProduct, phi: Moebius, tol: Tolerances = DEFAULT) -> list:
    """Table of mult_B(a_j) <= mult_B(phi(a_j)); a necessary condition for invariance."""
    rows = []
    for a, m in B.factors:
        image = complex(phi(a))
        k = B.match_zero(image, tol.match)
        if k is None:
            raise StructuralError(f"automorphism sends zero {a} to {image}, not a zero")
        rows.append(MonotonicityRow(a, m, image, B.factors[k][1]))
    return rows


# ---------------------------------------------------------------------------
# Singular routes


def _atomwise(mu2: AtomicMeasure, available: AtomicMeasure, tol: Tolerances) -> tuple:
    checks = []
    for angle, req in mu2.atoms:
        have = available.mass_at(angle, tol.angle)
        ok = req <= have + tol.mass * max(req, have)
        checks.append(AtomCheck(angle, req, have, ok))
    return tuple(checks)


def decide_singular(
    mu1: AtomicMeasure, phi: Moebius, mu2: AtomicMeasure, tol: Tolerances = DEFAULT
) -> Verdict:
    """S_mu1 H^p into S_mu2 H^p under an automorphism: mu2 <= pushforward(mu1)."""
    nu = pushforward(mu1, phi)
    checks = _atomwise(mu2, nu, tol)
    return Verdict(all(c.ok for c in checks), (), checks, "singular-pushforward")


def decide_singular_rotation(
    mu1: AtomicMeasure, lam: complex, mu2: AtomicMeasure, tol: Tolerances = DEFAULT
) -> Verdict:
    """phi(z) = lam*z: contained iff mu2({s}) <= mu1({lam*s}) for every atom s of mu2."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ModeError("rotation factor must be unimodular")
    if abs(lam - 1.0) <= 1e-12:
        raise ModeError("the identity is not an elliptic rotation")
    rot = math.atan2(lam.imag, lam.real)
    checks = []
    for angle, req in mu2.atoms:
        have = mu1.mass_at(angle + rot, tol.angle)
        checks.append(AtomCheck(angle, req, have, req <= have + tol.mass * max(req, have)))
    return Verdict(all(c.ok for c in checks), (), tuple(checks), "singular-rotation")


def decide_singular_conjugated(
    mu1: AtomicMeasure, phi: Moebius, mu2: AtomicMeasure, tol: Tolerances = DEFAULT
) -> Verdict:
    """Reduce an elliptic phi with fixed point omega to a rotation about 0.

    psi = B_omega∘phi∘B_omega fixes 0, and the measures move to
    nu_i = pushforward(mu_i, B_omega).  Atom angles in the returned checks are
    in the conjugated coordinates.
    """
    cls = classify(phi)
    if cls.tag != "elliptic":
        raise ModeError(f"conjugation route needs an elliptic automorphism, got {cls.tag}")
    omega = cls.interior_fixed_point
    Bw = blaschke_factor(omega)
    psi = moebius_compose(Bw, moebius_compose(phi, Bw))
    lam = -psi.gamma  # psi(z) = gamma*(a - z) with a ~ 0
    nu1 = pushforward(mu1, Bw)
    nu2 = pushforward(mu2, Bw)
    v = decide_singular_rotation(nu1, lam, nu2, tol)
    return Verdict(v.contained, (), v.atom_checks, "singular-conjugated")


# ---------------------------------------------------------------------------
# Mixed inner functions


def _require_moebius(phi) -> Moebius:
    if isinstance(phi, Moebius):
        return phi
    m = phi.as_moebius()
    if m is None:
        raise ModeError("this route needs phi to be a disk automorphism")
    return m


def decide_split(
    theta1: InnerFunction, phi, theta2: InnerFunction, tol: Tolerances = DEFAULT
) -> Verdict:
    """For automorphisms the Blaschke and singular parts decide separately."""
    m = _require_moebius(phi)
    vb = decide_blaschke(theta1.blaschke, Mob(m), theta2.blaschke, tol)
    vs = decide_singular(theta1.measure, m, theta2.measure, tol)
    return Verdict(
        vb.contained and vs.contained, vb.zero_checks, vs.atom_checks, "split", vb.notes
    )


def decide_L_membership(
    theta1: InnerFunction, phi: SelfMap, B: BlaschkeProduct, tol: Tolerances = DEFAULT
) -> Verdict:
    """Target is a pure Blaschke product: only the Blaschke part of theta1 matters."""
    v = decide_blaschke(theta1.blaschke, phi, B, tol)
    return Verdict(v.contained, v.zero_checks, (), "blaschke-target", v.notes)


def decide(problem: Problem, tol: Tolerances = DEFAULT) -> Verdict:
    """Route a problem to the strongest applicable exact criterion.

    Raises EngineDeclined for a non-automorphic phi whose target carries a
    singular factor; that case has no finite characterization here.
    """
    t1, phi, t2 = problem.theta1, problem.phi, problem.theta2
    mode = problem.mode
    if mode == "blaschke-only":
        return decide_blaschke(t1.blaschke, phi, t2.blaschke, tol)
    if mode == "singular-only":
        return decide_singular(t1.measure, _require_moebius(phi), t2.measure, tol)
    if mode == "split":
        return decide_split(t1, phi, t2, tol)
    if not t2.measure.atoms:
        return decide_L_membership(t1, phi, t2.blaschke, tol)
    if phi.as_moebius() is not None:
        return decide_split(t1, phi, t2, tol)
    raise EngineDeclined(
        "uncharacterized: non-automorphism phi with singular theta2; use the oracle"
    )
