"""Composition operators between Beurling subspaces of Hardy space.

Decides C_phi(theta1 H^p) ⊆ theta2 H^p exactly for finite Blaschke products,
atomic singular inner functions and structured self-maps of the disk, and
cross-checks verdicts numerically.
"""
from .containment import (
    Problem,
    Verdict,
    decide,
    decide_blaschke,
    decide_derivative,
    decide_L_membership,
    decide_singular,
    decide_singular_conjugated,
    decide_singular_rotation,
    decide_split,
)
from .errors import (
    BeurlingError,
    EngineDeclined,
    InconclusiveError,
    JetOrderExceeded,
    ModeError,
    NotAutomorphismError,
    StructuralError,
)
from .families import FamilySpec, automorphism_rigidity_scan, generate, verify_family_roundtrip
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
    mult_of_composite,
    pushforward,
)
from .jets import Jet
from .moebius import Moebius, blaschke_factor, classify, cycle_map, swap_map
from .oracle import GridSpec, cross_validate, radial_limit_estimate, sup_quotient
from .tolerances import DEFAULT, PROFILES, Tolerances

__all__ = [
    "Problem",
    "Verdict",
    "decide",
    "decide_blaschke",
    "decide_derivative",
    "decide_L_membership",
    "decide_singular",
    "decide_singular_conjugated",
    "decide_singular_rotation",
    "decide_split",
    "BeurlingError",
    "EngineDeclined",
    "InconclusiveError",
    "JetOrderExceeded",
    "ModeError",
    "NotAutomorphismError",
    "StructuralError",
    "FamilySpec",
    "automorphism_rigidity_scan",
    "generate",
    "verify_family_roundtrip",
    "AtomicMeasure",
    "BlaschkeProduct",
    "Chain",
    "Constant",
    "Identity",
    "Inner",
    "InnerFunction",
    "Mob",
    "Scale",
    "SelfMap",
    "mult_of_composite",
    "pushforward",
    "Jet",
    "Moebius",
    "blaschke_factor",
    "classify",
    "cycle_map",
    "swap_map",
    "GridSpec",
    "cross_validate",
    "radial_limit_estimate",
    "sup_quotient",
    "DEFAULT",
    "PROFILES",
    "Tolerances",
]

__version__ = "0.1.0"
