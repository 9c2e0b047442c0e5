"""Truncated Taylor expansions ("jets") of holomorphic functions.

A jet of order K at a base point a stores the Taylor coefficients
c_l = f^(l)(a) / l! for l = 0..K.  Coefficients rather than raw derivatives
keep magnitudes tame for K up to a few dozen.

All arithmetic is value-semantic: operations return new jets and never
mutate their operands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import NonFiniteError, StructuralError
from .tolerances import DEFAULT

Scalar = Union[complex, float, int]


@dataclass(frozen=True, eq=False)
class Jet:
    base: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise StructuralError("a jet needs at least the constant coefficient")
        if not np.all(np.isfinite(c)):
            raise NonFiniteError(f"non-finite jet coefficient at base {self.base}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "base", complex(self.base))

    @classmethod
    def constant(cls, value: Scalar, base: Scalar, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(base, c)

    @classmethod
    def variable(cls, base: Scalar, order: int) -> "Jet":
        """Jet of the identity map z -> z."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = base
        if order >= 1:
            c[1] = 1.0
        return cls(base, c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def derivatives(self) -> np.ndarray:
        """Raw derivatives f^(l)(base), l = 0..K."""
        fact = np.array([math.factorial(l) for l in range(self.order + 1)], dtype=float)
        return self.coeffs * fact

    def __repr__(self):
        return f"Jet(base={self.base!r}, coeffs={np.round(self.coeffs, 12).tolist()})"

    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_add(self, other)
        c = self.coeffs.copy()
        c[0] += other
        return Jet(self.base, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.base, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return Jet(self.base, self.coeffs / complex(other))

    def __rtruediv__(self, other):
        return jet_div(Jet.constant(other, self.base, self.order), self)

    def __pow__(self, n: int):
        return jet_pow(self, n)


def _check_compatible(x: Jet, y: Jet, eps: float = DEFAULT.match) -> None:
    if x.order != y.order:
        raise StructuralError(f"jet orders differ: {x.order} vs {y.order}")
    if abs(x.base - y.base) > eps:
        raise StructuralError(f"jet bases differ: {x.base} vs {y.base}")


def jet_add(x: Jet, y: Jet) -> Jet:
    _check_compatible(x, y)
    return Jet(x.base, x.coeffs + y.coeffs)


def jet_mul(x: Jet, y: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    _check_compatible(x, y)
    return Jet(x.base, np.convolve(x.coeffs, y.coeffs)[: x.order + 1])


def jet_div(x: Jet, y: Jet) -> Jet:
    _check_compatible(x, y)
    y0 = y.coeffs[0]
    if y0 == 0:
        raise ZeroDivisionError("jet division by a series vanishing at the base point")
    K = x.order
    q = np.zeros(K + 1, dtype=complex)
    for n in range(K + 1):
        acc = x.coeffs[n]
        if n:
            acc = acc - np.dot(y.coeffs[1 : n + 1], q[n - 1 :: -1])
        q[n] = acc / y0
    return Jet(x.base, q)


def jet_exp(x: Jet) -> Jet:
    """exp of a jet via g' = f' g."""
    K = x.order
    f = x.coeffs
    g = np.zeros(K + 1, dtype=complex)
    g[0] = np.exp(f[0])
    k = np.arange(K + 1)
    for n in range(1, K + 1):
        g[n] = np.dot(k[1 : n + 1] * f[1 : n + 1], g[n - 1 :: -1]) / n
    return Jet(x.base, g)


def jet_pow(x: Jet, n: int) -> Jet:
    if n < 0:
        return jet_div(Jet.constant(1.0, x.base, x.order), jet_pow(x, -n))
    result = Jet.constant(1.0, x.base, x.order)
    square = x
    while n:
        if n & 1:
            result = jet_mul(result, square)
        n >>= 1
        if n:
            square = jet_mul(square, square)
    return result


def jet_compose(outer: Jet, inner: Jet, eps: float = DEFAULT.match) -> Jet:
    """Jet of outer∘inner at inner.base.

    ``outer`` must be expanded at the value of ``inner``.  The substitution
    is Horner's scheme in the shifted inner series, which has no constant
    term, so truncation at K is exact.
    """
    if outer.order != inner.order:
        raise StructuralError(f"jet orders differ: {outer.order} vs {inner.order}")
    if abs(outer.base - inner.coeffs[0]) > eps:
        raise StructuralError(
            f"outer jet expanded at {outer.base}, inner jet takes value {inner.coeffs[0]}"
        )
    K = outer.order
    shift = inner.coeffs.copy()
    shift[0] = 0.0
    acc = np.zeros(K + 1, dtype=complex)
    acc[0] = outer.coeffs[K]
    for l in range(K - 1, -1, -1):
        acc = np.convolve(acc, shift)[: K + 1]
        acc[0] += outer.coeffs[l]
    return Jet(inner.base, acc)


def jet_rescale(x: Jet, rho: float) -> Jet:
    """Coefficients of h -> f(base + rho*h); the order of vanishing is unchanged.

    With rho the distance to the boundary, Cauchy's estimate bounds every
    rescaled coefficient of a bounded function by its sup norm.
    """
    return Jet(x.base, x.coeffs * rho ** np.arange(x.order + 1))


def order_of_vanishing(x: Jet, tol: float = DEFAULT.vanish) -> Optional[int]:
    """Index of the first coefficient that is not negligible, or None.

    A coefficient counts as zero when |c_l| <= tol * max(1, max_j |c_j|).
    None means every coefficient up to the jet order vanished.
    """
    mags = np.abs(x.coeffs)
    threshold = tol * max(1.0, float(mags.max()))
    nonzero = np.nonzero(mags > threshold)[0]
    return int(nonzero[0]) if nonzero.size else None
