"""Incomplete elliptic integrals, Jacobi elliptic functions and their inverses.

Conventions: F(phi, k) and E(phi, k) use the modulus k (not the parameter
m = k^2).  The twelve ratio functions pq(u, k) with p, q in {s, c, d, n} follow
the standard glaisher notation, e.g. sc = sn/cn and ns = 1/sn.  Inversion is on
the principal quarter-period branch [0, K].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import asin, atan, atanh, cosh, inf, pi, sin, sinh, sqrt, tanh

from ._core import (
    am_sncndn,
    am_sncndn_degenerate,
    complete_k,
    ellint_e_core,
    ellint_f_core,
)
from .errors import DivergenceError, DomainError, PoleError

_POLE_TOL = 1e-13
_LETTERS = ("s", "c", "d", "n")


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus k with its complementary modulus k' = sqrt(1 - k^2)."""

    k: float
    k_comp: float

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        if not 0.0 <= k <= 1.0:
            raise DomainError(f"modulus must satisfy 0 <= k <= 1, got {k!r}")
        return cls(k, sqrt((1.0 - k) * (1.0 + k)))


@dataclass(frozen=True)
class JacobiTriple:
    """Values of sn, cn, dn at argument u with modulus k."""

    sn: float
    cn: float
    dn: float
    u: float
    k: float


def _kval(k) -> float:
    if isinstance(k, Modulus):
        return k.k
    kf = float(k)
    if not 0.0 <= kf <= 1.0:
        raise DomainError(f"modulus must satisfy 0 <= k <= 1, got {k!r}")
    return kf


def ellint_F(phi: float, k) -> float:
    """Incomplete elliptic integral of the first kind, quasi-periodic in phi."""
    kf = _kval(k)
    if kf == 1.0:
        if abs(phi) >= pi / 2.0:
            raise DivergenceError(
                f"F(phi, 1) diverges for |phi| >= pi/2, got phi = {phi!r}"
            )
        return atanh(sin(phi))
    return ellint_f_core(phi, kf)


def ellint_E(phi: float, k) -> float:
    """Incomplete elliptic integral of the second kind."""
    kf = _kval(k)
    if kf == 1.0:
        # E(phi, 1) = sin(phi) on [-pi/2, pi/2], extended by E(phi + pi) = E(phi) + 2
        n = round(phi / pi)
        return sin(phi - pi * n) + 2.0 * n
    return ellint_e_core(phi, kf)


def complete_K(k) -> float:
    """Complete elliptic integral of the first kind K(k); infinite at k = 1."""
    kf = _kval(k)
    if kf == 1.0:
        return inf
    return complete_k(kf)


def complete_E(k) -> float:
    """Complete elliptic integral of the second kind E(k)."""
    kf = _kval(k)
    if kf == 1.0:
        return 1.0
    return ellint_e_core(pi / 2.0, kf)


def jacobi_am(u: float, k) -> float:
    """Jacobi amplitude: the inverse of phi -> F(phi, k), for all real u."""
    kf = _kval(k)
    if kf == 1.0:
        return atan(sinh(u))
    return am_sncndn(u, kf)[0]


def jacobi_sncndn(u: float, k) -> JacobiTriple:
    """The Jacobi triple (sn, cn, dn) at argument u."""
    kf = _kval(k)
    if kf == 1.0:
        _, sn, cn, dn = am_sncndn_degenerate(u)
    else:
        _, sn, cn, dn = am_sncndn(u, kf)
    return JacobiTriple(sn, cn, dn, u, kf)


def jacobi_E(u: float, k) -> float:
    """Jacobi epsilon E(u) = E(am(u, k), k) = integral of dn^2 from 0 to u."""
    kf = _kval(k)
    if kf == 1.0:
        return tanh(u)
    return ellint_e_core(am_sncndn(u, kf)[0], kf)


def jacobi_ratio(p: str, q: str, u: float, k) -> float:
    """The ratio function pq(u, k), e.g. jacobi_ratio('s', 'c', u, k) = sn/cn."""
    if p not in _LETTERS or q not in _LETTERS or p == q:
        raise DomainError(f"invalid ratio pair ({p!r}, {q!r})")
    t = jacobi_sncndn(u, k)
    vals = {"s": t.sn, "c": t.cn, "d": t.dn, "n": 1.0}
    den = vals[q]
    if abs(den) < _POLE_TOL:
        raise PoleError(f"{p}{q}(u, k) has a pole at u = {u!r}: {q}n vanishes")
    return vals[p] / den


def invert_ratio(p: str, q: str, value: float, k) -> float:
    """Principal-branch inverse of a ratio function on u in [0, K].

    Supported pairs: ns, nc, nd, sc (the ones appearing in the radial
    quadrature formulas).  Raises DomainError when `value` is outside the range
    of the function on [0, K].
    """
    kf = _kval(k)
    pair = p + q
    if pair == "sc":
        if value < 0.0:
            raise DomainError(
                f"sc inverse needs value in [0, inf) on the principal branch, got {value!r}"
            )
        return ellint_F(atan(value), kf)
    if pair == "ns":
        if value < 1.0:
            raise DomainError(
                f"ns inverse needs value in [1, inf) on the principal branch, got {value!r}"
            )
        return ellint_F(asin(1.0 / value), kf)
    if pair == "nc":
        if value < 1.0:
            raise DomainError(
                f"nc inverse needs value in [1, inf) on the principal branch, got {value!r}"
            )
        phi = _acos_clipped(1.0 / value)
        return ellint_F(phi, kf)
    if pair == "nd":
        kc = sqrt((1.0 - kf) * (1.0 + kf))
        hi = inf if kc == 0.0 else 1.0 / kc
        if not 1.0 <= value <= hi * (1.0 + 1e-12):
            raise DomainError(
                f"nd inverse needs value in [1, {hi!r}] on the principal branch, got {value!r}"
            )
        if kf == 0.0:
            return 0.0
        sn2 = (1.0 - 1.0 / (value * value)) / (kf * kf)
        sn2 = min(max(sn2, 0.0), 1.0)
        return ellint_F(asin(sqrt(sn2)), kf)
    raise DomainError(f"inversion of {pair!r} is not supported")


def _acos_clipped(x: float) -> float:
    from math import acos

    return acos(min(1.0, max(-1.0, x)))
