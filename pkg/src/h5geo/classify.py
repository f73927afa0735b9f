"""Radial quartic profile f(r) = A r^4 + B r^2 + C_q: roots, case tag, trajectory type.

The biquadratic structure means everything reduces to a quadratic in s = r^2,
solved with the sign-aware quadratic formula.  The case tags a-g follow the
closed-form quadrature dispatch; trajectories come in two confinement types
(outside a sphere, or in a spherical shell).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import copysign, sqrt

from .errors import (
    DegenerateOrbitError,
    DomainError,
    ExcludedLevelError,
    InfeasibleProfileError,
    InvariantError,
)
from .reduction import ConservedCharges

EPS_A = 1e-12
EPS_C = 1e-12
EPS_BETA = 1e-10
_ZERO_POLY_TOL = 1e-14


class CaseTag(enum.Enum):
    A_ZERO = "a"                 # A = 0, B > 0
    B_SUB_UNIT_A_C_ZERO = "b"    # 0 < A < 1, C_q = 0
    C_SUPER_UNIT_A_C_ZERO = "c"  # A > 1, C_q = 0
    D_BETA_ONE = "d"             # A > 0, C_q < 0, complex root pair at s = -1
    E_BETA_SQ_LT_1 = "e"         # A > 0, C_q < 0, beta^2 < 1
    F_BETA_SQ_GT_1 = "f"         # A > 0, C_q < 0, beta^2 > 1
    G_NEGATIVE_A = "g"           # A < 0, four real roots
    DEGENERATE = "degenerate"    # double positive root: constant-radius orbit
    INFEASIBLE = "infeasible"    # f(r) < 0 for all r > 0


class TrajectoryKind(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"


@dataclass(frozen=True)
class TrajectoryType:
    kind: TrajectoryKind
    r0: float | None = None  # Type I: motion on r >= r0
    r1: float | None = None  # Type II: motion on r1 <= r <= r2
    r2: float | None = None


@dataclass(frozen=True)
class QuarticProfile:
    """f(r) = a r^4 + b r^2 + c_q with its s = r^2 roots and case tag."""

    a: float
    b: float
    c_q: float
    roots_sq: tuple[float, ...] = field(default=())  # real roots in s, ascending
    tag: CaseTag = CaseTag.INFEASIBLE
    alpha: float | None = None    # sqrt of the relevant nonnegative s-root
    beta_sq: float | None = None  # A>0: -s of the negative root; A<0: largest s-root

    def f(self, r: float) -> float:
        s = r * r
        return (self.a * s + self.b) * s + self.c_q

    def radial_roots(self) -> tuple[float, ...]:
        """Nonnegative radii where f vanishes, ascending."""
        return tuple(sqrt(s + 0.0) + 0.0 for s in self.roots_sq if s >= 0.0)


def _quadratic_roots_s(a: float, b: float, c: float) -> tuple[float, ...]:
    """Real roots of a s^2 + b s + c, ascending, via the cancellation-free formula."""
    if abs(a) < EPS_A:
        if abs(b) < EPS_A:
            return ()
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return ()
    sq = sqrt(disc)
    if b == 0.0:
        hi = sq / (2.0 * a)
        return tuple(sorted((-hi, hi)))
    q = -0.5 * (b + copysign(sq, b))
    r1, r2 = q / a, c / q
    return tuple(sorted((r1, r2)))


def make_profile(a: float, b: float, c_q: float) -> QuarticProfile:
    """Validate coefficients, solve the biquadratic and assign the case tag."""
    if max(abs(a), abs(b), abs(c_q)) < _ZERO_POLY_TOL:
        raise InvariantError("f(r) is the zero polynomial, excluded by the theory")
    if c_q > EPS_C:
        raise InvariantError(f"quartic constant term c_q = {c_q!r} > 0 is impossible")
    if abs(a - 1.0) <= EPS_A:
        raise ExcludedLevelError(
            "A = 1 corresponds to the excluded level c0 = 0 of the vertical momentum"
        )

    roots = _quadratic_roots_s(a, b, c_q)
    tag = CaseTag.INFEASIBLE
    alpha = beta_sq = None

    if abs(a) < EPS_A:
        # f = B r^2 + C_q
        if b > EPS_A:
            tag = CaseTag.A_ZERO
            alpha = sqrt(max(-c_q / b, 0.0))
        else:
            tag = CaseTag.INFEASIBLE
    elif a > 0.0:
        if abs(c_q) <= EPS_C:
            tag = CaseTag.B_SUB_UNIT_A_C_ZERO if a < 1.0 else CaseTag.C_SUPER_UNIT_A_C_ZERO
            alpha = 0.0
        else:
            # C_q < 0: exactly one positive and one negative s-root
            s_neg, s_pos = roots
            alpha = sqrt(s_pos)
            beta_sq = -s_neg
            if abs(beta_sq - 1.0) < EPS_BETA:
                tag = CaseTag.D_BETA_ONE
            elif beta_sq < 1.0:
                tag = CaseTag.E_BETA_SQ_LT_1
            else:
                tag = CaseTag.F_BETA_SQ_GT_1
    else:
        disc = b * b - 4.0 * a * c_q
        if len(roots) < 2 or disc < 0.0:
            tag = CaseTag.INFEASIBLE
        elif disc < 1e-12 * max(b * b, 1e-300):
            tag = CaseTag.DEGENERATE
            alpha = sqrt(max(roots[0], 0.0))
        else:
            s_lo, s_hi = roots
            if s_hi <= 0.0:
                tag = CaseTag.INFEASIBLE
            else:
                tag = CaseTag.G_NEGATIVE_A
                alpha = sqrt(max(s_lo, 0.0)) + 0.0
                beta_sq = s_hi

    return QuarticProfile(a, b, c_q, roots, tag, alpha, beta_sq)


def profile_from_charges(c: ConservedCharges) -> QuarticProfile:
    """Coefficients of the radial quartic from the conserved charges.

    With the general energy level c4 the radial equation reads
    dr^2/dt^2 = 2 c4 f(r) / (r^2 (1 + r^2)); at arc length (c4 = 1/2) the
    coefficients reduce to A = 1 - c0^2/4, B = 1 - c1 + (c2+c3) c0,
    C_q = -c1 - (c2+c3)^2.  The r^4 coefficient comes from squaring the
    momentum sum p_th2 + p_th3 = c2 + c3 - c0 r^2/2, so it carries c0 squared;
    expanding the one-degree-of-freedom energy relation confirms this.
    """
    if c.c4 <= 0.0:
        raise DomainError(f"energy level c4 = {c.c4!r} must be positive")
    two_c4 = 2.0 * c.c4
    a = 1.0 - c.c0 * c.c0 / (8.0 * c.c4)
    b = 1.0 - c.c1 / two_c4 + (c.c2 + c.c3) * c.c0 / two_c4
    c_q = -(c.c1 + (c.c2 + c.c3) ** 2) / two_c4
    return make_profile(a, b, c_q)


def case_tag(p: QuarticProfile) -> CaseTag:
    if p.tag is CaseTag.DEGENERATE:
        raise DegenerateOrbitError(p.alpha if p.alpha is not None else 0.0)
    if p.tag is CaseTag.INFEASIBLE:
        raise InfeasibleProfileError("f(r) < 0 for all r > 0")
    return p.tag


def classify(p: QuarticProfile) -> TrajectoryType:
    """Confinement type of the trajectories with this radial profile."""
    if p.tag is CaseTag.DEGENERATE:
        raise DegenerateOrbitError(p.alpha if p.alpha is not None else 0.0)
    if p.tag is CaseTag.INFEASIBLE:
        raise InfeasibleProfileError("f(r) < 0 for all r > 0")
    if p.tag is CaseTag.G_NEGATIVE_A:
        return TrajectoryType(
            TrajectoryKind.TYPE_II, r1=p.alpha, r2=sqrt(p.beta_sq)
        )
    radial = p.radial_roots()
    r0 = radial[-1] if radial else 0.0
    return TrajectoryType(TrajectoryKind.TYPE_I, r0=r0)
