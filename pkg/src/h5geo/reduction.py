"""Two-stage reduction of the full flow.

Stage one restricts to the level set lam5 = c0 != 0 and shifts the momenta
(p1 = lam1 + c0 y1, p2 = lam2 + c0 y2) so the Hamiltonian loses the explicit
lam5 terms.  Stage two passes to hyperspherical coordinates
(r, theta1, theta2, theta3); the momenta transform by the cotangent lift.  The
resulting bracket is noncanonical (a magnetic-type structure) and the reduced
flow carries four first integrals whose levels are the conserved charges
(c1, c2, c3, c4) together with c0 itself.

Naming note: the level constant is called c0 here and the constant term of the
radial quartic is called c_q, although the source material overloads the same
letter for both.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, cos, hypot, pi, sin, sqrt
from typing import Sequence

import numpy as np

from ._core import hyper_rhs as _hyper_rhs_kernel
from ._core import wsys_rhs as _wsys_rhs_kernel
from .errors import (
    ChartSingularityError,
    FeasibilityError,
    InvariantError,
    LevelSetError,
)
from .heisenberg import CotangentState, GroupElement

CHART_TOL = 1e-10
C1_TOL = 1e-12


@dataclass(frozen=True)
class ReducedCartesianState:
    """Shifted-Cartesian phase point on the level set lam5 = c0."""

    x1: float
    x2: float
    y1: float
    y2: float
    p1: float
    p2: float
    p3: float
    p4: float
    c0: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.x1, self.x2, self.y1, self.y2, self.p1, self.p2, self.p3, self.p4]
        )


@dataclass(frozen=True)
class HypersphericalState:
    """Reduced phase point in the open chart r > 0, theta1 in (0, pi/2)."""

    r: float
    th1: float
    th2: float
    th3: float
    pr: float
    pth1: float
    pth2: float
    pth3: float
    c0: float

    def __post_init__(self):
        if self.r < CHART_TOL:
            raise ChartSingularityError(f"r = {self.r!r} is at the chart boundary r = 0")
        if not CHART_TOL < self.th1 < pi / 2.0 - CHART_TOL:
            raise ChartSingularityError(
                f"theta1 = {self.th1!r} is at the chart boundary {{0, pi/2}}"
            )

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.r, self.th1, self.th2, self.th3, self.pr, self.pth1, self.pth2, self.pth3]
        )

    @classmethod
    def from_array(cls, y: Sequence[float], c0: float) -> "HypersphericalState":
        y = np.asarray(y, dtype=float)
        return cls(*(float(v) for v in y[:8]), c0)


@dataclass(frozen=True)
class ConservedCharges:
    """Level c0 and the values of the four first integrals."""

    c0: float
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if self.c0 == 0.0:
            raise LevelSetError("conserved charges require c0 != 0")
        if self.c1 < -C1_TOL:
            raise InvariantError(
                f"c1 = {self.c1!r} violates the nonnegativity of the first integral"
            )


def to_reduced(s: CotangentState) -> ReducedCartesianState:
    """Momentum shift onto the level set lam5 = c0; positions are copied."""
    c0 = s.lam[4]
    if c0 == 0.0:
        raise LevelSetError("reduction requires lam5 != 0")
    q = s.q
    return ReducedCartesianState(
        q.x1,
        q.x2,
        q.y1,
        q.y2,
        s.lam[0] + c0 * q.y1,
        s.lam[1] + c0 * q.y2,
        s.lam[2],
        s.lam[3],
        c0,
    )


def from_reduced(s: ReducedCartesianState, z: float = 0.0) -> CotangentState:
    """Inverse of `to_reduced` (z is not tracked by the reduced flow)."""
    return CotangentState(
        GroupElement(s.x1, s.x2, s.y1, s.y2, z),
        (s.p1 - s.c0 * s.y1, s.p2 - s.c0 * s.y2, s.p3, s.p4, s.c0),
    )


def hamiltonian_HC(s: ReducedCartesianState) -> float:
    n = 1.0 + s.x1 * s.x1 + s.x2 * s.x2 + s.y1 * s.y1 + s.y2 * s.y2
    w_num = s.p3 * s.x1 + s.p4 * s.x2 - s.p1 * s.y1 - s.p2 * s.y2
    return 0.5 * (
        s.p1 * s.p1 + s.p2 * s.p2 + s.p3 * s.p3 + s.p4 * s.p4 - w_num * w_num / n
    )


def rhs_HC(s: ReducedCartesianState) -> np.ndarray:
    """The W-system: Hamilton equations of H_C under the shifted bracket."""
    return np.array(
        _wsys_rhs_kernel(s.x1, s.x2, s.y1, s.y2, s.p1, s.p2, s.p3, s.p4, s.c0)
    )


def _chart_jacobian(r, th1, th2, th3):
    """d(x1, x2, y1, y2)/d(r, th1, th2, th3)."""
    c1, s1 = cos(th1), sin(th1)
    c2, s2 = cos(th2), sin(th2)
    c3, s3 = cos(th3), sin(th3)
    return np.array(
        [
            [c1 * c2, -r * s1 * c2, -r * c1 * s2, 0.0],
            [s1 * c3, r * c1 * c3, 0.0, -r * s1 * s3],
            [c1 * s2, -r * s1 * s2, r * c1 * c2, 0.0],
            [s1 * s3, r * c1 * s3, 0.0, r * s1 * c3],
        ]
    )


def cart_to_hyper(s: ReducedCartesianState) -> HypersphericalState:
    """Hyperspherical chart; momenta by the cotangent lift (transpose Jacobian)."""
    rho1 = hypot(s.x1, s.y1)
    rho2 = hypot(s.x2, s.y2)
    r = hypot(rho1, rho2)
    if r < CHART_TOL:
        raise ChartSingularityError("r = 0 is outside the hyperspherical chart")
    th1 = atan2(rho2, rho1)
    if not CHART_TOL < th1 < pi / 2.0 - CHART_TOL:
        raise ChartSingularityError(
            f"theta1 = {th1!r} is at the chart boundary {{0, pi/2}}"
        )
    th2 = atan2(s.y1, s.x1)
    th3 = atan2(s.y2, s.x2)
    jac = _chart_jacobian(r, th1, th2, th3)
    p_cart = np.array([s.p1, s.p2, s.p3, s.p4])
    p_hyper = jac.T @ p_cart
    return HypersphericalState(r, th1, th2, th3, *(float(v) for v in p_hyper), s.c0)


def hyper_to_cart(s: HypersphericalState) -> ReducedCartesianState:
    c1, s1 = cos(s.th1), sin(s.th1)
    x1 = s.r * c1 * cos(s.th2)
    y1 = s.r * c1 * sin(s.th2)
    x2 = s.r * s1 * cos(s.th3)
    y2 = s.r * s1 * sin(s.th3)
    jac = _chart_jacobian(s.r, s.th1, s.th2, s.th3)
    p_hyper = np.array([s.pr, s.pth1, s.pth2, s.pth3])
    p_cart = np.linalg.solve(jac.T, p_hyper)
    return ReducedCartesianState(x1, x2, y1, y2, *(float(v) for v in p_cart), s.c0)


def hamiltonian_hyper(s: HypersphericalState) -> float:
    c1, s1 = cos(s.th1), sin(s.th1)
    r2 = s.r * s.r
    psum = s.pth2 + s.pth3
    return 0.5 * (
        s.pr * s.pr
        + s.pth1 * s.pth1 / r2
        + (s.pth2 * s.pth2 / (c1 * c1) + s.pth3 * s.pth3 / (s1 * s1)) / r2
        - psum * psum / (1.0 + r2)
    )


def structure_matrix(s: HypersphericalState) -> np.ndarray:
    """Noncanonical Poisson tensor in the ordering (r, th1, th2, th3, p_r, p_th1, p_th2, p_th3)."""
    c1, s1 = cos(s.th1), sin(s.th1)
    c0 = s.c0
    r = s.r
    m = np.zeros((8, 8))
    for i in range(4):
        m[i, 4 + i] = 1.0
    m[4, 6] = r * c0 * c1 * c1
    m[4, 7] = r * c0 * s1 * s1
    m[5, 6] = -r * r * c0 * s1 * c1
    m[5, 7] = r * r * c0 * s1 * c1
    return m - m.T


def rhs_hyper(s: HypersphericalState) -> np.ndarray:
    """Reduced Hamilton equations; equals structure_matrix . grad(hamiltonian_hyper)."""
    return np.array(
        _hyper_rhs_kernel(s.r, s.th1, s.th2, s.th3, s.pr, s.pth1, s.pth2, s.pth3, s.c0)
    )


def integrals(s: HypersphericalState) -> tuple[float, float, float, float]:
    """Values of the four first integrals (I1, I2, I3, I4) at the state."""
    c1, s1 = cos(s.th1), sin(s.th1)
    psum = s.pth2 + s.pth3
    i1 = (
        s.pth1 * s.pth1
        + s.pth2 * s.pth2 / (c1 * c1)
        + s.pth3 * s.pth3 / (s1 * s1)
        - psum * psum
    )
    half_moment = 0.5 * s.c0 * s.r * s.r
    i2 = s.pth2 + half_moment * c1 * c1
    i3 = s.pth3 + half_moment * s1 * s1
    return i1, i2, i3, hamiltonian_hyper(s)


def charges_from_state(s: HypersphericalState) -> ConservedCharges:
    i1, i2, i3, i4 = integrals(s)
    return ConservedCharges(s.c0, i1, i2, i3, i4)


def theta1_radicand(c: ConservedCharges, th1: float) -> float:
    """c1 + (c2+c3)^2 - c2^2/cos^2 - c3^2/sin^2; equals (r^2 d(theta1)/dt)^2 >= 0 on orbits."""
    cs, sn = cos(th1), sin(th1)
    return (
        c.c1
        + (c.c2 + c.c3) ** 2
        - c.c2 * c.c2 / (cs * cs)
        - c.c3 * c.c3 / (sn * sn)
    )


def state_from_charges(
    c: ConservedCharges,
    r0: float,
    sign_pr: int = 1,
    sign_pth1: int = 1,
) -> HypersphericalState:
    """A representative state with the given charges at radius r0.

    Convention: theta2 = theta3 = 0 and theta1 maximizes the theta1 radicand
    (tan^2 theta1 = |c3/c2| when both are nonzero, else pi/4).
    """
    if r0 <= 0.0:
        raise FeasibilityError(f"radius r0 = {r0!r} must be positive")
    if abs(c.c2) > 1e-14 and abs(c.c3) > 1e-14:
        th1 = np.arctan(sqrt(abs(c.c3 / c.c2)))
    else:
        th1 = pi / 4.0
    rad = theta1_radicand(c, th1)
    if rad < -1e-12:
        raise FeasibilityError(
            f"charges admit no state: theta1 radicand maximum is {rad!r} < 0"
        )
    r2 = r0 * r0
    pr_sq = (
        2.0 * c.c4
        - c.c1 / r2
        - (c.c2 + c.c3 - 0.5 * c.c0 * r2) ** 2 / (r2 * (1.0 + r2))
    )
    if pr_sq < -1e-10:
        raise FeasibilityError(
            f"radius r0 = {r0!r} is outside the admissible region (pr^2 = {pr_sq!r})"
        )
    cs, sn = cos(th1), sin(th1)
    half_moment = 0.5 * c.c0 * r2
    return HypersphericalState(
        r0,
        th1,
        0.0,
        0.0,
        (1 if sign_pr >= 0 else -1) * sqrt(max(pr_sq, 0.0)),
        (1 if sign_pth1 >= 0 else -1) * sqrt(max(rad, 0.0)),
        c.c2 - half_moment * cs * cs,
        c.c3 - half_moment * sn * sn,
        c.c0,
    )
