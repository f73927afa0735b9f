"""Closed-form solution pipeline: r(t) by elliptic quadrature, theta angles, ambient lift.

The radial map t(r) is assembled per case tag from an antiderivative tau(r)
with tau'(r) = r sqrt(1+r^2)/sqrt(f(r)), normalized so tau(r_lo) = 0 at the
inner admissible radius; physical time is t = t0 +- (tau(r) - tau(r0))/sigma
with sigma = sqrt(2 C4).  Every case formula below was re-derived by
differentiation against tau'; where the derivation disagrees with the printed
source (moduli of cases b, c, e, g) the derived form is used and the
discrepancy is documented in the project notes.

theta1 admits an exact solution: v = sin^2(theta1) satisfies a quadratic
oscillator in the rescaled time s(t) = integral dt/r^2, so
v = v1 + (v2 - v1) sin^2(phi0 + sqrt(K) s) with K = C1 + (C2+C3)^2 and
v1 <= v2 the roots of Q(v) = -K v^2 + (K - C2^2 + C3^2) v - C3^2.  theta2 and
theta3 are then single quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import asin, copysign, fmod, inf, sin, sqrt
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import brentq

from .classify import (
    CaseTag,
    QuarticProfile,
    TrajectoryKind,
    case_tag,
    classify,
    profile_from_charges,
)
from .elliptic import Modulus, invert_ratio, jacobi_E, jacobi_sncndn
from .errors import (
    ChartSingularityError,
    DomainError,
    FeasibilityError,
    InvariantError,
)
from .heisenberg import full_rhs
from .reduction import (
    ConservedCharges,
    HypersphericalState,
    charges_from_state,
    from_reduced,
    hyper_to_cart,
)
from .trace import AmbientTrace, GeodesicTrace

_BRENTQ_KW = dict(xtol=1e-13, rtol=8.9e-16)
_CHARGE_MATCH_TOL = 1e-9


# ---------------------------------------------------------------------------
# raw antiderivatives tau(r), one per case tag
# ---------------------------------------------------------------------------


def _tau_case_a(p: QuarticProfile) -> Callable[[float], float]:
    b = p.b
    a = -p.c_q / b  # squared inner radius
    def tau(r: float) -> float:
        r2 = r * r
        s1 = sqrt(max(1.0 + r2, 0.0))
        s2 = sqrt(max(r2 - a, 0.0))
        return 0.5 / sqrt(b) * (s1 * s2 + (1.0 + a) * np.log(s1 + s2))
    return tau


def _tau_case_b(p: QuarticProfile) -> Callable[[float], float]:
    # 0 < A < 1, C_q = 0: tau = u + (dn sc - E)/A with sc u = r, k^2 = 1 - A
    a = p.a
    k = Modulus.from_k(sqrt(1.0 - a))
    def tau(r: float) -> float:
        u = invert_ratio("s", "c", r, k)
        t = jacobi_sncndn(u, k)
        sc = t.sn / t.cn
        return u + (t.dn * sc - jacobi_E(u, k)) / a
    return tau


def _tau_case_c(p: QuarticProfile) -> Callable[[float], float]:
    # A > 1, C_q = 0: tau = (u + dn sc - E)/sqrt(A) with sc u = sqrt(A) r, k^2 = 1 - 1/A
    a = p.a
    sqa = sqrt(a)
    k = Modulus.from_k(sqrt(1.0 - 1.0 / a))
    def tau(r: float) -> float:
        u = invert_ratio("s", "c", sqa * r, k)
        t = jacobi_sncndn(u, k)
        sc = t.sn / t.cn
        return (u + t.dn * sc - jacobi_E(u, k)) / sqa
    return tau


def _tau_case_d(p: QuarticProfile) -> Callable[[float], float]:
    a = p.a
    al2 = p.alpha * p.alpha
    def tau(r: float) -> float:
        return sqrt(max(r * r - al2, 0.0) / a)
    return tau


def _tau_case_e(p: QuarticProfile) -> Callable[[float], float]:
    # A > 0, C_q < 0, beta^2 < 1: ns u = sqrt((r^2+1)/(alpha^2+1)),
    # k^2 = (1 - beta^2)/(alpha^2 + 1); tau decreasing in u, sign fixed below
    a = p.a
    al2p1 = p.alpha * p.alpha + 1.0
    k = Modulus.from_k(sqrt((1.0 - p.beta_sq) / al2p1))
    pref = sqrt(al2p1 / a)
    def tau(r: float) -> float:
        u = invert_ratio("n", "s", sqrt((r * r + 1.0) / al2p1), k)
        t = jacobi_sncndn(u, k)
        cs = t.cn / t.sn
        return -pref * (u - jacobi_E(u, k) - t.dn * cs)
    return tau


def _tau_case_f(p: QuarticProfile) -> Callable[[float], float]:
    # A > 0, C_q < 0, beta^2 > 1: nc u = sqrt((r^2+1)/(alpha^2+1)),
    # k'^2 = (alpha^2+1)/(alpha^2+beta^2)
    a = p.a
    al2p1 = p.alpha * p.alpha + 1.0
    denom = p.alpha * p.alpha + p.beta_sq
    kc2 = al2p1 / denom
    k = Modulus.from_k(sqrt(1.0 - kc2))
    pref = sqrt(denom / a)
    def tau(r: float) -> float:
        u = invert_ratio("n", "c", max(sqrt((r * r + 1.0) / al2p1), 1.0), k)
        t = jacobi_sncndn(u, k)
        sc = t.sn / t.cn
        return pref * (kc2 * u - jacobi_E(u, k) + t.dn * sc)
    return tau


def _tau_case_g(p: QuarticProfile) -> Callable[[float], float]:
    # A < 0, four real roots: nd u = sqrt((r^2+1)/(alpha^2+1)),
    # k^2 = (beta^2 - alpha^2)/(beta^2 + 1)
    abs_a = -p.a
    al2p1 = p.alpha * p.alpha + 1.0
    b2p1 = p.beta_sq + 1.0
    k = Modulus.from_k(sqrt((p.beta_sq - p.alpha * p.alpha) / b2p1))
    pref = sqrt(b2p1 / abs_a)
    k2 = k.k * k.k
    def tau(r: float) -> float:
        u = invert_ratio("n", "d", max(sqrt((r * r + 1.0) / al2p1), 1.0), k)
        t = jacobi_sncndn(u, k)
        cd = t.cn / t.dn
        return pref * (jacobi_E(u, k) - k2 * t.sn * cd)
    return tau


_TAU_BUILDERS = {
    CaseTag.A_ZERO: _tau_case_a,
    CaseTag.B_SUB_UNIT_A_C_ZERO: _tau_case_b,
    CaseTag.C_SUPER_UNIT_A_C_ZERO: _tau_case_c,
    CaseTag.D_BETA_ONE: _tau_case_d,
    CaseTag.E_BETA_SQ_LT_1: _tau_case_e,
    CaseTag.F_BETA_SQ_GT_1: _tau_case_f,
    CaseTag.G_NEGATIVE_A: _tau_case_g,
}


def _admissible_range(p: QuarticProfile) -> tuple[float, float]:
    traj = classify(p)
    if traj.kind is TrajectoryKind.TYPE_II:
        return traj.r1, traj.r2
    return traj.r0, inf


def tau_of_radius(p: QuarticProfile, r: float) -> float:
    """Normalized antiderivative of r sqrt(1+r^2)/sqrt(f): increasing, 0 at r_lo."""
    tag = case_tag(p)
    r_lo, r_hi = _admissible_range(p)
    if not r_lo <= r <= r_hi:
        raise DomainError(
            f"radius {r!r} outside the admissible region [{r_lo!r}, {r_hi!r}]"
        )
    raw = _TAU_BUILDERS[tag](p)
    return raw(r) - raw(r_lo)


def time_of_radius(
    p: QuarticProfile, r: float, sign: int = 1, t0: float = 0.0, c4: float = 0.5
) -> float:
    """Closed-form t(r) on one monotone branch; sign is the sign of dr/dt."""
    sigma = sqrt(2.0 * c4)
    return t0 + (1.0 if sign >= 0 else -1.0) * tau_of_radius(p, r) / sigma


class RadialSolution:
    """r(t) and p_r(t) anchored at (t0, r0, sign of dr/dt), with branch stitching.

    The phase psi = psi0 + sigma (t - t0) tracks the normalized antiderivative;
    r(t) folds at turning radii (simple roots of f with r > 0).  Reaching the
    chart boundary r = 0 (possible when f(0) = 0) ends the covered time span;
    `exit_times` gives the boundary times (None for no exit on that side).
    """

    def __init__(
        self,
        profile: QuarticProfile,
        r0: float,
        sign0: int = 1,
        t0: float = 0.0,
        c4: float = 0.5,
    ):
        self.profile = profile
        self.tag = case_tag(profile)
        self.traj = classify(profile)
        self.t0 = float(t0)
        self.sigma = sqrt(2.0 * c4)
        self.r_lo, self.r_hi = _admissible_range(profile)
        if not self.r_lo <= r0 <= self.r_hi:
            raise DomainError(
                f"r0 = {r0!r} outside the admissible region [{self.r_lo!r}, {self.r_hi!r}]"
            )
        raw = _TAU_BUILDERS[self.tag](profile)
        off = raw(self.r_lo)
        self._tau = lambda r: raw(r) - off
        self.tau_hi = self._tau(self.r_hi) if self.r_hi < inf else inf
        self.fold_lo = self.r_lo > 0.0  # r_lo = 0 is a chart exit, not a turning point
        s0 = 1 if sign0 >= 0 else -1
        tau0 = self._tau(r0)
        if self.traj.kind is TrajectoryKind.TYPE_II:
            # phase runs over [0, 2 tau_hi) per period, descending branch mirrored
            self.psi0 = tau0 if s0 > 0 else 2.0 * self.tau_hi - tau0
        else:
            self.psi0 = s0 * tau0
        self.exit_times = self._exit_times()

    @property
    def period(self) -> float:
        """Radial period of a Type II solution (requires both turning radii > 0)."""
        if self.traj.kind is not TrajectoryKind.TYPE_II or not self.fold_lo:
            raise DomainError("period is defined only for Type II with r1 > 0")
        return 2.0 * self.tau_hi / self.sigma

    def _exit_times(self) -> tuple[float | None, float | None]:
        if self.fold_lo:
            return (None, None)
        # the boundary r = 0 sits at psi = 0 (and psi = 2 tau_hi for Type II)
        t_cross = self.t0 - self.psi0 / self.sigma
        if self.traj.kind is TrajectoryKind.TYPE_II:
            # psi0 is folded into [0, 2 tau_hi], so the crossings bracket t0
            t_hi = self.t0 + (2.0 * self.tau_hi - self.psi0) / self.sigma
            return (t_cross, t_hi)
        # Type I: outward motion (psi0 >= 0) exited in the past, inward motion
        # (psi0 < 0) will exit in the future
        return (t_cross, None) if self.psi0 >= 0.0 else (None, t_cross)

    def _phase(self, t: float) -> float:
        return self.psi0 + self.sigma * (t - self.t0)

    def _check_covered(self, t: float):
        lo, hi = self.exit_times
        if (lo is not None and t < lo - 1e-12) or (hi is not None and t > hi + 1e-12):
            raise ChartSingularityError(
                f"t = {t!r} is outside the covered span (chart exit at r = 0 "
                f"between times {lo!r} and {hi!r})"
            )

    def _fold(self, t: float) -> tuple[float, float]:
        """Map time to (tau value in [0, tau_hi], sign of dr/dt)."""
        self._check_covered(t)
        psi = self._phase(t)
        if self.traj.kind is TrajectoryKind.TYPE_II:
            m = fmod(psi, 2.0 * self.tau_hi)
            if m < 0.0:
                m += 2.0 * self.tau_hi
            return (m, 1.0) if m <= self.tau_hi else (2.0 * self.tau_hi - m, -1.0)
        return abs(psi), copysign(1.0, psi)

    def _invert_tau(self, target: float) -> float:
        if target <= 0.0:
            return self.r_lo
        if self.r_hi < inf:
            lo, hi = self.r_lo, self.r_hi
            if target >= self.tau_hi:
                return self.r_hi
        else:
            lo = self.r_lo
            hi = max(2.0 * self.r_lo, 1.0)
            while self._tau(hi) < target:
                lo = hi
                hi *= 2.0
        return float(brentq(lambda r: self._tau(r) - target, lo, hi, **_BRENTQ_KW))

    def radius_of_time(self, t: float) -> float:
        m, _ = self._fold(t)
        return self._invert_tau(m)

    def pr_of_time(self, t: float) -> float:
        m, sgn = self._fold(t)
        r = self._invert_tau(m)
        fr = max(self.profile.f(r), 0.0)
        if r <= 0.0:
            raise ChartSingularityError("p_r is undefined at the chart boundary r = 0")
        return sgn * self.sigma * sqrt(fr) / (r * sqrt(1.0 + r * r))

    def __call__(self, t):
        tt = np.asarray(t, dtype=float)
        if tt.ndim == 0:
            return self.radius_of_time(float(tt))
        return np.array([self.radius_of_time(tv) for tv in tt])


def radius_of_time(sol: RadialSolution, t: float) -> float:
    return sol.radius_of_time(t)


# ---------------------------------------------------------------------------
# exact theta1 oscillator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Theta1Solution:
    """v = sin^2(theta1) as an exact oscillator in the rescaled time s."""

    v1: float
    v2: float
    omega: float  # sqrt(K)
    phi0: float
    constant: bool = False

    def v(self, s: float) -> float:
        if self.constant:
            return self.v1
        sn = sin(self.phi0 + self.omega * s)
        return self.v1 + (self.v2 - self.v1) * sn * sn

    def theta1(self, s: float) -> float:
        return asin(sqrt(min(max(self.v(s), 0.0), 1.0)))

    def pth1(self, s: float) -> float:
        """p_theta1 = d(theta1)/ds = +-sqrt((v-v1)(v2-v) K / (v(1-v))), sign of dv/ds.

        The ratios are paired so that a root of Q at the chart boundary (v1 = 0
        or v2 = 1) cancels instead of dividing by zero.
        """
        if self.constant:
            return 0.0
        phi = self.phi0 + self.omega * s
        v = self.v(s)
        t1 = (v - self.v1) / v if v > 1e-300 else (1.0 if self.v1 == 0.0 else 0.0)
        one_mv = 1.0 - v
        t2 = (self.v2 - v) / one_mv if one_mv > 1e-300 else (1.0 if self.v2 == 1.0 else 0.0)
        mag = self.omega * sqrt(max(t1 * t2, 0.0))
        s2 = sin(2.0 * phi)
        return copysign(mag, s2) if s2 != 0.0 else mag


def theta1_solution(c: ConservedCharges, th1_0: float, sign1: int = 1) -> Theta1Solution:
    """Fit the oscillator to the initial angle and the sign of p_theta1."""
    k_big = c.c1 + (c.c2 + c.c3) ** 2
    if k_big < -1e-12:
        raise InvariantError(f"K = C1 + (C2+C3)^2 = {k_big!r} < 0")
    v0 = sin(th1_0) ** 2
    if k_big <= 1e-14:
        return Theta1Solution(v0, v0, 0.0, 0.0, constant=True)
    # Q(v) = -K v^2 + (K - C2^2 + C3^2) v - C3^2, roots v1 <= v2 in [0, 1]
    bq = k_big - c.c2 * c.c2 + c.c3 * c.c3
    cq = c.c3 * c.c3
    disc = bq * bq - 4.0 * k_big * cq
    if disc < 0.0:
        if disc < -1e-10 * max(bq * bq, 1.0):
            raise FeasibilityError("theta1 oscillator has no real turning values")
        disc = 0.0
    sq = sqrt(disc)
    # roots of K v^2 - bq v + cq by the cancellation-free formula
    q = 0.5 * (bq + copysign(sq, bq)) if bq != 0.0 else 0.5 * sq
    if q == 0.0:
        v1 = v2 = 0.0
    else:
        v1, v2 = sorted((q / k_big, cq / q))
    v1 = min(max(v1, 0.0), 1.0)
    v2 = min(max(v2, 0.0), 1.0)
    if v2 - v1 < 1e-14:
        return Theta1Solution(v0, v0, 0.0, 0.0, constant=True)
    ratio = (v0 - v1) / (v2 - v1)
    if not -1e-9 <= ratio <= 1.0 + 1e-9:
        raise FeasibilityError(
            f"initial theta1 = {th1_0!r} is outside the oscillator range "
            f"[asin sqrt {v1!r}, asin sqrt {v2!r}]"
        )
    phi0 = asin(sqrt(min(max(ratio, 0.0), 1.0)))
    if sign1 < 0:
        phi0 = -phi0  # descending start: sin(2 phi0) < 0
    return Theta1Solution(v1, v2, sqrt(k_big), phi0)


# ---------------------------------------------------------------------------
# angle quadratures
# ---------------------------------------------------------------------------


def _refine_grid(times: np.ndarray, refine: int) -> tuple[np.ndarray, np.ndarray]:
    """Split every interval into `refine` parts; also return indices of the originals."""
    if times.size == 1:
        return times.copy(), np.array([0])
    parts = [np.array([times[0]])]
    for i in range(times.size - 1):
        parts.append(np.linspace(times[i], times[i + 1], refine + 1)[1:])
    fine = np.concatenate(parts)
    idx = np.arange(0, fine.size, refine)
    return fine, idx


def rescaled_time(
    sol: RadialSolution, times: np.ndarray, refine: int = 8
) -> np.ndarray:
    """s(t) = integral dt'/r(t')^2 from times[0], sampled on the grid.

    Computed by composite Simpson on a refined grid; r(t) is smooth through
    turning points, so the rule converges at full order.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 1:
        return np.zeros(1)
    fine, idx = _refine_grid(times, refine)
    inv_r2 = np.array([1.0 / sol.radius_of_time(t) ** 2 for t in fine])
    s_fine = cumulative_simpson(inv_r2, x=fine, initial=0.0)
    return s_fine[idx]


def theta1_along(
    c: ConservedCharges,
    times: np.ndarray,
    th1_0: float,
    sign1: int = 1,
    s_vals: np.ndarray | None = None,
    sol: RadialSolution | None = None,
    r_path: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(theta1, p_theta1) sampled on the grid, via the exact oscillator.

    The rescaled time may be given directly (s_vals), computed from a radial
    solution (sol), or approximated from a sampled radius path (r_path).
    """
    times = np.asarray(times, dtype=float)
    if s_vals is None:
        if sol is not None:
            s_vals = rescaled_time(sol, times)
        elif r_path is not None:
            s_vals = cumulative_simpson(
                1.0 / np.asarray(r_path, dtype=float) ** 2, x=times, initial=0.0
            )
        else:
            raise DomainError("theta1_along needs one of s_vals, sol, r_path")
    osc = theta1_solution(c, th1_0, sign1)
    th1 = np.array([osc.theta1(s) for s in s_vals])
    pth1 = np.array([osc.pth1(s) for s in s_vals])
    return th1, pth1


def _theta23_rates(
    c: ConservedCharges, r: float, v: float
) -> tuple[float, float]:
    """(d theta2/dt, d theta3/dt) from the conserved charges.

    This is the charge-substituted form of the reduced Hamilton equations:
    theta2' = C2/(r^2 cos^2 th1) - (C2 + C3 + C0/2)/(1 + r^2), symmetrically
    for theta3 (see theta23_variant_audit for the printed alternatives).
    """
    r2 = r * r
    common = (c.c2 + c.c3 + 0.5 * c.c0) / (1.0 + r2)
    d2 = c.c2 / (r2 * (1.0 - v)) - common
    d3 = c.c3 / (r2 * v) - common
    return d2, d3


def theta23_along(
    c: ConservedCharges,
    times: np.ndarray,
    th2_0: float,
    th3_0: float,
    sol: RadialSolution | None = None,
    osc: Theta1Solution | None = None,
    r_path: np.ndarray | None = None,
    th1_path: np.ndarray | None = None,
    refine: int = 8,
) -> tuple[np.ndarray, np.ndarray]:
    """(theta2, theta3) sampled on the grid by quadrature of the charge rates.

    Either the analytic objects (sol, osc) or sampled paths (r_path, th1_path)
    must be supplied; the analytic route uses composite Simpson on a refined
    grid, the sampled route composite Simpson on the given grid.
    """
    times = np.asarray(times, dtype=float)
    if sol is not None and osc is not None:
        if times.size == 1:
            return np.array([th2_0]), np.array([th3_0])
        fine, idx = _refine_grid(times, refine)
        r_fine = np.array([sol.radius_of_time(t) for t in fine])
        s_fine = cumulative_simpson(1.0 / r_fine ** 2, x=fine, initial=0.0)
        rates = np.array(
            [_theta23_rates(c, r, osc.v(s)) for r, s in zip(r_fine, s_fine)]
        )
        th2 = cumulative_simpson(rates[:, 0], x=fine, initial=0.0)
        th3 = cumulative_simpson(rates[:, 1], x=fine, initial=0.0)
        return th2_0 + th2[idx], th3_0 + th3[idx]
    if r_path is None or th1_path is None:
        raise DomainError("theta23_along needs (sol, osc) or (r_path, th1_path)")
    r_path = np.asarray(r_path, dtype=float)
    v_path = np.sin(np.asarray(th1_path, dtype=float)) ** 2
    rates = np.array([_theta23_rates(c, r, v) for r, v in zip(r_path, v_path)])
    th2 = cumulative_simpson(rates[:, 0], x=times, initial=0.0)
    th3 = cumulative_simpson(rates[:, 1], x=times, initial=0.0)
    return th2_0 + th2, th3_0 + th3


def theta23_variant_audit(
    c: ConservedCharges,
    times: np.ndarray,
    r_path: np.ndarray,
    th1_path: np.ndarray,
    th2_path: np.ndarray,
    th3_path: np.ndarray,
) -> dict[str, dict[str, float]]:
    """Sup-norm error of the three printed theta2'/theta3' variants vs a reference path.

    variants (theta2 shown; theta3 is symmetric in C3, sin^2):
      bare-c0:        C2/(r^2 cos^2 th1) - (C2+C3)/(1+r^2) - C0
      no-c0:          C2/(r^2 cos^2 th1) - (C2+C3)/(1+r^2)
      substituted:    C2/(r^2 cos^2 th1) - (C2+C3+C0/2)/(1+r^2)
    The reference path normally comes from the ODE oracle.
    """
    times = np.asarray(times, dtype=float)
    r = np.asarray(r_path, dtype=float)
    v = np.sin(np.asarray(th1_path, dtype=float)) ** 2
    r2 = r * r
    base2 = c.c2 / (r2 * (1.0 - v))
    base3 = c.c3 / (r2 * v)
    psum = (c.c2 + c.c3) / (1.0 + r2)
    variants = {
        "bare-c0": (base2 - psum - c.c0, base3 - psum - c.c0),
        "no-c0": (base2 - psum, base3 - psum),
        "substituted": (
            base2 - psum - 0.5 * c.c0 / (1.0 + r2),
            base3 - psum - 0.5 * c.c0 / (1.0 + r2),
        ),
    }
    out = {}
    for name, (d2, d3) in variants.items():
        th2 = th2_path[0] + cumulative_simpson(d2, x=times, initial=0.0)
        th3 = th3_path[0] + cumulative_simpson(d3, x=times, initial=0.0)
        out[name] = {
            "theta2_sup_err": float(np.max(np.abs(th2 - th2_path))),
            "theta3_sup_err": float(np.max(np.abs(th3 - th3_path))),
        }
    return out


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


def geodesic_quadrature(
    c: ConservedCharges, init: HypersphericalState, t_grid
) -> GeodesicTrace:
    """Analytic trace on the caller's grid: r(t), theta1, theta2, theta3 + momenta."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise DomainError("t_grid must be a nonempty 1-d increasing array")
    extracted = charges_from_state(init)
    mismatch = max(
        abs(extracted.c0 - c.c0),
        abs(extracted.c1 - c.c1),
        abs(extracted.c2 - c.c2),
        abs(extracted.c3 - c.c3),
        abs(extracted.c4 - c.c4),
    )
    if mismatch > _CHARGE_MATCH_TOL:
        raise DomainError(
            f"initial state disagrees with the charges (max deviation {mismatch!r})"
        )

    profile = profile_from_charges(c)
    sign0 = 1 if init.pr >= 0.0 else -1
    sol = RadialSolution(profile, init.r, sign0, t0=float(t_grid[0]), c4=c.c4)

    # truncate the grid at a chart exit (r -> 0) if one occurs inside it
    exit_reason = None
    lo, hi = sol.exit_times
    keep = np.ones(t_grid.size, dtype=bool)
    if hi is not None:
        keep &= t_grid < hi - 1e-12
    if lo is not None:
        keep &= t_grid > lo + 1e-12
    if not np.all(keep):
        exit_reason = "chart-exit:r"
    times = t_grid[keep]
    if times.size == 0:
        raise ChartSingularityError("no grid time lies inside the covered span")

    sign1 = 1 if init.pth1 >= 0.0 else -1
    osc = theta1_solution(c, init.th1, sign1)
    fine, idx = _refine_grid(times, 8)
    r_fine = np.array([sol.radius_of_time(t) for t in fine])
    if times.size > 1:
        s_fine = cumulative_simpson(1.0 / r_fine ** 2, x=fine, initial=0.0)
        rates = np.array(
            [_theta23_rates(c, r, osc.v(s)) for r, s in zip(r_fine, s_fine)]
        )
        th2 = init.th2 + cumulative_simpson(rates[:, 0], x=fine, initial=0.0)[idx]
        th3 = init.th3 + cumulative_simpson(rates[:, 1], x=fine, initial=0.0)[idx]
    else:
        s_fine = np.zeros(1)
        th2 = np.array([init.th2])
        th3 = np.array([init.th3])
    r_vals = r_fine[idx]
    s_vals = s_fine[idx]
    pr_vals = np.array([sol.pr_of_time(t) for t in times])
    th1 = np.array([osc.theta1(s) for s in s_vals])
    pth1 = np.array([osc.pth1(s) for s in s_vals])
    v = np.sin(th1) ** 2
    half_moment = 0.5 * c.c0 * r_vals * r_vals
    pth2 = c.c2 - half_moment * (1.0 - v)
    pth3 = c.c3 - half_moment * v
    ys = np.column_stack([r_vals, th1, th2, th3, pr_vals, pth1, pth2, pth3])
    return GeodesicTrace(
        times,
        ys,
        c.c0,
        diagnostics={
            "pipeline": "quadrature",
            "case": sol.tag.value,
            "trajectory": sol.traj,
            "charges": c,
        },
        exit_reason=exit_reason,
        branch_signs=np.sign(pr_vals),
    )


def reconstruct_ambient(trace: GeodesicTrace, z0: float = 0.0) -> AmbientTrace:
    """Lift a reduced trace to the group: positions, multipliers, and z by quadrature."""
    n = trace.times.size
    reduced = [hyper_to_cart(trace.state(i)) for i in range(n)]
    zdots = np.empty(n)
    rows = np.empty((n, 10))
    for i, rc in enumerate(reduced):
        full = from_reduced(rc, z=0.0)
        rows[i] = full.as_array()
        zdots[i] = full_rhs(full)[4]
    if n > 1:
        z_vals = z0 + cumulative_simpson(zdots, x=trace.times, initial=0.0)
    else:
        z_vals = np.array([z0])
    rows[:, 4] = z_vals
    return AmbientTrace(
        trace.times, rows, diagnostics=dict(trace.diagnostics, lifted=True)
    )
