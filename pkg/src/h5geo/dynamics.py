"""Adaptive Runge-Kutta integration of the full and reduced systems.

This module is the numerical oracle: a hand-rolled Dormand-Prince 5(4) pair
with proportional-integral step control, quartic dense output and event
location.  Approaching the hyperspherical chart boundary (theta1 near 0 or
pi/2, or r near 0) terminates the trace with a structured exit flag rather
than an exception, since boundary approach is a property of the geodesic and
not a caller mistake.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from math import inf, pi, sqrt
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ._core import full_rhs as _full_rhs
from ._core import hyper_rhs as _hyper_rhs
from .errors import DomainError, StiffnessError
from .heisenberg import CotangentState
from .reduction import HypersphericalState
from .trace import AmbientTrace, GeodesicTrace

BOUNDARY_TOL = 1e-8

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    ]
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# difference between the 5th- and 4th-order weights (7 stages including FSAL)
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# quartic interpolant coefficients: y(t0 + x h) = y0 + h x (K^T P) . (1, x, x^2, x^3)
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ALPHA = 0.7 / 5.0  # PI controller exponents
_BETA = 0.4 / 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    # oracle-grade defaults: escaping orbits reach integral values of order
    # r^2, so the relative tolerance must leave headroom below the 1e-8
    # absolute conservation budget
    rel_tol: float = 1e-12
    abs_tol: float = 1e-13
    max_step: float = inf
    dense_output: bool = False

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0 or self.max_step <= 0.0:
            raise DomainError("integrator tolerances and max_step must be positive")


@dataclass(frozen=True)
class _Event:
    name: str
    func: Callable[[float, np.ndarray], float]
    terminal: bool = False
    direction: int = 0  # -1: only decreasing crossings, +1: increasing, 0: both


class DenseSolution:
    """Piecewise-quartic interpolant accumulated over accepted steps."""

    def __init__(self, direction: float):
        self.direction = direction
        self.ts: list[float] = []  # left endpoints
        self.hs: list[float] = []
        self.y0s: list[np.ndarray] = []
        self.qs: list[np.ndarray] = []  # (n, 4) per segment
        self.t_end: float | None = None

    def add(self, t0: float, h: float, y0: np.ndarray, q: np.ndarray):
        self.ts.append(t0)
        self.hs.append(h)
        self.y0s.append(y0)
        self.qs.append(q)
        self.t_end = t0 + h

    def _segment(self, t: float) -> int:
        if not self.ts:
            raise DomainError("dense output is empty")
        if self.direction > 0:
            i = bisect_right(self.ts, t) - 1
        else:
            i = len(self.ts) - bisect_right(self.ts[::-1], t)
        return min(max(i, 0), len(self.ts) - 1)

    def eval_segment(self, i: int, t: float) -> np.ndarray:
        x = (t - self.ts[i]) / self.hs[i]
        poly = self.qs[i] @ np.array([1.0, x, x * x, x ** 3])
        return self.y0s[i] + self.hs[i] * x * poly

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self.eval_segment(self._segment(float(t)), float(t))
        return np.array([self.eval_segment(self._segment(tv), tv) for tv in t])


@dataclass
class _SolveResult:
    ts: np.ndarray
    ys: np.ndarray
    dense: DenseSolution | None
    status: str  # "completed" or the terminal event name
    event_times: dict[str, list[float]] = field(default_factory=dict)
    n_steps: int = 0
    n_rejected: int = 0


def _initial_step(f, t0, y0, f0, direction, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = sqrt(float(np.mean((y0 / scale) ** 2)))
    d1 = sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = f(t0 + h0 * direction, y1)
    d2 = sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


def _locate_event(ev: _Event, dense: DenseSolution, seg: int, t_lo: float, t_hi: float):
    g = lambda t: ev.func(t, dense.eval_segment(seg, t))
    return float(brentq(g, t_lo, t_hi, xtol=1e-13, rtol=1e-15))


def solve_dopri(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    t_end: float,
    cfg: IntegratorConfig,
    events: Sequence[_Event] = (),
    keep_dense: bool = False,
) -> _SolveResult:
    """Integrate y' = f(t, y) from t0 to t_end with the 5(4) pair."""
    y = np.asarray(y0, dtype=float).copy()
    t = float(t0)
    if t_end == t:
        return _SolveResult(np.array([t]), np.array([y]), None, "completed")
    direction = 1.0 if t_end > t else -1.0
    need_dense = keep_dense or cfg.dense_output or bool(events)
    dense = DenseSolution(direction) if need_dense else None

    f_cur = np.asarray(f(t, y), dtype=float)
    h = min(
        _initial_step(f, t, y, f_cur, direction, cfg.rel_tol, cfg.abs_tol),
        cfg.max_step,
        abs(t_end - t),
    )
    g_cur = [ev.func(t, y) for ev in events]

    ts = [t]
    ys = [y.copy()]
    err_prev = 1e-4
    status = "completed"
    event_times: dict[str, list[float]] = {ev.name: [] for ev in events}
    n_steps = n_rejected = 0
    k = np.empty((7, y.size))

    while (t_end - t) * direction > 0.0:
        h = min(h, cfg.max_step, abs(t_end - t))
        if h < 1e-14 * max(1.0, abs(t)):
            raise StiffnessError(t)

        k[0] = f_cur
        for i in range(1, 6):
            k[i] = f(t + _C[i] * h * direction, y + h * direction * (_A[i, :i] @ k[:i]))
        y_new = y + h * direction * (_B @ k[:6])
        f_new = np.asarray(f(t + h * direction, y_new), dtype=float)
        k[6] = f_new

        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = sqrt(float(np.mean(((h * (_E @ k)) / scale) ** 2)))

        if err > 1.0:
            n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            continue

        t_new = t + h * direction
        n_steps += 1
        if need_dense:
            q = k.T @ _P  # (n, 4)
            dense.add(t, h * direction, y.copy(), q)

        # event detection on the accepted step
        stop_at = None
        stop_name = None
        if events:
            seg = len(dense.ts) - 1
            g_new = [ev.func(t_new, y_new) for ev in events]
            for j, ev in enumerate(events):
                a, b = g_cur[j], g_new[j]
                crossed = (a > 0.0 >= b) or (a < 0.0 <= b) or (a == 0.0 and b != 0.0)
                if not crossed:
                    continue
                if ev.direction > 0 and not a < b:
                    continue
                if ev.direction < 0 and not a > b:
                    continue
                if a == 0.0:
                    t_ev = t
                else:
                    t_ev = _locate_event(ev, dense, seg, t, t_new)
                event_times[ev.name].append(t_ev)
                if ev.terminal and (stop_at is None or (t_ev - stop_at) * direction < 0):
                    stop_at = t_ev
                    stop_name = ev.name
            g_cur = g_new

        if stop_at is not None:
            y_stop = dense.eval_segment(len(dense.ts) - 1, stop_at)
            ts.append(stop_at)
            ys.append(y_stop)
            status = stop_name
            break

        t, y, f_cur = t_new, y_new, f_new
        ts.append(t)
        ys.append(y.copy())

        factor = _SAFETY * err ** (-_ALPHA) * err_prev ** _BETA if err > 0.0 else _MAX_FACTOR
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        err_prev = max(err, 1e-10)

    if dense is not None and not (keep_dense or cfg.dense_output):
        dense = None
    return _SolveResult(
        np.array(ts), np.array(ys), dense, status, event_times, n_steps, n_rejected
    )


def _chart_exit_events() -> tuple[_Event, ...]:
    return (
        _Event("chart-exit:r", lambda t, y: y[0] - BOUNDARY_TOL, terminal=True, direction=-1),
        _Event("chart-exit:theta1-0", lambda t, y: y[1] - BOUNDARY_TOL, terminal=True, direction=-1),
        _Event(
            "chart-exit:theta1-pi/2",
            lambda t, y: pi / 2.0 - BOUNDARY_TOL - y[1],
            terminal=True,
            direction=-1,
        ),
    )


def _resample(res: _SolveResult, t_eval) -> tuple[np.ndarray, np.ndarray]:
    t_eval = np.asarray(t_eval, dtype=float)
    lo, hi = res.ts[0], res.ts[-1]
    if res.ts[-1] < res.ts[0]:
        lo, hi = hi, lo
    mask = (t_eval >= lo - 1e-12) & (t_eval <= hi + 1e-12)
    tt = np.clip(t_eval[mask], lo, hi)
    return tt, res.dense(tt)


def integrate_reduced(
    s0: HypersphericalState,
    t_span: tuple[float, float],
    cfg: IntegratorConfig | None = None,
    t_eval=None,
) -> GeodesicTrace:
    """Integrate the reduced Hamilton equations; terminates at chart exit."""
    cfg = cfg or IntegratorConfig()
    c0 = s0.c0
    f = lambda t, y: np.array(_hyper_rhs(*y, c0))
    res = solve_dopri(
        f,
        t_span[0],
        s0.as_array(),
        t_span[1],
        cfg,
        events=_chart_exit_events(),
        keep_dense=cfg.dense_output or t_eval is not None,
    )
    if t_eval is not None:
        tt, yy = _resample(res, t_eval)
    else:
        tt, yy = res.ts, res.ys
    rev = tt.size > 1 and tt[1] < tt[0]
    exit_reason = None if res.status == "completed" else res.status
    return GeodesicTrace(
        tt[::-1] if rev else tt,
        yy[::-1] if rev else yy,
        c0,
        diagnostics={
            "n_steps": res.n_steps,
            "n_rejected": res.n_rejected,
            "status": res.status,
            "reversed": rev,
        },
        exit_reason=exit_reason,
        dense=res.dense if cfg.dense_output else None,
    )


def integrate_full(
    s0: CotangentState,
    t_span: tuple[float, float],
    cfg: IntegratorConfig | None = None,
    t_eval=None,
) -> AmbientTrace:
    """Integrate the unreduced 10-dimensional canonical system."""
    cfg = cfg or IntegratorConfig()
    f = lambda t, y: np.array(_full_rhs(y[0], y[1], y[2], y[3], y[4], tuple(y[5:10])))
    res = solve_dopri(
        f,
        t_span[0],
        s0.as_array(),
        t_span[1],
        cfg,
        keep_dense=cfg.dense_output or t_eval is not None,
    )
    if t_eval is not None:
        tt, yy = _resample(res, t_eval)
    else:
        tt, yy = res.ts, res.ys
    rev = tt.size > 1 and tt[1] < tt[0]
    return AmbientTrace(
        tt[::-1] if rev else tt,
        yy[::-1] if rev else yy,
        diagnostics={"n_steps": res.n_steps, "n_rejected": res.n_rejected},
        dense=res.dense if cfg.dense_output else None,
    )


@dataclass(frozen=True)
class DriftReport:
    """Maximum absolute drift of each first integral and per-sample H residual."""

    integral_drift: tuple[float, float, float, float]
    hamiltonian_residual: np.ndarray

    @property
    def max_drift(self) -> float:
        return max(self.integral_drift)


def drift_report(trace: GeodesicTrace, c0: float | None = None) -> DriftReport:
    """Conservation diagnostics for a reduced trace."""
    if c0 is not None and c0 != trace.c0:
        raise DomainError(f"trace carries c0 = {trace.c0!r}, not {c0!r}")
    vals = trace.integral_values()
    drift = np.max(np.abs(vals - vals[0]), axis=0)
    residual = np.abs(vals[:, 3] - vals[0, 3])
    return DriftReport(tuple(float(d) for d in drift), residual)


def turning_points(trace: GeodesicTrace, xtol: float = 1e-10) -> np.ndarray:
    """Times where p_r crosses zero, polished on the dense output."""
    if trace.dense is None:
        raise DomainError("turning_points needs a trace with dense output")
    dense = trace.dense
    out = []
    for i in range(len(dense.ts)):
        t_lo = dense.ts[i]
        t_hi = t_lo + dense.hs[i]
        # oversample the quartic segment so short sign excursions are not missed
        grid = np.linspace(t_lo, t_hi, 9)
        pr = np.array([dense.eval_segment(i, tv)[4] for tv in grid])
        for j in range(8):
            a, b = pr[j], pr[j + 1]
            if a == 0.0:
                out.append(grid[j])
            elif a * b < 0.0:
                g = lambda t: dense.eval_segment(i, t)[4]
                out.append(float(brentq(g, grid[j], grid[j + 1], xtol=xtol)))
    if not out:
        return np.array([])
    out = np.sort(np.array(out))
    keep = [out[0]]
    for t in out[1:]:
        if t - keep[-1] > 1e-9:
            keep.append(t)
    return np.array(keep)
