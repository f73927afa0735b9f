"""Trace containers shared by the numerical integrator and the analytic pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .reduction import HypersphericalState, integrals


@dataclass
class GeodesicTrace:
    """Time-indexed reduced states with per-sample diagnostics.

    `ys` rows are (r, th1, th2, th3, p_r, p_th1, p_th2, p_th3); write-once.
    """

    times: np.ndarray
    ys: np.ndarray
    c0: float
    diagnostics: dict[str, Any] = field(default_factory=dict)
    exit_reason: str | None = None
    branch_signs: np.ndarray | None = None
    dense: Any = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.times.ndim != 1 or self.ys.shape != (self.times.size, 8):
            raise ValueError("trace needs times (N,) and ys (N, 8)")
        if np.any(np.diff(self.times) <= 0) and self.times.size > 1:
            raise ValueError("trace times must be strictly increasing")

    def state(self, i: int) -> HypersphericalState:
        return HypersphericalState.from_array(self.ys[i], self.c0)

    def states(self) -> list[HypersphericalState]:
        return [self.state(i) for i in range(self.times.size)]

    def integral_values(self) -> np.ndarray:
        """(N, 4) array of the four first integrals sampled along the trace."""
        return np.array([integrals(self.state(i)) for i in range(self.times.size)])


@dataclass
class AmbientTrace:
    """Time-indexed 10-component cotangent states of the unreduced flow."""

    times: np.ndarray
    ys: np.ndarray  # rows (x1, x2, y1, y2, z, lam1..lam5)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    dense: Any = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.times.ndim != 1 or self.ys.shape != (self.times.size, 10):
            raise ValueError("trace needs times (N,) and ys (N, 10)")
