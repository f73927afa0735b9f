"""The 5-dimensional Heisenberg group, its invariant frames and the full flow.

Coordinates (x1, x2, y1, y2, z) come from the upper-triangular matrix model;
the group law is (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + x1 y1' + x2 y2').
The left-invariant metric together with the right-invariant horizontal frame
defines the sub-Riemannian Hamiltonian; the unreduced 10-dimensional Hamilton
equations derived from it are the ground truth for every reduction downstream.

The printed form of the full ODE system in the source material contains
transcription slips, so the right-hand side here is derived analytically from
the Hamiltonian (H = lam^T M(q) lam / 2N) and cross-checked against finite
differences in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np

from ._core import full_hamiltonian as _full_h
from ._core import full_rhs as _full_rhs_kernel
from .errors import HorizontalityError

HORIZONTALITY_TOL = 1e-8


@dataclass(frozen=True)
class GroupElement:
    x1: float = 0.0
    x2: float = 0.0
    y1: float = 0.0
    y2: float = 0.0
    z: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.y1, self.y2, self.z])


@dataclass(frozen=True)
class TangentVector:
    dx1: float = 0.0
    dx2: float = 0.0
    dy1: float = 0.0
    dy2: float = 0.0
    dz: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.dx1, self.dx2, self.dy1, self.dy2, self.dz])


IDENTITY = GroupElement()


@dataclass(frozen=True)
class CotangentState:
    q: GroupElement
    lam: tuple[float, float, float, float, float]

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.q.as_array(), np.asarray(self.lam, dtype=float)])

    @classmethod
    def from_array(cls, y: Sequence[float]) -> "CotangentState":
        y = np.asarray(y, dtype=float)
        return cls(GroupElement(*y[:5]), tuple(y[5:10]))


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(
        g.x1 + h.x1,
        g.x2 + h.x2,
        g.y1 + h.y1,
        g.y2 + h.y2,
        g.z + h.z + g.x1 * h.y1 + g.x2 * h.y2,
    )


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(-g.x1, -g.x2, -g.y1, -g.y2, -g.z + g.x1 * g.y1 + g.x2 * g.y2)


def left_frame(g: GroupElement) -> tuple[TangentVector, ...]:
    """Pushforward by L_g of the five coordinate directions at the identity."""
    return (
        TangentVector(dx1=1.0),
        TangentVector(dx2=1.0),
        TangentVector(dy1=1.0, dz=g.x1),
        TangentVector(dy2=1.0, dz=g.x2),
        TangentVector(dz=1.0),
    )


def right_frame(g: GroupElement) -> tuple[TangentVector, ...]:
    """Pushforward by R_g; the first four vectors span the horizontal plane D_R(g)."""
    return (
        TangentVector(dx1=1.0, dz=g.y1),
        TangentVector(dx2=1.0, dz=g.y2),
        TangentVector(dy1=1.0),
        TangentVector(dy2=1.0),
        TangentVector(dz=1.0),
    )


def metric_tensor(g: GroupElement) -> np.ndarray:
    """The left-invariant Riemannian metric matrix; depends only on x1, x2."""
    x1, x2 = g.x1, g.x2
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, x1 * x1 + 1.0, x1 * x2, -x1],
            [0.0, 0.0, x1 * x2, x2 * x2 + 1.0, -x2],
            [0.0, 0.0, -x1, -x2, 1.0],
        ]
    )


def hamiltonian_full(q: GroupElement, lam: Sequence[float]) -> float:
    """Sub-Riemannian Hamiltonian of the LR system on T*H5 (nonnegative)."""
    return _full_h(q.x1, q.x2, q.y1, q.y2, tuple(float(v) for v in lam))


def full_rhs(s: CotangentState) -> np.ndarray:
    """(dq/dt, dlam/dt) of the unreduced flow; the lam5 component is exactly 0."""
    q = s.q
    return np.array(_full_rhs_kernel(q.x1, q.x2, q.y1, q.y2, q.z, tuple(s.lam)))


def horizontality_defect(q: GroupElement, v: TangentVector) -> float:
    """dz - y1 dx1 - y2 dx2; zero exactly when v lies in the horizontal plane."""
    return v.dz - q.y1 * v.dx1 - q.y2 * v.dx2


def sr_speed(q: GroupElement, v: TangentVector, tol: float = HORIZONTALITY_TOL) -> float:
    """Length of a horizontal vector in the ambient left-invariant metric."""
    defect = horizontality_defect(q, v)
    if abs(defect) > tol:
        raise HorizontalityError(defect, tol)
    vv = v.as_array()
    return sqrt(float(vv @ metric_tensor(q) @ vv))


def cometric_from_frame(q: GroupElement) -> np.ndarray:
    """Carnot-Caratheodory cotensor assembled from the horizontal right frame.

    Independent oracle for `hamiltonian_full`: H = lam^T g_CC lam / 2.
    """
    frame = np.stack([v.as_array() for v in right_frame(q)[:4]])  # 4 x 5
    gram = frame @ metric_tensor(q) @ frame.T
    return frame.T @ np.linalg.inv(gram) @ frame
