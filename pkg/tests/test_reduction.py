"""Two-stage reduction: roundtrips, bracket structure, first integrals."""

import numpy as np
import pytest

from conftest import random_hyper_state
from h5geo.errors import (
    ChartSingularityError,
    FeasibilityError,
    InvariantError,
    LevelSetError,
)
from h5geo.heisenberg import CotangentState, GroupElement, full_rhs, hamiltonian_full
from h5geo.reduction import (
    ConservedCharges,
    HypersphericalState,
    cart_to_hyper,
    charges_from_state,
    from_reduced,
    hamiltonian_HC,
    hamiltonian_hyper,
    hyper_to_cart,
    integrals,
    rhs_HC,
    rhs_hyper,
    state_from_charges,
    structure_matrix,
    theta1_radicand,
    to_reduced,
)


def _rand_full(rng, c0=None):
    lam = rng.uniform(-2.0, 2.0, size=5)
    if c0 is not None:
        lam[4] = c0
    elif abs(lam[4]) < 0.1:
        lam[4] = 0.5
    return CotangentState(GroupElement(*rng.uniform(-2.0, 2.0, size=5)), tuple(lam))


def test_reduction_roundtrips(rng):
    for _ in range(300):
        s = _rand_full(rng)
        red = to_reduced(s)
        back = from_reduced(red, z=s.q.z)
        assert np.allclose(back.as_array(), s.as_array(), atol=1e-13)

        hs = random_hyper_state(rng)
        cart = hyper_to_cart(hs)
        hs2 = cart_to_hyper(cart)
        assert np.allclose(hs2.as_array(), hs.as_array(), atol=1e-11)
        assert hs2.c0 == hs.c0


def test_level_set_requires_nonzero_c0():
    s = CotangentState(GroupElement(), (0.1, 0.2, 0.3, 0.4, 0.0))
    with pytest.raises(LevelSetError):
        to_reduced(s)
    with pytest.raises(LevelSetError):
        ConservedCharges(0.0, 1.0, 0.0, 0.0, 0.5)


def test_chart_boundary_rejected():
    with pytest.raises(ChartSingularityError):
        HypersphericalState(0.0, 0.7, 0.0, 0.0, 0.1, 0.1, 0.1, 0.1, 1.0)
    with pytest.raises(ChartSingularityError):
        HypersphericalState(1.0, 0.0, 0.0, 0.0, 0.1, 0.1, 0.1, 0.1, 1.0)


def test_hamiltonians_agree_across_stages(rng):
    for _ in range(300):
        s = _rand_full(rng)
        red = to_reduced(s)
        h_full = hamiltonian_full(s.q, s.lam)
        assert hamiltonian_HC(red) == pytest.approx(h_full, abs=1e-11)
        try:
            hs = cart_to_hyper(red)
        except ChartSingularityError:
            continue
        assert hamiltonian_hyper(hs) == pytest.approx(h_full, abs=1e-10)


def test_reduced_cartesian_rhs_projects_full_flow(rng):
    """The W-system is the pushforward of the full flow through the momentum shift."""
    for _ in range(200):
        s = _rand_full(rng)
        c0 = s.lam[4]
        full = full_rhs(s)  # (dq, dlam)
        red_dot = rhs_HC(to_reduced(s))
        # positions map identically; p1 = lam1 + c0 y1 etc.
        expect = np.array(
            [
                full[0], full[1], full[2], full[3],
                full[5] + c0 * full[2],
                full[6] + c0 * full[3],
                full[7],
                full[8],
            ]
        )
        assert np.max(np.abs(red_dot - expect)) < 1e-11


def test_hyper_rhs_projects_cartesian_flow(rng):
    """d/dt of the chart map along the W-system equals the hyperspherical rhs."""
    eps = 1e-7
    for _ in range(100):
        hs = random_hyper_state(rng)
        cart = hyper_to_cart(hs)
        cdot = rhs_HC(cart)
        y = cart.as_array()
        plus = cart_to_hyper(
            type(cart)(*(y + eps * cdot), cart.c0)
        ).as_array()
        minus = cart_to_hyper(
            type(cart)(*(y - eps * cdot), cart.c0)
        ).as_array()
        fd = (plus - minus) / (2.0 * eps)
        hdot = rhs_hyper(hs)
        scale = max(1.0, float(np.max(np.abs(hdot))))
        assert np.max(np.abs(fd - hdot)) / scale < 1e-6


def test_structure_matrix_generates_rhs(rng):
    eps = 1e-6
    for _ in range(100):
        hs = random_hyper_state(rng)
        y = hs.as_array()
        grad = np.empty(8)
        for i in range(8):
            yp, ym = y.copy(), y.copy()
            yp[i] += eps
            ym[i] -= eps
            grad[i] = (
                hamiltonian_hyper(HypersphericalState(*yp, hs.c0))
                - hamiltonian_hyper(HypersphericalState(*ym, hs.c0))
            ) / (2.0 * eps)
        expect = structure_matrix(hs) @ grad
        got = rhs_hyper(hs)
        scale = max(1.0, float(np.max(np.abs(got))))
        assert np.max(np.abs(got - expect)) / scale < 1e-6


def test_structure_matrix_jacobi_identity(rng):
    """The noncanonical tensor has constant-in-momenta entries; check Jacobi by FD."""
    eps = 1e-5
    hs = random_hyper_state(rng)

    def pi_at(y):
        return structure_matrix(HypersphericalState(*y, hs.c0))

    y0 = hs.as_array()
    n = 8
    dpi = np.empty((n, n, n))  # d pi_jk / d y_l
    for l in range(n):
        yp, ym = y0.copy(), y0.copy()
        yp[l] += eps
        ym[l] -= eps
        dpi[:, :, l] = (pi_at(yp) - pi_at(ym)) / (2.0 * eps)
    pi0 = pi_at(y0)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = 0.0
                for l in range(n):
                    s += (
                        pi0[l, i] * dpi[j, k, l]
                        + pi0[l, j] * dpi[k, i, l]
                        + pi0[l, k] * dpi[i, j, l]
                    )
                worst = max(worst, abs(s))
    assert worst < 1e-7


def test_integrals_are_constant_along_rhs(rng):
    """Directional derivative of each integral along the flow vanishes."""
    eps = 1e-7
    for _ in range(100):
        hs = random_hyper_state(rng)
        ydot = rhs_hyper(hs)
        y = hs.as_array()
        ip = integrals(HypersphericalState(*(y + eps * ydot), hs.c0))
        im = integrals(HypersphericalState(*(y - eps * ydot), hs.c0))
        deriv = (np.array(ip) - np.array(im)) / (2.0 * eps)
        assert np.max(np.abs(deriv)) < 1e-6


def test_charge_nonnegativity_and_radicand(rng):
    for _ in range(2000):
        hs = random_hyper_state(rng)
        c = charges_from_state(hs)
        assert c.c1 >= -1e-12
        assert theta1_radicand(c, hs.th1) >= -1e-10
        # the radicand at the state equals (pth1)^2
        assert theta1_radicand(c, hs.th1) == pytest.approx(
            hs.pth1**2, abs=1e-9 * max(1.0, hs.pth1**2)
        )


def test_state_from_charges_roundtrip(rng):
    for _ in range(300):
        hs = random_hyper_state(rng)
        c = charges_from_state(hs)
        try:
            s2 = state_from_charges(c, hs.r)
        except FeasibilityError:
            pytest.fail("charges extracted from a state must be feasible")
        c2 = charges_from_state(s2)
        for a, b in zip(
            (c.c0, c.c1, c.c2, c.c3, c.c4), (c2.c0, c2.c1, c2.c2, c2.c3, c2.c4)
        ):
            assert a == pytest.approx(b, abs=1e-9 * max(1.0, abs(a)))


def test_state_from_charges_rejects_bad_radius():
    c = ConservedCharges(1.0, 2.0, 0.3, 0.2, 0.5)
    with pytest.raises(FeasibilityError):
        state_from_charges(c, -1.0)
    with pytest.raises(FeasibilityError):
        state_from_charges(c, 1e-3)  # far inside the centrifugal barrier


def test_negative_c1_rejected():
    with pytest.raises(InvariantError):
        ConservedCharges(1.0, -0.5, 0.0, 0.0, 0.5)


def test_radial_identity_from_charges(rng):
    """2 c4 = pr^2 + c1/r^2 + (c2+c3-c0 r^2/2)^2/(r^2(1+r^2)) on every state."""
    for _ in range(500):
        hs = random_hyper_state(rng)
        c = charges_from_state(hs)
        r2 = hs.r**2
        lhs = 2.0 * c.c4
        rhs = (
            hs.pr**2
            + c.c1 / r2
            + (c.c2 + c.c3 - 0.5 * c.c0 * r2) ** 2 / (r2 * (1.0 + r2))
        )
        assert lhs == pytest.approx(rhs, abs=1e-10 * max(1.0, abs(lhs)))
