"""Scalar numerical kernels, pure-Python backend.

Carlson symmetric elliptic integrals, the AGM-based Jacobi amplitude, and the
right-hand sides of the three Hamiltonian systems (full 10-dim, shifted
Cartesian 8-dim, hyperspherical 8-dim).  ``h5geo._core`` swaps in the Cython
build of the same functions when available; both backends must stay
behaviourally identical.
"""

from math import asin, atan, cos, cosh, floor, pi, sin, sinh, sqrt, tanh

_RF_TOL = 2.5e-3  # Carlson duplication cutoffs; final relative error ~ tol**6
_RD_TOL = 1.5e-3
_AGM_TOL = 1e-15


def carlson_rf(x, y, z):
    """Carlson symmetric integral R_F(x, y, z), x,y,z >= 0 (at most one zero)."""
    while True:
        sx, sy, sz = sqrt(x), sqrt(y), sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        dx = (mu - x) / mu
        dy = (mu - y) / mu
        dz = (mu - z) / mu
        if max(abs(dx), abs(dy), abs(dz)) < _RF_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / sqrt(mu)


def carlson_rd(x, y, z):
    """Carlson symmetric integral R_D(x, y, z) = R_J(x, y, z, z), z > 0."""
    total = 0.0
    fac = 1.0
    while True:
        sx, sy, sz = sqrt(x), sqrt(y), sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + lam))
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        mu = 0.2 * (x + y + 3.0 * z)
        dx = (mu - x) / mu
        dy = (mu - y) / mu
        dz = (mu - z) / mu
        if max(abs(dx), abs(dy), abs(dz)) < _RD_TOL:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    s = (
        1.0
        + ed * (-3.0 / 14.0 + (9.0 / 88.0) * ed - (4.5 / 26.0) * dz * ee)
        + dz * ((1.0 / 6.0) * ee + dz * (-(9.0 / 22.0) * ec + dz * (3.0 / 26.0) * ea))
    )
    return 3.0 * total + fac * s / (mu * sqrt(mu))


def _agm_chain(k):
    """AGM sequence for modulus k in [0, 1): lists (a_n, c_n), n = 0..N."""
    kc = sqrt((1.0 - k) * (1.0 + k))
    a, b, c = 1.0, kc, k
    aa = [a]
    cc = [c]
    while abs(c) > _AGM_TOL and len(aa) < 40:
        a, b, c = 0.5 * (a + b), sqrt(a * b), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return aa, cc


def complete_k(k):
    """Complete elliptic integral of the first kind K(k), 0 <= k < 1."""
    aa, _ = _agm_chain(k)
    return pi / (2.0 * aa[-1])


def am_sncndn(u, k):
    """Jacobi amplitude and triple (am, sn, cn, dn) for 0 <= k < 1, any real u."""
    if k == 0.0:
        return u, sin(u), cos(u), 1.0
    aa, cc = _agm_chain(k)
    big_k = pi / (2.0 * aa[-1])
    # quasi-periodicity am(u + 2K) = am(u) + pi keeps the backward recursion
    # on [-K, K] where it is well conditioned
    n = floor(u / (2.0 * big_k) + 0.5)
    ur = u - 2.0 * big_k * n
    nlev = len(aa) - 1
    phi = aa[nlev] * ur * float(2 ** nlev)
    phi1 = phi
    for i in range(nlev, 0, -1):
        s = cc[i] / aa[i] * sin(phi)
        if s > 1.0:
            s = 1.0
        elif s < -1.0:
            s = -1.0
        phi1 = phi
        phi = 0.5 * (phi + asin(s))
    sn = sin(phi)
    cn = cos(phi)
    # dn via the final Landen angle avoids cancellation near u = K, k -> 1
    dphi = phi1 - phi
    cd = cos(dphi)
    if abs(cd) > 1e-12:
        dn = cn / cd if nlev > 0 else 1.0
    else:
        dn = sqrt(1.0 - k * k * sn * sn)
    if nlev == 0:
        dn = sqrt(1.0 - k * k * sn * sn)
    am = phi + pi * n
    if n != 0:
        sn = sin(am)
        cn = cos(am)
    return am, sn, cn, dn


def am_sncndn_degenerate(u):
    """k = 1 limit: am is the gudermannian, sn = tanh, cn = dn = sech."""
    am = atan(sinh(u))
    sech = 1.0 / cosh(u)
    return am, tanh(u), sech, sech


def ellint_f_core(phi, k):
    """Incomplete F(phi, k) for 0 <= k < 1, any real phi (quasi-periodic)."""
    if k == 0.0:
        return phi
    n = floor(phi / pi + 0.5)
    phir = phi - pi * n
    s = sin(phir)
    c = cos(phir)
    val = s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)
    if n != 0:
        val += 2.0 * n * complete_k(k)
    return val


def ellint_e_core(phi, k):
    """Incomplete E(phi, k) for 0 <= k < 1, any real phi (quasi-periodic)."""
    if k == 0.0:
        return phi
    n = floor(phi / pi + 0.5)
    phir = phi - pi * n
    s = sin(phir)
    c = cos(phir)
    s2 = s * s
    y = 1.0 - k * k * s2
    val = s * (carlson_rf(c * c, y, 1.0) - (k * k / 3.0) * s2 * carlson_rd(c * c, y, 1.0))
    if n != 0:
        kc2 = (1.0 - k) * (1.0 + k)
        ec = carlson_rf(0.0, kc2, 1.0) - (k * k / 3.0) * carlson_rd(0.0, kc2, 1.0)
        val += 2.0 * n * ec
    return val


# ---------------------------------------------------------------------------
# Hamiltonian right-hand sides


def _coef_matrix(x1, x2, y1, y2):
    """Symmetric 5x5 matrix M with 2 N H(q, lam) = lam^T M lam."""
    rx = x1 * x1 + x2 * x2
    ry = y1 * y1 + y2 * y2
    m = [[0.0] * 5 for _ in range(5)]
    m[0][0] = rx + y2 * y2 + 1.0
    m[1][1] = rx + y1 * y1 + 1.0
    m[2][2] = x2 * x2 + ry + 1.0
    m[3][3] = x1 * x1 + ry + 1.0
    m[4][4] = (rx + 1.0) * ry
    m[0][1] = -y1 * y2
    m[0][2] = y1 * x1
    m[0][3] = y1 * x2
    m[0][4] = y1 * (rx + 1.0)
    m[1][2] = y2 * x1
    m[1][3] = y2 * x2
    m[1][4] = y2 * (rx + 1.0)
    m[2][3] = -x1 * x2
    m[2][4] = ry * x1
    m[3][4] = ry * x2
    for i in range(5):
        for j in range(i):
            m[i][j] = m[j][i]
    return m


def _coef_matrix_grads(x1, x2, y1, y2):
    """d M / d(x1, x2, y1, y2), each a symmetric 5x5 matrix."""
    ry = y1 * y1 + y2 * y2
    rx1 = x1 * x1 + x2 * x2 + 1.0

    gx1 = [[0.0] * 5 for _ in range(5)]
    gx1[0][0] = 2.0 * x1
    gx1[1][1] = 2.0 * x1
    gx1[3][3] = 2.0 * x1
    gx1[4][4] = 2.0 * x1 * ry
    gx1[0][2] = y1
    gx1[0][4] = 2.0 * x1 * y1
    gx1[1][2] = y2
    gx1[1][4] = 2.0 * x1 * y2
    gx1[2][3] = -x2
    gx1[2][4] = ry

    gx2 = [[0.0] * 5 for _ in range(5)]
    gx2[0][0] = 2.0 * x2
    gx2[1][1] = 2.0 * x2
    gx2[2][2] = 2.0 * x2
    gx2[4][4] = 2.0 * x2 * ry
    gx2[0][3] = y1
    gx2[0][4] = 2.0 * x2 * y1
    gx2[1][3] = y2
    gx2[1][4] = 2.0 * x2 * y2
    gx2[2][3] = -x1
    gx2[3][4] = ry

    gy1 = [[0.0] * 5 for _ in range(5)]
    gy1[1][1] = 2.0 * y1
    gy1[2][2] = 2.0 * y1
    gy1[3][3] = 2.0 * y1
    gy1[4][4] = 2.0 * y1 * rx1
    gy1[0][1] = -y2
    gy1[0][2] = x1
    gy1[0][3] = x2
    gy1[0][4] = rx1
    gy1[2][4] = 2.0 * y1 * x1
    gy1[3][4] = 2.0 * y1 * x2

    gy2 = [[0.0] * 5 for _ in range(5)]
    gy2[0][0] = 2.0 * y2
    gy2[2][2] = 2.0 * y2
    gy2[3][3] = 2.0 * y2
    gy2[4][4] = 2.0 * y2 * rx1
    gy2[0][1] = -y1
    gy2[1][2] = x1
    gy2[1][3] = x2
    gy2[1][4] = rx1
    gy2[2][4] = 2.0 * y2 * x1
    gy2[3][4] = 2.0 * y2 * x2

    for g in (gx1, gx2, gy1, gy2):
        for i in range(5):
            for j in range(i):
                g[i][j] = g[j][i]
    return gx1, gx2, gy1, gy2


def _quad_form(m, lam):
    s = 0.0
    for i in range(5):
        row = m[i]
        for j in range(5):
            s += row[j] * lam[i] * lam[j]
    return s


def full_hamiltonian(x1, x2, y1, y2, lam):
    """H(q, lam) of the unreduced flow; independent of z."""
    n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    return _quad_form(_coef_matrix(x1, x2, y1, y2), lam) / (2.0 * n)


def full_rhs(x1, x2, y1, y2, z, lam):
    """Hamilton equations of the full flow, derived from H (not the printed ODEs).

    Returns (dx1, dx2, dy1, dy2, dz, dl1, dl2, dl3, dl4, dl5); dl5 is 0.
    """
    n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    m = _coef_matrix(x1, x2, y1, y2)
    qdot = [0.0] * 5
    for i in range(5):
        s = 0.0
        row = m[i]
        for j in range(5):
            s += row[j] * lam[j]
        qdot[i] = s / n
    s_val = _quad_form(m, lam)
    grads = _coef_matrix_grads(x1, x2, y1, y2)
    qvals = (x1, x2, y1, y2)
    ldot = [0.0] * 5
    for a in range(4):
        sa = _quad_form(grads[a], lam)
        ldot[a] = -(sa * n - s_val * 2.0 * qvals[a]) / (2.0 * n * n)
    # z is cyclic: dl5 = 0 identically
    return (
        qdot[0], qdot[1], qdot[2], qdot[3], qdot[4],
        ldot[0], ldot[1], ldot[2], ldot[3], 0.0,
    )


def wsys_rhs(x1, x2, y1, y2, p1, p2, p3, p4, c0):
    """Shifted-Cartesian (W-system) right-hand side on the level set lam5 = c0."""
    n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    w = (p3 * x1 + p4 * x2 - p1 * y1 - p2 * y2) / n
    cw = c0 + w
    dx1 = p1 + y1 * w
    dx2 = p2 + y2 * w
    dy1 = p3 - x1 * w
    dy2 = p4 - x2 * w
    return (
        dx1, dx2, dy1, dy2,
        cw * dy1, cw * dy2, -cw * dx1, -cw * dx2,
    )


def hyper_rhs(r, th1, th2, th3, pr, pt1, pt2, pt3, c0):
    """Hyperspherical reduced Hamilton equations (noncanonical bracket)."""
    s1 = sin(th1)
    c1 = cos(th1)
    r2 = r * r
    opr2 = 1.0 + r2
    psum = pt2 + pt3
    a2 = pt2 / (c1 * c1)
    a3 = pt3 / (s1 * s1)
    dpr = (
        (pt1 * pt1 + pt2 * a2 + pt3 * a3) / (r2 * r)
        - r * psum * psum / (opr2 * opr2)
        + c0 * psum / (r * opr2)
    )
    dpt1 = (
        pt3 * (r2 * c0 + a3) * (c1 / s1) - pt2 * (r2 * c0 + a2) * (s1 / c1)
    ) / r2
    return (
        pr,
        pt1 / r2,
        a2 / r2 - psum / opr2,
        a3 / r2 - psum / opr2,
        dpr,
        dpt1,
        -c0 * c1 * (r * pr * c1 - pt1 * s1),
        -c0 * s1 * (r * pr * s1 + pt1 * c1),
    )
