# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Scalar numerical kernels, Cython backend.

Line-for-line port of ``_kernels_py``; both backends must stay behaviourally
identical.  See the pure-Python module for the reference documentation.
"""

from libc.math cimport asin, atan, cos, cosh, fabs, floor, sin, sinh, sqrt, tanh

cdef double _RF_TOL = 2.5e-3
cdef double _RD_TOL = 1.5e-3
cdef double _AGM_TOL = 1e-15
cdef double _PI = 3.141592653589793238462643383279502884

cdef int _AGM_MAX = 40


cdef double _max3(double a, double b, double c) noexcept nogil:
    cdef double m = a
    if b > m:
        m = b
    if c > m:
        m = c
    return m


cdef double _carlson_rf(double x, double y, double z) noexcept nogil:
    cdef double sx, sy, sz, lam, mu, dx, dy, dz, e2, e3
    while True:
        sx = sqrt(x); sy = sqrt(y); sz = sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        dx = (mu - x) / mu
        dy = (mu - y) / mu
        dz = (mu - z) / mu
        if _max3(fabs(dx), fabs(dy), fabs(dz)) < _RF_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / sqrt(mu)


cdef double _carlson_rd(double x, double y, double z) noexcept nogil:
    cdef double total = 0.0
    cdef double fac = 1.0
    cdef double sx, sy, sz, lam, mu, dx, dy, dz, ea, eb, ec, ed, ee, s
    while True:
        sx = sqrt(x); sy = sqrt(y); sz = sqrt(z)
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
        if _max3(fabs(dx), fabs(dy), fabs(dz)) < _RD_TOL:
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


def carlson_rf(double x, double y, double z):
    """Carlson symmetric integral R_F(x, y, z), x,y,z >= 0 (at most one zero)."""
    return _carlson_rf(x, y, z)


def carlson_rd(double x, double y, double z):
    """Carlson symmetric integral R_D(x, y, z) = R_J(x, y, z, z), z > 0."""
    return _carlson_rd(x, y, z)


cdef int _agm_chain_c(double k, double* aa, double* cc) noexcept nogil:
    """Fill aa/cc with the AGM sequence; return the number of levels stored."""
    cdef double kc = sqrt((1.0 - k) * (1.0 + k))
    cdef double a = 1.0, b = kc, c = k
    cdef double an, bn, cn
    cdef int n = 1
    aa[0] = a
    cc[0] = c
    while fabs(c) > _AGM_TOL and n < _AGM_MAX:
        an = 0.5 * (a + b)
        bn = sqrt(a * b)
        cn = 0.5 * (a - b)
        a = an; b = bn; c = cn
        aa[n] = a
        cc[n] = c
        n += 1
    return n


def complete_k(double k):
    """Complete elliptic integral of the first kind K(k), 0 <= k < 1."""
    cdef double aa[40]
    cdef double cc[40]
    cdef int n = _agm_chain_c(k, aa, cc)
    return _PI / (2.0 * aa[n - 1])


def am_sncndn(double u, double k):
    """Jacobi amplitude and triple (am, sn, cn, dn) for 0 <= k < 1, any real u."""
    if k == 0.0:
        return u, sin(u), cos(u), 1.0
    cdef double aa[40]
    cdef double cc[40]
    cdef int nn = _agm_chain_c(k, aa, cc)
    cdef int nlev = nn - 1
    cdef double big_k = _PI / (2.0 * aa[nlev])
    cdef double n = floor(u / (2.0 * big_k) + 0.5)
    cdef double ur = u - 2.0 * big_k * n
    cdef double phi = aa[nlev] * ur * (<double> (1 << nlev) if nlev < 63 else 0.0)
    cdef double phi1 = phi
    cdef double s, sn, cn, dn, dphi, cd, am
    cdef int i
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
    dphi = phi1 - phi
    cd = cos(dphi)
    if fabs(cd) > 1e-12:
        dn = cn / cd if nlev > 0 else 1.0
    else:
        dn = sqrt(1.0 - k * k * sn * sn)
    if nlev == 0:
        dn = sqrt(1.0 - k * k * sn * sn)
    am = phi + _PI * n
    if n != 0:
        sn = sin(am)
        cn = cos(am)
    return am, sn, cn, dn


def am_sncndn_degenerate(double u):
    """k = 1 limit: am is the gudermannian, sn = tanh, cn = dn = sech."""
    cdef double am = atan(sinh(u))
    cdef double sech = 1.0 / cosh(u)
    return am, tanh(u), sech, sech


def ellint_f_core(double phi, double k):
    """Incomplete F(phi, k) for 0 <= k < 1, any real phi (quasi-periodic)."""
    if k == 0.0:
        return phi
    cdef double n = floor(phi / _PI + 0.5)
    cdef double phir = phi - _PI * n
    cdef double s = sin(phir)
    cdef double c = cos(phir)
    cdef double val = s * _carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)
    cdef double aa[40]
    cdef double cc[40]
    cdef int nn
    if n != 0:
        nn = _agm_chain_c(k, aa, cc)
        val += 2.0 * n * (_PI / (2.0 * aa[nn - 1]))
    return val


def ellint_e_core(double phi, double k):
    """Incomplete E(phi, k) for 0 <= k < 1, any real phi (quasi-periodic)."""
    if k == 0.0:
        return phi
    cdef double n = floor(phi / _PI + 0.5)
    cdef double phir = phi - _PI * n
    cdef double s = sin(phir)
    cdef double c = cos(phir)
    cdef double s2 = s * s
    cdef double y = 1.0 - k * k * s2
    cdef double val = s * (
        _carlson_rf(c * c, y, 1.0) - (k * k / 3.0) * s2 * _carlson_rd(c * c, y, 1.0)
    )
    cdef double kc2, ec
    if n != 0:
        kc2 = (1.0 - k) * (1.0 + k)
        ec = _carlson_rf(0.0, kc2, 1.0) - (k * k / 3.0) * _carlson_rd(0.0, kc2, 1.0)
        val += 2.0 * n * ec
    return val


# ---------------------------------------------------------------------------
# Hamiltonian right-hand sides


cdef void _coef_matrix_c(double x1, double x2, double y1, double y2,
                         double[5][5] m) noexcept nogil:
    cdef double rx = x1 * x1 + x2 * x2
    cdef double ry = y1 * y1 + y2 * y2
    cdef int i, j
    for i in range(5):
        for j in range(5):
            m[i][j] = 0.0
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


cdef void _coef_matrix_grads_c(double x1, double x2, double y1, double y2,
                               double[4][5][5] g) noexcept nogil:
    cdef double ry = y1 * y1 + y2 * y2
    cdef double rx1 = x1 * x1 + x2 * x2 + 1.0
    cdef int a, i, j
    for a in range(4):
        for i in range(5):
            for j in range(5):
                g[a][i][j] = 0.0

    g[0][0][0] = 2.0 * x1
    g[0][1][1] = 2.0 * x1
    g[0][3][3] = 2.0 * x1
    g[0][4][4] = 2.0 * x1 * ry
    g[0][0][2] = y1
    g[0][0][4] = 2.0 * x1 * y1
    g[0][1][2] = y2
    g[0][1][4] = 2.0 * x1 * y2
    g[0][2][3] = -x2
    g[0][2][4] = ry

    g[1][0][0] = 2.0 * x2
    g[1][1][1] = 2.0 * x2
    g[1][2][2] = 2.0 * x2
    g[1][4][4] = 2.0 * x2 * ry
    g[1][0][3] = y1
    g[1][0][4] = 2.0 * x2 * y1
    g[1][1][3] = y2
    g[1][1][4] = 2.0 * x2 * y2
    g[1][2][3] = -x1
    g[1][3][4] = ry

    g[2][1][1] = 2.0 * y1
    g[2][2][2] = 2.0 * y1
    g[2][3][3] = 2.0 * y1
    g[2][4][4] = 2.0 * y1 * rx1
    g[2][0][1] = -y2
    g[2][0][2] = x1
    g[2][0][3] = x2
    g[2][0][4] = rx1
    g[2][2][4] = 2.0 * y1 * x1
    g[2][3][4] = 2.0 * y1 * x2

    g[3][0][0] = 2.0 * y2
    g[3][2][2] = 2.0 * y2
    g[3][3][3] = 2.0 * y2
    g[3][4][4] = 2.0 * y2 * rx1
    g[3][0][1] = -y1
    g[3][1][2] = x1
    g[3][1][3] = x2
    g[3][1][4] = rx1
    g[3][2][4] = 2.0 * y2 * x1
    g[3][3][4] = 2.0 * y2 * x2

    for a in range(4):
        for i in range(5):
            for j in range(i):
                g[a][i][j] = g[a][j][i]


cdef double _quad_form_c(double[5][5] m, double* lam) noexcept nogil:
    cdef double s = 0.0
    cdef int i, j
    for i in range(5):
        for j in range(5):
            s += m[i][j] * lam[i] * lam[j]
    return s


def full_hamiltonian(double x1, double x2, double y1, double y2, lam):
    """H(q, lam) of the unreduced flow; independent of z."""
    cdef double lv[5]
    cdef int i
    for i in range(5):
        lv[i] = lam[i]
    cdef double n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    cdef double[5][5] m
    _coef_matrix_c(x1, x2, y1, y2, m)
    return _quad_form_c(m, lv) / (2.0 * n)


def full_rhs(double x1, double x2, double y1, double y2, double z, lam):
    """Hamilton equations of the full flow, derived from H (not the printed ODEs).

    Returns (dx1, dx2, dy1, dy2, dz, dl1, dl2, dl3, dl4, dl5); dl5 is 0.
    """
    cdef double lv[5]
    cdef int i, j, a
    for i in range(5):
        lv[i] = lam[i]
    cdef double n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    cdef double[5][5] m
    cdef double[4][5][5] grads
    _coef_matrix_c(x1, x2, y1, y2, m)
    cdef double qdot[5]
    cdef double s
    for i in range(5):
        s = 0.0
        for j in range(5):
            s += m[i][j] * lv[j]
        qdot[i] = s / n
    cdef double s_val = _quad_form_c(m, lv)
    _coef_matrix_grads_c(x1, x2, y1, y2, grads)
    cdef double qvals[4]
    qvals[0] = x1; qvals[1] = x2; qvals[2] = y1; qvals[3] = y2
    cdef double ldot[4]
    cdef double sa
    for a in range(4):
        sa = _quad_form_c(grads[a], lv)
        ldot[a] = -(sa * n - s_val * 2.0 * qvals[a]) / (2.0 * n * n)
    return (
        qdot[0], qdot[1], qdot[2], qdot[3], qdot[4],
        ldot[0], ldot[1], ldot[2], ldot[3], 0.0,
    )


def wsys_rhs(double x1, double x2, double y1, double y2,
             double p1, double p2, double p3, double p4, double c0):
    """Shifted-Cartesian (W-system) right-hand side on the level set lam5 = c0."""
    cdef double n = 1.0 + x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    cdef double w = (p3 * x1 + p4 * x2 - p1 * y1 - p2 * y2) / n
    cdef double cw = c0 + w
    cdef double dx1 = p1 + y1 * w
    cdef double dx2 = p2 + y2 * w
    cdef double dy1 = p3 - x1 * w
    cdef double dy2 = p4 - x2 * w
    return (
        dx1, dx2, dy1, dy2,
        cw * dy1, cw * dy2, -cw * dx1, -cw * dx2,
    )


def hyper_rhs(double r, double th1, double th2, double th3,
              double pr, double pt1, double pt2, double pt3, double c0):
    """Hyperspherical reduced Hamilton equations (noncanonical bracket)."""
    cdef double s1 = sin(th1)
    cdef double c1 = cos(th1)
    cdef double r2 = r * r
    cdef double opr2 = 1.0 + r2
    cdef double psum = pt2 + pt3
    cdef double a2 = pt2 / (c1 * c1)
    cdef double a3 = pt3 / (s1 * s1)
    cdef double dpr = (
        (pt1 * pt1 + pt2 * a2 + pt3 * a3) / (r2 * r)
        - r * psum * psum / (opr2 * opr2)
        + c0 * psum / (r * opr2)
    )
    cdef double dpt1 = (
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
