# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: symplectic spectra and Gaussian entropies of small systems.

Covariance matrices of up to three modes are by far the hottest objects in
the key-rate sweeps, so their symplectic eigenvalues are computed here from
the characteristic polynomial of -(Omega*Gamma)^2 in closed form (quadratic
formula for two modes, trigonometric cubic plus Newton polish for three)
instead of a generic eigensolver.  Near-degenerate spectra, where the closed
forms lose precision, are detected and handed back to the numpy route.

Every entry point returns a status/sentinel instead of raising so the
dispatcher in ``minleak.backend`` can fall back transparently.
"""

from libc.math cimport sqrt, fabs, log2, acos, cos

cdef double PI = 3.14159265358979323846264338327950288
# relative gap below which two polynomial roots count as clustered
cdef double CLUSTER_GAP = 1e-6
# eigenvalues within this margin below 1 are treated as exactly 1
cdef double UNIT_CLAMP = 1e-9


cdef inline double _g_bits(double v) noexcept nogil:
    if v <= 1.0:
        return 0.0
    return 0.5 * (v + 1.0) * log2(0.5 * (v + 1.0)) \
        - 0.5 * (v - 1.0) * log2(0.5 * (v - 1.0))


cdef double _det_inplace(double* a, int n) noexcept nogil:
    """Determinant of a row-major n*n matrix (n <= 6); clobbers ``a``."""
    cdef int i, j, k, piv
    cdef double best, factor, det = 1.0
    cdef double tmp
    for k in range(n):
        piv = k
        best = fabs(a[k * n + k])
        for i in range(k + 1, n):
            if fabs(a[i * n + k]) > best:
                best = fabs(a[i * n + k])
                piv = i
        if best == 0.0:
            return 0.0
        if piv != k:
            det = -det
            for j in range(n):
                tmp = a[k * n + j]
                a[k * n + j] = a[piv * n + j]
                a[piv * n + j] = tmp
        det *= a[k * n + k]
        for i in range(k + 1, n):
            factor = a[i * n + k] / a[k * n + k]
            for j in range(k + 1, n):
                a[i * n + j] -= factor * a[k * n + j]
    return det


cdef int _eigs_one(const double* g, double* out) noexcept nogil:
    cdef double det = g[0] * g[3] - g[1] * g[2]
    if det <= 0.0:
        return 1
    out[0] = sqrt(det)
    return 0


cdef int _eigs_two(const double* g, double* out) noexcept nogil:
    # blocks of the 4x4 matrix: A upper-left, B lower-right, C upper-right
    cdef double det_a = g[0] * g[5] - g[1] * g[4]
    cdef double det_b = g[10] * g[15] - g[11] * g[14]
    cdef double det_c = g[2] * g[7] - g[3] * g[6]
    cdef double delta = det_a + det_b + 2.0 * det_c
    cdef double buf[16]
    cdef int i
    for i in range(16):
        buf[i] = g[i]
    cdef double det = _det_inplace(buf, 4)
    cdef double disc = delta * delta - 4.0 * det
    cdef double scale = fabs(delta) + 1.0
    if disc < 0.0:
        if disc > -1e-12 * scale * scale:
            disc = 0.0
        else:
            return 1
    cdef double root = sqrt(disc)
    if root < CLUSTER_GAP * scale:
        return 1  # nearly degenerate pair: closed form loses precision
    cdef double t_hi = 0.5 * (delta + root)
    if t_hi <= 0.0:
        return 1
    cdef double t_lo = det / t_hi  # stable companion root
    if t_lo <= 0.0:
        return 1
    out[0] = sqrt(t_hi)
    out[1] = sqrt(t_lo)
    return 0


cdef int _eigs_three(const double* g, double* out) noexcept nogil:
    cdef double og[36]
    cdef double m[36]
    cdef double buf[36]
    cdef int i, j, k
    cdef double acc
    # og = Omega * Gamma: row 2i is row 2i+1 of Gamma, row 2i+1 is -row 2i
    for i in range(3):
        for j in range(6):
            og[(2 * i) * 6 + j] = g[(2 * i + 1) * 6 + j]
            og[(2 * i + 1) * 6 + j] = -g[(2 * i) * 6 + j]
    # m = -(Omega*Gamma)^2 has eigenvalues nu_i^2, each twice
    for i in range(6):
        for j in range(6):
            acc = 0.0
            for k in range(6):
                acc += og[i * 6 + k] * og[k * 6 + j]
            m[i * 6 + j] = -acc
    cdef double tr = 0.0, tr2 = 0.0
    for i in range(6):
        tr += m[i * 6 + i]
        for j in range(6):
            tr2 += m[i * 6 + j] * m[j * 6 + i]
    # elementary symmetric functions of the three distinct eigenvalues
    cdef double e1 = 0.5 * tr
    # characteristic-polynomial coefficients grow like the cube of the
    # spectrum scale, and a root near 1 is then resolved only to about
    # eps * e1^3 in absolute terms; beyond this scale the entropy weight
    # of near-unit eigenvalues demands the backward-stable eigensolver
    if e1 > 30.0:
        return 1
    cdef double e2 = 0.5 * (e1 * e1 - 0.5 * tr2)
    for i in range(36):
        buf[i] = g[i]
    cdef double e3 = _det_inplace(buf, 6)  # det(Gamma) = product of nu_i^2
    if e3 <= 0.0:
        return 1

    # depressed cubic u^3 + p u + q for t = u + e1/3
    cdef double p = e2 - e1 * e1 / 3.0
    cdef double q = -2.0 * e1 * e1 * e1 / 27.0 + e1 * e2 / 3.0 - e3
    cdef double scale = fabs(e1) / 3.0 + 1.0
    if p >= -1e-13 * scale * scale:
        return 1  # (near-)triple root: hand over to the eigensolver
    # near a double root the discriminant vanishes and the acos branch
    # below can place two roots at the single root instead; the Newton
    # polish cannot recover from that, so detect degeneracy up front
    cdef double neg4p3 = -4.0 * p * p * p
    cdef double disc = neg4p3 - 27.0 * q * q
    cdef double dscale = neg4p3 if neg4p3 > 27.0 * q * q else 27.0 * q * q
    if disc < 1e-9 * dscale:
        return 1
    cdef double mfac = 2.0 * sqrt(-p / 3.0)
    cdef double arg = 3.0 * q / (p * mfac)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    cdef double theta = acos(arg)
    cdef double t[3]
    for k in range(3):
        t[k] = mfac * cos((theta - 2.0 * PI * k) / 3.0) + e1 / 3.0

    # Newton polish on t^3 - e1 t^2 + e2 t - e3 restores machine accuracy
    cdef double f, fp, x
    for k in range(3):
        x = t[k]
        for i in range(2):
            f = ((x - e1) * x + e2) * x - e3
            fp = (3.0 * x - 2.0 * e1) * x + e2
            if fabs(fp) < 1e-300:
                break
            x -= f / fp
        t[k] = x

    # sort descending
    cdef double tmp
    for i in range(2):
        for j in range(i + 1, 3):
            if t[j] > t[i]:
                tmp = t[i]
                t[i] = t[j]
                t[j] = tmp
    # polynomial roots carry an absolute error of order eps times the
    # coefficient scale; the entropy weight log((nu+1)/(nu-1)) blows that
    # up near nu = 1, so the unit neighborhood always goes to the
    # eigensolver (this also covers unphysical spectra)
    if t[2] < 1.002:
        return 1
    if t[0] - t[1] < CLUSTER_GAP * (fabs(t[0]) + 1.0) \
            or t[1] - t[2] < CLUSTER_GAP * (fabs(t[1]) + 1.0):
        return 1
    out[0] = sqrt(t[0])
    out[1] = sqrt(t[1])
    out[2] = sqrt(t[2])
    return 0


def symplectic_eigenvalues_small(const double[:, ::1] gamma, double[::1] out):
    """Symplectic eigenvalues of a 1-3 mode covariance matrix.

    Fills ``out`` (length n_modes) in descending order and returns 0, or
    returns a nonzero status when the caller should use the generic route.
    """
    cdef int dim = gamma.shape[0]
    if gamma.shape[1] != dim or out.shape[0] * 2 != dim:
        return 2
    if dim == 2:
        return _eigs_one(&gamma[0, 0], &out[0])
    if dim == 4:
        return _eigs_two(&gamma[0, 0], &out[0])
    if dim == 6:
        return _eigs_three(&gamma[0, 0], &out[0])
    return 2


def entropy_small(const double[:, ::1] gamma):
    """Von Neumann entropy (bits) of a 1-3 mode covariance matrix.

    Returns the entropy, or a negative sentinel: -1.0 when the generic
    route should be used, -2.0 when an eigenvalue is unphysically small.
    """
    cdef int dim = gamma.shape[0]
    cdef double nu[3]
    cdef int n = dim // 2
    cdef int status, i
    cdef double s = 0.0
    if dim not in (2, 4, 6) or gamma.shape[1] != dim:
        return -1.0
    if dim == 2:
        status = _eigs_one(&gamma[0, 0], nu)
    elif dim == 4:
        status = _eigs_two(&gamma[0, 0], nu)
    else:
        status = _eigs_three(&gamma[0, 0], nu)
    if status != 0:
        return -1.0
    for i in range(n):
        if nu[i] < 1.0 - UNIT_CLAMP:
            return -2.0
        s += _g_bits(nu[i])
    return s
