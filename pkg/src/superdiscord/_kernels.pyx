# cython: language_level=3
"""Compiled hot loops.

``cond_entropy_batch`` evaluates the post-measurement conditional entropy of
subsystem A for many measurement directions on B, which is the inner loop of
the sphere minimisation. ``herm_eigvals`` is a cyclic complex Jacobi solver
for the small Hermitian matrices used everywhere else.

Both functions mirror ``superdiscord._fallback`` exactly in contract.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log2, fabs, copysign

cnp.import_array()

cdef extern from "complex.h" nogil:
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)
    double cabs(double complex)

cdef double DEGENERATE_P = 1e-15


cdef inline double _xlog2x(double v) noexcept nogil:
    if v <= 0.0:
        return 0.0
    return v * log2(v)


cdef void _batch(const double complex[:, ::1] rho, double t,
                 const double[:, ::1] dirs, double[::1] out) noexcept nogil:
    cdef Py_ssize_t k, n = dirs.shape[0]
    cdef double n1, n2, n3, sgn, e00, e11, p, mean, hd, rad, l0, l1, acc
    cdef double complex e01, e10, m00, m01, m11
    cdef int o
    for k in range(n):
        n1 = dirs[k, 0]
        n2 = dirs[k, 1]
        n3 = dirs[k, 2]
        acc = 0.0
        for o in range(2):
            # outcome o=0 is P(+x): effect (I - t n.sigma)/2; o=1 is P(-x)
            sgn = -1.0 if o == 0 else 1.0
            e00 = 0.5 * (1.0 + sgn * t * n3)
            e11 = 0.5 * (1.0 - sgn * t * n3)
            e01 = 0.5 * sgn * t * (n1 - 1j * n2)
            e10 = 0.5 * sgn * t * (n1 + 1j * n2)
            # M[a][a'] = sum_{b,b'} rho[2a+b, 2a'+b'] E[b', b]
            m00 = (rho[0, 0] * e00 + rho[0, 1] * e10
                   + rho[1, 0] * e01 + rho[1, 1] * e11)
            m01 = (rho[0, 2] * e00 + rho[0, 3] * e10
                   + rho[1, 2] * e01 + rho[1, 3] * e11)
            m11 = (rho[2, 2] * e00 + rho[2, 3] * e10
                   + rho[3, 2] * e01 + rho[3, 3] * e11)
            p = creal(m00) + creal(m11)
            if p <= DEGENERATE_P:
                continue
            mean = 0.5 * p
            hd = 0.5 * (creal(m00) - creal(m11))
            rad = sqrt(hd * hd + creal(m01) * creal(m01) + cimag(m01) * cimag(m01))
            l0 = (mean + rad) / p
            l1 = (mean - rad) / p
            acc -= p * (_xlog2x(l0) + _xlog2x(l1))
        out[k] = acc


def cond_entropy_batch(rho, double t, dirs):
    """Weighted conditional entropy of A for each row of ``dirs``.

    Parameters
    ----------
    rho : (4, 4) complex array
        Two-qubit density matrix, A is the first factor.
    t : float
        ``tanh(x)``; 1.0 gives the projective measurement.
    dirs : (N, 3) float array
        Unit Bloch vectors of the measured basis on B.

    Returns
    -------
    (N,) float array, in bits.
    """
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double[:, ::1] d = np.ascontiguousarray(dirs, dtype=np.float64)
    out = np.empty(d.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        _batch(r, t, d, o)
    return out


def herm_eigvals(m, double tol, int max_sweeps):
    """Cyclic Jacobi eigenvalues of a Hermitian matrix.

    Returns ``(values, off_norm, sweeps)``; values are unsorted and
    ``off_norm`` is the off-diagonal Frobenius norm at exit. The caller
    decides what to do when ``off_norm > tol``.
    """
    a_np = np.array(m, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] a = a_np
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, r, app, aqq, theta, tt, c, s
    cdef double complex e, eb, akp, akq, apk, aqk
    with nogil:
        while True:
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += creal(a[p, q]) * creal(a[p, q]) + cimag(a[p, q]) * cimag(a[p, q])
            off = sqrt(off)
            if off <= tol or sweep >= max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = cabs(a[p, q])
                    if r < 1e-300:
                        continue
                    e = a[p, q] / r
                    eb = conj(e)
                    app = creal(a[p, p])
                    aqq = creal(a[q, q])
                    theta = (aqq - app) / (2.0 * r)
                    tt = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(tt * tt + 1.0)
                    s = tt * c
                    # A <- A U with U = [[c, s], [-s conj(e), c conj(e)]] on (p, q)
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp * c - akq * s * eb
                        a[k, q] = akp * s + akq * c * eb
                    # A <- U^H A
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = apk * c - aqk * s * e
                        a[q, k] = apk * s + aqk * c * e
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = creal(a[p, p])
                    a[q, q] = creal(a[q, q])
            sweep += 1
    vals = np.array([a_np[i, i].real for i in range(n)])
    return vals, off, sweep
