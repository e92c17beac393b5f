"""Pure-Python/numpy twins of the compiled kernels in ``_kernels.pyx``.

Selected automatically when the extension is not built, or when
``SUPERDISCORD_PURE=1`` is set. Contracts are identical.
"""
import math

import numpy as np

DEGENERATE_P = 1e-15


def _xlog2x(v):
    out = np.zeros_like(v)
    pos = v > 0.0
    out[pos] = v[pos] * np.log2(v[pos])
    return out


def cond_entropy_batch(rho, t, dirs):
    """Weighted conditional entropy of A for each row of ``dirs`` (bits)."""
    rho = np.asarray(rho, dtype=np.complex128)
    dirs = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    n1, n2, n3 = dirs[:, 0], dirs[:, 1], dirs[:, 2]
    acc = np.zeros(dirs.shape[0])
    for sgn in (-1.0, 1.0):
        e00 = 0.5 * (1.0 + sgn * t * n3)
        e11 = 0.5 * (1.0 - sgn * t * n3)
        e01 = 0.5 * sgn * t * (n1 - 1j * n2)
        e10 = 0.5 * sgn * t * (n1 + 1j * n2)
        m00 = rho[0, 0] * e00 + rho[0, 1] * e10 + rho[1, 0] * e01 + rho[1, 1] * e11
        m01 = rho[0, 2] * e00 + rho[0, 3] * e10 + rho[1, 2] * e01 + rho[1, 3] * e11
        m11 = rho[2, 2] * e00 + rho[2, 3] * e10 + rho[3, 2] * e01 + rho[3, 3] * e11
        p = m00.real + m11.real
        live = p > DEGENERATE_P
        ps = np.where(live, p, 1.0)
        hd = 0.5 * (m00.real - m11.real)
        rad = np.sqrt(hd * hd + m01.real * m01.real + m01.imag * m01.imag)
        l0 = (0.5 * ps + rad) / ps
        l1 = (0.5 * ps - rad) / ps
        acc -= np.where(live, ps * (_xlog2x(l0) + _xlog2x(l1)), 0.0)
    return acc


def herm_eigvals(m, tol, max_sweeps):
    """Cyclic Jacobi eigenvalues of a Hermitian matrix.

    Returns ``(values, off_norm, sweeps)`` with unsorted values.
    """
    a = [[complex(v) for v in row] for row in np.asarray(m)]
    n = len(a)
    sweep = 0
    while True:
        off = math.sqrt(sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(n) if p != q))
        if off <= tol or sweep >= max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p][q])
                if r < 1e-300:
                    continue
                e = a[p][q] / r
                eb = e.conjugate()
                theta = (a[q][q].real - a[p][p].real) / (2.0 * r)
                tt = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(tt * tt + 1.0)
                s = tt * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = akp * c - akq * s * eb
                    a[k][q] = akp * s + akq * c * eb
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = apk * c - aqk * s * e
                    a[q][k] = apk * s + aqk * c * e
                a[p][q] = a[q][p] = 0j
                a[p][p] = complex(a[p][p].real)
                a[q][q] = complex(a[q][q].real)
        sweep += 1
    return np.array([a[i][i].real for i in range(n)]), off, sweep
