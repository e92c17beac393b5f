"""Dense complex linear algebra for 2x2 and 4x4 Hermitian matrices.

Everything here is a pure function returning fresh arrays. Entropies are in
bits. Eigenvalues come from a cyclic Jacobi solver (compiled when available,
see :mod:`superdiscord._backend`).
"""
from dataclasses import dataclass, field

import numpy as np

from superdiscord._backend import herm_eigvals as _jacobi

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50
NEG_CLAMP = 1e-10


def _frozen(m):
    m = np.array(m, dtype=np.complex128)
    m.flags.writeable = False
    return m


I2 = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
PROJ_0 = _frozen([[1, 0], [0, 0]])
PROJ_1 = _frozen([[0, 0], [0, 1]])


class NotHermitianError(ValueError):
    """Input deviates from Hermiticity by more than the allowed tolerance."""

    def __init__(self, asymmetry):
        self.asymmetry = asymmetry
        super().__init__(f"matrix is not Hermitian (max |m - m^H| = {asymmetry:.3e})")


class ConvergenceError(RuntimeError):
    """Jacobi iteration ran out of sweeps."""

    def __init__(self, residual, sweeps):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})"
        )


class DensityMatrixError(ValueError):
    """Input is not a valid density matrix; ``check`` holds the diagnostics."""

    def __init__(self, check):
        self.check = check
        super().__init__("invalid density matrix: " + "; ".join(check.violations))


class KrausCompletenessError(ValueError):
    def __init__(self, deviation):
        self.deviation = deviation
        super().__init__(f"Kraus operators are not trace preserving (|sum K^H K - I| = {deviation:.3e})")


@dataclass(frozen=True)
class DensityCheck:
    """Diagnostics from :func:`is_density_matrix`. Truthy iff valid."""

    ok: bool
    hermiticity: float
    trace_error: float
    min_eigenvalue: float
    violations: tuple = field(default=())

    def __bool__(self):
        return self.ok


def _square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def asymmetry(m):
    """Largest entry of ``|m - m^H|``."""
    m = _square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def kron(a, b):
    """Kronecker product of two 2x2 matrices, ``a[0, 0] * b`` in the top-left block."""
    a = _square(a)
    b = _square(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron expects 2x2 inputs, got {a.shape} and {b.shape}")
    out = np.empty((4, 4), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = a[i, j] * b
    return out


def herm_eigenvalues(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a Hermitian matrix, sorted in descending order.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix (2x2 or 4x4 in this package, any size works).
    tol : float
        Exit threshold on the off-diagonal Frobenius norm.
    max_sweeps : int
        Sweep budget before :class:`ConvergenceError` is raised.

    Raises
    ------
    NotHermitianError
        If ``m`` deviates from its conjugate transpose by more than 1e-10.
    """
    m = _square(m)
    asym = asymmetry(m)
    if asym > HERMITIAN_TOL:
        raise NotHermitianError(asym)
    # symmetrise so the solver sees an exactly Hermitian input
    m = 0.5 * (m + m.conj().T)
    vals, off, sweeps = _jacobi(m, tol, max_sweeps)
    if off > tol:
        raise ConvergenceError(off, sweeps)
    return np.sort(vals)[::-1].copy()


def is_density_matrix(m, tol=1e-8):
    m = _square(m)
    herm = asymmetry(m)
    tr_err = abs(complex(np.trace(m)) - 1.0)
    violations = []
    if herm > tol:
        violations.append(f"Hermiticity violated (max asymmetry {herm:.3e})")
        lam_min = float(np.min(np.linalg.eigvals(m).real))
    else:
        lam_min = float(herm_eigenvalues(0.5 * (m + m.conj().T))[-1])
    if tr_err > tol:
        violations.append(f"trace violated (|tr - 1| = {tr_err:.3e})")
    if lam_min < -tol:
        violations.append(f"PSD violated (min eigenvalue {lam_min:.3e})")
    return DensityCheck(not violations, herm, tr_err, lam_min, tuple(violations))


def require_density_matrix(m, tol=1e-8):
    check = is_density_matrix(m, tol)
    if not check:
        raise DensityMatrixError(check)
    return _square(m)


def entropy_of_spectrum(values):
    """``-sum v log2 v`` with 0 log 0 = 0; values in [-1e-10, 0) count as 0."""
    v = np.asarray(values, dtype=float)
    if np.any(v < -NEG_CLAMP):
        raise ValueError(f"negative probability {v.min():.3e} in spectrum")
    v = v[v > 0.0]
    return float(-np.sum(v * np.log2(v)))


def von_neumann_entropy(rho):
    """Von Neumann entropy ``-tr(rho log2 rho)`` in bits."""
    rho = require_density_matrix(rho)
    return entropy_of_spectrum(herm_eigenvalues(rho))


def partial_trace(rho, keep):
    """Reduce a two-qubit state to subsystem ``keep`` ("A" = first factor, "B" = second)."""
    rho = require_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"partial_trace expects a 4x4 matrix, got {rho.shape}")
    t = rho.reshape(2, 2, 2, 2)  # indices a, b, a', b'
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def kraus_completeness(ops):
    """Max-abs deviation of ``sum K^H K`` from the identity."""
    ops = [_square(k) for k in ops]
    dim = ops[0].shape[0]
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(dim))))


def apply_kraus(rho, ops, tol=1e-10):
    """Apply the channel ``rho -> sum K rho K^H``."""
    rho = require_density_matrix(rho)
    dev = kraus_completeness(ops)
    if dev > tol:
        raise KrausCompletenessError(dev)
    out = np.zeros_like(rho)
    for k in ops:
        k = _square(k)
        out += k @ rho @ k.conj().T
    return out
