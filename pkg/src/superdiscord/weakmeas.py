"""Two-outcome weak measurements on qubit B.

The measurement of strength ``x`` along Bloch direction ``z`` has operators::

    P(+x) = sqrt((1 - tanh x)/2) V Pi0 V^H + sqrt((1 + tanh x)/2) V Pi1 V^H
    P(-x) = sqrt((1 + tanh x)/2) V Pi0 V^H + sqrt((1 - tanh x)/2) V Pi1 V^H

with ``V sz V^H = z . sigma``. For large ``x`` P(+x) tends to the projector
``V Pi1 V^H``; the outcome labels do not affect any entropy.

For the X-state family the conditional entropy depends on the direction
only through ``phi = s z3`` and ``theta = |(c1 z1, c2 z2, c3 z3)|``. Two
closed forms are kept side by side:

* :func:`f_paper` is the four-term closed form, term for term;
* :func:`f_eig` weights each log term by the actual spectrum of the
  conditional states.

They agree when ``phi == 0`` and otherwise differ by exactly
``phi tanh x log2((1 + phi tanh x)/(1 - phi tanh x))``
(see :func:`pairing_residual`).
"""
import math
from dataclasses import dataclass

import numpy as np

from superdiscord import linalg
from superdiscord.states import require_valid, to_density_matrix

MAX_STRENGTH = 350.0
UNIT_TOL = 1e-12
DEGENERATE_P = 1e-15


@dataclass(frozen=True)
class UnitaryParams:
    """``V = t I + i (y1 sx + y2 sy + y3 sz)`` with unit norm."""

    t: float
    y1: float
    y2: float
    y3: float

    def norm_error(self):
        return abs(self.t**2 + self.y1**2 + self.y2**2 + self.y3**2 - 1.0)

    def matrix(self):
        y = (self.y1, self.y2, self.y3)
        return self.t * linalg.I2 + 1j * sum(c * s for c, s in zip(y, linalg.PAULIS))


@dataclass(frozen=True)
class MeasurementDirection:
    z1: float
    z2: float
    z3: float

    def __post_init__(self):
        err = abs(self.z1**2 + self.z2**2 + self.z3**2 - 1.0)
        if not err <= UNIT_TOL:
            raise ValueError(f"measurement direction must be a unit vector (|z|^2 - 1 = {err:.3e})")

    @classmethod
    def from_vector(cls, v):
        """Normalise ``v`` and wrap it."""
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise ValueError("zero vector has no direction")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_angles(cls, polar, azimuth):
        sp = math.sin(polar)
        return cls(sp * math.cos(azimuth), sp * math.sin(azimuth), math.cos(polar))

    def as_array(self):
        return np.array([self.z1, self.z2, self.z3])

    def __neg__(self):
        return MeasurementDirection(-self.z1, -self.z2, -self.z3)

    def __iter__(self):
        return iter((self.z1, self.z2, self.z3))


class PhiTheta(tuple):
    """``(phi, theta)`` pair; a plain tuple with named accessors."""

    __slots__ = ()

    def __new__(cls, phi, theta):
        return super().__new__(cls, (float(phi), float(theta)))

    phi = property(lambda self: self[0])
    theta = property(lambda self: self[1])


@dataclass(frozen=True)
class PosteriorEnsemble:
    """Outcome probabilities and conditional states of A.

    ``degenerate`` flags outcomes whose probability fell below 1e-15; their
    conditional state is reported as I/2.
    """

    p_plus: float
    p_minus: float
    rho_plus: np.ndarray
    rho_minus: np.ndarray
    degenerate: tuple = (False, False)


def check_strength(x):
    x = float(x)
    if not (0.0 <= x <= MAX_STRENGTH):
        raise ValueError(f"measurement strength must lie in [0, {MAX_STRENGTH:g}], got {x}")
    return x


def _coerce_direction(d):
    if isinstance(d, MeasurementDirection):
        return d
    return MeasurementDirection(*(float(v) for v in d))


def direction_from_unitary(u):
    """Bloch vector of ``V sz V^H`` in terms of the unitary's parameters."""
    if u.norm_error() > UNIT_TOL:
        raise ValueError(f"unitary parameters must have unit norm (error {u.norm_error():.3e})")
    t, y1, y2, y3 = u.t, u.y1, u.y2, u.y3
    return MeasurementDirection.from_vector(
        (
            2 * (-t * y2 + y1 * y3),
            2 * (t * y1 + y2 * y3),
            t * t + y3 * y3 - y1 * y1 - y2 * y2,
        )
    )


def unitary_from_direction(d):
    """Canonical ``V`` rotating the z axis onto ``d``.

    Uses the half-angle rotation about ``z_hat x d``; the antipode
    ``(0, 0, -1)`` uses a rotation by pi about the x axis.
    """
    d = _coerce_direction(d)
    z1, z2, z3 = d
    rho = math.hypot(z1, z2)
    if rho == 0.0:
        return UnitaryParams(1.0, 0.0, 0.0, 0.0) if z3 > 0 else UnitaryParams(0.0, -1.0, 0.0, 0.0)
    # V = exp(-i a/2 m.sigma) with m = (z_hat x d)/rho = (-z2, z1, 0)/rho, so y = sin(a/2) (z2, -z1, 0)/rho.
    # Each half-angle factor comes from whichever of 1 +- z3 is free of cancellation.
    if z3 >= 0:
        t = math.sqrt((1.0 + z3) / 2.0)
        half_sin = rho / math.sqrt(2.0 * (1.0 + z3))
    else:
        t = rho / math.sqrt(2.0 * (1.0 - z3))
        half_sin = math.sqrt((1.0 - z3) / 2.0)
    y1, y2 = half_sin * (z2 / rho), -half_sin * (z1 / rho)
    norm = math.sqrt(t * t + y1 * y1 + y2 * y2)
    return UnitaryParams(t / norm, y1 / norm, y2 / norm, 0.0)


def effect_amplitudes(x):
    """``(sqrt((1 - tanh x)/2), sqrt((1 + tanh x)/2))`` without cancellation."""
    x = check_strength(x)
    # (1 -+ tanh x)/2 == 1/(1 + exp(+-2x))
    lo = 1.0 / (1.0 + math.exp(2.0 * x)) if x < 300 else 0.0
    hi = 1.0 / (1.0 + math.exp(-2.0 * x))
    return math.sqrt(lo), math.sqrt(hi)


def weak_operators(x, direction, unitary=None):
    """The pair ``(P(+x), P(-x))`` acting on qubit B.

    ``unitary`` may supply any V mapping the z axis onto ``direction``;
    by default the canonical one from :func:`unitary_from_direction` is used.
    """
    direction = _coerce_direction(direction)
    lo, hi = effect_amplitudes(x)
    v = (unitary or unitary_from_direction(direction)).matrix()
    q0 = v @ linalg.PROJ_0 @ v.conj().T
    q1 = v @ linalg.PROJ_1 @ v.conj().T
    return lo * q0 + hi * q1, hi * q0 + lo * q1


def posterior_from_operators(rho, ops):
    """Probabilities and normalised A-states after measuring ``ops`` on B."""
    rho = linalg.require_density_matrix(rho)
    probs, states, flags = [], [], []
    for op in ops:
        big = linalg.kron(linalg.I2, op)
        unnorm = big @ rho @ big.conj().T
        p = float(np.trace(unnorm).real)
        reduced = np.einsum("ijkj->ik", unnorm.reshape(2, 2, 2, 2))
        if p <= DEGENERATE_P:
            probs.append(max(p, 0.0))
            states.append(np.array(linalg.I2) / 2)
            flags.append(True)
        else:
            probs.append(p)
            states.append(reduced / p)
            flags.append(False)
    return probs, states, tuple(flags)


def posterior_ensemble(rho, x, direction, unitary=None):
    """Weak-measurement posterior of any two-qubit ``rho``, evaluated with matrices."""
    ops = weak_operators(x, direction, unitary)
    (pp, pm), (rp, rm), flags = posterior_from_operators(rho, ops)
    return PosteriorEnsemble(pp, pm, rp, rm, flags)


def projective_posterior(rho, direction, unitary=None):
    """Outcomes of the projective measurement ``{V Pi0 V^H, V Pi1 V^H}`` on B."""
    direction = _coerce_direction(direction)
    v = (unitary or unitary_from_direction(direction)).matrix()
    ops = (v @ linalg.PROJ_0 @ v.conj().T, v @ linalg.PROJ_1 @ v.conj().T)
    (p0, p1), (r0, r1), flags = posterior_from_operators(rho, ops)
    return PosteriorEnsemble(p0, p1, r0, r1, flags)


def conditional_entropy(ens):
    """``sum_k p_k S(rho_k)`` with degenerate outcomes contributing zero."""
    total = 0.0
    for p, rho, deg in zip((ens.p_plus, ens.p_minus), (ens.rho_plus, ens.rho_minus), ens.degenerate):
        if not deg:
            total += p * linalg.von_neumann_entropy(rho)
    return total


def phi_theta(params, direction):
    p = require_valid(params)
    d = _coerce_direction(direction)
    theta = math.sqrt((p.c1 * d.z1) ** 2 + (p.c2 * d.z2) ** 2 + (p.c3 * d.z3) ** 2)
    return PhiTheta(p.s * d.z3, theta)


def _weighted_term(num, den, label):
    """``-num/4 log2(num/den)`` with a domain check on the numerator."""
    if num <= 0.0:
        raise ValueError(f"log-domain violation in term {label}: numerator {num:.6g} <= 0")
    return -num / 4.0 * math.log2(num / den)


def f_paper(pt, x):
    """The four-term closed-form weak conditional entropy, term for term.

    Numerators ``1 + (phi +- theta) tanh x`` are divided by
    ``2 (1 - phi tanh x)`` and ``1 + (-phi +- theta) tanh x`` by
    ``2 (1 + phi tanh x)``.
    """
    phi, theta = pt
    t = math.tanh(check_strength(x))
    d_minus = 2.0 * (1.0 - phi * t)
    d_plus = 2.0 * (1.0 + phi * t)
    return (
        _weighted_term(1.0 + (phi + theta) * t, d_minus, "(+phi+theta)")
        + _weighted_term(1.0 + (phi - theta) * t, d_minus, "(+phi-theta)")
        + _weighted_term(1.0 + (-phi - theta) * t, d_plus, "(-phi-theta)")
        + _weighted_term(1.0 + (-phi + theta) * t, d_plus, "(-phi+theta)")
    )


def _spectral_entropy(num_a, num_b, den, label):
    s = 0.0
    for num in (num_a, num_b):
        if num < 0.0:
            raise ValueError(f"log-domain violation in {label}: numerator {num:.6g} < 0")
        if num > 0.0:
            s -= num / den * math.log2(num / den)
    return s


def f_eig(pt, x):
    """Weak conditional entropy from the true conditional-state spectra.

    ``rho_{A|+}`` has eigenvalues ``(1 - (phi +- theta) t) / (2 (1 - phi t))``
    and ``rho_{A|-}`` has ``(1 + (phi +- theta) t) / (2 (1 + phi t))``.
    """
    phi, theta = pt
    t = math.tanh(check_strength(x))
    p_plus = (1.0 - phi * t) / 2.0
    p_minus = (1.0 + phi * t) / 2.0
    total = 0.0
    if p_plus > DEGENERATE_P:
        total += p_plus * _spectral_entropy(
            1.0 - (phi + theta) * t, 1.0 - (phi - theta) * t, 2.0 * (1.0 - phi * t), "rho_{A|+}"
        )
    if p_minus > DEGENERATE_P:
        total += p_minus * _spectral_entropy(
            1.0 + (phi + theta) * t, 1.0 + (phi - theta) * t, 2.0 * (1.0 + phi * t), "rho_{A|-}"
        )
    return total


def pairing_residual(phi, x):
    """Predicted ``f_eig - f_paper``: ``phi t log2((1 + phi t)/(1 - phi t))``."""
    t = math.tanh(check_strength(x))
    if phi == 0.0 or t == 0.0:
        return 0.0
    return phi * t * math.log2((1.0 + phi * t) / (1.0 - phi * t))


def weak_conditional_entropy_def(params, x, direction, unitary=None):
    """Weak conditional entropy from matrices only (no closed forms)."""
    rho = to_density_matrix(params)
    return conditional_entropy(posterior_ensemble(rho, x, direction, unitary))


def projective_conditional_entropy_def(params, direction, unitary=None):
    rho = to_density_matrix(params)
    return conditional_entropy(projective_posterior(rho, direction, unitary))
