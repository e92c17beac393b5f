"""Local phase-flip (dephasing) noise applied to both qubits.

Single-qubit Kraus operators are ``diag(sqrt(1 - p/2), sqrt(1 - p/2))`` and
``diag(sqrt(p/2), -sqrt(p/2))``; applying them on A and on B with the same
``p`` scales ``c1`` and ``c2`` by ``(1 - p)**2`` and leaves ``s`` and ``c3``
alone.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from superdiscord import linalg
from superdiscord.discord import sqd_paper_closed
from superdiscord.states import XStateParams, require_valid
from superdiscord.weakmeas import check_strength


def p_of_time(gamma, time):
    """Flip probability ``1 - exp(-gamma t)`` after time ``t`` at damping rate ``gamma``."""
    if gamma < 0 or time < 0:
        raise ValueError(f"gamma and time must be non-negative, got gamma={gamma}, time={time}")
    return -math.expm1(-gamma * time)


@dataclass(frozen=True)
class DephasingParams:
    p: float
    gamma: Optional[float] = None
    time: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"flip probability must lie in [0, 1], got {self.p}")
        if (self.gamma is None) != (self.time is None):
            raise ValueError("gamma and time must be given together")
        if self.gamma is not None and abs(p_of_time(self.gamma, self.time) - self.p) > 1e-15:
            raise ValueError("p is inconsistent with gamma and time")

    @classmethod
    def from_rate(cls, gamma, time):
        return cls(p_of_time(gamma, time), float(gamma), float(time))


def _coerce(p):
    if isinstance(p, DephasingParams):
        return p
    return DephasingParams(float(p))


def single_qubit_kraus(p):
    p = _coerce(p).p
    k0 = math.sqrt(1 - p / 2) * np.array(linalg.I2)
    k1 = math.sqrt(p / 2) * np.array(linalg.SIGMA_Z)
    return k0, k1


def kraus_on_a(p):
    return [linalg.kron(k, linalg.I2) for k in single_qubit_kraus(p)]


def kraus_on_b(p):
    return [linalg.kron(linalg.I2, k) for k in single_qubit_kraus(p)]


def kraus_phase_flip(p):
    """Four product operators ``G_i^(A) G_j^(B)`` of the two-sided channel."""
    return [ga @ gb for ga in kraus_on_a(p) for gb in kraus_on_b(p)]


def evolve_params(params, p):
    q = require_valid(params)
    f = (1 - _coerce(p).p) ** 2
    out = XStateParams(q.s, f * q.c1, f * q.c2, q.c3)
    return require_valid(out)


def _xlog2x(v):
    if v < -1e-12:
        raise ValueError(f"log-domain violation: argument {v:.6g} < 0")
    return 0.0 if v <= 0 else v * math.log2(v)


def sqd_dephased_closed(params, x, p):
    """Closed-form super discord after dephasing, written out in full.

    The printed expression omits a constant: it equals the composition
    ``sqd_paper_closed(evolve_params(params, p), x)`` plus one. The ``- 1``
    below restores the composition (check at the maximally mixed state,
    where every correlation vanishes).
    """
    q = require_valid(params)
    t = math.tanh(check_strength(x))
    damp = (1 - _coerce(p).p) ** 4
    s, c1, c2, c3 = q.as_tuple()

    weak = 0.0
    for num, den in (
        (1 + (s + c3) * t, 2 * (1 - s * t)),
        (1 + (s - c3) * t, 2 * (1 - s * t)),
        (1 + (-s - c3) * t, 2 * (1 + s * t)),
        (1 + (-s + c3) * t, 2 * (1 + s * t)),
    ):
        if num <= 0:
            raise ValueError(f"log-domain violation: numerator {num:.6g} <= 0")
        weak += num * math.log2(num / den)
    weak = -weak / 4

    bias = -(_xlog2x(1 - s) + _xlog2x(1 + s)) / 2

    r_plus = math.sqrt(s * s + damp * (c1 + c2) ** 2)
    r_minus = math.sqrt(s * s + damp * (c1 - c2) ** 2)
    joint = (
        _xlog2x(1 - c3 + r_plus)
        + _xlog2x(1 - c3 - r_plus)
        + _xlog2x(1 + c3 + r_minus)
        + _xlog2x(1 + c3 - r_minus)
    ) / 4
    return weak + bias + joint - 1.0


def sqd_dephased_composed(params, x, p):
    return sqd_paper_closed(evolve_params(params, p), x)
