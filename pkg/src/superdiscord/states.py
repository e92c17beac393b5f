"""The four-parameter two-qubit X-state family.

A state is fixed by ``(s, c1, c2, c3)``::

    rho = 1/4 (I x I + s I x sz + c1 sx x sx + c2 sy x sy + c3 sz x sz)

so that subsystem A is always maximally mixed and B carries a z-bias ``s``.
Two validation modes exist. ``strict`` is the regime in which the closed-form
minimum of the weak conditional entropy is derived::

    |c1| < |c2| < |c3|,   0 < |s| < 1 - |c3|

``relaxed`` only requires each parameter in [-1, 1]. Both modes also require
the matrix to be positive semidefinite, which the strict inequalities alone
do not guarantee.
"""
import math
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from superdiscord import linalg

PHYSICAL_TOL = 1e-12
MODES = ("strict", "relaxed")


@dataclass(frozen=True)
class XStateParams:
    s: float
    c1: float
    c2: float
    c3: float

    def as_tuple(self):
        return (self.s, self.c1, self.c2, self.c3)

    def __str__(self):
        return f"(s={self.s:g}, c1={self.c1:g}, c2={self.c2:g}, c3={self.c3:g})"


class Violation(NamedTuple):
    """A failed constraint; ``margin`` is how far on the wrong side it lies."""

    constraint: str
    margin: float

    def __str__(self):
        return f"{self.constraint} violated (margin {self.margin:.6g})"


class StateSpectrum(NamedTuple):
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float


class InvalidParamsError(ValueError):
    def __init__(self, params, violations):
        self.params = params
        self.violations = list(violations)
        super().__init__(f"invalid X-state {params}: " + "; ".join(str(v) for v in self.violations))


def _coerce(params):
    if isinstance(params, XStateParams):
        return params
    return XStateParams(*(float(v) for v in params))


def _radicals(p):
    return (
        math.sqrt(p.s**2 + (p.c1 + p.c2) ** 2),
        math.sqrt(p.s**2 + (p.c1 - p.c2) ** 2),
    )


def spectrum_unchecked(params):
    p = _coerce(params)
    r_plus, r_minus = _radicals(p)
    return StateSpectrum(
        (1 - p.c3 + r_plus) / 4,
        (1 - p.c3 - r_plus) / 4,
        (1 + p.c3 + r_minus) / 4,
        (1 + p.c3 - r_minus) / 4,
    )


def validate(params, mode="strict"):
    """Return the list of violated constraints (empty when valid)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    p = _coerce(params)
    out = []
    names = ("s", "c1", "c2", "c3")
    for name, v in zip(names, p.as_tuple()):
        if not math.isfinite(v):
            out.append(Violation(f"{name} finite", math.inf))
        elif abs(v) > 1:
            out.append(Violation(f"|{name}| <= 1", abs(v) - 1))
    if out:
        return out
    if mode == "strict":
        a1, a2, a3, as_ = abs(p.c1), abs(p.c2), abs(p.c3), abs(p.s)
        if not a1 < a2:
            out.append(Violation("|c1| < |c2|", a1 - a2))
        if not a2 < a3:
            out.append(Violation("|c2| < |c3|", a2 - a3))
        if not as_ > 0:
            out.append(Violation("0 < |s|", -as_))
        if not as_ < 1 - a3:
            out.append(Violation("|s| < 1-|c3|", as_ - (1 - a3)))
    lam = spectrum_unchecked(p)
    labels = (
        "1-c3+sqrt(s^2+(c1+c2)^2) >= 0",
        "1-c3-sqrt(s^2+(c1+c2)^2) >= 0",
        "1+c3+sqrt(s^2+(c1-c2)^2) >= 0",
        "1+c3-sqrt(s^2+(c1-c2)^2) >= 0",
    )
    for label, value in zip(labels, lam):
        if value < -PHYSICAL_TOL:
            out.append(Violation(f"physicality {label}", -4 * value))
    return out


def require_valid(params, mode="relaxed"):
    p = _coerce(params)
    bad = validate(p, mode)
    if bad:
        raise InvalidParamsError(p, bad)
    return p


def is_strict(params):
    return not validate(params, "strict")


def density_matrix_from_paulis(params):
    """Build the state as a Pauli expansion; used to cross-check the direct entries."""
    p = _coerce(params)
    m = linalg.kron(linalg.I2, linalg.I2) + p.s * linalg.kron(linalg.I2, linalg.SIGMA_Z)
    for c, sigma in zip((p.c1, p.c2, p.c3), linalg.PAULIS):
        m = m + c * linalg.kron(sigma, sigma)
    return m / 4


def to_density_matrix(params):
    """The 4x4 X-state matrix written out entry by entry."""
    p = require_valid(params, "relaxed")
    s, c1, c2, c3 = p.as_tuple()
    m = np.array(
        [
            [1 + s + c3, 0, 0, c1 - c2],
            [0, 1 - s - c3, c1 + c2, 0],
            [0, c1 + c2, 1 + s - c3, 0],
            [c1 - c2, 0, 0, 1 - s + c3],
        ],
        dtype=np.complex128,
    ) / 4
    m.flags.writeable = False
    return m


def spectrum(params):
    return spectrum_unchecked(require_valid(params, "relaxed"))


def _xlog2x(v):
    if v < 0:
        if v < -PHYSICAL_TOL:
            raise ValueError(f"log of negative argument {v:.3e}")
        return 0.0
    return 0.0 if v == 0 else v * math.log2(v)


def joint_entropy(params):
    """Entropy of the two-qubit state from the closed-form spectrum.

    Written as ``2 - 1/4 sum (4 lambda) log2 (4 lambda)``.
    """
    p = require_valid(params, "relaxed")
    r_plus, r_minus = _radicals(p)
    terms = (
        1 - p.c3 + r_plus,
        1 - p.c3 - r_plus,
        1 + p.c3 + r_minus,
        1 + p.c3 - r_minus,
    )
    return 2 - sum(_xlog2x(v) for v in terms) / 4


def binary_term(v):
    """``-(1-v)/2 log2(1-v) - (1+v)/2 log2(1+v)``, zero at v=0 and -1 at |v|=1."""
    v = float(v)
    if not abs(v) <= 1:
        raise ValueError(f"binary_term needs |v| <= 1, got {v}")
    return -(_xlog2x(1 - v) + _xlog2x(1 + v)) / 2


def reduced_entropies(params):
    """``(S_A, S_B)``; A is always maximally mixed so ``S_A == 1``."""
    p = require_valid(params, "relaxed")
    return 1.0, 1.0 + binary_term(p.s)


def sample_params(rng, mode="strict", s=None, max_tries=100_000):
    """Draw a valid parameter set by rejection sampling.

    ``s`` pins the bias (e.g. ``s=0`` for the Bell-diagonal subfamily); the
    strict ordering of the correlations is still enforced in that case, and
    the ``0 < |s|`` clause is waived.
    """
    for _ in range(max_tries):
        c = rng.uniform(-1, 1, size=3)
        sv = rng.uniform(-1, 1) if s is None else float(s)
        cand = XStateParams(float(sv), float(c[0]), float(c[1]), float(c[2]))
        bad = validate(cand, mode)
        if s is not None and s == 0:
            bad = [b for b in bad if b.constraint != "0 < |s|"]
        if not bad:
            return cand
    raise RuntimeError(f"no valid sample after {max_tries} draws")


_KEYS = ("s", "c1", "c2", "c3")


def parse_params_text(text):
    """Parse a plain-text parameter file.

    Accepts either ``key = value`` lines for ``s, c1, c2, c3`` or one line
    with four numbers separated by commas or whitespace. ``#`` starts a
    comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and all(re.match(r"^[A-Za-z_]\w*\s*[=:]", ln) for ln in lines):
        vals = {}
        for ln in lines:
            key, value = re.split(r"\s*[=:]\s*", ln, maxsplit=1)
            key = key.strip().lower()
            if key not in _KEYS:
                raise ValueError(f"unknown parameter {key!r}")
            vals[key] = float(value)
        missing = [k for k in _KEYS if k not in vals]
        if missing:
            raise ValueError(f"missing parameters: {', '.join(missing)}")
        return XStateParams(*(vals[k] for k in _KEYS))
    fields = re.split(r"[,\s]+", " ".join(lines).strip())
    if len(fields) != 4:
        raise ValueError(f"expected four numbers (s c1 c2 c3), got {len(fields)}")
    return XStateParams(*(float(f) for f in fields))
