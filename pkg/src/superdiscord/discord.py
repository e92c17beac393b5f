"""Quantum discord, super (weak-measurement) discord and friends.

Closed forms and definitional oracles live side by side:

* ``qd_closed`` / ``sqd_paper_closed`` are the closed-form expressions;
* ``qd_oracle`` / ``sqd_oracle`` minimise the matrix-level conditional
  entropy over every measurement direction on B.

The oracles never touch a closed form, so they can adjudicate the formulas.
"""
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from superdiscord import linalg
from superdiscord._backend import cond_entropy_batch
from superdiscord.states import (
    binary_term,
    joint_entropy,
    reduced_entropies,
    require_valid,
    to_density_matrix,
)
from superdiscord.weakmeas import (
    MeasurementDirection,
    PhiTheta,
    check_strength,
    f_eig,
    f_paper,
    pairing_residual,
)

log = logging.getLogger(__name__)

CLAMP_TOL = 1e-9


class OptimizerError(RuntimeError):
    def __init__(self, direction, value):
        self.direction = direction
        self.value = value
        super().__init__(f"objective is not finite ({value!r}) at direction {tuple(direction)}")


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for :func:`minimize_over_sphere`.

    The coarse stage scans ``polar_steps`` latitudes in [0, pi/2] (inclusive)
    times ``azimuth_steps`` longitudes; the refinement is a Nelder-Mead
    simplex on (polar, azimuth). ``seed`` drives the optional random restarts.
    ``workers`` parallelises the coarse stage without changing its result.
    """

    polar_steps: int = 61
    azimuth_steps: int = 121
    refine_tolerance: float = 1e-10
    max_refine_iterations: int = 400
    seed: int = 0
    random_restarts: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.polar_steps < 30 or self.azimuth_steps < 60:
            raise ValueError("grid must have polar_steps >= 30 and azimuth_steps >= 60")
        if not self.refine_tolerance > 0:
            raise ValueError("refine_tolerance must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class DiscordBreakdown:
    s1: float
    s2: float
    s3: float


@dataclass(frozen=True)
class CorrelationReport:
    mutual_information: float
    qd_closed: float
    qd_oracle: float
    sqd_paper: float
    sqd_oracle: float
    argmin_direction: MeasurementDirection
    paper_residual: float

    def to_dict(self):
        d = asdict(self)
        d["argmin_direction"] = list(self.argmin_direction)
        return d


def _canonical(d):
    """Map a direction onto the z3 >= 0 hemisphere (antipodes are equivalent)."""
    if d.z3 < 0:
        return -d
    return d


def _grid(cfg):
    polar = np.linspace(0.0, math.pi / 2, cfg.polar_steps)
    azimuth = np.arange(cfg.azimuth_steps) * (2 * math.pi / cfg.azimuth_steps)
    return polar, azimuth


def _row_dirs(theta, azimuth):
    st = math.sin(theta)
    return np.column_stack(
        (st * np.cos(azimuth), st * np.sin(azimuth), np.full(azimuth.shape, math.cos(theta)))
    )


def _lexmin_index(values, dirs):
    best = np.min(values)
    idx = np.flatnonzero(values == best)
    if len(idx) == 1:
        return int(idx[0])
    cand = dirs[idx]
    order = np.lexsort((cand[:, 2], cand[:, 1], cand[:, 0]))
    return int(idx[order[0]])


def minimize_over_sphere(objective, cfg=None, batch=None):
    """Minimise an antipodally even function of the measurement direction.

    Parameters
    ----------
    objective : callable
        ``MeasurementDirection -> float``.
    cfg : OptimizerConfig, optional
    batch : callable, optional
        Vectorised form ``(N, 3) array -> (N,) array``; used for the grid
        when given, otherwise ``objective`` is called point by point.

    Returns
    -------
    (MeasurementDirection, float)
        Best direction (with ``z3 >= 0``) and its value.
    """
    cfg = cfg or OptimizerConfig()
    polar, azimuth = _grid(cfg)

    def eval_rows(dirs):
        if batch is not None:
            return np.asarray(batch(dirs), dtype=float)
        return np.array([objective(MeasurementDirection(*row)) for row in dirs])

    def row(i):
        dirs = _row_dirs(polar[i], azimuth)
        return dirs, eval_rows(dirs)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(row, range(len(polar))))
    else:
        rows = [row(i) for i in range(len(polar))]
    dirs = np.concatenate([r[0] for r in rows])
    vals = np.concatenate([r[1] for r in rows])
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise OptimizerError(dirs[k], vals[k])

    k = _lexmin_index(vals, dirs)
    i0, j0 = divmod(k, len(azimuth))
    best_angles = (polar[i0], azimuth[j0])
    best_val = float(vals[k])
    grid_val = best_val

    def angle_obj(ang):
        d = MeasurementDirection.from_angles(ang[0], ang[1])
        v = float(eval_rows(d.as_array()[None, :])[0]) if batch is not None else float(objective(d))
        if not math.isfinite(v):
            raise OptimizerError(d, v)
        return v

    d_pol = polar[1] - polar[0]
    d_az = azimuth[1] - azimuth[0]
    starts = [best_angles]
    if cfg.random_restarts:
        rng = np.random.default_rng(cfg.seed)
        for _ in range(cfg.random_restarts):
            starts.append((math.acos(rng.uniform(0, 1)), rng.uniform(0, 2 * math.pi)))
    for th0, ph0 in starts:
        simplex = np.array([[th0, ph0], [th0 + d_pol, ph0], [th0, ph0 + d_az]])
        res = minimize(
            angle_obj,
            np.array([th0, ph0]),
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-12,
                "fatol": cfg.refine_tolerance,
                "maxiter": cfg.max_refine_iterations,
            },
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_angles = (float(res.x[0]), float(res.x[1]))
    best_dir = _canonical(MeasurementDirection.from_angles(*best_angles))
    log.debug("sphere minimum: grid %.15g, refined %.15g at %s", grid_val, best_val, tuple(best_dir))
    return best_dir, best_val


def _clamp(value, name):
    if -CLAMP_TOL <= value < 0:
        return 0.0
    if value < -CLAMP_TOL:
        warnings.warn(f"{name} is negative ({value:.6g}); reported unclamped", RuntimeWarning, stacklevel=3)
    return value


def _matrix_entropy_offset(rho):
    """``S(rho_B) - S(rho_AB)`` computed from matrices."""
    s_b = linalg.von_neumann_entropy(linalg.partial_trace(rho, "B"))
    return s_b - linalg.von_neumann_entropy(rho)


def min_weak_entropy_closed(params, x):
    """Four-term closed-form minimum of the weak conditional entropy.

    Substitutes ``phi = s`` and ``theta = c3`` into the four-term formula,
    exactly as written (signs included).
    """
    p = require_valid(params)
    t = math.tanh(check_strength(x))
    s, c3 = p.s, p.c3
    terms = (
        (1 + (s + c3) * t, 2 * (1 - s * t)),
        (1 + (s - c3) * t, 2 * (1 - s * t)),
        (1 + (-s - c3) * t, 2 * (1 + s * t)),
        (1 + (-s + c3) * t, 2 * (1 + s * t)),
    )
    total = 0.0
    for num, den in terms:
        if num <= 0:
            raise ValueError(f"log-domain violation: numerator {num:.6g} <= 0 for {p}, x={x}")
        total -= num / 4 * math.log2(num / den)
    return total


def sqd_paper_closed(params, x):
    """Closed-form super discord: closed-form minimum + S(rho_B) - S(rho_AB)."""
    p = require_valid(params)
    _, s_b = reduced_entropies(p)
    return min_weak_entropy_closed(p, x) + s_b - joint_entropy(p)


def sqd_eig_closed(params, x):
    """Super discord with the spectrally consistent entropy at ``(|s|, |c3|)``."""
    p = require_valid(params)
    _, s_b = reduced_entropies(p)
    return f_eig(PhiTheta(abs(p.s), abs(p.c3)), x) + s_b - joint_entropy(p)


def _s1(s, c3):
    terms = (
        (1 + s + c3, 2 * (1 + s)),
        (1 + s - c3, 2 * (1 + s)),
        (1 - s - c3, 2 * (1 - s)),
        (1 - s + c3, 2 * (1 - s)),
    )
    total = 0.0
    for num, den in terms:
        if num < 0:
            raise ValueError(f"log-domain violation in S1: numerator {num:.6g} < 0")
        if num > 0:
            total -= num / 4 * math.log2(num / den)
    return total


def qd_closed(params):
    """Closed-form quantum discord ``1 + f(s) + sum l log2 l + min(S1, S2, S3)``."""
    p = require_valid(params)
    if abs(p.s) >= 1:
        raise ValueError(f"closed-form discord needs |s| < 1, got {p.s}")
    brk = DiscordBreakdown(_s1(p.s, p.c3), 1 + binary_term(p.c1), 1 + binary_term(p.c2))
    value = 1 + binary_term(p.s) - joint_entropy(p) + min(brk.s1, brk.s2, brk.s3)
    return _clamp(value, "qd_closed"), brk


def weak_entropy_batch(params, x):
    """Vectorised matrix-level weak conditional entropy for the optimizer."""
    rho = np.array(to_density_matrix(params))
    t = math.tanh(check_strength(x))
    return lambda dirs: cond_entropy_batch(rho, t, dirs)


def projective_entropy_batch(params):
    rho = np.array(to_density_matrix(params))
    return lambda dirs: cond_entropy_batch(rho, 1.0, dirs)


def _single(batch):
    return lambda d: float(batch(d.as_array()[None, :])[0])


def sqd_oracle(params, x, cfg=None):
    """Super discord by brute-force minimisation over measurement directions.

    Returns ``(value, argmin_direction)``.
    """
    p = require_valid(params)
    rho = to_density_matrix(p)
    batch = weak_entropy_batch(p, x)
    d, v = minimize_over_sphere(_single(batch), cfg, batch=batch)
    return _clamp(v + _matrix_entropy_offset(rho), "sqd_oracle"), d


def qd_oracle(params, cfg=None):
    """Quantum discord by brute-force minimisation over projective measurements."""
    p = require_valid(params)
    rho = to_density_matrix(p)
    batch = projective_entropy_batch(p)
    d, v = minimize_over_sphere(_single(batch), cfg, batch=batch)
    return _clamp(v + _matrix_entropy_offset(rho), "qd_oracle"), d


def mutual_information(params):
    p = require_valid(params)
    s_a, s_b = reduced_entropies(p)
    return _clamp(s_a + s_b - joint_entropy(p), "mutual_information")


def mutual_information_matrix(params):
    rho = to_density_matrix(params)
    return (
        linalg.von_neumann_entropy(linalg.partial_trace(rho, "A"))
        + linalg.von_neumann_entropy(linalg.partial_trace(rho, "B"))
        - linalg.von_neumann_entropy(rho)
    )


def classical_correlation(params, cfg=None):
    """``I - D`` with D from the projective oracle."""
    qd, _ = qd_oracle(params, cfg)
    return _clamp(mutual_information(params) - qd, "classical_correlation")


def correlation_report(params, x, cfg=None):
    p = require_valid(params)
    qd_c, _ = qd_closed(p)
    qd_o, _ = qd_oracle(p, cfg)
    sqd_p = sqd_paper_closed(p, x)
    sqd_o, d = sqd_oracle(p, x, cfg)
    return CorrelationReport(
        mutual_information=mutual_information(p),
        qd_closed=qd_c,
        qd_oracle=qd_o,
        sqd_paper=_clamp(sqd_p, "sqd_paper"),
        sqd_oracle=sqd_o,
        argmin_direction=d,
        paper_residual=_clamp(sqd_o - sqd_p, "paper_residual"),
    )


@dataclass(frozen=True)
class AuditRow:
    x: float
    sqd_paper: float
    sqd_oracle: float
    difference: float
    argmin_direction: tuple
    feig_minus_fpaper: float
    predicted_residual: float


@dataclass(frozen=True)
class AuditReport:
    params: tuple
    rows: list = field(default_factory=list)

    def max_abs_difference(self):
        return max((abs(r.difference) for r in self.rows), default=0.0)

    def max_residual_mismatch(self):
        return max((abs(r.feig_minus_fpaper - r.predicted_residual) for r in self.rows), default=0.0)

    def to_dict(self):
        return {"params": list(self.params), "rows": [asdict(r) for r in self.rows]}


def audit_discrepancy(params, x_grid, cfg=None):
    """Compare the closed-form super discord with the oracle along ``x_grid``.

    Each row also carries ``f_eig - f_paper`` at ``z = (0, 0, 1)`` and the
    predicted value of that residual.
    """
    p = require_valid(params)
    rows = []
    for x in x_grid:
        x = check_strength(x)
        paper = sqd_paper_closed(p, x)
        oracle, d = sqd_oracle(p, x, cfg)
        pt = PhiTheta(p.s, abs(p.c3))
        rows.append(
            AuditRow(
                x=x,
                sqd_paper=paper,
                sqd_oracle=oracle,
                difference=oracle - paper,
                argmin_direction=tuple(d),
                feig_minus_fpaper=f_eig(pt, x) - f_paper(pt, x),
                predicted_residual=pairing_residual(p.s, x),
            )
        )
    return AuditReport(p.as_tuple(), rows)
