"""Acceptance checks shared by ``superdiscord verify`` and the test suite.

Every check returns a :class:`CriterionResult` with the worst case it
measured. Tolerances are the stated ones, optionally tightened by the
``tol`` cap (``min(stated, tol)``) so that a tiny cap demonstrates how
sensitive each check is. Sample counts scale with ``samples / 500``.
"""
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from superdiscord import channels, discord, linalg, states, weakmeas
from superdiscord.discord import OptimizerConfig
from superdiscord.states import XStateParams

FIG1A = XStateParams(0.0, 0.3, -0.4, 0.56)
FIG1B = XStateParams(0.2, 0.3, -0.4, 0.56)
BASE_SAMPLES = 500


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    measured: float
    tolerance: float
    passed: bool
    hard: bool = True
    note: str = ""

    def line(self):
        verdict = "PASS" if self.passed else ("FAIL" if self.hard else "INFO")
        return (
            f"[{verdict}] #{self.number:<2d} {self.name:<44s} "
            f"measured={self.measured:.3e} tol={self.tolerance:.1e}"
            + (f"  ({self.note})" if self.note else "")
        )


class Context:
    """Seed, sample scale, tolerance cap and optimizer settings for one run."""

    def __init__(self, samples=BASE_SAMPLES, seed=42, tol=1e-6, cfg=None):
        self.samples = samples
        self.seed = seed
        self.tol = tol
        self.cfg = cfg or OptimizerConfig()

    def count(self, base):
        return max(5, round(base * self.samples / BASE_SAMPLES))

    def rng(self, number):
        return np.random.default_rng([self.seed, number])

    def cap(self, stated):
        return min(stated, self.tol)


def _random_direction(rng):
    v = rng.normal(size=3)
    return weakmeas.MeasurementDirection.from_vector(v)


def _predicted_posterior(q, x, d):
    t = math.tanh(x)
    phi = q.s * d.z3
    X = phi * np.eye(2) + sum(c * z * s for c, z, s in zip((q.c1, q.c2, q.c3), d, linalg.PAULIS))
    p_plus = (1 - phi * t) / 2
    p_minus = (1 + phi * t) / 2
    rho_plus = (np.eye(2) - t * X) / (2 * (1 - phi * t))
    rho_minus = (np.eye(2) + t * X) / (2 * (1 + phi * t))
    return p_plus, p_minus, rho_plus, rho_minus


def c01_spectrum(ctx):
    rng = ctx.rng(1)
    worst = 0.0
    for _ in range(ctx.count(1000)):
        q = states.sample_params(rng, "relaxed")
        closed = np.sort(np.array(states.spectrum(q)))[::-1]
        jac = linalg.herm_eigenvalues(states.to_density_matrix(q))
        worst = max(worst, float(np.max(np.abs(closed - jac))))
    tol = ctx.cap(1e-12)
    return CriterionResult(1, "spectrum closed form vs Jacobi", worst, tol, worst <= tol)


def c02_entropy(ctx):
    rng = ctx.rng(1)
    worst = 0.0
    for _ in range(ctx.count(1000)):
        q = states.sample_params(rng, "relaxed")
        diff = states.joint_entropy(q) - linalg.von_neumann_entropy(states.to_density_matrix(q))
        worst = max(worst, abs(diff))
    tol = ctx.cap(1e-12)
    return CriterionResult(2, "joint entropy closed form vs matrix", worst, tol, worst <= tol)


def c03_completeness(ctx):
    rng = ctx.rng(3)
    worst = 0.0
    for _ in range(ctx.count(1000)):
        x = rng.uniform(0, 10)
        pp, pm = weakmeas.weak_operators(x, _random_direction(rng))
        res = pp.conj().T @ pp + pm.conj().T @ pm - np.eye(2)
        worst = max(worst, float(np.max(np.abs(res))))
    tol = ctx.cap(1e-12)
    return CriterionResult(3, "weak operator completeness", worst, tol, worst <= tol)


def c04_posterior(ctx):
    rng = ctx.rng(4)
    worst = 0.0
    for _ in range(ctx.count(1000)):
        q = states.sample_params(rng, "relaxed")
        x = rng.uniform(0, 10)
        d = _random_direction(rng)
        ens = weakmeas.posterior_ensemble(states.to_density_matrix(q), x, d)
        pp, pm, rp, rm = _predicted_posterior(q, x, d)
        worst = max(
            worst,
            abs(ens.p_plus - pp),
            abs(ens.p_minus - pm),
            float(np.max(np.abs(ens.rho_plus - rp))),
            float(np.max(np.abs(ens.rho_minus - rm))),
        )
    tol = ctx.cap(1e-12)
    return CriterionResult(4, "posterior matrix level vs closed form", worst, tol, worst <= tol)


def c05_feig(ctx):
    rng = ctx.rng(5)
    worst = 0.0
    for _ in range(ctx.count(1000)):
        q = states.sample_params(rng, "relaxed")
        x = rng.uniform(0, 10)
        d = _random_direction(rng)
        a = weakmeas.f_eig(weakmeas.phi_theta(q, d), x)
        b = weakmeas.weak_conditional_entropy_def(q, x, d)
        worst = max(worst, abs(a - b))
    tol = ctx.cap(1e-12)
    return CriterionResult(5, "f_eig vs definitional entropy", worst, tol, worst <= tol)


def c06_bell_diagonal(ctx):
    rng = ctx.rng(6)
    worst = 0.0
    for _ in range(ctx.count(100)):
        q = states.sample_params(rng, "strict", s=0.0)
        x = rng.uniform(0.0, 5.0)
        oracle, _ = discord.sqd_oracle(q, x, ctx.cfg)
        worst = max(worst, abs(discord.sqd_paper_closed(q, x) - oracle))
    tol = ctx.cap(1e-6)
    return CriterionResult(6, "Bell-diagonal closed form vs oracle", worst, tol, worst <= tol)


def c07_projective_limit(ctx):
    rng = ctx.rng(7)
    worst = 0.0
    for _ in range(ctx.count(50)):
        q = states.sample_params(rng, "strict")
        weak, _ = discord.sqd_oracle(q, 20.0, ctx.cfg)
        strong, _ = discord.qd_oracle(q, ctx.cfg)
        worst = max(worst, abs(weak - strong))
    tol = ctx.cap(1e-6)
    return CriterionResult(7, "projective limit sqd(x=20) vs qd", worst, tol, worst <= tol)


def c08_ordering(ctx):
    rng = ctx.rng(8)
    worst = math.inf
    for _ in range(ctx.count(200)):
        q = states.sample_params(rng, "strict")
        strong, _ = discord.qd_oracle(q, ctx.cfg)
        for x in (0.5, 1.0, 2.0):
            weak, _ = discord.sqd_oracle(q, x, ctx.cfg)
            worst = min(worst, weak - strong)
    tol = ctx.cap(1e-9)
    return CriterionResult(8, "ordering sqd_oracle >= qd_oracle", max(0.0, -worst), tol, worst >= -tol,
                           note=f"min sqd-qd = {worst:.3e}")


def c09_monotone_x(ctx):
    xs = np.round(np.arange(0, 51) * 0.1, 10)
    worst = -math.inf
    for q in (FIG1A, FIG1B):
        vals = [discord.sqd_oracle(q, x, ctx.cfg)[0] for x in xs]
        worst = max(worst, float(np.max(np.diff(vals))))
    tol = ctx.cap(1e-9)
    return CriterionResult(9, "sqd_oracle non-increasing in x", max(worst, 0.0), tol, worst <= tol,
                           note=f"largest step {worst:.3e}")


def c10_qd_upper_bound(ctx):
    rng = ctx.rng(10)
    lowest, highest = math.inf, -math.inf
    for _ in range(ctx.count(500)):
        q = states.sample_params(rng, "strict")
        gap = discord.qd_closed(q)[0] - discord.qd_oracle(q, ctx.cfg)[0]
        lowest = min(lowest, gap)
        highest = max(highest, gap)
    tol = ctx.cap(1e-9)
    note = f"max positive gap {highest:.3e}" + (" (finding: > 1e-6)" if highest > 1e-6 else "")
    return CriterionResult(10, "qd_closed >= qd_oracle", max(0.0, -lowest), tol, lowest >= -tol, note=note)


def c11_channel(ctx):
    rng = ctx.rng(11)
    ps = np.round(np.linspace(0, 1, 11), 10)
    kraus_worst = 0.0
    for _ in range(ctx.count(100)):
        q = states.sample_params(rng, "relaxed")
        rho = states.to_density_matrix(q)
        for p in ps:
            out = linalg.apply_kraus(rho, channels.kraus_phase_flip(p))
            ref = states.to_density_matrix(channels.evolve_params(q, p))
            kraus_worst = max(kraus_worst, float(np.max(np.abs(out - ref))))
    eq_worst = 0.0
    for _ in range(ctx.count(100)):
        q = states.sample_params(rng, "strict")
        x = rng.uniform(0, 5)
        for p in ps:
            d = channels.sqd_dephased_closed(q, x, p) - channels.sqd_dephased_composed(q, x, p)
            eq_worst = max(eq_worst, abs(d))
    worst = max(kraus_worst, eq_worst)
    tol = ctx.cap(1e-12)
    return CriterionResult(11, "channel: Kraus vs map, closed vs composed", worst, tol, worst <= tol,
                           note=f"kraus {kraus_worst:.1e}, closed {eq_worst:.1e}")


def c12_figure1a(ctx):
    q = FIG1A
    qd, _ = discord.qd_closed(q)
    xs = np.round(np.arange(1, 101) * 0.05, 10)
    margin = min(discord.sqd_paper_closed(q, x) - qd for x in xs)
    tail = abs(discord.sqd_paper_closed(q, 5.0) - qd)
    _, s_b = states.reduced_entropies(q)
    start_err = abs(discord.sqd_paper_closed(q, 0.0) - (1 + s_b - states.joint_entropy(q)))
    ok = margin > 0 and tail < 0.01 and start_err == 0.0
    return CriterionResult(12, "figure 1(a) shape", tail, 0.01, ok,
                           note=f"min sqd-qd on (0,5] {margin:.3e}, x=0 error {start_err:.1e}")


def c13_figure2(ctx):
    q = FIG1B
    ps = np.round(np.linspace(0, 1, 101), 10)
    worst = -math.inf
    for x in (1.0, 5.0):
        vals = [channels.sqd_dephased_closed(q, x, p) for p in ps]
        worst = max(worst, float(np.max(np.diff(vals))))
    grid_x = np.round(np.linspace(0, 5, 51), 10)
    grid_p = np.round(np.linspace(0, 1, 51), 10)
    z = np.array([[channels.sqd_dephased_closed(q, x, p) for x in grid_x] for p in grid_p])
    worst = max(worst, float(np.max(np.diff(z, axis=0))), float(np.max(np.diff(z, axis=1))))
    tol = ctx.cap(1e-12)  # round-off slack for "non-increasing"
    return CriterionResult(13, "figure 2 shape: non-increasing in x, p", max(worst, 0.0), tol, worst <= tol,
                           note=f"largest step {worst:.3e}")


def c14_audit(ctx):
    q = FIG1B
    north = weakmeas.MeasurementDirection(0.0, 0.0, 1.0)
    pt = weakmeas.phi_theta(q, north)
    worst = 0.0
    rows = []
    for x in np.round(np.linspace(0, 5, 26), 10):
        measured = weakmeas.weak_conditional_entropy_def(q, x, north) - weakmeas.f_paper(pt, x)
        predicted = weakmeas.pairing_residual(pt.phi, x)
        worst = max(worst, abs(measured - predicted))
        rows.append((float(x), measured, predicted))
    tol = ctx.cap(1e-9)
    res = CriterionResult(14, "audit: f_eig - f_paper identity", worst, tol, worst <= tol, hard=False,
                          note="report only")
    return res, rows


def c15_determinism(ctx):
    from superdiscord.cli import write_x_sweep

    xs = np.linspace(0, 5, 21)
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for k, workers in enumerate((1, 1, 4)):
            path = Path(tmp) / f"sweep{k}.csv"
            write_x_sweep(FIG1B, xs, path, ctx.cfg, workers=workers)
            paths.append(path.read_bytes())
    same = paths[0] == paths[1] == paths[2]
    return CriterionResult(15, "sweep byte-identical (runs, workers)", 0.0 if same else 1.0, 0.0, same)


CHECKS = (
    c01_spectrum, c02_entropy, c03_completeness, c04_posterior, c05_feig,
    c06_bell_diagonal, c07_projective_limit, c08_ordering, c09_monotone_x,
    c10_qd_upper_bound, c11_channel, c12_figure1a, c13_figure2, c14_audit,
    c15_determinism,
)


def run_all(ctx, echo=None):
    """Run every check; ``echo`` (e.g. ``print``) receives lines as they finish."""
    results = []
    audit_rows = []
    for check in CHECKS:
        out = check(ctx)
        if isinstance(out, tuple):
            out, audit_rows = out
        results.append(out)
        if echo:
            echo(out.line())
    return results, audit_rows
