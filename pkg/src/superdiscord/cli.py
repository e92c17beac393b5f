"""Command-line front end.

Subcommands::

    compute   one parameter set: mutual information, QD and SQD (closed + oracle)
    sweep     x-sweep to CSV
    channel   dephasing sweep (over p, or over time with --gamma) to CSV
    figures   CSV + SVG data for the reference figures
    verify    acceptance suite

Exit codes: 0 success, 2 input error, 3 verification or optimizer failure.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from superdiscord import BACKEND, __version__, channels, discord, states, svg
from superdiscord.discord import OptimizerConfig, OptimizerError
from superdiscord.states import InvalidParamsError, XStateParams

log = logging.getLogger("superdiscord")

EXIT_INPUT = 2
EXIT_FAILURE = 3

X_HEADER = ("x", "sqd_paper", "sqd_oracle", "qd_closed", "qd_oracle")
P_HEADER = ("p", "sqd_paper", "sqd_oracle", "qd_closed", "qd_oracle", "sqd_dephased_closed")

# figure id -> pinned parameters; pinned once here
FIGURES = {
    "1a": dict(kind="x", params=XStateParams(0.0, 0.3, -0.4, 0.56)),
    "1b": dict(kind="x", params=XStateParams(0.2, 0.3, -0.4, 0.56)),
    "2a": dict(kind="p", params=XStateParams(0.2, 0.3, -0.4, 0.56), x=1.0),
    "2b": dict(kind="p", params=XStateParams(0.2, 0.3, -0.4, 0.56), x=5.0),
    "2c": dict(kind="xp", params=XStateParams(0.2, 0.3, -0.4, 0.56)),
}


class UsageError(Exception):
    pass


def fmt(v):
    """CSV number: shortest form with at most 12 significant digits."""
    out = format(float(v), ".12g")
    return "0" if out == "-0" else out


def write_csv(path, header, rows):
    text = ",".join(header) + "\n" + "".join(",".join(fmt(v) for v in row) + "\n" for row in rows)
    try:
        with open(path, "w", newline="\n", encoding="ascii") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    return header, np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def grid_points(start, stop, steps):
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if not start < stop:
        raise UsageError("--from must be smaller than --to")
    return np.linspace(start, stop, steps)


def _map_rows(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(v) for v in items]


def x_sweep_rows(params, xs, cfg, workers=1):
    qd_c, _ = discord.qd_closed(params)
    qd_o, _ = discord.qd_oracle(params, cfg)

    def row(x):
        return (x, discord.sqd_paper_closed(params, x), discord.sqd_oracle(params, x, cfg)[0], qd_c, qd_o)

    return _map_rows(row, [float(x) for x in xs], workers)


def write_x_sweep(params, xs, path, cfg, workers=1):
    rows = x_sweep_rows(params, xs, cfg, workers)
    write_csv(path, X_HEADER, rows)
    return rows


def p_sweep_rows(params, x, ps, cfg, workers=1):
    def row(p):
        q = channels.evolve_params(params, p)
        return (
            p,
            discord.sqd_paper_closed(q, x),
            discord.sqd_oracle(q, x, cfg)[0],
            discord.qd_closed(q)[0],
            discord.qd_oracle(q, cfg)[0],
            channels.sqd_dephased_closed(params, x, p),
        )

    return _map_rows(row, [float(p) for p in ps], workers)


def xp_grid(params, xs, ps):
    return np.array([[channels.sqd_dephased_closed(params, x, p) for x in xs] for p in ps])


def run_figure(fig_id, outdir, cfg, workers=1, steps=101):
    if fig_id not in FIGURES:
        raise UsageError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    job = FIGURES[fig_id]
    q = job["params"]
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {outdir}: {exc}") from exc
    csv_path, svg_path = outdir / f"fig{fig_id}.csv", outdir / f"fig{fig_id}.svg"
    caption = f"s={q.s:g}, c1={q.c1:g}, c2={q.c2:g}, c3={q.c3:g}"
    if job["kind"] == "x":
        xs = np.linspace(0, 5, steps)
        rows = write_x_sweep(q, xs, csv_path, cfg, workers)
        arr = np.array(rows)
        chart = svg.line_chart(
            arr[:, 0],
            [("super discord", arr[:, 1], "solid"), ("discord", arr[:, 3], "dotted")],
            "measurement strength x", "correlation (bits)", f"Fig. {fig_id}: {caption}",
        )
    elif job["kind"] == "p":
        ps = np.linspace(0, 1, steps)
        rows = p_sweep_rows(q, job["x"], ps, cfg, workers)
        write_csv(csv_path, P_HEADER, rows)
        arr = np.array(rows)
        chart = svg.line_chart(
            arr[:, 0],
            [("super discord", arr[:, 5], "dashed"), ("discord", arr[:, 3], "solid")],
            "flip probability p", "correlation (bits)", f"Fig. {fig_id}: {caption}, x={job['x']:g}",
        )
    else:
        xs = np.linspace(0, 5, 51)
        ps = np.linspace(0, 1, 51)
        z = xp_grid(q, xs, ps)
        write_csv(csv_path, ("x", "p", "sqd_dephased_closed"),
                  [(x, p, z[i, j]) for i, p in enumerate(ps) for j, x in enumerate(xs)])
        levels = np.linspace(z.min(), z.max(), 9)[1:-1]
        chart = svg.contour_chart(xs, ps, z, levels, "measurement strength x", "flip probability p",
                                  f"Fig. {fig_id}: super discord, {caption}")
    try:
        svg_path.write_text(chart, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {svg_path}: {exc}") from exc
    return csv_path, svg_path


def run_sweep(params, variable, points, out, cfg, x=None, workers=1):
    """Write an x-sweep (``variable="x"``) or a dephasing sweep (``variable="p"``, at fixed ``x``)."""
    if variable == "x":
        return write_x_sweep(params, points, out, cfg, workers)
    if variable == "p":
        if x is None:
            raise UsageError("a p-sweep needs a fixed x")
        rows = p_sweep_rows(params, x, points, cfg, workers)
        write_csv(out, P_HEADER, rows)
        return rows
    raise UsageError(f"sweep variable must be 'x' or 'p', got {variable!r}")


def run_figures(fig_ids, outdir, cfg, workers=1, steps=101):
    return [run_figure(f, outdir, cfg, workers, steps) for f in fig_ids]


def parse_grid(text):
    try:
        polar, azimuth = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must look like 61x121, got {text!r}") from exc
    return polar, azimuth


def _add_params(p):
    g = p.add_argument_group("state parameters")
    g.add_argument("--s", type=float)
    g.add_argument("--c1", type=float)
    g.add_argument("--c2", type=float)
    g.add_argument("--c3", type=float)
    g.add_argument("--config", type=Path, help="plain-text file with s, c1, c2, c3")
    g.add_argument("--mode", choices=states.MODES, default="strict", help="validation mode (default strict)")


def _add_optimizer(p):
    p.add_argument("--grid", type=parse_grid, default=(61, 121), help="oracle grid POLARxAZIMUTH")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)


def _add_range(p, lo, hi, steps):
    p.add_argument("--from", dest="start", type=float, default=lo)
    p.add_argument("--to", dest="stop", type=float, default=hi)
    p.add_argument("--steps", type=int, default=steps)


def build_parser():
    ap = argparse.ArgumentParser(prog="superdiscord", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="correlation report for one state")
    _add_params(c)
    _add_optimizer(c)
    c.add_argument("--x", type=float, required=True, help="measurement strength")
    c.add_argument("--p", type=float, help="dephase the state first with flip probability p")
    c.add_argument("--gamma", type=float, help="damping rate (with --time) instead of --p")
    c.add_argument("--time", type=float)
    c.add_argument("--out", type=Path, help="also write the report as JSON")

    s = sub.add_parser("sweep", help="sweep x and write CSV")
    _add_params(s)
    _add_optimizer(s)
    _add_range(s, 0.0, 5.0, 101)
    s.add_argument("--out", type=Path, required=True)

    ch = sub.add_parser("channel", help="sweep dephasing strength and write CSV")
    _add_params(ch)
    _add_optimizer(ch)
    _add_range(ch, 0.0, 1.0, 101)
    ch.add_argument("--x", type=float, required=True)
    ch.add_argument("--gamma", type=float, help="sweep time instead of p at this damping rate")
    ch.add_argument("--out", type=Path, required=True)

    f = sub.add_parser("figures", help="CSV + SVG for the reference figures")
    f.add_argument("--figure", default="all", help="1a, 1b, 2a, 2b, 2c or all")
    f.add_argument("--steps", type=int, default=101)
    f.add_argument("--out", type=Path, default=Path("figures"))
    _add_optimizer(f)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--samples", type=int, default=500)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--out", type=Path, help="write results as JSON")
    _add_optimizer(v)
    return ap


def _params_from_args(args):
    if args.config is not None:
        try:
            q = states.parse_params_text(args.config.read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read parameters from {args.config}: {exc}") from exc
    else:
        missing = [k for k in ("s", "c1", "c2", "c3") if getattr(args, k) is None]
        if missing:
            raise UsageError("missing parameters: " + ", ".join("--" + k for k in missing))
        q = XStateParams(args.s, args.c1, args.c2, args.c3)
    bad = states.validate(q, args.mode)
    if bad:
        raise InvalidParamsError(q, bad)
    return q


def _cfg(args):
    return OptimizerConfig(polar_steps=args.grid[0], azimuth_steps=args.grid[1], seed=args.seed,
                           workers=max(1, args.workers))


def cmd_compute(args):
    q = _params_from_args(args)
    cfg = _cfg(args)
    if args.p is not None and args.gamma is not None:
        raise UsageError("give either --p or --gamma/--time, not both")
    if args.gamma is not None or args.time is not None:
        if args.gamma is None or args.time is None:
            raise UsageError("--gamma and --time go together")
        dep = channels.DephasingParams.from_rate(args.gamma, args.time)
    elif args.p is not None:
        dep = channels.DephasingParams(args.p)
    else:
        dep = None
    if dep is not None:
        q = channels.evolve_params(q, dep)
    rep = discord.correlation_report(q, args.x, cfg)
    d = rep.to_dict()
    print(f"state                {q}" + (f" after dephasing p={dep.p:.6g}" if dep else ""))
    print(f"x                    {args.x:g}")
    for key in ("mutual_information", "qd_closed", "qd_oracle", "sqd_paper", "sqd_oracle", "paper_residual"):
        print(f"{key:<20s} {d[key]:.12g}")
    print("argmin_direction     (" + ", ".join(f"{v:.9f}" for v in d["argmin_direction"]) + ")")
    if args.out:
        try:
            args.out.write_text(json.dumps(d, indent=2) + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return 0


def cmd_sweep(args):
    q = _params_from_args(args)
    xs = grid_points(args.start, args.stop, args.steps)
    run_sweep(q, "x", xs, args.out, _cfg(args), workers=max(1, args.workers))
    print(f"wrote {args.steps} rows to {args.out}")
    return 0


def cmd_channel(args):
    q = _params_from_args(args)
    pts = grid_points(args.start, args.stop, args.steps)
    if args.gamma is not None:
        ps = [channels.p_of_time(args.gamma, t) for t in pts]
    else:
        if pts[0] < 0 or pts[-1] > 1:
            raise UsageError("p range must lie within [0, 1]")
        ps = pts
    rows = run_sweep(q, "p", ps, args.out, _cfg(args), x=args.x, workers=max(1, args.workers))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_figures(args):
    ids = list(FIGURES) if args.figure == "all" else [args.figure]
    for fig_id in ids:
        csv_path, svg_path = run_figure(fig_id, args.out, _cfg(args), max(1, args.workers), args.steps)
        print(f"figure {fig_id}: {csv_path}, {svg_path}")
    return 0


def cmd_verify(args):
    from superdiscord import verify

    ctx = verify.Context(samples=args.samples, seed=args.seed, tol=args.tol, cfg=_cfg(args))
    print(f"{'verdict':<7s} {'criterion':<48s} {'measured':>18s} {'tol':>11s}")
    results, audit = verify.run_all(ctx, echo=print)
    if audit:
        print("\naudit residual surface, z=(0,0,1), s=0.2:  x, measured f_eig-f_paper, predicted")
        for x, m, p in audit:
            print(f"  {x:4.1f}  {m: .12e}  {p: .12e}")
    failed = [r for r in results if r.hard and not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed" + (
        "" if not failed else "; failed: " + ", ".join(f"#{r.number}" for r in failed)))
    if args.out:
        payload = [r.__dict__ for r in results]
        try:
            args.out.write_text(json.dumps(payload, indent=2) + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_FAILURE if failed else 0


COMMANDS = {
    "compute": cmd_compute,
    "sweep": cmd_sweep,
    "channel": cmd_channel,
    "figures": cmd_figures,
    "verify": cmd_verify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    log.info("superdiscord %s, %s kernels", __version__, BACKEND)
    try:
        return COMMANDS[args.command](args)
    except InvalidParamsError as exc:
        print(f"error: invalid parameters {exc.params}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OptimizerError as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
