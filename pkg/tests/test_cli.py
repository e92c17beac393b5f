import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from superdiscord import channels, cli, discord, states
from tests.conftest import FIG1A, FIG1B

FIG_ARGS = ["--s", "0.2", "--c1", "0.3", "--c2", "-0.4", "--c3", "0.56"]
FIG1A_ARGS = ["--s", "0", "--c1", "0.3", "--c2", "-0.4", "--c3", "0.56", "--mode", "relaxed"]


@pytest.fixture(scope="module")
def figure_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("figures")
    assert cli.main(["figures", "--out", str(out), "--steps", "51"]) == 0
    return out


def report_values(text):
    vals = {}
    for line in text.splitlines():
        key, _, rest = line.partition(" ")
        try:
            vals[key] = float(rest)
        except ValueError:
            pass
    return vals


# compute

def test_compute_maximally_mixed(capsys):
    assert cli.main(["compute", "--s", "0", "--c1", "0", "--c2", "0", "--c3", "0", "--x", "1", "--mode", "relaxed"]) == 0
    vals = report_values(capsys.readouterr().out)
    for key in ("mutual_information", "qd_closed", "qd_oracle", "sqd_paper", "sqd_oracle"):
        assert vals[key] == 0.0


def test_compute_figure_state(capsys, tmp_path):
    out = tmp_path / "report.json"
    assert cli.main(["compute", *FIG_ARGS, "--x", "1", "--out", str(out)]) == 0
    vals = report_values(capsys.readouterr().out)
    assert vals["sqd_paper"] > 0
    data = json.loads(out.read_text())
    assert data["sqd_paper"] == pytest.approx(discord.sqd_paper_closed(FIG1B, 1.0), rel=1e-12)
    assert data["sqd_oracle"] == pytest.approx(vals["sqd_oracle"], rel=1e-11)


def test_compute_invalid_params(capsys):
    assert cli.main(["compute", "--s", "0.5", "--c1", "0.3", "--c2", "-0.4", "--c3", "0.56", "--x", "1"]) == 2
    assert "|s| < 1-|c3|" in capsys.readouterr().err


def test_compute_with_dephasing(capsys):
    assert cli.main(["compute", *FIG_ARGS, "--x", "1", "--p", "0.5"]) == 0
    vals = report_values(capsys.readouterr().out)
    q = channels.evolve_params(FIG1B, 0.5)
    assert vals["sqd_paper"] == pytest.approx(discord.sqd_paper_closed(q, 1.0), rel=1e-11)


def test_compute_from_config(capsys, tmp_path):
    cfg = tmp_path / "state.txt"
    cfg.write_text("s = 0.2\nc1 = 0.3\nc2 = -0.4\nc3 = 0.56\n")
    assert cli.main(["compute", "--config", str(cfg), "--x", "1"]) == 0
    assert report_values(capsys.readouterr().out)["sqd_paper"] > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--s", "0.2", "--x", "1"],
        ["compute", *FIG_ARGS, "--x", "-1"],
        ["compute", *FIG_ARGS, "--x", "1", "--p", "0.2", "--gamma", "1", "--time", "1"],
        ["compute", *FIG_ARGS, "--x", "1", "--gamma", "1"],
        ["compute", "--config", "/nonexistent/state.txt", "--x", "1"],
        ["sweep", *FIG_ARGS, "--from", "2", "--to", "1", "--out", "unused.csv"],
        ["channel", *FIG_ARGS, "--x", "1", "--to", "2", "--out", "unused.csv"],
        ["figures", "--figure", "3z", "--out", "unused"],
    ],
)
def test_input_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == 2


def test_unwritable_output_exits_2(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["sweep", *FIG_ARGS, "--steps", "3", "--out", str(blocker / "x.csv")]) == 2


def test_bad_grid_rejected_by_parser():
    with pytest.raises(SystemExit) as err:
        cli.main(["compute", *FIG_ARGS, "--x", "1", "--grid", "61by121"])
    assert err.value.code == 2


# CSV

def test_fmt():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(0.1 + 0.2) == "0.3"
    assert cli.fmt(1 / 3) == "0.333333333333"


def test_csv_round_trip(tmp_path, rng):
    rows = rng.normal(size=(20, 3)) * 10.0 ** rng.integers(-8, 8, size=(20, 3))
    path = tmp_path / "t.csv"
    cli.write_csv(path, ("a", "b", "c"), rows)
    header, back = cli.read_csv(path)
    assert header == ["a", "b", "c"]
    np.testing.assert_allclose(back, rows, rtol=5e-12, atol=0)
    assert b"\r" not in path.read_bytes()


def test_sweep_first_row_and_monotone(tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", *FIG1A_ARGS, "--steps", "201", "--out", str(out)]) == 0
    header, data = cli.read_csv(out)
    assert header == list(cli.X_HEADER)
    assert len(data) == 201
    s_a, s_b = states.reduced_entropies(FIG1A)
    assert data[0, 1] == pytest.approx(1 + s_b - states.joint_entropy(FIG1A), abs=1e-11)
    assert np.all(np.diff(data[:, 1]) <= 0)
    np.testing.assert_allclose(data[:, 2], data[:, 1], atol=1e-6)


def test_sweep_is_deterministic(tmp_path):
    paths = [tmp_path / f"s{k}.csv" for k in range(3)]
    for path, workers in zip(paths, ("1", "1", "3")):
        assert cli.main(["sweep", *FIG_ARGS, "--steps", "11", "--workers", workers, "--out", str(path)]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_channel_sweep(tmp_path):
    out = tmp_path / "ch.csv"
    assert cli.main(["channel", *FIG_ARGS, "--x", "1", "--steps", "21", "--out", str(out)]) == 0
    header, data = cli.read_csv(out)
    assert header == list(cli.P_HEADER)
    assert np.all(np.diff(data[:, 5]) <= 1e-12)


def test_channel_sweep_over_time(tmp_path):
    out = tmp_path / "ch.csv"
    argv = ["channel", *FIG_ARGS, "--x", "1", "--gamma", "1", "--from", "0", "--to", "3", "--steps", "4"]
    assert cli.main([*argv, "--out", str(out)]) == 0
    _, data = cli.read_csv(out)
    np.testing.assert_allclose(data[:, 0], [channels.p_of_time(1.0, t) for t in range(4)], rtol=1e-11)


# figures

@pytest.mark.parametrize("fig", ["1a", "1b", "2a", "2b", "2c"])
def test_figure_files(figure_dir, fig):
    csv_path = figure_dir / f"fig{fig}.csv"
    svg_path = figure_dir / f"fig{fig}.svg"
    assert csv_path.exists() and svg_path.exists()
    text = svg_path.read_text()
    root = ET.fromstring(text)
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    assert "<script" not in text.lower()
    assert "href" not in text


def test_figure_1a_curves_converge(figure_dir):
    _, data = cli.read_csv(figure_dir / "fig1a.csv")
    x, sqd, qd = data[:, 0], data[:, 1], data[:, 3]
    assert np.all(sqd[x > 0] > qd[x > 0])
    assert abs(sqd[-1] - qd[-1]) < 0.01


def test_figure_1b_oracle_above_discord(figure_dir):
    _, data = cli.read_csv(figure_dir / "fig1b.csv")
    assert np.all(data[:, 2] >= data[:, 4] - 1e-9)


@pytest.mark.xfail(strict=True, reason="the four-term closed form drops below the discord once x exceeds about 1.22")
def test_figure_1b_closed_form_above_discord(figure_dir):
    _, data = cli.read_csv(figure_dir / "fig1b.csv")
    assert np.all(data[:, 1] > data[:, 3])


def test_figure_2c_grid_non_increasing(figure_dir):
    header, data = cli.read_csv(figure_dir / "fig2c.csv")
    assert header == ["x", "p", "sqd_dephased_closed"]
    z = data[:, 2].reshape(51, 51)  # rows: p, columns: x
    assert np.all(np.diff(z, axis=0) <= 1e-12)
    assert np.all(np.diff(z, axis=1) <= 1e-12)


def test_single_figure(tmp_path, capsys):
    assert cli.main(["figures", "--figure", "2a", "--steps", "11", "--out", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig2a.csv", "fig2a.svg"]


# verify

def test_verify_small_run(capsys, tmp_path):
    out = tmp_path / "verify.json"
    assert cli.main(["verify", "--samples", "5", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "15/15 criteria passed" in text
    assert len(json.loads(out.read_text())) == 15


def test_verify_tolerance_below_round_off_fails(capsys):
    # residuals sit at a few 1e-16, so a 1e-17 cap must trip the closed-form checks
    assert cli.main(["verify", "--samples", "5", "--tol", "1e-17"]) == 3
    assert "FAIL" in capsys.readouterr().out


def test_run_sweep_api(tmp_path, cfg):
    out = tmp_path / "p.csv"
    rows = cli.run_sweep(FIG1B, "p", [0.0, 0.5, 1.0], out, cfg, x=1.0)
    assert len(rows) == 3 and cli.read_csv(out)[0] == list(cli.P_HEADER)
    with pytest.raises(cli.UsageError):
        cli.run_sweep(FIG1B, "p", [0.0], out, cfg)
    with pytest.raises(cli.UsageError):
        cli.run_sweep(FIG1B, "t", [0.0], out, cfg)
