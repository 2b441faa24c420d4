"""CLI: commands, formats, determinism, exit codes."""

import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from res112.cli import cli


@pytest.fixture()
def runner():
    return CliRunner()


def test_fiber_command_text(runner):
    res = runner.invoke(cli, ["fiber", "--delta", "0", "--mu", "0",
                              "--ell", "0", "--h", "0"])
    assert res.exit_code == 0
    assert "CuspPinchedT3 x1" in res.output


def test_fiber_command_inside_island(runner):
    res = runner.invoke(cli, ["fiber", "--delta", "-1", "--mu", "0.1",
                              "--ell", "0", "--h", "-0.0965"])
    assert res.exit_code == 0
    assert "Torus3 x2" in res.output


def test_fiber_command_empty_and_iota(runner):
    res = runner.invoke(cli, ["fiber", "--delta", "0", "--mu", "0",
                              "--ell", "0", "--h", "-1"])
    assert res.exit_code == 0
    assert "Empty" in res.output
    res2 = runner.invoke(cli, ["fiber", "--delta", "0", "--mu", "0",
                               "--iota", "0", "--h", "-1"])
    assert res2.output == res.output


def test_fiber_command_json(runner):
    res = runner.invoke(cli, ["fiber", "--delta", "0", "--mu", "0",
                              "--ell", "-1", "--h", "0", "--format", "json"])
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["components"] == {"PinchedTorusTimesT1": 1}
    assert obj["is_critical"] is True


def test_scale_command(runner):
    res = runner.invoke(cli, ["scale", "--kappa", "2", "--lam", "2",
                              "--mu", "4", "--ell", "8"])
    assert res.exit_code == 0
    lines = dict(l.split(" = ") for l in res.output.strip().splitlines())
    assert float(lines["lam"]) == 1.0
    assert float(lines["mu"]) == 1.0
    assert float(lines["ell"]) == 2.0


def test_monodromy_command(runner):
    res = runner.invoke(cli, ["monodromy", "--delta", "0", "--loop", "gamma2",
                              "--points", "24", "--format", "json"])
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert (obj["m_N"], obj["m_J"]) == (0, 1)
    assert obj["matrix"][0] == [1, 0, 0]
    assert obj["matrix"][1] == [0, 1, 1]
    res2 = runner.invoke(cli, ["monodromy", "--delta", "0", "--loop", "gamma1",
                               "--points", "24"])
    assert res2.exit_code == 0
    assert "(1, -1)" in res2.output


def test_bifdiag_outputs(tmp_path, runner):
    out = tmp_path / "bd"
    res = runner.invoke(cli, ["bifdiag", "--ell", "0", "--grid", "41",
                              "--lambda-window", "-1,1.2", "--out", str(out)],
                        catch_exceptions=False)
    assert res.exit_code == 0
    slices = (tmp_path / "bd_slices.csv").read_text().splitlines()
    assert slices[0] == "provenance,ell_slice,lambda,mu,ell,a,h"
    assert len(slices) > 10
    # every data row parses and sits on the requested slice
    fams = set()
    for line in slices[1:]:
        fields = line.split(",")
        fams.add(fields[0])
        assert abs(float(fields[4]) - 0.0) < 1e-6
    assert "numeric-oracle" in fams
    assert any(f.startswith("CS") for f in fams)
    surface = (tmp_path / "bd_surface.csv").read_text().splitlines()
    assert surface[0] == "family,lambda,a,mu,ell,h"
    assert len(surface) > 100


def test_bifdiag_empty_window(tmp_path, runner):
    out = tmp_path / "bd"
    res = runner.invoke(cli, ["bifdiag", "--ell", "0.125",
                              "--lambda-window", "1.4,1.45", "--grid", "5",
                              "--no-surface", "--out", str(out)],
                        catch_exceptions=False)
    assert res.exit_code == 0
    lines = (tmp_path / "bd_slices.csv").read_text().splitlines()
    assert lines[0].startswith("provenance")  # header only, no events here
    assert len(lines) == 1


def test_bifdiag_fig5_slice_content(tmp_path, runner):
    # the ell = 0 slice passes through the resonant equilibrium: the
    # subcritical Hopf curves cross lambda = 0 there
    out = tmp_path / "bd"
    runner.invoke(cli, ["bifdiag", "--ell", "0", "--grid", "81",
                        "--lambda-window", "-1,1", "--no-surface",
                        "--out", str(out)], catch_exceptions=False)
    rows = [l.split(",") for l in
            (tmp_path / "bd_slices.csv").read_text().splitlines()[1:]]
    cs = [r for r in rows if r[0].startswith("CS")]
    assert cs
    # mu -> 0 as lambda -> 0 along the slice (the cusp of the ell=0 panel)
    near0 = [abs(float(r[3])) for r in cs if abs(float(r[2])) < 0.06]
    assert near0 and min(near0) < 2e-3


def test_critvals_outputs(tmp_path, runner):
    out = tmp_path / "cv"
    res = runner.invoke(cli, ["critvals", "--delta", "-1", "--grid", "9",
                              "--mu-window", "-0.5,0.5",
                              "--ell-window", "-1.2,0.4", "--out", str(out)],
                        catch_exceptions=False)
    assert res.exit_code == 0
    surf = (tmp_path / "cv_surface.csv").read_text().splitlines()
    assert surf[0] == "mu,ell,h_min,tag,error"
    assert len(surf) == 1 + 81
    faces = (tmp_path / "cv_faces.csv").read_text().splitlines()
    tags = {line.split(",")[3] for line in faces[1:]}
    assert {"B", "Fe", "Fh"} <= tags
    threads = (tmp_path / "cv_threads.csv").read_text().splitlines()
    assert threads[0] == "curve,mu,ell,h_c,unstable,above_min"
    assert len(threads) > 1


def test_critvals_delta_15_single_thread(tmp_path, runner):
    out = tmp_path / "cv"
    runner.invoke(cli, ["critvals", "--delta", "1.5", "--grid", "7",
                        "--mu-window", "-0.5,0.5", "--ell-window", "-4,-0.5",
                        "--out", str(out)], catch_exceptions=False)
    faces = (tmp_path / "cv_faces.csv").read_text().splitlines()[1:]
    assert not any(l.split(",")[3] == "Fh" for l in faces)
    threads = [l.split(",") for l in
               (tmp_path / "cv_threads.csv").read_text().splitlines()[1:]]
    c12 = [t for t in threads if t[0] == "C12"]
    unstable = {float(t[2]) for t in c12 if t[4] == "1"}
    stable = {float(t[2]) for t in c12 if t[4] == "0"}
    assert unstable and stable
    assert all(e < -2.25 for e in unstable)
    assert all(e >= -2.25 for e in stable)  # the boundary is the Hopf point


def test_cli_determinism_quick(tmp_path, runner):
    args = ["bifdiag", "--ell", "-0.125,0.3125", "--grid", "31",
            "--no-surface"]
    outs = []
    for tag in ("x", "y"):
        out = tmp_path / f"d_{tag}"
        runner.invoke(cli, args + ["--out", str(out)], catch_exceptions=False)
        outs.append((tmp_path / f"d_{tag}_slices.csv").read_bytes())
    assert outs[0] == outs[1]


def test_cli_exit_codes():
    def run(*args):
        return subprocess.run([sys.executable, "-m", "res112.cli", *args],
                              capture_output=True, text=True)

    ok = run("fiber", "--delta", "0", "--mu", "0", "--ell", "0", "--h", "0")
    assert ok.returncode == 0
    bad_combo = run("fiber", "--delta", "0", "--mu", "0", "--ell", "0",
                    "--iota", "0", "--h", "0")
    assert bad_combo.returncode == 1
    bad_flag = run("fiber", "--delta", "0")
    assert bad_flag.returncode == 1
    bad_kappa = run("fiber", "--delta", "0", "--mu", "0", "--ell", "0",
                    "--h", "0", "--kappa", "0")
    assert bad_kappa.returncode == 1
    io_err = run("bifdiag", "--ell", "0", "--grid", "5", "--no-surface",
                 "--no-oracle", "--out", "/nonexistent-dir/xx")
    assert io_err.returncode == 3


def test_cli_env_var_defaults():
    # environment variables (RES112_ prefix) are honored below flags
    res = subprocess.run(
        [sys.executable, "-m", "res112.cli", "fiber", "--mu", "0",
         "--ell", "-1", "--h", "0"],
        env={"RES112_FIBER_DELTA": "0", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True)
    assert res.returncode == 0
    assert "PinchedTorusTimesT1" in res.stdout


def test_critvals_loci_file(tmp_path, runner):
    out = tmp_path / "cv"
    runner.invoke(cli, ["critvals", "--delta", "0.52", "--grid", "9",
                        "--mu-window", "-0.4,0.4", "--ell-window", "-0.3,0.3",
                        "--out", str(out)], catch_exceptions=False)
    loci = (tmp_path / "cv_loci.csv").read_text().splitlines()
    assert loci[0] == "name,mu,ell,h"
    names = [l.split(",")[0] for l in loci[1:]]
    assert names[0] == "ell_star"
    assert "L+" in names and "L-" in names
    ell_star = float(loci[1].split(",")[2])
    assert -0.52 ** 2 < ell_star < 0.0


def test_bifdiag_workers_deterministic(tmp_path, runner):
    args = ["bifdiag", "--ell", "0.125", "--grid", "21", "--no-surface"]
    a = tmp_path / "w1"
    b = tmp_path / "w2"
    runner.invoke(cli, args + ["--out", str(a), "--workers", "1"],
                  catch_exceptions=False)
    runner.invoke(cli, args + ["--out", str(b), "--workers", "2"],
                  catch_exceptions=False)
    assert (tmp_path / "w1_slices.csv").read_bytes() == \
        (tmp_path / "w2_slices.csv").read_bytes()


def test_cli_numerical_failure_exit_code():
    # requesting a generator loop around a thread that does not exist at
    # this detuning is a numerical/loop failure, not a usage error
    res = subprocess.run(
        [sys.executable, "-m", "res112.cli", "monodromy", "--delta", "1.5",
         "--loop", "gamma2", "--points", "8"],
        capture_output=True, text=True)
    assert res.returncode == 2
    assert "numerical error" in res.stderr
