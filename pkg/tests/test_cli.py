import csv
import json

import numpy as np
import pytest

from slidestats import (
    load_cloud,
    log_returns,
    nn_distances,
    nn_distances_1d,
    rho_curve,
    slide_pair,
)
from slidestats.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, text, name):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


def make_prices(tmp_path, n=240, seed=0, name="prices.csv"):
    rng = np.random.default_rng(seed)
    prices = 100.0 * np.exp(np.cumsum(0.01 * rng.standard_normal(n)))
    text = "date,close\n" + "\n".join(
        f"d{i},{float(p):.17g}" for i, p in enumerate(prices))
    return write(tmp_path, text + "\n", name), prices


# ------------------------------------------------------------------ compute

def test_compute_matches_library(tmp_path, capsys):
    f = write(tmp_path, "0\n1\n3\n", "pts.csv")
    code, out, _ = run(capsys, "compute", "--input", f, "--format", "json")
    assert code == 0
    got = json.loads(out)
    r1, r2 = slide_pair(nn_distances_1d([0.0, 1.0, 3.0]))
    assert got["rho1"] == r1 and got["rho2"] == r2 and got["n"] == 3


def test_compute_consecutive_mode(tmp_path, capsys):
    f = write(tmp_path, "0\n1\n3\n", "pts.csv")
    code, out, _ = run(capsys, "compute", "--input", f, "--mode", "consecutive",
                       "--format", "json")
    assert code == 0
    got = json.loads(out)
    r1, r2 = slide_pair(nn_distances_1d([0.0, 1.0, 3.0], mode="consecutive"))
    assert got["rho1"] == r1 and got["rho2"] == r2 and got["n"] == 2


def test_compute_csv_json_numeric_equality(tmp_path, capsys):
    f = write(tmp_path, "0\n0.5\n1.7\n4\n", "pts.csv")
    _, out_csv, _ = run(capsys, "compute", "--input", f)
    _, out_json, _ = run(capsys, "compute", "--input", f, "--format", "json")
    header, row = out_csv.strip().splitlines()
    vals = dict(zip(header.split(","), row.split(",")))
    parsed = json.loads(out_json)
    assert float(vals["rho1"]) == parsed["rho1"]
    assert float(vals["rho2"]) == parsed["rho2"]


def test_compute_multicolumn_uses_engine(tmp_path, capsys):
    f = write(tmp_path, "0,0\n0,1\n3,4\n", "pts.csv")
    code, out, _ = run(capsys, "compute", "--input", f, "--format", "json")
    assert code == 0
    got = json.loads(out)
    cloud = load_cloud(f)
    r1, r2 = slide_pair(nn_distances(cloud))
    assert got["rho1"] == r1 and got["rho2"] == r2


def test_compute_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "1\n2\nzzz\n", "bad.csv")
    code, _, err = run(capsys, "compute", "--input", bad)
    assert code == 2 and "line 3" in err

    dup = write(tmp_path, "1\n1\n2\n", "dup.csv")
    code, _, _ = run(capsys, "compute", "--input", dup)
    assert code == 3

    dim = write(tmp_path, "1,2\n3,4\n", "dim.csv")
    code, _, _ = run(capsys, "compute", "--input", dim, "--dim", "3")
    assert code == 2

    consec = write(tmp_path, "1,2\n3,4\n5,6\n", "c.csv")
    code, _, _ = run(capsys, "compute", "--input", consec, "--mode", "consecutive")
    assert code == 2


def test_compute_dedupe_flag(tmp_path, capsys):
    f = write(tmp_path, "1\n1\n2\n5\n", "pts.csv")
    code, out, _ = run(capsys, "compute", "--input", f, "--dedupe",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["n"] == 3


# ------------------------------------------------------------------- sample

def test_sample_roundtrip(tmp_path, capsys):
    out_file = str(tmp_path / "cloud.csv")
    code, _, _ = run(capsys, "sample", "--kind", "uniform-cube", "--m", "2",
                     "--size", "50", "--seed", "3", "--output", out_file)
    assert code == 0
    cloud = load_cloud(out_file)
    assert cloud.k == 50 and cloud.m == 2
    code, out, _ = run(capsys, "compute", "--input", out_file, "--format", "json")
    assert code == 0
    r1, r2 = slide_pair(nn_distances(cloud))
    got = json.loads(out)
    assert got["rho1"] == pytest.approx(r1, rel=1e-15)
    assert got["rho2"] == pytest.approx(r2, rel=1e-15)


def test_sample_requires_seed_for_random(capsys):
    code, _, err = run(capsys, "sample", "--kind", "normal", "--size", "10")
    assert code == 1 and "seed" in err


def test_sample_deterministic_kind_without_seed(capsys):
    code, out, _ = run(capsys, "sample", "--kind", "primes", "--size", "4")
    assert code == 0
    assert [float(line) for line in out.strip().splitlines()] == [2, 3, 5, 7]


# ----------------------------------------------------------- simulate/table

def test_simulate_with_config(tmp_path, capsys):
    cfg = write(tmp_path, "kind = uniform-cube\nsize = 400\nreps = 3\nseed = 7\n",
                "exp.cfg")
    code, out, _ = run(capsys, "simulate", "--config", cfg, "--threads", "1")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "kind,m,size,reps,mu1,sigma1,mu2,sigma2,dim_est1,dim_est2"
    vals = row.split(",")
    assert vals[0] == "uniform-cube" and vals[2] == "400" and vals[3] == "3"


def test_simulate_flags_override_config(tmp_path, capsys):
    cfg = write(tmp_path, "kind = normal\nsize = 300\nreps = 2\nseed = 1\n", "e.cfg")
    code, out, _ = run(capsys, "simulate", "--config", cfg, "--reps", "4",
                       "--threads", "1")
    assert code == 0
    assert out.strip().splitlines()[1].split(",")[3] == "4"


def test_simulate_needs_kind_and_seed(capsys):
    code, _, err = run(capsys, "simulate", "--size", "100", "--reps", "2")
    assert code == 1


def test_table_deterministic_output(tmp_path, capsys):
    args = ("table", "--size", "250", "--reps", "2", "--seed", "5",
            "--rows", "uniform-cube:1,normal", "--threads", "1")
    code, out_a, _ = run(capsys, *args)
    assert code == 0
    code, out_b, _ = run(capsys, *args)
    assert out_a == out_b
    rows = out_a.strip().splitlines()
    assert len(rows) == 3  # header + 2 rows
    assert rows[1].startswith("uniform-cube,1,250,2,")


def test_table_json_mirror(tmp_path, capsys):
    args = ("table", "--size", "250", "--reps", "2", "--seed", "5",
            "--rows", "normal", "--threads", "1")
    _, out_csv, _ = run(capsys, *args)
    _, out_json, _ = run(capsys, *args, "--format", "json")
    row = out_csv.strip().splitlines()[1].split(",")
    parsed = json.loads(out_json)[0]
    assert float(row[4]) == parsed["mu1"]
    assert float(row[6]) == parsed["mu2"]


# ------------------------------------------------------------ returns-curve

def test_returns_curve_matches_library(tmp_path, capsys):
    f, prices = make_prices(tmp_path)
    code, out, _ = run(capsys, "returns-curve", "--prices", f, "--n", "2:4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,rho1,rho2,windows"
    curve = rho_curve(log_returns(prices), [2, 3, 4])
    for line, (n, r1, r2, w) in zip(lines[1:], curve.rows()):
        cells = line.split(",")
        assert int(cells[0]) == n
        assert float(cells[1]) == r1
        assert float(cells[2]) == r2
        assert int(cells[3]) == w


def test_returns_curve_plot_and_output(tmp_path, capsys):
    f, _ = make_prices(tmp_path)
    fig = str(tmp_path / "curve.png")
    out_csv = str(tmp_path / "curve.csv")
    code, _, _ = run(capsys, "returns-curve", "--prices", f, "--n", "2:3",
                     "--plot", fig, "--output", out_csv)
    assert code == 0
    assert (tmp_path / "curve.png").stat().st_size > 0
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["n"] for r in rows] == ["2", "3"]


def test_returns_curve_bad_file(tmp_path, capsys):
    f = write(tmp_path, "date,close\nd0,100\nd1,-3\n", "neg.csv")
    code, _, err = run(capsys, "returns-curve", "--prices", f, "--n", "2:3")
    assert code == 1 and "line 3" in err


# ------------------------------------------------------------------ scatter

def test_scatter_family_and_prices(tmp_path, capsys):
    f, prices = make_prices(tmp_path, name="stock.csv")
    fig = str(tmp_path / "sc.png")
    code, out, _ = run(capsys, "scatter", "--family", "normal", "--count", "3",
                       "--length", "120", "--embed", "3", "--seed", "11",
                       "--threads", "1", "--prices", f, "--plot", fig)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "label,rho2,rho1"
    assert len(lines) == 5  # header + 3 simulated + 1 price file
    assert lines[-1].startswith("stock,")
    from slidestats import scatter_point
    r2, r1 = scatter_point(log_returns(prices), n=3)
    cells = lines[-1].split(",")
    assert float(cells[1]) == r2 and float(cells[2]) == r1
    assert (tmp_path / "sc.png").stat().st_size > 0


def test_scatter_needs_source(capsys):
    code, _, err = run(capsys, "scatter", "--seed", "1")
    assert code == 1 and "family" in err


def test_scatter_family_needs_seed(capsys):
    code, _, err = run(capsys, "scatter", "--family", "normal")
    assert code == 1 and "seed" in err


# -------------------------------------------------------------- test-normal

def test_test_normal_from_sample_file(tmp_path, capsys):
    rng = np.random.default_rng(9)
    f = write(tmp_path, "\n".join(f"{x:.12f}" for x in rng.standard_normal(200))
              + "\n", "sample.csv")
    code, out, _ = run(capsys, "test-normal", "--input", f, "--reps", "80",
                       "--seed", "2", "--format", "json")
    assert code == 0
    got = json.loads(out)
    assert 0.0 < got["p_value"] <= 1.0
    assert got["reps"] == 80
    assert isinstance(got["reject"], bool)


def test_test_normal_from_prices(tmp_path, capsys):
    f, prices = make_prices(tmp_path)
    code, out, _ = run(capsys, "test-normal", "--prices", f, "--reps", "60",
                       "--seed", "4")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "rho1,rho2,p_value,reps,alpha,reject"
    r1, _ = slide_pair(nn_distances_1d(log_returns(prices).u))
    assert float(row.split(",")[0]) == pytest.approx(r1, rel=1e-15)


def test_test_normal_needs_input(capsys):
    code, _, err = run(capsys, "test-normal", "--seed", "1")
    assert code == 1


# ---------------------------------------------------------------- formatting

def test_csv_floats_roundtrip_17g(tmp_path, capsys):
    f = write(tmp_path, "0\n0.1\n0.30000000000000004\n1\n", "pts.csv")
    _, out_csv, _ = run(capsys, "compute", "--input", f)
    _, out_json, _ = run(capsys, "compute", "--input", f, "--format", "json")
    row = out_csv.strip().splitlines()[1].split(",")
    parsed = json.loads(out_json)
    assert float(row[0]) == parsed["rho1"]
    assert float(row[1]) == parsed["rho2"]
