import math

import pytest
import yaml

from dualorlicz.cli import main


def _write(path, cfg):
    with open(path, "w") as fh:
        yaml.safe_dump(cfg, fh)
    return str(path)


GRID2 = {"dimension": 2, "resolution": 512, "scheme": "uniform-angle"}


@pytest.fixture()
def compute_cfg(tmp_path):
    return _write(tmp_path / "compute.yaml", {
        "seed": 1,
        "grid": {"dimension": 3, "resolution": 20000, "scheme": "fibonacci"},
        "compute": {"functional": "volume", "bodies": {"K": {"kind": "ball"}}},
    })


def test_compute_ball_volume(tmp_path, compute_cfg, capsys):
    out = tmp_path / "out"
    assert main(["compute", "--config", compute_cfg, "--out", str(out),
                 "--no-figures"]) == 0
    printed = capsys.readouterr().out
    assert "4.18879" in printed
    assert (out / "result.csv").exists()
    assert (out / "manifest.yaml").exists()
    record = yaml.safe_load((out / "result.yaml").read_text())
    assert record["value"] == pytest.approx(4 * math.pi / 3, rel=1e-6)


def test_compute_dual_mixed_dilate(tmp_path, capsys):
    cfg = _write(tmp_path / "c.yaml", {
        "seed": 1, "grid": GRID2,
        "compute": {
            "functional": "dual-mixed",
            "bodies": {"K": {"kind": "ball"}, "L": {"kind": "ball", "radius": 2.0}},
            "functions": {"phi": {"kind": "power", "p": 3}},
        },
    })
    out = tmp_path / "out"
    assert main(["compute", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    assert "25.1327" in capsys.readouterr().out


def test_compute_vrad_square(tmp_path, capsys):
    cfg = _write(tmp_path / "c.yaml", {
        "seed": 1, "grid": GRID2,
        "compute": {"functional": "vrad", "bodies": {"K": {"kind": "cube"}}},
    })
    assert main(["compute", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 0
    assert "vrad: 1.128" in capsys.readouterr().out


def test_compute_renders_figures(tmp_path):
    cfg = _write(tmp_path / "c.yaml", {
        "seed": 1, "grid": GRID2,
        "compute": {"functional": "volume", "bodies": {"K": {"kind": "cube"}}},
    })
    out = tmp_path / "o"
    assert main(["compute", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "bodies.png").exists()


def test_estimate_command(tmp_path, capsys):
    cfg = _write(tmp_path / "e.yaml", {
        "seed": 1, "grid": GRID2,
        "estimate": {"target": "geominimal", "body": {"kind": "ball"},
                     "function": {"kind": "power", "p": -1}, "budget": 4000},
    })
    out = tmp_path / "o"
    assert main(["estimate", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    printed = capsys.readouterr().out
    assert "converged: True" in printed
    record = yaml.safe_load((out / "result.yaml").read_text())
    assert record["value"] == pytest.approx(2 * math.pi, rel=1e-2)
    assert (out / "trace.csv").exists() and (out / "candidate.csv").exists()
    trace_header = (out / "trace.csv").read_text().splitlines()[0]
    assert trace_header == "evaluation,objective,step"


def test_estimate_constant_phi_no_search(tmp_path, capsys):
    cfg = _write(tmp_path / "e.yaml", {
        "seed": 1, "grid": GRID2,
        "estimate": {"target": "affine", "body": {"kind": "cube"},
                     "function": {"kind": "expr", "expr": "2"}},
    })
    assert main(["estimate", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 0
    record = yaml.safe_load((tmp_path / "o" / "result.yaml").read_text())
    # 2 * n * |K| for the square, with no search at all
    assert record["value"] == pytest.approx(16.0, rel=1e-3)
    assert record["evaluations"] == 0


def test_estimate_sense_contract_error(tmp_path, capsys):
    cfg = _write(tmp_path / "e.yaml", {
        "seed": 1, "grid": GRID2,
        "estimate": {"target": "affine", "body": {"kind": "ball"},
                     "function": {"kind": "power", "p": -1}, "sense": "sup"},
    })
    assert main(["estimate", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 2


def test_estimate_ith_target(tmp_path, capsys):
    cfg = _write(tmp_path / "e.yaml", {
        "seed": 1, "grid": GRID2,
        "estimate": {"target": "ith", "i": 1.0,
                     "bodies": {"K": {"kind": "ball"}, "L": {"kind": "ball"}},
                     "functions": {"phi1": {"kind": "power", "p": 0.5},
                                   "phi2": {"kind": "power", "p": 0.5}},
                     "budget": 1200},
    })
    out = tmp_path / "o"
    assert main(["estimate", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    record = yaml.safe_load((out / "result.yaml").read_text())
    assert record["value"] == pytest.approx(2 * math.pi, rel=1e-2)
    assert (out / "candidate1.csv").exists() and (out / "candidate2.csv").exists()


def test_estimate_multi_target(tmp_path, capsys):
    cfg = _write(tmp_path / "e.yaml", {
        "seed": 1, "grid": GRID2,
        "estimate": {"target": "multi", "mode": "per-slot",
                     "bodies": {"Ks": [{"kind": "ball"}, {"kind": "ball"}]},
                     "functions": {"phis": [{"kind": "power", "p": 0.5},
                                            {"kind": "power", "p": 1.0}]},
                     "budget": 1500},
    })
    out = tmp_path / "o"
    assert main(["estimate", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    record = yaml.safe_load((out / "result.yaml").read_text())
    assert record["value"] == pytest.approx(2 * math.pi, rel=1e-2)


def test_verify_command(tmp_path, capsys):
    cfg = _write(tmp_path / "v.yaml", {
        "seed": 1, "grid": GRID2,
        "verify": {"checks": ["dual-urysohn", "cyclic-powers"], "trials": 3},
    })
    out = tmp_path / "o"
    assert main(["verify", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    printed = capsys.readouterr().out
    assert "2/2 checks passed" in printed
    lines = (out / "trials.csv").read_text().splitlines()
    assert lines[0] == "check,seed,trial,lhs,rhs,margin,verdict"
    assert len(lines) == 1 + 2 * 3
    summary = yaml.safe_load((out / "summary.yaml").read_text())
    assert summary["cyclic-powers"]["verdict"] == "pass"


def test_verify_unknown_check(tmp_path):
    cfg = _write(tmp_path / "v.yaml", {
        "seed": 1, "grid": GRID2, "verify": {"checks": ["nope"], "trials": 1},
    })
    assert main(["verify", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 2


def test_verify_cli_overrides(tmp_path, capsys):
    cfg = _write(tmp_path / "v.yaml", {
        "seed": 1, "grid": GRID2, "verify": {"checks": "all", "trials": 50},
    })
    out = tmp_path / "o"
    assert main(["verify", "--config", cfg, "--out", str(out), "--no-figures",
                 "--checks", "dual-urysohn", "--trials", "2"]) == 0
    lines = (out / "trials.csv").read_text().splitlines()
    assert len(lines) == 1 + 2


def test_sweep_p_regimes(tmp_path):
    cfg = _write(tmp_path / "s.yaml", {
        "seed": 1, "grid": GRID2,
        "sweep": {"parameter": "p", "values": [-2, -1, 0.5, 1, 1.5],
                  "body": {"kind": "cube"}},
    })
    out = tmp_path / "o"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    vol_ratio = 4.0 / math.pi
    for row in rows:
        p, ratio = float(row["p"]), float(row["ratio"])
        bound = vol_ratio ** ((2 - p) / 2)
        if p < 0 or p >= 2:
            assert ratio >= bound - 1e-9
        else:
            assert ratio <= bound + 1e-9


def test_sweep_resolution_error_decreases(tmp_path):
    cfg = _write(tmp_path / "s.yaml", {
        "seed": 1, "grid": GRID2,
        "sweep": {"parameter": "resolution", "values": [64, 128, 256, 512],
                  "body": {"kind": "ball"}},
    })
    out = tmp_path / "o"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()[1:]
    errors = [float(line.split(",")[2]) for line in lines]
    assert all(b <= a + 1e-15 for a, b in zip(errors, errors[1:]))


def test_sweep_roughness_mahler(tmp_path):
    cfg = _write(tmp_path / "s.yaml", {
        "seed": 1, "grid": GRID2,
        "sweep": {"parameter": "roughness", "values": [0.0, 0.2, 0.4]},
    })
    out = tmp_path / "o"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--no-figures"]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()[1:]
    products = [float(line.split(",")[3]) for line in lines]
    # the sampled polar overestimates |K°| by a mesh-level bias
    assert all(p <= 1.0 + 1e-3 for p in products)
    assert products[0] == pytest.approx(1.0, abs=1e-9)


def test_sweep_empty_range(tmp_path):
    cfg = _write(tmp_path / "s.yaml", {
        "seed": 1, "grid": GRID2, "sweep": {"parameter": "p", "values": []},
    })
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 2


@pytest.mark.parametrize("bad_cfg", [
    {"compute": {"functional": "volume"}},                        # missing bodies
    {"compute": {"functional": "frobnicate",
                 "bodies": {"K": {"kind": "ball"}}}},             # unknown functional
    {"compute": {"functional": "volume",
                 "bodies": {"K": {"kind": "dodecahedron"}}}},     # unknown body kind
])
def test_malformed_configs(tmp_path, bad_cfg):
    bad_cfg = {"seed": 1, "grid": GRID2, **bad_cfg}
    cfg = _write(tmp_path / "bad.yaml", bad_cfg)
    assert main(["compute", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--no-figures"]) == 2


def test_missing_config_file(tmp_path):
    assert main(["compute", "--config", str(tmp_path / "absent.yaml"),
                 "--out", str(tmp_path / "o")]) == 2


def test_command_mismatch(tmp_path):
    cfg = _write(tmp_path / "c.yaml", {
        "command": "verify", "seed": 1, "grid": GRID2,
        "compute": {"functional": "volume", "bodies": {"K": {"kind": "ball"}}},
    })
    assert main(["compute", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_grid_override(tmp_path):
    cfg = _write(tmp_path / "c.yaml", {
        "seed": 1, "grid": GRID2,
        "compute": {"functional": "volume", "bodies": {"K": {"kind": "ball"}}},
    })
    out = tmp_path / "o"
    assert main(["compute", "--config", cfg, "--out", str(out), "--grid", "64",
                 "--no-figures"]) == 0
    record = yaml.safe_load((out / "result.yaml").read_text())
    assert "N=64" in record["grid"]


def test_byte_identical_reruns(tmp_path):
    cfg = _write(tmp_path / "v.yaml", {
        "seed": 4, "grid": GRID2,
        "verify": {"checks": ["santalo-products"], "trials": 3},
    })
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["verify", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        outs.append(out)
    for fname in ("trials.csv", "monitors.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_seed_override_changes_output(tmp_path):
    cfg = _write(tmp_path / "v.yaml", {
        "seed": 4, "grid": GRID2,
        "verify": {"checks": ["dual-urysohn"], "trials": 2},
    })
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--config", cfg, "--out", str(a), "--no-figures"]) == 0
    assert main(["verify", "--config", cfg, "--out", str(b), "--seed", "99",
                 "--no-figures"]) == 0
    assert (a / "trials.csv").read_bytes() != (b / "trials.csv").read_bytes()
