import json

import numpy as np
from oees.cli import main
from oees.output import read_csv


def run_cli(args):
    return main(args)


def test_requires_config_or_preset(capsys):
    assert run_cli(["invariants"]) == 3
    assert "config" in capsys.readouterr().err.lower()


def test_unknown_preset_exits_3():
    assert run_cli(["invariants", "--preset", "nope"]) == 3


def test_invariants_fig2_qwz(tmp_path):
    out = tmp_path / "inv"
    code = run_cli(["invariants", "--preset", "fig2_qwz", "--grid", "64", "--out", str(out)])
    assert code == 0
    report = json.loads((out / "invariants.json").read_text())
    assert report["chern"] == 2 and report["skyrmion"] == -1
    assert report["quantized"] is True
    assert report["cross_checks_agree"] is True
    manifest = json.loads((out / "manifest.json").read_text())
    assert "invariants.json" in manifest["outputs"]


def test_invariants_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli(["invariants", "--preset", "fig3", "--grid", "48", "--out", str(out1)])
    run_cli(["invariants", "--preset", "fig3", "--grid", "48", "--out", str(out2)])
    m1 = json.loads((out1 / "manifest.json").read_text())
    m2 = json.loads((out2 / "manifest.json").read_text())
    assert m1["outputs"] == m2["outputs"]
    assert m1["config_hash"] == m2["config_hash"]


def test_texture_command(tmp_path):
    out = tmp_path / "tex"
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("schema_version = 1\n[numerics]\ntexture_grid = 24\n")
    code = run_cli(["texture", "--preset", "fig1_qwz", "--config", str(cfg), "--out", str(out)])
    assert code == 0
    report = json.loads((out / "texture_report.json").read_text())
    assert report["routes_agree_1e-12"] is True
    cols = read_csv(out / "texture_full.csv")
    assert len(cols["kx"]) == 24 * 24


def test_texture_gap_closure_exit_2(tmp_path, capsys):
    cfg = tmp_path / "gap.toml"
    cfg.write_text(
        """
schema_version = 1
[model]
normal_state = "qwz"
mu = 2.0
delta0 = 0.0
d_vector = "zero"
[numerics]
texture_grid = 16
"""
    )
    code = run_cli(["texture", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 2
    err = capsys.readouterr().err
    assert "k =" in err


def test_spectra_es_command(tmp_path):
    out = tmp_path / "es"
    cfg = tmp_path / "small.toml"
    cfg.write_text(
        """
schema_version = 1
[geometry]
nx = 40
[numerics]
ky_points = 41
"""
    )
    code = run_cli(
        ["spectra", "--preset", "fig2_qwz", "--config", str(cfg), "--out", str(out), "--which", "es"]
    )
    assert code == 0
    summary = json.loads((out / "es_summary.json").read_text())
    assert abs(summary["net_crossings"]) == 2
    cols = read_csv(out / "es.csv")
    assert set(cols) == {"ky", "index", "xi", "degeneracy", "edge_tag"}
    assert cols["xi"].min() > -1e-10 and cols["xi"].max() < 1 + 1e-10


def test_spectra_slab_command(tmp_path):
    out = tmp_path / "slab"
    cfg = tmp_path / "small.toml"
    cfg.write_text("schema_version = 1\n[geometry]\nnx = 30\n[numerics]\nky_points = 31\n")
    code = run_cli(
        ["spectra", "--preset", "fig2_qwz", "--config", str(cfg), "--out", str(out), "--which", "slab"]
    )
    assert code == 0
    summary = json.loads((out / "slab_summary.json").read_text())
    assert summary["max_energy_asymmetry"] < 1e-10


def test_phasediagram_command(tmp_path):
    out = tmp_path / "pd"
    cfg = tmp_path / "pd.toml"
    cfg.write_text(
        """
schema_version = 1
[numerics]
invariant_grid = 32
mu_min = -3.0
mu_max = 3.0
mu_points = 5
delta0_min = 0.3
delta0_max = 0.9
delta0_points = 2
"""
    )
    code = run_cli(["phasediagram", "--preset", "figS8", "--config", str(cfg), "--out", str(out)])
    assert code == 0
    summary = json.loads((out / "phase_diagram_summary.json").read_text())
    assert summary["skyrmion_independent_of_delta0"] is True
    cols = read_csv(out / "phase_diagram.csv")
    # the exact mu = 0 row is a type-II transition: recorded, not fabricated
    mid = cols["mu"] == 0.0
    assert all(s != "ok" for s in cols["status"][mid])
    deep = np.abs(cols["mu"]) == 3.0
    assert all(c == 0 for c in cols["chern"][deep])


def test_spectra_torus_suite_command(tmp_path):
    out = tmp_path / "torus"
    cfg = tmp_path / "torus.toml"
    cfg.write_text(
        "schema_version = 1\n[geometry]\nnx = 24\ncut_geometry = \"torus\"\n"
        "[numerics]\nky_points = 17\n"
    )
    code = run_cli(
        ["spectra", "--preset", "figS9", "--config", str(cfg), "--out", str(out),
         "--which", "torus-suite"]
    )
    assert code == 0
    summary = json.loads((out / "torus_summary.json").read_text())
    assert summary["purity_deviation"] < 1e-8
    assert summary["xi_S"]["total_crossings"] == 0
    for name in ("xi", "xi_A", "xi_S", "xi_SA"):
        assert (out / f"torus_{name}.csv").exists()


def test_threads_flag_equivalence(tmp_path):
    out1, out2 = tmp_path / "t1", tmp_path / "t2"
    cfg = tmp_path / "small.toml"
    cfg.write_text("schema_version = 1\n[geometry]\nnx = 24\n[numerics]\nky_points = 17\n")
    base = ["spectra", "--preset", "fig2_qwz", "--config", str(cfg), "--which", "oees"]
    assert run_cli(base + ["--out", str(out1)]) == 0
    assert run_cli(base + ["--out", str(out2), "--threads", "2"]) == 0
    m1 = json.loads((out1 / "manifest.json").read_text())
    m2 = json.loads((out2 / "manifest.json").read_text())
    assert m1["outputs"]["oees.csv"] == m2["outputs"]["oees.csv"]
