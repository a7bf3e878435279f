import csv
import json

import numpy as np
import pytest

from circuitvae.bench import (
    CSV_HEADER,
    ExperimentConfig,
    ResultRow,
    baseline_row,
    build_config,
    read_csv,
    summary_by_gates,
    summary_by_size,
    summary_by_variant,
    summary_selected,
    write_csv,
)
from circuitvae.bench.cli import main
from circuitvae.bench.pipeline import cmd_baseline, cmd_generate, safe_reduction
from circuitvae.circuit import QuantumCircuit, load_circuit, random_circuit
from circuitvae.transpiler import reduction_pct, transpile


def test_csv_header_exact(tmp_path):
    path = write_csv(tmp_path / "r.csv", [])
    assert path.read_text().splitlines()[0] == "variant,qubits,gates,run,circuit,candidate,gate_red_pct,depth_red_pct,density_mse"
    assert ",".join(CSV_HEADER) == path.read_text().splitlines()[0]


def test_csv_round_trip_exact_floats(tmp_path):
    rows = [ResultRow("gru", 2, 16, 0, "circuit_000", 3, 100 / 3, -73.0, 1e-17)]
    assert read_csv(write_csv(tmp_path / "r.csv", rows)) == rows


def test_config_defaults_and_overrides(tmp_path):
    cfg = ExperimentConfig()
    assert cfg.sizes == [(n, g) for n in (2, 4, 6) for g in (16, 24, 32)]
    assert (cfg.n_train, cfg.n_test) == (270, 30)
    ini = tmp_path / "c.ini"
    ini.write_text("[experiment]\nseed = 5\nopt = 0\nvariants = gru, gcn\nqubit_counts = [2, 4]\n")
    cfg = build_config(ini, seed=9)
    assert cfg.seed == 9 and cfg.opt == 0 and cfg.variants == ("gru", "gcn") and cfg.qubit_counts == (2, 4)
    flat = tmp_path / "c.toml"
    flat.write_text('coupling_map = "line"\nmse_tol = 0.05\n')
    cfg = build_config(flat)
    assert cfg.coupling_map == "line" and cfg.mse_tol == 0.05
    with pytest.raises(ValueError):
        build_config(None, bogus=1)
    with pytest.raises(ValueError):
        build_config(None, opt=2)
    with pytest.raises(ValueError):
        build_config(None, train_fraction=1.0)


def test_generate_counts_and_determinism(tmp_path):
    cfg = build_config(None, qubit_counts=[2, 3], gate_counts=[4, 5], circuits_per_size=10, workdir=str(tmp_path / "a"))
    cmd_generate(cfg)
    files = sorted((tmp_path / "a" / "data").rglob("circuit_*.txt"))
    assert len(files) == 40
    split = json.loads((tmp_path / "a" / "data" / "q3_g5" / "split.json").read_text())
    assert len(split["train"]) == 9 and len(split["test"]) == 1
    assert not set(split["train"]) & set(split["test"])
    c = load_circuit(tmp_path / "a" / "data" / "q3_g5" / "circuit_000.txt")
    assert c.num_qubits == 3 and len(c.gates) == 5
    cmd_generate(cfg.__class__(**{**cfg.to_dict(), "workdir": str(tmp_path / "b")}))
    for f in files:
        twin = tmp_path / "b" / f.relative_to(tmp_path / "a")
        assert twin.read_bytes() == f.read_bytes()


def test_full_size_split_arithmetic(tmp_path):
    cfg = build_config(None, qubit_counts=[2], gate_counts=[16], workdir=str(tmp_path))
    cmd_generate(cfg)
    split = json.loads((tmp_path / "data" / "q2_g16" / "split.json").read_text())
    assert (len(split["train"]), len(split["test"])) == (270, 30)
    assert 3 * 3 * 300 == 2700


def test_baseline_examples(tmp_path):
    row = baseline_row(QuantumCircuit.from_list(1, [("x", 0), ("x", 0)]), "line")
    assert row.gate_red_pct == 100.0 and row.density_mse < 1e-20
    for s in range(20):
        assert baseline_row(random_circuit(3, 16, s), "heavy-hex-12").gate_red_pct >= 0
    cfg = build_config(None, qubit_counts=[4], gate_counts=[24], circuits_per_size=300, workdir=str(tmp_path))
    cmd_generate(cfg)
    rows = read_csv(cmd_baseline(cfg))
    assert len(rows) == 30
    assert np.mean([r.gate_red_pct for r in rows]) > 0


def test_safe_reduction():
    assert safe_reduction(95, 60) == reduction_pct(95, 60)
    assert safe_reduction(0, 0) == 0.0
    assert safe_reduction(0, 2) == float("-inf")


def _rows():
    rng = np.random.default_rng(0)
    rows = []
    for v in ("gru", "gcn"):
        for n, g in ((2, 16), (2, 24), (4, 16)):
            for i in range(int(rng.integers(3, 7))):
                rows.append(ResultRow(v, n, g, 0, f"circuit_{i:03d}", 0, float(rng.normal(20, 10)), float(rng.normal(15, 5)), float(rng.uniform(0, 0.1))))
    return rows


def test_report_aggregation_algebra():
    rows = _rows()
    by_size = summary_by_size(rows)
    by_variant = {e["variant"]: e for e in summary_by_variant(rows)}
    for v in ("gru", "gcn"):
        mine = [r for r in rows if r.variant == v]
        # grand mean equals the row-weighted mean of per-size means
        sizes = [e for e in by_size if e["variant"] == v]
        weighted = sum(e["gate_red_pct_mean"] * e["rows"] for e in sizes) / sum(e["rows"] for e in sizes)
        assert by_variant[v]["gate_red_pct_mean"] == pytest.approx(weighted, rel=1e-12)
        assert by_variant[v]["gate_red_pct_mean"] == pytest.approx(sum(r.gate_red_pct for r in mine) / len(mine), rel=1e-12)
        assert by_variant[v]["rows"] == len(mine)
    for e in summary_by_gates(rows):
        mine = [r.density_mse for r in rows if r.variant == e["variant"] and r.gates == e["gates"]]
        assert e["density_mse_mean"] == pytest.approx(sum(mine) / len(mine), rel=1e-12)
    first = by_size[0]
    vals = sorted(r.gate_red_pct for r in rows if (r.variant, r.qubits, r.gates) == (first["variant"], first["qubits"], first["gates"]))
    assert first["gate_red_pct_median"] == pytest.approx(float(np.median(vals)))
    assert first["gate_red_pct_q1"] <= first["gate_red_pct_median"] <= first["gate_red_pct_q3"]


def test_summary_selected():
    rows = [
        ResultRow("gru", 2, 8, 0, "a", 0, 10.0, 5.0, 0.0),
        ResultRow("gru", 2, 8, 0, "a", 1, 30.0, 1.0, 0.5),
        ResultRow("gru", 2, 8, 0, "b", 0, -5.0, 0.0, 0.0),
    ]
    (entry,) = summary_selected(rows, 0.01)
    assert entry["circuits"] == 2 and entry["found_fraction"] == 0.5 and entry["best_gate_red_pct_mean"] == 10.0


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("qubits 2\ngate nope 0\n")
    assert main(["optimize", str(bad), "--workdir", str(tmp_path)]) == 2
    assert main(["report", "--workdir", str(tmp_path)]) == 2
    assert main(["train", "--workdir", str(tmp_path)]) == 2  # no dataset
    cfg = tmp_path / "c.ini"
    cfg.write_text("[experiment]\nbogus = 1\n")
    assert main(["generate", "--config", str(cfg)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["train", "--variant", "lstm"])
    assert exc.value.code == 2


def test_cli_flags_override_config(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(f"[experiment]\nqubit_counts = 2\ngate_counts = 4\ncircuits_per_size = 5\nseed = 1\nworkdir = {tmp_path / 'x'}\n")
    assert main(["generate", "--config", str(cfg)]) == 0
    assert main(["generate", "--config", str(cfg), "--seed", "2", "--workdir", str(tmp_path / "y")]) == 0
    a = (tmp_path / "x" / "data" / "q2_g4" / "circuit_000.txt").read_text()
    b = (tmp_path / "y" / "data" / "q2_g4" / "circuit_000.txt").read_text()
    assert a != b


def test_cli_pipeline_and_optimize(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text(
        "[experiment]\nqubit_counts = 2\ngate_counts = 6\ncircuits_per_size = 10\nruns_per_model = 1\n"
        f"variants = gru\nhidden_dim = 16\nlatent_dim = 8\nepochs = 2\nsamples = 8\nworkdir = {tmp_path}\n"
    )
    for cmd in ("generate", "train", "eval", "baseline", "report"):
        assert main([cmd, "--config", str(cfg)]) == 0, cmd
    rows = read_csv(tmp_path / "results" / "results.csv")
    assert len(rows) == 1 * 9  # one test circuit, nine reconstructions
    rep = json.loads((tmp_path / "results" / "reports" / "gru" / "q2_g6" / "run0" / f"{rows[0].circuit}.json").read_text())
    assert len(rep["candidates"]) == 9
    src = QuantumCircuit.from_json(rep["source"]["circuit"])
    from circuitvae.simulator import circuit_mse

    for row, c in zip(rows, rep["candidates"]):
        assert abs(circuit_mse(src, QuantumCircuit.from_json(c["circuit"])) - row.density_mse) <= 1e-12
    for name in ("summary_by_size.csv", "summary_by_gates.csv", "summary_by_variant.csv", "summary_selected.csv",
                 "gate_reduction.png", "depth_reduction.png"):
        assert (tmp_path / "report" / name).exists()
    with open(tmp_path / "report" / "summary_by_variant.csv") as fh:
        variants = [r["variant"] for r in csv.DictReader(fh)]
    assert variants == ["baseline", "gru"]

    circuit = tmp_path / "in.txt"
    circuit.write_text(random_circuit(2, 6, 0).to_text())
    capsys.readouterr()
    out, report = tmp_path / "out.txt", tmp_path / "rep.json"
    assert main(["optimize", str(circuit), "--config", str(cfg), "--output", str(out), "--report", str(report),
                 "--noise", "0.3", "--mse-tol", "0.05", "--map", "line", "--opt", "1"]) == 0
    result = load_circuit(out)
    data = json.loads(report.read_text())
    assert data["mse_tol"] == 0.05 and len(data["candidates"]) == 8
    assert transpile(result, "line").transpiled_gate_count <= data["source"]["transpiled_gates"]

    wide = tmp_path / "wide.txt"
    wide.write_text(random_circuit(7, 20, 0).to_text())
    assert main(["optimize", str(wide), "--config", str(cfg), "--output", str(tmp_path / "w.txt")]) == 0
    assert load_circuit(tmp_path / "w.txt").num_qubits == 7
