import json
from pathlib import Path

from windbench.cli import main

from casestudy import (JS, MAX_AVG, MEAN, MODEL_IDS, POINTS, REF_ID,
                       REF_MAX_AVG, REF_MEAN, REF_POINTS, W1)


def test_evaluate_ok_exit_zero(small_fixture, capsys):
    assert main(["evaluate", "--config", str(small_fixture)]) == 0
    run_dir = Path(json.loads(Path(small_fixture).read_text())["output_dir"])
    for name in ("metrics.csv", "metrics.json", "power.csv", "power.json",
                 "points.csv", "regression.csv", "regression.json",
                 "densities.csv", "run_meta.json"):
        assert (run_dir / name).is_file()


def test_evaluate_zero_candidates_exit_two(small_fixture, capsys):
    doc = json.loads(Path(small_fixture).read_text())
    doc["datasets"] = [doc["datasets"][0]]
    bad = Path(small_fixture).parent / "nocand.json"
    bad.write_text(json.dumps(doc))
    assert main(["evaluate", "--config", str(bad)]) == 2
    assert "candidate" in capsys.readouterr().err


def test_evaluate_missing_config_exit_two(capsys):
    assert main(["evaluate", "--config", "/nonexistent.json"]) == 2


def test_evaluate_corrupt_candidate_exit_one(small_fixture, tmp_path, capsys):
    doc = json.loads(Path(small_fixture).read_text())
    corrupt = tmp_path / "bad.wgrd"
    corrupt.write_bytes(b"JUNKJUNK")
    doc["datasets"].append({"id": "BAD", "role": "candidate",
                            "u_path": str(corrupt), "v_path": str(corrupt)})
    cfg = Path(small_fixture).parent / "corrupt.json"
    cfg.write_text(json.dumps(doc))
    assert main(["evaluate", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "BAD" in err and "FAILED" in err


def test_regress_cli_round_trip(tmp_path, capsys):
    m_lines = ["id,mean,top_k_mean,js,w1"]
    p_lines = ["id,points"]
    for i, mid in enumerate(MODEL_IDS):
        m_lines.append(f"{mid},{MEAN[i]},{MAX_AVG[i]},{JS[i]},{W1[i]}")
        p_lines.append(f"{mid},{POINTS[i]}")
    m_lines.append(f"{REF_ID},{REF_MEAN},{REF_MAX_AVG},,")
    p_lines.append(f"{REF_ID},{REF_POINTS}")
    (tmp_path / "m.csv").write_text("\n".join(m_lines) + "\n")
    (tmp_path / "p.csv").write_text("\n".join(p_lines) + "\n")
    assert main(["regress", "--metrics", str(tmp_path / "m.csv"),
                 "--points", str(tmp_path / "p.csv")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("metric,intercept,slope,std_dev,r_squared_percent,p_value")
    assert "js," in out and "top_k_mean," in out

    assert main(["regress", "--metrics", str(tmp_path / "m.csv"),
                 "--points", str(tmp_path / "p.csv"),
                 "--out-dir", str(tmp_path / "reg")]) == 0
    assert (tmp_path / "reg" / "regression.csv").is_file()
    assert (tmp_path / "reg" / "regression.json").is_file()


def test_regress_id_mismatch_exit_two(tmp_path, capsys):
    (tmp_path / "m.csv").write_text("id,js\nA,0.5\nB,0.2\nC,0.3\n")
    (tmp_path / "p.csv").write_text("id,points\nA,100\nB,200\nZ,300\n")
    assert main(["regress", "--metrics", str(tmp_path / "m.csv"),
                 "--points", str(tmp_path / "p.csv")]) == 2
    assert "id mismatch" in capsys.readouterr().err


def test_selftest_command(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") >= 9
    assert "[FAIL]" not in out


def test_report_missing_dir_exit_one(tmp_path, capsys):
    empty = tmp_path / "emptyrun"
    empty.mkdir()
    assert main(["report", "--run", str(empty)]) == 1
    assert "missing run artifacts" in capsys.readouterr().err
