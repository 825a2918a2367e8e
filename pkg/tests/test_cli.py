"""CLI surface tests: subcommands, overrides, exit codes, diagnostics."""

import json


from hrcslab.cli import main


def write_config(tmp_path, name="spec.json", **overrides):
    doc = {
        "schema_version": 1,
        "kind": "cp_sweep",
        "n_system": 2,
        "n_bath": 1,
        "steps": [1, 2],
        "instances": 8,
        "master_seed": 3,
    }
    doc.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_cp_sweep_writes_jsonl(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "records.jsonl"
    assert main(["cp-sweep", "--config", str(config), "--out", str(out), "--workers", "1"]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert "wrote 2 records" in capsys.readouterr().out


def test_csv_format_flag(tmp_path):
    config = write_config(tmp_path)
    out = tmp_path / "records.csv"
    code = main([
        "cp-sweep", "--config", str(config), "--out", str(out),
        "--format", "csv", "--workers", "1",
    ])
    assert code == 0
    assert out.read_text().startswith("n_A,n_B,t,K,gamma,")


def test_theory_subcommand(tmp_path):
    config = write_config(
        tmp_path, kind="theory_table", theory_family="hrcs_power_sum", steps=[1, 2, 3]
    )
    out = tmp_path / "table.csv"
    code = main(["theory", "--config", str(config), "--out", str(out), "--format", "csv"])
    assert code == 0
    assert len(out.read_text().splitlines()) == 4  # header + 3 rows


def test_kind_mismatch_fails(tmp_path, capsys):
    config = write_config(tmp_path)
    out = tmp_path / "x.jsonl"
    assert main(["tvd", "--config", str(config), "--out", str(out)]) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_config_key_fails(tmp_path, capsys):
    config = write_config(tmp_path, typo_key=1)
    assert main(["cp-sweep", "--config", str(config), "--out", "x.jsonl"]) == 1
    assert "unknown config keys" in capsys.readouterr().err


def test_missing_out_fails(tmp_path, capsys):
    config = write_config(tmp_path)
    assert main(["cp-sweep", "--config", str(config)]) == 1
    assert "output path" in capsys.readouterr().err


def test_missing_config_file_fails(tmp_path, capsys):
    assert main(["cp-sweep", "--config", str(tmp_path / "absent.json"), "--out", "x"]) == 1
    assert "error:" in capsys.readouterr().err


def test_seed_override_changes_results(tmp_path):
    config = write_config(tmp_path)
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    out_c = tmp_path / "c.jsonl"
    main(["cp-sweep", "--config", str(config), "--out", str(out_a), "--workers", "1"])
    main(["cp-sweep", "--config", str(config), "--out", str(out_b), "--workers", "1",
          "--seed", "12345"])
    main(["cp-sweep", "--config", str(config), "--out", str(out_c), "--workers", "2"])
    assert out_a.read_bytes() != out_b.read_bytes()
    assert out_a.read_bytes() == out_c.read_bytes()


def test_capacity_error_reported(tmp_path, capsys):
    config = write_config(tmp_path, steps=[30])
    assert main(["cp-sweep", "--config", str(config), "--out", "x.jsonl"]) == 1
    assert "effective bits" in capsys.readouterr().err
