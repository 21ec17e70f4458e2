"""CLI: config handling, suites, replays, summaries, determinism."""

from __future__ import annotations

import json

import pytest

from drgeom.cli import RunConfig, load_config, main, run, summarize


def test_config_validation_rejects_inadmissible_dims():
    cfg = RunConfig(dims=[(9, 16)])
    with pytest.raises(ValueError, match="admissible bound"):
        cfg.validate()


def test_config_file_and_flag_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 5, "dims": [[2, 4]], "tol": 1e-8}))
    cfg = load_config(str(path), {"seed": 9, "tol": None})
    assert cfg.seed == 9          # flag wins
    assert cfg.tol == 1e-8        # file value kept
    assert cfg.dims == [(2, 4)]


def test_verify_clifford_exit_zero(tmp_path, capsys):
    out = tmp_path / "report.json"
    status = main(["verify", "clifford", "--dims", "2:4", "--out", str(out)])
    assert status == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert all(c["verdict"] == "pass" for c in report["checks"])


def test_verify_rejects_bad_dims(capsys):
    status = main(["verify", "clifford", "--dims", "9:16"])
    assert status == 2
    assert "admissible bound" in capsys.readouterr().err


def test_replay_subcommand(tmp_path):
    out = tmp_path / "replay.json"
    status = main(["replay", "no-a", "--out", str(out)])
    assert status == 0
    payload = json.loads(out.read_text())
    assert payload["replays"][0]["passed"]


def test_replay_dimension_cases(tmp_path):
    out = tmp_path / "replay.json"
    status = main(["replay", "dimension-cases", "--out", str(out)])
    assert status == 0
    payload = json.loads(out.read_text())
    step = payload["replays"][0]["steps"][0]
    assert step["witness"]["cases"] == [[5, 8], [6, 8], [7, 8], [7, 16], [8, 16]]


def test_report_determinism(tmp_path):
    cfg = RunConfig(dims=[(2, 4)], suites=["clifford", "curvature"], seed=3,
                    samples=50)
    _, r1 = run(cfg)
    _, r2 = run(cfg)
    assert json.dumps(r1["checks"]) == json.dumps(r2["checks"])


def test_summarize_single_report(tmp_path):
    cfg = RunConfig(dims=[(2, 4)], suites=["clifford"], seed=0)
    _, report = run(cfg)
    p = tmp_path / "r.json"
    p.write_text(json.dumps(report))
    text = summarize([str(p)])
    assert "clifford-relations(2,4)" in text
    assert " 1 " in text or "1" in text


def test_summarize_two_seeds_merges_ranges(tmp_path):
    paths = []
    for seed in (0, 1):
        cfg = RunConfig(dims=[(2, 4)], suites=["curvature"], seed=seed, samples=40)
        _, report = run(cfg)
        p = tmp_path / f"r{seed}.json"
        p.write_text(json.dumps(report))
        paths.append(str(p))
    text = summarize(paths, as_csv=True)
    rows = [line for line in text.splitlines() if "jacobi-cross" in line]
    assert rows and ",2," in rows[0]


def test_summarize_empty_errors():
    with pytest.raises(ValueError, match="at least one"):
        summarize([])


def test_summarize_skips_malformed(tmp_path):
    good_cfg = RunConfig(dims=[(2, 4)], suites=["clifford"], seed=0)
    _, report = run(good_cfg)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(report))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    text = summarize([str(good), str(bad)])
    assert "warning: skipped" in text


def test_main_summarize_roundtrip(tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["verify", "clifford", "--dims", "1:2,2:4", "--out", str(out)])
    status = main(["summarize", str(out)])
    assert status == 0
    captured = capsys.readouterr().out
    assert "clifford-relations(1,2)" in captured


def test_config_rejects_unwritable_output():
    cfg = RunConfig(dims=[(2, 4)], out="/nonexistent-dir/report.json")
    with pytest.raises(ValueError, match="does not exist"):
        cfg.validate()


def test_probe_subcommand_smoke(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"c_grid_step": 0.4, "probe_frames": 2}))
    out = tmp_path / "probe.json"
    status = main(["probe", "hypersurface", "--config", str(cfg_file),
                   "--out", str(out)])
    assert status == 0
    payload = json.loads(out.read_text())
    assert payload["probe"]["floor"] > 1e-6
    assert payload["probe"]["frames"] == 2
