import json

from blockwake.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_plan_parse_json(capsys):
    code, out, _ = run(capsys, "plan", "parse", "B6,8,6-O5")
    assert code == 0
    assert json.loads(out) == {"sizes": [6, 8, 6], "overlaps": [5], "truncated": False}


def test_plan_parse_validation_error_exit_code(capsys):
    code, out, err = run(capsys, "plan", "parse", "B5-O5")
    assert code == 3
    assert out == ""
    assert err.startswith("blockwake: error: structure-validation:")
    assert err.count("\n") == 1  # one line


def test_plan_parse_malformed_exit_code(capsys):
    code, _, err = run(capsys, "plan", "parse", "Z9")
    assert code == 3
    assert "structure-parse" in err


def test_unknown_flag_exit_code(capsys):
    code, _, err = run(capsys, "plan", "parse", "B5-O1", "--bogus")
    assert code == 2
    assert err.startswith("blockwake: error: usage:")


def test_plan_expand_json(capsys):
    code, out, _ = run(
        capsys, "plan", "expand", "B5-O0", "--m", "10", "--cycles", "2", "--recomb", "A"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["name"] == "B5-O0"
    assert doc["m"] == 10
    assert [c["offset"] for c in doc["cycles"]] == [0, 9]
    assert [c["verse"] for c in doc["cycles"]] == ["forward", "reverse"]
    assert doc["cycles"][0]["blocks"] == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]


def test_search_run_outputs(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, _, _ = run(
        capsys,
        "search", "run", "--plan", "B2-O1", "--m", "4", "--levels", "3",
        "--cycles", "2", "--recomb", "A", "--landscape", "trap", "--seed", "7",
        "--init", "mid", "--out", str(out_dir),
    )
    assert code == 0
    assert (out_dir / "trace.csv").exists()
    assert (out_dir / "indicators.csv").exists()
    meta = json.loads((out_dir / "meta.json").read_text())
    assert meta["plan"] == "B2-O1"
    assert meta["seed"] == 7
    assert meta["ordering"] == [0, 1, 2, 3]

    # idempotent: identical config overwrites byte-identical files
    before = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    code, _, _ = run(
        capsys,
        "search", "run", "--plan", "B2-O1", "--m", "4", "--levels", "3",
        "--cycles", "2", "--recomb", "A", "--landscape", "trap", "--seed", "7",
        "--init", "mid", "--out", str(out_dir),
    )
    assert code == 0
    after = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    assert before == after


def test_search_run_invalid_plan_leaves_no_files(tmp_path, capsys):
    out_dir = tmp_path / "bad"
    code, _, err = run(
        capsys,
        "search", "run", "--plan", "B9-O1", "--m", "4",
        "--landscape", "trap", "--out", str(out_dir),
    )
    assert code == 3
    assert "plan" in err
    assert not out_dir.exists()


def test_bench_brute_budget_refusal_exit_code(tmp_path, capsys):
    out_dir = tmp_path / "brute"
    code, _, err = run(
        capsys,
        "bench", "brute", "--m", "10", "--levels", "3", "--landscape", "trap",
        "--budget", "100", "--out", str(out_dir),
    )
    assert code == 4
    assert "budget" in err
    assert not out_dir.exists()  # no partial outputs


def test_bench_brute_outputs(tmp_path, capsys):
    out_dir = tmp_path / "brute"
    code, out, _ = run(
        capsys,
        "bench", "brute", "--m", "5", "--levels", "3", "--landscape",
        "separable-convex", "--seed", "4", "--out", str(out_dir),
    )
    assert code == 0
    doc = json.loads((out_dir / "brute.json").read_text())
    assert doc["evaluations"] == 243
    hist = (out_dir / "hist.csv").read_text().splitlines()
    assert hist[0] == "bin_left,bin_right,count"
    assert sum(int(line.rsplit(",", 1)[1]) for line in hist[1:]) == 243


def test_exp_run_and_env_seed(tmp_path, capsys, monkeypatch):
    plans = tmp_path / "plans.txt"
    plans.write_text("B2-O1,2,none\nB2-O1,2,B\n")
    out_dir = tmp_path / "exp"
    monkeypatch.setenv("BLOCKWAKE_SEED", "11")
    code, out, _ = run(
        capsys,
        "exp", "run", "--plans", str(plans), "--m", "4", "--levels", "3",
        "--landscape", "trap", "--orderings", "3", "--out", str(out_dir),
    )
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["config"]["seed"] == 11  # env var picked up
    assert report["config"]["orderings"] == 3
    assert len(report["plans"]) == 2
    assert len(report["comparisons"]) == 1
    assert (out_dir / "means_B2-O1_c2_none.csv").exists()
    assert (out_dir / "means_B2-O1_c2_B.csv").exists()
    assert (out_dir / "hist_B2-O1_c2_B.csv").exists()
    assert (out_dir / "correlations.csv").exists()


def test_exp_plan_file_with_commas_in_names(tmp_path, capsys):
    plans = tmp_path / "plans.txt"
    plans.write_text("B3,4,3-O0,1,none\n")
    out_dir = tmp_path / "exp"
    code, _, _ = run(
        capsys,
        "exp", "run", "--plans", str(plans), "--m", "10", "--levels", "3",
        "--landscape", "separable", "--orderings", "2", "--seed", "1",
        "--out", str(out_dir),
    )
    assert code == 0
    assert (out_dir / "means_B3.4.3-O0_c1_none.csv").exists()


def test_indicators_compute_from_meta(tmp_path, capsys):
    run_dir = tmp_path / "run"
    run(
        capsys,
        "search", "run", "--plan", "B3-O1", "--m", "5", "--levels", "3",
        "--cycles", "2", "--recomb", "B", "--landscape", "seeded-random",
        "--seed", "3", "--out", str(run_dir),
    )
    out_file = tmp_path / "recomputed.csv"
    code, _, _ = run(
        capsys,
        "indicators", "compute", "--trace", str(run_dir / "trace.csv"),
        "--out", str(out_file),
    )
    assert code == 0
    assert out_file.read_text() == (run_dir / "indicators.csv").read_text()


def test_indicators_compute_with_explicit_space(tmp_path, capsys):
    run_dir = tmp_path / "run"
    run(
        capsys,
        "search", "run", "--plan", "B2-O0", "--m", "4", "--levels", "3",
        "--landscape", "trap", "--seed", "2", "--out", str(run_dir),
    )
    (run_dir / "meta.json").unlink()
    out_file = tmp_path / "ind.csv"
    code, _, err = run(
        capsys,
        "indicators", "compute", "--trace", str(run_dir / "trace.csv"),
        "--out", str(out_file),
    )
    assert code == 5  # no meta and no explicit space: config error
    code, _, _ = run(
        capsys,
        "indicators", "compute", "--trace", str(run_dir / "trace.csv"),
        "--m", "4", "--levels", "3", "--out", str(out_file),
    )
    assert code == 0
    assert out_file.exists()


def test_search_run_variants_flag(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, _, _ = run(
        capsys,
        "search", "run", "--plan", "B2-O1", "--m", "4", "--landscape", "trap",
        "--variants", "urr=product,iruif=cumulative", "--out", str(out_dir),
    )
    assert code == 0
    text = (out_dir / "indicators.csv").read_text()
    assert "urr=product;iruif=cumulative" in text


def test_bad_variants_flag(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "search", "run", "--plan", "B2-O1", "--m", "4", "--landscape", "trap",
        "--variants", "urr=bogus", "--out", str(tmp_path / "x"),
    )
    assert code == 5
    assert "config" in err


def test_missing_input_files_give_one_line_errors(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "indicators", "compute", "--trace", str(tmp_path / "absent.csv"),
        "--m", "4", "--levels", "3", "--out", str(tmp_path / "o.csv"),
    )
    assert code == 5
    assert err.startswith("blockwake: error: io:")
    assert err.count("\n") == 1
    code, _, err = run(
        capsys,
        "exp", "run", "--plans", str(tmp_path / "absent.txt"), "--m", "4",
        "--landscape", "trap", "--orderings", "2", "--out", str(tmp_path / "e"),
    )
    assert code == 5
    assert err.startswith("blockwake: error: io:")
