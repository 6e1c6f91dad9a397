import pytest

from fcm_effects import cli, formats
from fcm_effects.generator import generate, make_spec
from fcm_effects.solver import TotalEffectResult


def test_analyze_effects_to_target(example_csv, capsys):
    assert cli.main(["analyze", example_csv, "--target", "2"]) == cli.EXIT_OK
    assert capsys.readouterr().out.splitlines() == [
        "source,value,critical_index,path_found",
        "0,0.6,2,True",
        "1,0.6,2,True",
        "3,0.36,3,True",
    ]


def test_analyze_no_path_row(example_csv, capsys):
    assert cli.main(["analyze", example_csv, "--source", "0", "--target", "1", "--method", "linear"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,0.0,,False"


def test_analyze_all_pairs_to_file(example_csv, tmp_path):
    out = str(tmp_path / "effects.csv")
    assert cli.main(["analyze", example_csv, "--all-pairs", "--threads", "2", "--out", out]) == 0
    with open(out) as f:
        rows = f.read().splitlines()
    assert len(rows) == 4
    assert rows[3] == "0.15,-0.25,0.36,0.0"


def test_analyze_missing_file(tmp_path, capsys):
    assert cli.main(["analyze", str(tmp_path / "nope.csv"), "--target", "0"]) == cli.EXIT_INPUT
    assert "nope.csv" in capsys.readouterr().err


def test_analyze_parse_error_names_line(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("0,0.5\nx,0\n")
    assert cli.main(["analyze", str(path), "--target", "0"]) == cli.EXIT_INPUT
    assert f"{path}:2:" in capsys.readouterr().err


@pytest.mark.parametrize("content,sidecar", [
    ("source,target,weight\n0,1,0.5\n", "{not json"),
    ("", None),
])
def test_analyze_unreadable_input_exits_with_input_code(tmp_path, content, sidecar):
    path = tmp_path / "g.csv"
    path.write_text(content)
    if sidecar is not None:
        (tmp_path / "g.csv.json").write_text(sidecar)
    assert cli.main(["analyze", str(path), "--target", "0"]) == cli.EXIT_INPUT


def test_exhaustive_refused_on_large_map(tmp_path):
    path = str(tmp_path / "big.csv")
    formats.write_graph(generate(make_spec(14, 0.2, 1)), path)
    assert cli.main(["analyze", path, "--target", "0", "--method", "exhaustive"]) == cli.EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["--source", "2", "--target", "2"],
    ["--target", "9"],
    [],
])
def test_analyze_usage_errors(example_csv, argv):
    assert cli.main(["analyze", example_csv] + argv) == cli.EXIT_USAGE


def test_argparse_errors_exit_with_usage_code(example_csv):
    with pytest.raises(SystemExit) as exc:
        cli.main(["analyze", example_csv, "--method", "dijkstra"])
    assert exc.value.code == cli.EXIT_USAGE


def test_generate_is_reproducible(tmp_path, capsys):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    for out in (a, b):
        assert cli.main(["generate", "--n", "12", "--density", "0.4", "--seed", "5", "--out", out]) == 0
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()
    assert "n=12, e=53" in capsys.readouterr().out


def test_generate_matrix_format(tmp_path):
    out = str(tmp_path / "w.csv")
    assert cli.main(["generate", "--n", "6", "--density", "1.0", "--seed", "0", "--format", "matrix", "--out", out]) == 0
    assert formats.read_graph(out).e == 30


def test_generate_invalid_density(tmp_path):
    out = str(tmp_path / "w.csv")
    assert cli.main(["generate", "--n", "6", "--density", "2", "--seed", "0", "--out", out]) == cli.EXIT_USAGE


def test_simulate(example_csv, tmp_path, capsys):
    initial = str(tmp_path / "a0.csv")
    formats.write_state([1.0, 0.0, 0.0, 0.0], initial)
    traj = str(tmp_path / "traj.csv")
    assert cli.main(["simulate", example_csv, "--initial", initial, "--out", traj]) == 0
    assert "Status: fixed_point" in capsys.readouterr().out
    with open(traj) as f:
        lines = f.read().splitlines()
    assert lines[0] == "t,c0,c1,c2,c3"
    assert lines[1] == "0,1.0,0.0,0.0,0.0"


def test_simulate_wrong_state_length(example_csv, tmp_path):
    initial = str(tmp_path / "a0.csv")
    formats.write_state([1.0, 0.0], initial)
    assert cli.main(["simulate", example_csv, "--initial", initial]) == cli.EXIT_INPUT


def test_bench_writes_outputs(tmp_path, capsys):
    out_dir = tmp_path / "bench"
    argv = ["bench", "--algorithms", "binary", "linear", "--sizes", "6", "--densities", "0.5", "1.0",
            "--trials", "2", "--no-warmup", "--out-dir", str(out_dir)]
    assert cli.main(argv) == 0
    assert (out_dir / "bench.csv").exists()
    assert (out_dir / "summary.csv").exists()
    assert "mean_s" in capsys.readouterr().out


def test_bench_invalid_plan(tmp_path):
    argv = ["bench", "--algorithms", "exhaustive", "--exhaustive-sizes", "20", "--out-dir", str(tmp_path)]
    assert cli.main(argv) == cli.EXIT_USAGE


def test_verify_empty_corpus(capsys):
    assert cli.main(["verify", "--graphs", "0"]) == cli.EXIT_OK
    assert "0 mismatches" in capsys.readouterr().out


def test_verify_small_corpus(capsys):
    assert cli.main(["verify", "--graphs", "10", "--max-n", "6"]) == cli.EXIT_OK


def test_verify_reports_faulty_solver(monkeypatch, capsys):
    def never_finds_a_path(graph, source, target):
        return TotalEffectResult(source, target, 0.0, None, False)

    monkeypatch.setattr("fcm_effects.verify.default_solvers", lambda: {"broken": never_finds_a_path})
    assert cli.main(["verify", "--graphs", "2", "--max-n", "4"]) == cli.EXIT_MISMATCH
    out = capsys.readouterr().out
    assert "MISMATCH seed=" in out
    assert "broken" in out


def test_no_command_prints_help(capsys):
    assert cli.main([]) == cli.EXIT_USAGE
