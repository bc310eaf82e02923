import json
import subprocess
import sys

import pytest

from hypertope import __version__
from hypertope.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert list(parse_range("2..5")) == [2, 3, 4, 5]
    assert list(parse_range("7")) == [7]


def test_prop23_text(capsys):
    code, out, _ = run(capsys, "prop23", "--b-range", "2..5")
    assert code == 0
    assert out.count("[PASS]") == 4


def test_prop23_json(capsys):
    code, out, _ = run(capsys, "prop23", "--b-range", "2..2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"tool_version", "command", "params", "stages", "verdict"}
    assert report["tool_version"] == __version__
    (stage,) = report["stages"]
    assert stage["witness"]["b"] == 2
    assert stage["witness"]["m1_order"] == 64 and stage["witness"]["m2_order"] == 32
    assert set(stage) == {"name", "pass", "witness", "elapsed_ms"}


def test_prop23_bad_b(capsys):
    code, _, err = run(capsys, "prop23", "--b-range", "1..3")
    assert code == 2 and "b ≥ 2" in err


def test_theorem_pass(capsys, tmp_path):
    dump = tmp_path / "edges.txt"
    code, out, _ = run(capsys, "theorem", "--n", "10", "--s", "2", "--t", "2", "--l", "2",
                       "--dump-incidence", str(dump))
    assert code == 0
    assert "PASS" in out and "1024 chambers" in out
    assert dump.read_text().startswith("0:0 1:")


def test_theorem_usage_error(capsys):
    code, _, err = run(capsys, "theorem", "--n", "9", "--s", "2", "--t", "2", "--l", "2")
    assert code == 2 and "n ≥ 10" in err


def test_theorem_json_is_deterministic(capsys):
    args = ["theorem", "--n", "10", "--s", "2", "--t", "2", "--l", "1", "--format", "json"]
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    report = json.loads(first)
    assert [s["name"] for s in report["stages"]][-1] == "hypertope"
    assert all(s["pass"] for s in report["stages"])


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "prop23", "--b-range", "2", "--format", "json", "--timings")
    assert isinstance(json.loads(out)["stages"][0]["elapsed_ms"], float)


def test_capacity_exceeded_is_runtime_failure(capsys):
    code, _, err = run(capsys, "theorem", "--n", "10", "--s", "2", "--t", "2", "--l", "2",
                       "--capacity", "100")
    assert code == 1 and "capacity" in err


def test_element_ceiling_is_runtime_failure(capsys):
    code, _, err = run(capsys, "prop23", "--b-range", "5", "--element-ceiling", "50")
    assert code == 1 and "ceiling" in err


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--n-range", "10..11", "--s-range", "2..3",
                       "--t-range", "2..3", "--l-range", "1..2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["params"]["executed"] == 16 and report["params"]["skipped"] == 0
    assert all(s["pass"] for s in report["stages"])


def test_sweep_skips_inadmissible(capsys):
    code, out, _ = run(capsys, "sweep", "--n-range", "9..10", "--s-range", "2",
                       "--t-range", "2", "--l-range", "2", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["params"]["skipped"] == 1 and report["params"]["executed"] == 1


def test_sweep_parallel_matches_sequential(capsys):
    args = ["sweep", "--n-range", "10", "--s-range", "2..3", "--t-range", "2", "--l-range", "1..2",
            "--format", "json"]
    seq = run(capsys, *args)[1]
    par = run(capsys, *args, "--jobs", "2")[1]
    assert seq == par


def _write(tmp_path, capsys, kind, *params):
    assert main(["present", kind, *params]) == 0
    path = tmp_path / f"{kind}.txt"
    path.write_text(capsys.readouterr().out)
    return path


def test_analyze_m2(capsys, tmp_path):
    path = _write(tmp_path, capsys, "M2", "b=2")
    code, out, _ = run(capsys, "analyze", "--file", str(path), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["stages"][0]["witness"]["order"] == 32


def test_analyze_g12(capsys, tmp_path):
    path = _write(tmp_path, capsys, "G", "n=12", "s=3", "t=3", "l=3")
    code, out, _ = run(capsys, "analyze", "--file", str(path))
    assert code == 0 and "regular hypertope" in out and "4096 chambers" in out


def test_analyze_failing_verdict_still_exits_zero(capsys, tmp_path):
    path = tmp_path / "v4.txt"
    path.write_text("gens: a b c\nrel: a^2\nrel: b^2\nrel: c^2\nrel: (a b)^2\nrel: c a b\n")
    code, out, _ = run(capsys, "analyze", "--file", str(path))
    assert code == 0 and "not a regular hypertope" in out


def test_analyze_malformed(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("gens: r0 r1 r2\nrel: r0^2\nrel: (r0 r1 ^ 2\n")
    code, _, err = run(capsys, "analyze", "--file", str(path))
    assert code == 1 and "line 3, column" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "analyze", "--file", str(tmp_path / "none.txt"))
    assert code == 1


def test_argparse_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["theorem", "--n", "10"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["prop23", "--b-range", "5..2"])
    assert exc.value.code == 2


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "hypertope.cli", "prop23", "--b-range", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "[PASS] b=2" in proc.stdout
