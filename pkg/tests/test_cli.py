import json

import pytest

from jacobilab.cli import main


def run(argv, capsys=None):
    code = main(argv)
    return code


def test_expand_and_apply_round_trip(tmp_path):
    mode_file = tmp_path / "mode.json"
    assert main(["expand", "mode:1,0", "--alpha", "0", "--beta", "0", "--dim", "2",
                 "--out", str(mode_file)]) == 0
    data = json.loads(mode_file.read_text())
    assert data["coeffs"] == [{"k": [1, 0], "v": 1.0}]
    assert data["basis"] == "standard"
    assert data["config"]["spec"] == "mode:1,0"

    out_file = tmp_path / "riesz.json"
    assert main(["apply", "riesz-1", str(mode_file), "--out", str(out_file)]) == 0
    out = json.loads(out_file.read_text())
    assert out["basis"] == {"shifted": 1}

    # File spec round trip is stable.
    copy_file = tmp_path / "copy.json"
    assert main(["expand", f"@{mode_file}", "--alpha", "0", "--beta", "0",
                 "--dim", "2", "--out", str(copy_file)]) == 0
    copy = json.loads(copy_file.read_text())
    assert copy["coeffs"] == data["coeffs"]


def test_bad_spec_exits_2(tmp_path, capsys):
    assert main(["expand", "garbage:1", "--out", str(tmp_path / "x.json")]) == 2
    err = capsys.readouterr().err
    assert "unknown function spec" in err


def test_unknown_operator_exits_2(tmp_path):
    mode_file = tmp_path / "m.json"
    main(["expand", "mode:1", "--out", str(mode_file)])
    assert main(["apply", "warp", str(mode_file)]) == 2


def test_verify_exit_codes(tmp_path):
    report = tmp_path / "kernels.json"
    assert main(["verify", "kernels", "--t", "0.5", "--grid", "21",
                 "--out", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["passed"] is True
    assert data["config"]["suite"] == "kernels"

    # The out-of-range case fails without the expectation flag and passes
    # with it.
    bad = tmp_path / "violation.json"
    assert main(["verify", "kernels", "--alpha=-0.9", "--beta=-0.9", "--t", "0.01",
                 "--grid", "21", "--out", str(bad)]) == 1
    assert main(["verify", "kernels", "--alpha=-0.9", "--beta=-0.9", "--t", "0.01",
                 "--grid", "21", "--expect-violation", "--out", str(bad)]) == 0


def test_normprobe_deterministic_bytes(tmp_path):
    args = ["normprobe", "--op", "poisson", "--p", "2", "--dim", "1,2",
            "--degree", "3", "--samples", "4", "--seed", "42", "--t", "0.5"]
    f1 = tmp_path / "a.csv"
    f2 = tmp_path / "b.csv"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    lines = f1.read_text().splitlines()
    assert lines[0].startswith("# config:")
    assert lines[1] == "operator,p,d,N,samples,seed,best_ratio"
    assert len(lines) == 4


def test_verify_report_deterministic_bytes(tmp_path):
    args = ["verify", "kernels", "--t", "0.5", "--grid", "15"]
    f1 = tmp_path / "a.json"
    f2 = tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_kernels_csv(tmp_path):
    out = tmp_path / "kernel.csv"
    assert main(["kernels", "--variant", "heat", "--alpha", "0", "--beta", "0",
                 "--t", "0.5", "--grid", "7", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "x,y,value,residual_flag"
    assert len(lines) == 2 + 49


def test_gfun_json(tmp_path):
    mode_file = tmp_path / "m.json"
    main(["expand", "mode:2", "--out", str(mode_file)])
    out = tmp_path / "g.json"
    assert main(["gfun", str(mode_file), "--grid", "5", "--format", "json",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["values"]) == 5
    assert data["cross_residual"] <= 1e-7


def test_expand_matches_golden_bytes(tmp_path):
    out = tmp_path / "mode.json"
    assert main(["expand", "mode:1,0", "--alpha", "0", "--beta", "0", "--dim", "2",
                 "--degree", "4", "--out", str(out)]) == 0
    from pathlib import Path

    golden = Path(__file__).parent / "golden" / "mode_1_0.json"
    assert out.read_bytes() == golden.read_bytes()


def test_missing_file_exits_2(tmp_path):
    assert main(["apply", "poisson", str(tmp_path / "absent.json"), "--t", "1"]) == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["verify", "bogus-suite"])
    assert err.value.code == 2
