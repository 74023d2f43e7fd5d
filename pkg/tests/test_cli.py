import json

import pytest

import fbmprobe.cli as cli
from fbmprobe.backend import kern


def run_cli(argv, capsys=None):
    code = cli.main(argv)
    return code


def read_csv(path):
    meta, header, rows = {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                meta[key] = value
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return meta, header, rows


class TestQfiMap:
    def test_header_and_shape(self, tmp_path):
        out = tmp_path / "map.csv"
        code = run_cli(["qfi-map", "--gamma-min", "1.2", "--gamma-max", "1.8",
                        "--resolution", "5", "--t-resolution", "7",
                        "--lambda", "1e-3", "--out", str(out)])
        assert code == 0
        meta, header, rows = read_csv(str(out))
        assert header == ["gamma", "t", "g_bures", "qfi"]
        assert len(rows) == 5 * 7
        assert meta["schema"] == "qfi-map/1"
        cfg = json.loads(meta["config"])
        assert cfg["lambda"] == 1e-3
        # resolved auto window is embedded
        assert cfg["t_min"] > 0.0 and cfg["t_max"] > cfg["t_min"]

    def test_values_match_library(self, tmp_path):
        out = tmp_path / "map.csv"
        run_cli(["qfi-map", "--gamma-min", "1.4", "--gamma-max", "1.6",
                 "--resolution", "3", "--t-resolution", "3",
                 "--lambda", "0.5", "--t-min", "0.5", "--t-max", "2.0",
                 "--out", str(out)])
        _, _, rows = read_csv(str(out))
        for row in rows:
            g, t, gb, qfi = map(float, row)
            assert gb == pytest.approx(kern.g_bures_fn(g, 0.5, t), rel=1e-12)
            assert qfi == 4.0 * gb

    def test_bad_range_exits_2(self):
        assert run_cli(["qfi-map", "--gamma-min", "1.8", "--gamma-max",
                        "1.2"]) == 2
        assert run_cli(["qfi-map", "--gamma-min", "0.2"]) == 2


class TestQfiOpt:
    def test_table(self, tmp_path):
        out = tmp_path / "opt.csv"
        code = run_cli(["qfi-opt", "--samples", "12", "--seed", "3",
                        "--out", str(out)])
        assert code == 0
        _, header, rows = read_csv(str(out))
        assert header == ["gamma", "lambda", "g_star", "tau_b"]
        assert len(rows) == 12

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["qfi-opt", "--samples", "6", "--seed", "9"]
        run_cli(argv + ["--out", str(a)])
        run_cli(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestHelstrom:
    def test_default_lambda_list(self, tmp_path):
        out = tmp_path / "h.csv"
        code = run_cli(["helstrom", "--gamma1", "1.2", "--gamma2-min", "1.3",
                        "--gamma2-max", "1.7", "--resolution", "3",
                        "--out", str(out)])
        assert code == 0
        meta, header, rows = read_csv(str(out))
        assert header == ["gamma1", "gamma2", "lambda", "pe_min", "t_star"]
        cfg = json.loads(meta["config"])
        assert cfg["lambda"] == [1e-2, 1e-1, 1.0, 10.0, 100.0]
        assert len(rows) == 3 * 5
        for row in rows:
            assert 0.25 - 1e-12 <= float(row[3]) < 0.5


class TestChernoff:
    def test_pairs_and_copies(self, tmp_path):
        out = tmp_path / "c.csv"
        code = run_cli(["chernoff", "--gamma1", "1.2", "--gamma2", "1.4",
                        "--lambda-min", "0.1", "--lambda-max", "10",
                        "--resolution", "3", "--copies", "4",
                        "--out", str(out)])
        assert code == 0
        _, header, rows = read_csv(str(out))
        assert header == ["gamma1", "gamma2", "lambda", "q_min", "s_star",
                          "t_star", "pe_bound_n"]
        for row in rows:
            q, bound = float(row[3]), float(row[6])
            assert bound == pytest.approx(0.5 * q ** 4, rel=1e-12)

    def test_equal_pair_exits_2(self):
        assert run_cli(["chernoff", "--gamma1", "1.4", "--gamma2", "1.4"]) == 2

    def test_mismatched_pairs_exit_2(self):
        assert run_cli(["chernoff", "--gamma1", "1.2", "--gamma1", "1.3",
                        "--gamma2", "1.4"]) == 2


class TestThreshold:
    def test_interior(self, tmp_path):
        out = tmp_path / "t.csv"
        code = run_cli(["threshold", "--gamma", "1.6", "--resolution", "15",
                        "--out", str(out)])
        assert code == 0
        _, header, rows = read_csv(str(out))
        assert header == ["gamma", "lambda_th", "g_star_at_threshold"]
        assert 1e-3 < float(rows[0][1]) < 1e3

    def test_no_threshold_exits_3(self, capsys):
        assert run_cli(["threshold", "--gamma", "1.01",
                        "--resolution", "15"]) == 3


class TestMcValidate:
    def test_pass(self, tmp_path):
        out = tmp_path / "mc.csv"
        code = run_cli(["mc-validate", "--gamma", "1.5", "--lambda", "1",
                        "--time", "1", "--q-power", "2", "--paths", "2000",
                        "--steps", "128", "--seed", "7", "--out", str(out)])
        assert code == 0
        _, header, rows = read_csv(str(out))
        assert rows[0][header.index("status")] == "pass"
        diff = float(rows[0][header.index("abs_diff")])
        se = float(rows[0][header.index("std_err")])
        assert diff <= 4.0 * se

    def test_failure_exits_4(self, tmp_path, monkeypatch):
        monkeypatch.setattr(cli, "empirical_visibility",
                            lambda fam, spec: (0.9, 1e-6))
        code = run_cli(["mc-validate", "--paths", "200", "--steps", "32",
                        "--out", str(tmp_path / "mc.csv")])
        assert code == 4


class TestEstimate:
    def test_report(self, tmp_path):
        out = tmp_path / "est.csv"
        code = run_cli(["estimate", "--gamma", "1.5", "--lambda", "1",
                        "--shots", "2000", "--trials", "40", "--seed", "0",
                        "--out", str(out)])
        assert code == 0
        meta, header, rows = read_csv(str(out))
        cfg = json.loads(meta["config"])
        assert cfg["time"] > 0.0  # auto-resolved measurement time
        # wide band: 40 trials leave ~22% chi-square noise on the variance
        eff = float(rows[0][header.index("efficiency")])
        assert 0.4 <= eff <= 2.0


class TestOutputFormats:
    def test_json_payload(self, tmp_path):
        out = tmp_path / "map.json"
        run_cli(["qfi-map", "--resolution", "3", "--t-resolution", "3",
                 "--lambda", "1", "--t-min", "0.1", "--t-max", "10",
                 "--format", "json", "--out", str(out)])
        payload = json.loads(out.read_text())
        assert payload["schema"] == "qfi-map/1"
        assert payload["columns"] == ["gamma", "t", "g_bures", "qfi"]
        assert len(payload["rows"]) == 9
        assert set(payload["rows"][0]) == {"gamma", "t", "g_bures", "qfi"}

    def test_stdout_default(self, capsys):
        assert run_cli(["qfi-map", "--resolution", "2", "--t-resolution", "2",
                        "--lambda", "1", "--t-min", "1", "--t-max", "2"]) == 0
        text = capsys.readouterr().out
        assert text.splitlines()[2] == "gamma,t,g_bures,qfi"


REPLAY_CASES = [
    ["qfi-map", "--gamma-min", "1.3", "--gamma-max", "1.7", "--resolution",
     "4", "--t-resolution", "5", "--lambda", "0.25"],
    ["qfi-opt", "--samples", "5", "--seed", "21"],
    ["helstrom", "--gamma1", "1.25", "--gamma2-min", "1.4", "--gamma2-max",
     "1.6", "--resolution", "3", "--lambda", "0.5", "--lambda", "5"],
    ["chernoff", "--gamma1", "1.3", "--gamma2", "1.5", "--lambda-min", "0.5",
     "--lambda-max", "2", "--resolution", "2", "--copies", "3"],
    ["threshold", "--gamma", "1.6", "--resolution", "15"],
    ["mc-validate", "--paths", "300", "--steps", "64", "--seed", "11"],
    ["estimate", "--shots", "500", "--trials", "20", "--seed", "2"],
]


@pytest.mark.parametrize("argv", REPLAY_CASES, ids=lambda a: a[0])
def test_round_trip_replay(argv, tmp_path):
    first = tmp_path / "first.csv"
    assert run_cli(argv + ["--out", str(first)]) in (0, 3)
    meta, _, _ = read_csv(str(first))
    cfg = json.loads(meta["config"])
    replay = cli.argv_from_config(cfg)
    second = tmp_path / "second.csv"
    assert run_cli(replay + ["--out", str(second)]) in (0, 3)
    assert first.read_bytes() == second.read_bytes()


def test_argparse_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["qfi-map", "--lambda", "not-a-number"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2


def test_domain_errors_exit_2():
    assert cli.main(["mc-validate", "--lambda", "-1", "--paths", "120",
                     "--steps", "16"]) == 2
    assert cli.main(["estimate", "--gamma", "3.0", "--shots", "10",
                     "--trials", "2"]) == 2
    assert cli.main(["helstrom", "--gamma1", "1.2", "--lambda", "-2",
                     "--resolution", "2"]) == 2
