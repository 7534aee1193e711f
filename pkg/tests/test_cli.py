import subprocess
import sys
from pathlib import Path

import pytest

from polarmlc import cli
from polarmlc.exceptions import NumericalRangeError

DATA = Path(__file__).parent / "data"
SMALL8 = str(DATA / "small8.code")

GOLDEN = {
    "tc_small8.csv": ["tc", "--code", SMALL8],
    "construct_n4_k8.code": ["construct", "--n", "4", "--k", "8"],
    "tc_sweep_n6.csv": ["tc-sweep", "--n", "6", "--list-size", "8", "--rates", "0.25:0.75:0.25"],
    "mlc_rates_m2.csv": ["mlc-rates", "--m", "2", "--snr-db", "0,10"],
    "mlc_tc_m3.csv": ["mlc-tc", "--m", "3", "--n", "6", "--list-size", "8", "--snr-db", "5:15:5"],
    "simulate_small8.csv": ["simulate", "--code", SMALL8, "--snr-db", "2", "--frames", "200",
                          "--seed", "1"],
    "simulate_mlc_m2.csv": ["simulate-mlc", "--m", "2", "--n", "5", "--list-size", "4",
                            "--snr-db", "10", "--frames", "100"],
}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_outputs(name, capsys):
    code, out, _ = run(["-q"] + GOLDEN[name], capsys)
    assert code == 0
    assert out == (DATA / name).read_text()


def test_small8_total(capsys):
    code, out, _ = run(["tc", "--code", SMALL8, "--list-size", "4"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "total_tc,12"


def test_list_size_flag_overrides_file(capsys):
    _, out, _ = run(["tc", "--code", SMALL8, "--list-size", "1"], capsys)
    # only the Rate-1 pair depends on L: min(2, 1) = 1
    assert out.splitlines()[0] == "total_tc,11"


def test_construct_matches_known_set(capsys):
    # the classic N=16, K=8 information set
    _, out, _ = run(["construct", "--n", "4", "--k", "8"], capsys)
    assert "A=8,10,11,12,13,14,15,16" in out


def test_construct_output_round_trips(tmp_path, capsys):
    path = tmp_path / "c.code"
    assert cli.main(["construct", "--n", "5", "--k", "11", "--list-size", "4", "-o", str(path)]) == 0
    _, out, _ = run(["-q", "tc", "--code", str(path)], capsys)
    assert out.startswith("total_tc,")


def test_sweep_grid_rows(capsys):
    code, out, _ = run(["-q", "tc-sweep", "--n", "6", "--list-size", "16",
                        "--rates", "0.05:0.95:0.05"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "rate,K,tc" and len(lines) == 20
    assert [l.split(",")[0] for l in lines[1:]][:3] == ["0.05", "0.1", "0.15"]


def test_parse_grid():
    assert cli.parse_grid("5:35:0.5") == [5 + 0.5 * k for k in range(61)]
    assert cli.parse_grid("0:1:0.3") == [0.0, 0.3, 0.6, 0.9]
    assert cli.parse_grid("0:1:0.34") == [0.0, 0.34, 0.68, 1.02]
    assert cli.parse_grid("1, 2,4") == [1.0, 2.0, 4.0]
    assert cli.parse_grid("3") == [3.0]
    for bad in ("1:2", "2:1:1", "0:1:0", "a,b"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)


def test_mlc_tc_columns_add_up(capsys):
    _, out, _ = run(["-q", "mlc-tc", "--m", "5", "--n", "6", "--list-size", "4",
                     "--snr-db", "10,20,30"], capsys)
    header, *rows = out.splitlines()
    assert header == "snr_db,tc_1,tc_2,tc_3,tc_4,tc_5,tc_total"
    for row in rows:
        vals = [int(v) for v in row.split(",")[1:]]
        assert sum(vals[:-1]) == vals[-1]


@pytest.mark.parametrize("argv", [
    ["tc"],
    ["tc", "--code", SMALL8, "--bogus"],
    ["tc", "--code", SMALL8, "--list-size", "0"],
    ["nosuchcommand"],
    ["tc", "--code", "/nonexistent/file.code"],
    ["construct", "--n", "3", "--k", "9"],
    ["tc-sweep", "--n", "4", "--list-size", "4", "--rates", "0:1:0.5"],
    ["mlc-rates", "--m", "9", "--snr-db", "0"],
    ["mlc-tc", "--m", "2", "--n", "4", "--list-size", "4", "--epsilon", "0.7", "--snr-db", "1"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == cli.EXIT_USAGE
    assert out == ""
    assert len(err.strip().splitlines()) == 1


def test_numerical_errors_have_their_own_code(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise NumericalRangeError("did not converge")

    monkeypatch.setattr(cli.mlc, "level_rates", boom)
    code, _, err = run(["mlc-rates", "--m", "2", "--snr-db", "0"], capsys)
    assert code == cli.EXIT_NUMERICAL != cli.EXIT_USAGE
    assert "did not converge" in err


def test_help_mentions_every_flag(capsys):
    for sub in cli.build_parser()._subparsers._group_actions[0].choices.values():
        for action in sub._actions:
            if action.option_strings and action.dest != "help":
                assert action.help, f"{sub.prog} {action.option_strings} lacks help"
    assert cli.main(["--help"]) == 0


def test_quiet_flag_and_output_file(tmp_path, capsys):
    path = tmp_path / "o.csv"
    code, out, err = run(["tc-sweep", "--n", "4", "--list-size", "4", "--rates", "0.5",
                          "-o", str(path), "-q"], capsys)
    assert code == 0 and out == "" and err == ""
    assert path.read_text().startswith("rate,K,tc\n")
    _, _, err = run(["tc-sweep", "--n", "4", "--list-size", "4", "--rates", "0.5"], capsys)
    assert err


def test_repeat_runs_are_byte_identical():
    argv = [sys.executable, "-m", "polarmlc.cli", "-q", "simulate", "--code", SMALL8,
            "--snr-db", "1", "--frames", "300", "--seed", "7", "--fast-nodes"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"snr_db,frames")
