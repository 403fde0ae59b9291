import json
import re
import subprocess
import sys

import pytest

from voisearch.cli import DEFAULT_SEED, main, parse_budgets
from voisearch.harness import ResultRow, ResultTable
from voisearch.mcts import MatchReport, MatchRow
from voisearch.plot import emit_plot


def test_parse_budgets():
    assert parse_budgets("32:1024:x2") == [32, 64, 128, 256, 512, 1024]
    assert parse_budgets("8") == [8]
    assert parse_budgets("8,16, 40") == [8, 16, 40]
    assert parse_budgets("5000,7000,10000,15000") == [5000, 7000, 10000, 15000]


def test_bandit_full_sweep_row_count(tmp_path):
    out = tmp_path / "r.csv"
    # same grid as the full protocol; trials cut so the test stays fast
    assert main(["bandit", "--arms", "32", "--budgets", "32:1024:x2", "--trials", "20", "--policies", "ucb1,voi",
                 "--seed", "7", "--out", str(out)]) == 0
    table = ResultTable.from_csv(out.read_text())
    assert len(table.rows) == 12
    assert table.config["seed"] == 7 and table.config["trials"] == 20


def test_bandit_single_row_to_stdout(capsys):
    assert main(["bandit", "--arms", "2", "--budgets", "8", "--trials", "1", "--policies", "uniform",
                 "--seed", "1"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("# ")
    assert lines[1] == "policy,budget,mean_regret,stderr,trials"
    assert len(lines) == 3 and lines[2].startswith("uniform,8,")


def test_header_comment_records_defaults(tmp_path):
    out = tmp_path / "r.csv"
    main(["bandit", "--arms", "3", "--budgets", "3", "--trials", "2", "--out", str(out)])
    config = json.loads(out.read_text().split("\n")[0][1:])
    assert config["seed"] == DEFAULT_SEED
    assert [p["name"] for p in config["policies"]] == ["ucb1", "voi"]
    assert config["policies"][1]["voi_variant"] == "const"


def test_oracle_check(capsys):
    code = main(["oracle-check", "--arms", "2", "--budget", "8", "--policy", "voi", "--trials", "100000"])
    out = capsys.readouterr().out
    assert re.search(r"^oracle\s+\S+", out, re.M)
    assert re.search(r"^monte-carlo\s+\S+", out, re.M)
    assert ("PASS" in out) == (code == 0)


def test_oracle_check_refuses_big_budget(capsys):
    with pytest.raises(SystemExit) as err:
        main(["oracle-check", "--budget", "25"])
    assert err.value.code == 2


@pytest.mark.parametrize("argv", [
    ["bandit", "--budgets", "3:x"],
    ["bandit", "--policies", "thompson"],
    ["bandit", "--arms", "8", "--budgets", "4"],
    ["match", "--game", "go9x9"],
    ["nonsense"],
    ["bandit", "--threads", "0"],
])
def test_bad_flags_exit_2(argv):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2


def test_runtime_failure_exit_1(tmp_path, capsys):
    code = main(["bandit", "--arms", "2", "--budgets", "2", "--trials", "1",
                 "--out", str(tmp_path / "missing" / "r.csv")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_match_cli(tmp_path):
    out, svg = tmp_path / "m.csv", tmp_path / "m.svg"
    assert main(["match", "--game", "ptree:4,4,0.69", "--samples-per-ply", "16,32", "--games", "4",
                 "--out", str(out), "--plot", str(svg)]) == 0
    report = MatchReport.from_csv(out.read_text())
    assert [r.budget for r in report.rows] == [16, 32]
    assert report.config["game"] == "ptree:4,4,0.69"
    assert svg.read_text().count("<polyline") == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "voisearch", "bandit", "--arms", "2", "--budgets", "4",
                           "--trials", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "policy,budget,mean_regret,stderr,trials" in proc.stdout


def _bandit_table():
    rows = [ResultRow(p, b, 0.3 / (i + 1) + (0.1 if p == "ucb1" else 0.0), 0.01, 100)
            for p in ("ucb1", "voi") for i, b in enumerate((32, 64, 128, 256, 512, 1024))]
    return ResultTable(rows)


def test_plot_bandit(tmp_path):
    path = emit_plot(_bandit_table(), tmp_path / "a.svg")
    text = path.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert text.count("<polyline") == 2
    assert "number of samples" in text and "mean simple regret" in text


def test_plot_match_has_reference_line(tmp_path):
    report = MatchReport([MatchRow(b, 100, 55, 45, 0) for b in (256, 512, 1024, 2048)])
    text = emit_plot(report, tmp_path / "m.svg").read_text()
    assert text.count("<polyline") == 1
    assert 'class="reference"' in text


def test_plot_log2_axis_spacing(tmp_path):
    text = emit_plot(_bandit_table(), tmp_path / "a.svg").read_text()
    first = re.search(r'<polyline[^>]*points="([^"]+)"', text).group(1)
    xs = [float(p.split(",")[0]) for p in first.split()]
    gaps = [b - a for a, b in zip(xs, xs[1:])]
    assert max(gaps) - min(gaps) < 0.05


def test_plot_deterministic(tmp_path):
    a = emit_plot(_bandit_table(), tmp_path / "a.svg").read_bytes()
    b = emit_plot(_bandit_table(), tmp_path / "b.svg").read_bytes()
    assert a == b


def test_plot_empty_table_writes_nothing(tmp_path):
    path = tmp_path / "empty.svg"
    with pytest.raises(ValueError):
        emit_plot(ResultTable([]), path)
    assert not path.exists()
