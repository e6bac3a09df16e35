import json
from fractions import Fraction

import pytest

from costshare.cli import main
from costshare.graph import parse_instance, parse_rational


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:
    def test_amcm_table(self, capsys, data_dir):
        code, out, _ = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig2.json", "--format", "table")
        assert code == 0
        assert out.rstrip().splitlines()[-1] == "total 15"

    def test_scsm_json(self, capsys, data_dir):
        code, out, _ = run(capsys, "solve", "--mechanism", "scsm", "--instance", data_dir / "fig4.json")
        assert code == 0
        doc = json.loads(out)
        assert doc["shares"] == {"A": "4", "B": "11/2", "C": "11/2"}

    def test_missing_budget(self, capsys, data_dir):
        code, _, err = run(capsys, "solve", "--mechanism", "scsm", "--instance", data_dir / "no_budgets.json")
        assert code == 2 and "missing budget" in err

    def test_cap_names_flag(self, capsys, data_dir):
        code, _, err = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig1.json",
                           "--max-coalition-nodes", 2)
        assert code == 2 and "--max-coalition-nodes" in err

    def test_env_overrides(self, capsys, data_dir, monkeypatch):
        monkeypatch.setenv("COSTSHARE_FORMAT", "csv")
        monkeypatch.setenv("COSTSHARE_MAX_COALITION_NODES", "3")
        code, _, err = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig1.json")
        assert code == 2
        code, out, _ = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig2.json")
        assert code == 0 and out.startswith("node,share,decimal")

    def test_report_and_table_dump(self, capsys, data_dir, tmp_path):
        report = tmp_path / "r.json"
        report.write_text('{"C": []}')
        dump = tmp_path / "t.json"
        code, out, _ = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig2.json",
                           "--report", report, "--dump-table", dump)
        assert code == 0
        assert json.loads(out)["selected"] == ["A", "B"]
        table = json.loads(dump.read_text())
        assert table["values"] == {"0": "0", "1": "6", "2": "10", "3": "10"}

    def test_bad_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"source": "s", "nodes": ["A"], "edges": [{"u": "s", "v": "A", "cost": "-1"}]}')
        code, _, err = run(capsys, "solve", "--mechanism", "amcm", "--instance", bad)
        assert code == 2 and "negative cost" in err

    def test_usage_error(self, capsys):
        assert main(["solve"]) == 2

    def test_rationals_round_trip(self, capsys, data_dir):
        _, out, _ = run(capsys, "solve", "--mechanism", "amcm", "--instance", data_dir / "fig1.json")
        shares = {k: parse_rational(v) for k, v in json.loads(out)["shares"].items()}
        assert shares == {"A": Fraction(19, 6), "B": Fraction(11, 2), "C": Fraction(55, 6), "D": Fraction(49, 6)}


class TestCheck:
    def test_amcm_infeasible_figure3(self, capsys, data_dir, tmp_path):
        wfile = tmp_path / "w.jsonl"
        code, out, _ = run(capsys, "check", "--property", "budget_feasibility", "--mechanism", "amcm",
                           "--instance", data_dir / "fig3.json", "--witnesses", wfile)
        assert code == 1
        witnesses = [json.loads(line) for line in wfile.read_text().splitlines()]
        assert [w["node"] for w in witnesses] == ["C", "D"]
        assert "violated" in out.splitlines()[0]

    def test_truthfulness_random(self, capsys):
        code, out, _ = run(capsys, "check", "--property", "truthfulness", "--mechanism", "amcm",
                           "--random", "n=5,seed=7,trials=50")
        assert code == 0 and "holds" in out

    def test_budget_balance_scsm(self, capsys, data_dir):
        code, out, _ = run(capsys, "check", "--property", "budget_balance", "--mechanism", "scsm",
                           "--instance", data_dir / "fig4.json", "--format", "json")
        assert code == 0 and json.loads(out)["verdict"] == "holds"

    def test_needs_one_source(self, capsys, data_dir):
        code, _, err = run(capsys, "check", "--property", "budget_balance", "--mechanism", "amcm")
        assert code == 2 and "exactly one" in err

    def test_spec_file(self, capsys, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"n_nodes": 4, "density": 0.3, "seed": 1, "trials": 5, "budget_policy": "tight"}))
        code, out, _ = run(capsys, "check", "--property", "budget_feasibility", "--mechanism", "scsm",
                           "--random", spec)
        assert code == 0 and "instances=5" in out

    def test_bad_random_key(self, capsys):
        code, _, err = run(capsys, "check", "--property", "budget_balance", "--mechanism", "amcm",
                           "--random", "n=3,colour=red")
        assert code == 2 and "unknown key" in err


class TestGen:
    def test_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code, out, _ = run(capsys, "gen", "--nodes", 6, "--density", 0.5, "--seed", 42, "-o", path)
            assert code == 0 and len(out.strip()) == 16
        assert a.read_bytes() == b.read_bytes()

    def test_single_node(self, capsys, tmp_path):
        path = tmp_path / "one.json"
        run(capsys, "gen", "--nodes", 1, "--seed", 0, "-o", path)
        inst = parse_instance(path.read_text())
        assert len(inst.nodes) == 2

    def test_tight_selects_all(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        run(capsys, "gen", "--nodes", 6, "--density", 0.4, "--seed", 9, "--budget-policy", "tight", "-o", path)
        code, out, _ = run(capsys, "solve", "--mechanism", "scsm", "--instance", path)
        assert code == 0
        assert json.loads(out)["selected"] == sorted(parse_instance(path.read_text()).players)

    def test_invalid(self, capsys):
        code, _, err = run(capsys, "gen", "--nodes", 0)
        assert code == 2 and "invalid" in err

    def test_stdout(self, capsys):
        code, out, err = run(capsys, "gen", "--nodes", 2, "--seed", 1)
        assert code == 0 and json.loads(out)["source"] == "s" and len(err.strip()) == 16


class TestTreeCompare:
    @pytest.mark.parametrize("name", ["fig2.json", "fig4.json"])
    def test_figures(self, capsys, data_dir, name):
        code, out, _ = run(capsys, "tree-compare", "--instance", data_dir / name)
        assert code == 0 and "DIFFERENT" not in out

    def test_random_sweep(self, capsys):
        code, out, _ = run(capsys, "tree-compare", "--random", "n=8,seed=0,trials=10")
        assert code == 0
        assert out.count("equal") == 20

    def test_non_tree(self, capsys, data_dir):
        code, _, err = run(capsys, "tree-compare", "--instance", data_dir / "fig1.json")
        assert code == 2 and "not a tree" in err
