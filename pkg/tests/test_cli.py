import json

import numpy as np
import pytest

from trustbias import cancellation_attack_graph, five_node_partial, read_graph
from trustbias.cli import main


@pytest.fixture
def two_node_file(tmp_path):
    path = tmp_path / "two.edges"
    path.write_text("0 1 0.8\n1 0 0.4\n")
    return path


@pytest.fixture
def partial_file(tmp_path):
    path = tmp_path / "partial.edges"
    five_node_partial().write_edge_list(path)
    return path


def read_scores(path):
    rows = {}
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "node_id,prestige,bias"
    for line in lines[1:]:
        node, prestige, bias = line.split(",")
        rows[int(node)] = (float(prestige), float(bias))
    return rows


class TestRank:
    def test_two_node_fixture_exact_rows(self, two_node_file, tmp_path, capsys):
        out = tmp_path / "scores.csv"
        code = main(["rank", "--input", str(two_node_file), "--output", str(out),
                     "--algorithm", "l1-avg", "--lambda", "0.5"])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines == ["node_id,prestige,bias", "0,0.4,0", "1,0.8,0"]
        err = capsys.readouterr().err
        assert "config" in err and "n=2 m=2" in err

    def test_arithmetic_average_on_partial_fixture(self, partial_file, tmp_path):
        out = tmp_path / "aa.csv"
        assert main(["rank", "--input", str(partial_file), "--output", str(out),
                     "--algorithm", "aa"]) == 0
        rows = read_scores(out)
        assert rows[1][0] == pytest.approx(0.567, abs=5e-4)
        assert rows[2][0] == pytest.approx(0.000, abs=5e-4)
        assert rows[3][0] == pytest.approx(0.433, abs=5e-4)

    def test_all_algorithms_run(self, partial_file, tmp_path):
        for algo in ("mb", "l1-avg", "l1-max", "l2-avg", "l2-max", "aa", "hits", "pagerank"):
            out = tmp_path / f"{algo}.csv"
            assert main(["rank", "--input", str(partial_file), "--output", str(out),
                         "--algorithm", algo]) == 0
            assert len(read_scores(out)) == 5

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["rank", "--input", str(tmp_path / "nope.edges"),
                     "--output", "-"]) == 2

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.edges"
        bad.write_text("0 1 0.5\nbogus line here with words\n")
        assert main(["rank", "--input", str(bad), "--output", "-"]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_conflicting_stop_options_exit_3(self, two_node_file):
        assert main(["rank", "--input", str(two_node_file), "--output", "-",
                     "--iterations", "10", "--epsilon", "0.001"]) == 3

    def test_unknown_algorithm_exits_3(self, two_node_file):
        assert main(["rank", "--input", str(two_node_file), "--output", "-",
                     "--algorithm", "bogus"]) == 3

    def test_signed_substitution_notice(self, tmp_path, capsys):
        signed = tmp_path / "signed.edges"
        signed.write_text("0 1 0.8\n1 2 -0.6\n2 0 0.4\n")
        out = tmp_path / "scores.csv"
        assert main(["rank", "--input", str(signed), "--output", str(out),
                     "--algorithm", "l2-avg"]) == 0
        assert "l2-avg-signed" in capsys.readouterr().err


class TestExperimentCommands:
    def test_bias_eval_writes_json_and_csv(self, tmp_path):
        graph, adversary, _ = cancellation_attack_graph()
        edges = tmp_path / "gadget.edges"
        graph.write_edge_list(edges)
        out = tmp_path / "report.json"
        assert main(["bias-eval", "--input", str(edges), "--output", str(out),
                     "--algorithms", "mb,l1-avg", "--top-fraction", "0.059"]) == 0
        payload = json.loads(out.read_text())
        rows = {row["algorithm"]: row for row in payload["rows"]}
        assert rows["l1-avg"]["bias_auc"] >= rows["mb"]["bias_auc"]
        assert (tmp_path / "report.csv").exists()

    def test_prestige_eval(self, partial_file, tmp_path):
        out = tmp_path / "prestige.json"
        assert main(["prestige-eval", "--input", str(partial_file),
                     "--output", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert {row["algorithm"] for row in payload["rows"]} == {
            "mb", "l1-avg", "l1-max", "l2-avg", "l2-max"}

    def test_robustness_zero_ratio_all_ones(self, tmp_path):
        edges = tmp_path / "g.edges"
        assert main(["synth", "--nodes", "60", "--degree", "4", "--seed", "3",
                     "--output", str(edges)]) == 0
        out = tmp_path / "rob.json"
        assert main(["robustness", "--input", str(edges), "--output", str(out),
                     "--ratios", "0", "--repeats", "2"]) == 0
        payload = json.loads(out.read_text())
        assert all(row["bias_tau"] == 1.0 and row["prestige_tau"] == 1.0
                   for row in payload["rows"])

    def test_scalability(self, tmp_path):
        edges = tmp_path / "g.edges"
        main(["synth", "--nodes", "80", "--degree", "4", "--seed", "5",
              "--output", str(edges)])
        out = tmp_path / "scale.json"
        assert main(["scalability", "--input", str(edges), "--output", str(out),
                     "--fractions", "0.5,1.0", "--algorithms", "l1-avg"]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["rows"]) == 2

    def test_lambda_sweep_single_value(self, partial_file, tmp_path):
        out = tmp_path / "sweep.json"
        assert main(["lambda-sweep", "--input", str(partial_file), "--output", str(out),
                     "--lambdas", "0.5", "--algorithms", "l1-avg,l2-max"]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["rows"]) == 2


class TestSynth:
    def test_writes_parsable_graph(self, tmp_path):
        out = tmp_path / "synth.edges"
        assert main(["synth", "--nodes", "50", "--degree", "3", "--seed", "1",
                     "--weights", "four-level", "--output", str(out)]) == 0
        g = read_graph(out)
        assert g.node_count == 50 and g.edge_count == 150
        assert set(np.unique(g.out_weights)) <= {0.4, 0.6, 0.8, 1.0}

    def test_bad_degree_exits_3(self, tmp_path):
        assert main(["synth", "--nodes", "5", "--degree", "9",
                     "--output", str(tmp_path / "x.edges")]) == 3


class TestDeterminism:
    def test_rank_outputs_byte_identical_across_threads(self, tmp_path):
        edges = tmp_path / "g.edges"
        main(["synth", "--nodes", "150", "--degree", "5", "--seed", "8",
              "--output", str(edges)])
        payloads = []
        for threads in ("1", "2", "8"):
            out = tmp_path / f"scores_{threads}.csv"
            assert main(["rank", "--input", str(edges), "--output", str(out),
                         "--algorithm", "l2-avg", "--threads", threads]) == 0
            payloads.append(out.read_bytes())
        assert payloads[0] == payloads[1] == payloads[2]

    def test_repeated_runs_identical(self, tmp_path, two_node_file):
        outs = []
        for i in range(2):
            out = tmp_path / f"run{i}.csv"
            main(["rank", "--input", str(two_node_file), "--output", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
