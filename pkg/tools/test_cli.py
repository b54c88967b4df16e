"""End-to-end tests for the fuzzid3 command line"""

import argparse
import csv
import io
import json
import logging
import math

import pytest

from config import DATA_ENV_VAR, DEFAULT_CONFIG
from tools.cli import RunConfig, build_parser, main, parse_pair
from tools.crisp_id3 import tree_from_dict
from tools.errors import ConfigError


@pytest.fixture(autouse=True)
def no_data_env(monkeypatch):
    # setenv first so the variable is restored to absent afterwards
    monkeypatch.setenv(DATA_ENV_VAR, "")
    monkeypatch.delenv(DATA_ENV_VAR)


def run_json(capsys, *argv):
    assert main([*argv, "--format", "json"]) == 0
    return json.loads(capsys.readouterr().out)


class TestTrain:
    def test_fuzzy_tree_json(self, capsys, iris_path):
        report = run_json(capsys, "train", "--data", str(iris_path), "--method", "fuzzy", "--pair", "1,2")
        assert len(report["trees"]) == 1
        entry = report["trees"][0]
        assert entry["method"] == "fuzzy"
        assert entry["pair"] == ["Iris-setosa", "Iris-versicolor"]
        tree = tree_from_dict(entry["tree"])
        assert tree.depth() == entry["depth"] <= 4
        assert len(report["partitions"]) == 4
        assert report["config"]["k"] == 2

    def test_both_methods_all_pairs(self, capsys, iris_path):
        report = run_json(capsys, "train", "--data", str(iris_path), "--pair", "all-pairs")
        assert [(t["method"], tuple(t["pair"])) for t in report["trees"]][:2] == [
            ("id3", ("Iris-setosa", "Iris-versicolor")),
            ("fuzzy", ("Iris-setosa", "Iris-versicolor")),
        ]
        assert len(report["trees"]) == 6

    def test_json_by_default(self, capsys, iris_path):
        assert main(["train", "--data", str(iris_path), "--method", "fuzzy", "--pair", "1,2"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["format"] == "json"
        assert report["trees"][0]["method"] == "fuzzy"

    def test_table_prints_tree(self, capsys, iris_path):
        assert main(["train", "--data", str(iris_path), "--method", "id3", "--pair", "1,2",
                     "--format", "table"]) == 0
        out = capsys.readouterr().out
        assert "petal" in out
        assert "support" in out

    def test_csv_rules(self, capsys, iris_path):
        assert main(["train", "--data", str(iris_path), "--method", "id3", "--pair", "2,3",
                     "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["method", "class_a", "class_b", "rule", "class", "support"]
        assert sum(int(row[5]) for row in rows[1:]) == 100

    def test_pair_by_label(self, capsys, iris_path):
        report = run_json(capsys, "train", "--data", str(iris_path), "--method", "id3",
                          "--pair", "Iris-virginica,Iris-setosa")
        assert report["trees"][0]["pair"] == ["Iris-virginica", "Iris-setosa"]


class TestUsageErrors:
    def test_missing_data(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["train", "--method", "fuzzy", "--pair", "1,2"])
        assert exc_info.value.code == 2
        err = capsys.readouterr().err
        assert "usage" in err
        assert "--data is required" in err

    def test_k_below_two(self, capsys, iris_path):
        with pytest.raises(SystemExit) as exc_info:
            main(["train", "--data", str(iris_path), "--k", "1"])
        assert exc_info.value.code == 2
        assert "k must be ≥ 2" in capsys.readouterr().err

    def test_bad_pair(self, iris_path):
        with pytest.raises(SystemExit) as exc_info:
            main(["evaluate", "--data", str(iris_path), "--pair", "1"])
        assert exc_info.value.code == 2

    def test_no_command(self):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_bad_config_value(self, tmp_path, iris_path):
        config = tmp_path / "bad.yaml"
        config.write_text("method: c45\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc_info:
            main(["evaluate", "--data", str(iris_path), "--config", str(config)])
        assert exc_info.value.code == 2


class TestRunErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert main(["evaluate", "--data", str(tmp_path / "absent.csv")]) == 1
        captured = capsys.readouterr()
        assert "Error" in captured.err
        assert captured.out == ""

    def test_unknown_class(self, capsys, iris_path):
        assert main(["evaluate", "--data", str(iris_path), "--pair", "1,rosa"]) == 1
        assert "rosa" in capsys.readouterr().err

    def test_malformed_csv(self, capsys, write_csv):
        path = write_csv("5.1,3.5,1.4\n")
        assert main(["evaluate", "--data", str(path)]) == 1

    def test_undecodable_file(self, capsys, tmp_path):
        path = tmp_path / "binary.csv"
        path.write_bytes(b"5.1,3.5,1.4,0.2,Iris-setosa\xff\xfe\n")
        assert main(["evaluate", "--data", str(path)]) == 1
        err = capsys.readouterr().err
        assert "❌ Error" in err
        assert "line 1" in err

    def test_nul_byte_file(self, capsys, write_csv):
        path = write_csv("5.1,3.5,1.4,0.2,Iris-setosa\n\x00\n")
        assert main(["train", "--data", str(path)]) == 1
        assert "NUL" in capsys.readouterr().err


class TestEvaluate:
    def test_table_layout(self, capsys, iris_path):
        assert main(["evaluate", "--data", str(iris_path), "--method", "id3", "--pair", "1,2"]) == 0
        out = capsys.readouterr().out
        for column in ("Exp", "A", "B", "C", "D", "Accuracy"):
            assert column in out
        assert out.count("Mean accuracy") == 1

    def test_all_pairs_stacks_three_tables(self, capsys, iris_path):
        assert main(["evaluate", "--data", str(iris_path), "--method", "id3", "--pair", "all-pairs"]) == 0
        assert capsys.readouterr().out.count("Mean accuracy") == 3

    def test_json_round_trips(self, capsys, iris_path):
        report = run_json(capsys, "evaluate", "--data", str(iris_path), "--method", "fuzzy", "--pair", "2,3")
        assert set(report) == {"config", "partitions", "results"}
        result = report["results"][0]
        assert result["method"] == "fuzzy"
        assert len(result["records"]) == 5
        recomputed = math.fsum(
            (r["a"] + r["d"]) / (r["a"] + r["b"] + r["c"] + r["d"]) for r in result["records"]
        ) / len(result["records"])
        assert recomputed == result["mean_accuracy"]
        assert {p["fold"] for p in report["partitions"]} == {0, 1, 2, 3, 4}

    def test_csv_to_file(self, capsys, tmp_path, iris_path):
        out_path = tmp_path / "reports" / "results.csv"
        assert main(["evaluate", "--data", str(iris_path), "--method", "id3",
                     "--format", "csv", "--out", str(out_path)]) == 0
        assert capsys.readouterr().out == ""
        with out_path.open(encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 5
        assert [int(r["fold"]) for r in rows] == [1, 2, 3, 4, 5]
        assert all(int(r["a"]) + int(r["b"]) + int(r["c"]) + int(r["d"]) == 20 for r in rows)

    def test_out_overwrite_warns(self, capsys, tmp_path, iris_path):
        out_path = tmp_path / "results.json"
        out_path.write_text("stale", encoding="utf-8")
        assert main(["evaluate", "--data", str(iris_path), "--method", "id3",
                     "--format", "json", "--out", str(out_path)]) == 0
        assert "Overwriting" in capsys.readouterr().err
        assert json.loads(out_path.read_text(encoding="utf-8"))["results"][0]["method"] == "id3"

    def test_verbose_json_has_diagnostics(self, capsys, iris_path):
        report = run_json(capsys, "evaluate", "--data", str(iris_path), "--method", "id3",
                          "--pair", "2,3", "--verbose")
        splits = report["results"][0]["diagnostics"][0]["splits"]
        assert splits[0]["criterion"] == "information_gain"
        assert splits[0]["path"] == []

    def test_verbose_from_config_enables_debug_log(self, capsys, tmp_path, iris_path):
        config = tmp_path / "verbose.yaml"
        config.write_text("verbose: true\nmethod: id3\n", encoding="utf-8")
        report = run_json(capsys, "evaluate", "--data", str(iris_path), "--pair", "2,3",
                          "--config", str(config))
        assert report["config"]["verbose"] is True
        assert "diagnostics" in report["results"][0]
        assert logging.getLogger().level == logging.DEBUG

    def test_default_log_level_is_warning(self, capsys, iris_path):
        run_json(capsys, "evaluate", "--data", str(iris_path), "--method", "id3")
        assert logging.getLogger().level == logging.WARNING

    def test_data_from_environment(self, capsys, monkeypatch, iris_path):
        monkeypatch.setenv(DATA_ENV_VAR, str(iris_path))
        report = run_json(capsys, "evaluate", "--method", "id3")
        assert report["config"]["data_path"] == str(iris_path)

    def test_alternate_config(self, capsys, tmp_path, iris_path):
        config = tmp_path / "k3.yaml"
        config.write_text("k: 3\nmethod: fuzzy\n", encoding="utf-8")
        report = run_json(capsys, "evaluate", "--data", str(iris_path), "--config", str(config))
        assert report["config"]["k"] == 3
        assert all(len(p["centers"]) == 3 for p in report["partitions"])
        assert [r["method"] for r in report["results"]] == ["fuzzy"]


class TestCompare:
    def test_tables_and_deltas(self, capsys, iris_path):
        assert main(["compare", "--data", str(iris_path)]) == 0
        out = capsys.readouterr().out
        assert out.count("Mean accuracy") == 2
        assert "Delta" in out

    def test_json_marks_shared_folds(self, capsys, iris_path):
        report = run_json(capsys, "compare", "--data", str(iris_path), "--pair", "2,3")
        assert [r["method"] for r in report["results"]] == ["id3", "fuzzy"]
        comparison = report["comparisons"][0]
        assert comparison["shared_folds"] is True
        assert len(comparison["deltas"]) == 5

    def test_csv_rows_per_method_and_fold(self, capsys, iris_path):
        assert main(["compare", "--data", str(iris_path), "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 1 + 10

    def test_verbose_table(self, capsys, iris_path):
        assert main(["compare", "--data", str(iris_path), "--pair", "2,3", "--verbose",
                     "--workers", "2"]) == 0
        assert "Split diagnostics" in capsys.readouterr().out


class TestRunConfig:
    def namespace(self, **overrides):
        values = dict(data=None, method=None, pair=None, k=None, fold_size=None, format=None,
                      verbose=False, prototype_scope=None, certainty=None, workers=None, out=None)
        values.update(overrides)
        return argparse.Namespace(**values)

    def test_flag_beats_environment_beats_file(self):
        config = dict(DEFAULT_CONFIG, data_path="from_file.csv", k=3)
        assert RunConfig.from_sources(self.namespace(), config).data_path.name == "from_file.csv"
        assert RunConfig.from_sources(self.namespace(), config, "env.csv").data_path.name == "env.csv"
        run_config = RunConfig.from_sources(self.namespace(data="flag.csv", k=2), config, "env.csv")
        assert run_config.data_path.name == "flag.csv"
        assert run_config.k == 2

    def test_file_values_fill_gaps(self):
        config = dict(DEFAULT_CONFIG, data_path="d.csv", certainty="reciprocal", workers=3)
        run_config = RunConfig.from_sources(self.namespace(), config)
        assert run_config.certainty == "reciprocal"
        assert run_config.workers == 3
        assert run_config.methods == ("id3", "fuzzy")

    def test_validation(self):
        config = dict(DEFAULT_CONFIG, data_path="d.csv", prototype_scope="everywhere")
        with pytest.raises(ConfigError, match="prototype scope"):
            RunConfig.from_sources(self.namespace(), config)

    def test_parse_pair(self):
        assert parse_pair("1,2") == ("1", "2")
        assert parse_pair("all-pairs") is None
        with pytest.raises(ConfigError):
            parse_pair("2,2")

    def test_parser_has_three_commands(self):
        parser = build_parser()
        for command in ("train", "evaluate", "compare"):
            assert parser.parse_args([command]).command == command
