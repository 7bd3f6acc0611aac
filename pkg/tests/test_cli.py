import json

import pytest

from pcover.cli import EXIT_OK, EXIT_USAGE, build_parser, config_from_args, run


@pytest.fixture
def singletons_path(tmp_path):
    path = tmp_path / "singletons.json"
    sets = [{"elems": [i], "weights": {str(i): 1}} for i in range(4)]
    path.write_text(json.dumps({"n": 4, "p": "1/8", "sets": sets}), encoding="utf-8")
    return str(path)


def test_certify_prints_the_report(singletons_path, capsys):
    assert run(["certify", "--family", singletons_path]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["result"]["certificate"]["cost"] == "1/2"
    assert document["config"]["family"] == singletons_path


def test_certify_reads_sets_with_partial_weights(tmp_path, capsys):
    path = tmp_path / "family.json"
    sets = [{"elems": [0], "weights": {"0": 1}}, {"elems": [1, 2], "weights": {}}]
    path.write_text(json.dumps({"n": 3, "p": "1/8", "sets": sets}), encoding="utf-8")
    assert run(["certify", "--family", str(path), "--p", "1/8"]) == EXIT_OK
    certificate = json.loads(capsys.readouterr().out)["result"]["certificate"]
    assert certificate["cost"] == "9/64"


def test_trials_accept_scientific_notation():
    args = build_parser().parse_args(["estimate", "--lambda", "l.json", "--p", "0.1", "--trials", "1e6"])
    assert config_from_args(args).trials == 1_000_000
    assert run(["estimate", "--trials", "2.5"]) == EXIT_USAGE


def test_report_and_tables_to_files(singletons_path, tmp_path):
    out = tmp_path / "ledger.json"
    assert run(["ledger", "--family", singletons_path, "--J", "2", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["holds"] is True
    assert (tmp_path / "ledger.json.buckets.csv").exists()


def test_guard_breach_is_a_usage_error(singletons_path, capsys):
    assert run(["certify", "--family", singletons_path, "--guard", "cover_candidates=2"]) == EXIT_USAGE
    assert "cover_candidates" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["certify", "--guard", "cover_candidates"],
        ["estimate", "--mode", "decimal"],
        ["gen"],
    ],
)
def test_bad_arguments(argv):
    assert run(argv) == EXIT_USAGE


def test_missing_and_malformed_inputs(tmp_path):
    assert run(["certify"]) == EXIT_USAGE
    assert run(["certify", "--family", str(tmp_path / "absent.json")]) == EXIT_USAGE
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2}', encoding="utf-8")
    assert run(["certify", "--family", str(broken), "--p", "1/2"]) == EXIT_USAGE


def test_coverage_with_coarse_eps_is_a_usage_error(tmp_path, capsys):
    path = tmp_path / "coin.json"
    coin = {"points": ["tails", "heads"], "nu": ["1/2", "1/2"], "functions": [[0, 1]], "N": 2}
    path.write_text(json.dumps(coin), encoding="utf-8")
    assert run(["coverage", "--instance", str(path), "--L", "1", "--eps", "3"]) == EXIT_USAGE
    assert "eps" in capsys.readouterr().err
    assert run(["coverage", "--instance", str(path), "--L", "1", "--eps", "1/2"]) == EXIT_OK


def test_gen_writes_the_document(tmp_path):
    out = tmp_path / "family.json"
    argv = ["gen", "--kind", "random-family", "--n", "5", "--members", "2", "--seed", "7", "--out", str(out)]
    assert run(argv) == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["n"] == 5
    assert len(document["sets"]) == 2
    assert run(["certify", "--family", str(out)]) == EXIT_OK


def test_config_collects_extras():
    args = build_parser().parse_args(
        ["mcertify", "--family", "f.json", "--c", "2", "--J0", "100", "--guard", "multisets=10", "--greedy"]
    )
    config = config_from_args(args)
    assert config.extra["c"] == "2"
    assert config.extra["J0"] == "100"
    assert config.extra["greedy"] is True
    assert config.extra["guards"] == {"multisets": 10}
    assert config.guards().multisets == 10
