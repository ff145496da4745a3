from __future__ import annotations

import json

import pytest

from cli import EXIT_INPUT, EXIT_LIMIT, EXIT_OK, RunConfig, main
from datahub.formats import load_strategy, save_strategy, save_tree
from engine.strategy import is_kcut


def test_solve_line_linear(capsys):
    assert main(["solve-line", "--n", "10", "--cost", "sym:0,1", "--oracle-check", "--stats"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "最优值：6" in out
    assert "暴力基准：6" in out
    assert "【统计】" in out


def test_solve_line_pricing_writes_report_and_strategy(tmp_path, capsys):
    report = tmp_path / "report.json"
    strategy = tmp_path / "pricing.json"
    code = main(
        ["solve-line", "--n", "19", "--cost", "preset:pricing", "--json", str(report), "--emit-strategy", str(strategy)]
    )
    assert code == EXIT_OK
    document = json.loads(report.read_text(encoding="utf-8"))
    assert document["schema_version"] == 1
    assert document["value"] == "17"
    capsys.readouterr()

    assert main(["eval", "--n", "19", "--cost", "preset:pricing", "--strategy", str(strategy)]) == EXIT_OK
    assert "最坏情况代价：17" in capsys.readouterr().out


def test_eval_handmade_pricing_strategy(tmp_path, capsys, pricing_n19_strategy):
    strategy = save_strategy(pricing_n19_strategy, tmp_path / "pricing.json")
    assert main(["eval", "--n", "19", "--cost", "preset:pricing", "--strategy", str(strategy)]) == EXIT_OK
    assert "最坏情况代价：17（目标 11）" in capsys.readouterr().out


def test_solve_line_distribution_and_as_bivariate(capsys):
    assert main(["solve-line", "--n", "3", "--distribution", "uniform"]) == EXIT_OK
    assert "最优值：2/3" in capsys.readouterr().out
    assert main(["solve-line", "--n", "10", "--as-bivariate"]) == EXIT_OK
    assert "最优值：6" in capsys.readouterr().out


def test_input_errors_exit_two(tmp_path, spider_tree):
    assert main(["solve-line", "--n", "5", "--cost", "table:1,2,3,4"]) == EXIT_INPUT
    assert main(["solve-line", "--n", "5", "--cost", "nonsense"]) == EXIT_INPUT
    tree = save_tree(spider_tree, tmp_path / "tree.json")
    assert main(["solve-tree", "--tree", str(tree), "--cost", "preset:pricing"]) == EXIT_INPUT
    assert main(["solve-tree", "--tree", str(tree), "--n", "10"]) == EXIT_INPUT
    assert main(["eval", "--n", "4", "--strategy", str(tmp_path / "missing.json")]) == EXIT_INPUT
    assert main(["solve-tree", "--n", "4", "--epsilon", "-1"]) == EXIT_INPUT


def test_size_limit_exit_three():
    assert main(["oracle", "--n", "20"]) == EXIT_LIMIT
    assert main(["oracle", "--n", "8", "--oracle-limit", "5"]) == EXIT_LIMIT


def test_missing_subcommand_is_argparse_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_solve_tree_with_epsilon(tmp_path, capsys, spider_tree):
    tree = save_tree(spider_tree, tmp_path / "tree.json")
    out_dot = tmp_path / "tree_strategy.dot"
    code = main(["solve-tree", "--tree", str(tree), "--epsilon", "1", "--oracle-check", "--emit-strategy", str(out_dot)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "k=3" in out
    assert "近似保证 2" in out
    assert out_dot.read_text(encoding="utf-8").startswith("digraph")


def _without_stats(path):
    document = json.loads(path.read_text(encoding="utf-8"))
    document.pop("stats", None)
    return document


def test_solve_tree_random_instance_is_deterministic(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    args = ["solve-tree", "--random-tree", "8", "--seed", "3", "--k", "3"]
    assert main(args + ["--json", str(first)]) == EXIT_OK
    assert main(args + ["--json", str(second)]) == EXIT_OK
    assert _without_stats(first) == _without_stats(second)


def test_convert_kcut(tmp_path, capsys, spider_tree, spider_left_strategy, spider_right_strategy):
    tree = save_tree(spider_tree, tmp_path / "tree.json")
    before = save_strategy(spider_left_strategy, tmp_path / "left.json")
    after = tmp_path / "converted.json"
    code = main(["convert-kcut", "--tree", str(tree), "--strategy", str(before), "--k", "3", "--emit-strategy", str(after)])
    assert code == EXIT_OK
    converted = load_strategy(after, spider_tree)
    assert converted == spider_right_strategy
    assert is_kcut(spider_tree, converted, 3)
    assert "转换前最坏代价" in capsys.readouterr().out


def test_oracle_on_tree_and_distribution(tmp_path, capsys, star4):
    tree = save_tree(star4, tmp_path / "star.json")
    assert main(["oracle", "--tree", str(tree)]) == EXIT_OK
    assert "最优值：1" in capsys.readouterr().out
    assert main(["oracle", "--n", "3", "--distribution", "uniform"]) == EXIT_OK
    assert "最优值：2/3" in capsys.readouterr().out


def test_bounds(capsys):
    assert main(["bounds", "--n", "10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "下界 1：5" in out
    assert "二分查找实际代价：8，上界：8" in out


def test_constant_sweep_is_byte_stable(tmp_path, capsys):
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    assert main(["constant", "--n-list", "8,10", "--stable", "--csv", str(first)]) == EXIT_OK
    assert main(["constant", "--n-list", "8,10", "--stable", "--csv", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,opt,bs,ratio,opt_over_n,runtime_ms"
    assert lines[2].startswith("10,6,8,")
    assert lines[2].endswith(",0")
    capsys.readouterr()


def test_lowerbound(capsys):
    assert main(["lowerbound", "--threshold-n", "15", "--gamma-n", "64"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "experiment,n,strategy_cost,bs_cost,ratio"
    assert lines[1] == "threshold,15,1,2,2.0"
    assert lines[2].startswith("gamma,64,")


def test_simulate_default_binary_search(capsys):
    assert main(["simulate", "--n", "16", "--cost", "sym:1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "目标 16，总代价 4" in out
    assert main(["simulate", "--n", "10", "--adversary", "fixed", "--target", "10"]) == EXIT_OK
    assert "总代价 8" in capsys.readouterr().out
    assert main(["simulate", "--n", "10", "--adversary", "fixed"]) == EXIT_INPUT


def test_run_config_epsilon_sets_k():
    config = RunConfig(command="solve-tree", n=5, epsilon=0.5)
    assert config.k == 4
    with pytest.raises(ValueError):
        RunConfig(command="eval")
