import subprocess
import sys

import numpy as np
import pytest

from graphrl.cli import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_TARGET,
    SCORE_LOG_HEADER,
    ConfigError,
    RunConfig,
    check,
    load_config,
    main,
    run,
)
from graphrl.graphs import complete_graph, format_line, join_graph, named_graph, read_graphs


def small(tmp_path, **kw):
    base = dict(order=5, max_steps=3, out=str(tmp_path / "run"), timing=False, batch_size=20, hidden=(8,))
    base.update(kw)
    return RunConfig().with_overrides(**base)


def test_default_config():
    cfg = RunConfig()
    assert (cfg.invariant, cfg.env, cfg.agent, cfg.order) == ("conjecture1", "linear_build", "dce", 16)
    assert cfg.hidden == (72, 12) and cfg.dropout == 0.2 and cfg.learning_rate == 0.003
    assert cfg.restart_every == 1000 and cfg.target_score == 1e-4


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\norder = 9\nhidden = 32, 8\nflip_only = yes  # inline\ntarget_score = 0.5\n")
    cfg = load_config(path, seed="4", order=11)
    assert cfg.order == 11 and cfg.seed == 4 and cfg.hidden == (32, 8)
    assert cfg.flip_only is True and cfg.target_score == 0.5
    with pytest.raises(ConfigError):
        load_config(path, no_such_key=1)
    with pytest.raises(ConfigError):
        load_config(None, order="many")
    with pytest.raises(ConfigError):
        RunConfig(agent="sarsa").validate()
    assert load_config(None) == RunConfig()


def test_run_writes_log_and_no_solution_when_target_missed(tmp_path):
    cfg = small(tmp_path, target_score=1e9)
    assert run(cfg, log=lambda *_: None) == EXIT_TARGET
    lines = (tmp_path / "run" / "scores.csv").read_text().splitlines()
    assert lines[0] == SCORE_LOG_HEADER
    assert [int(line.split(",")[0]) for line in lines[1:]] == [1, 2, 3]
    best = [float(line.split(",")[1]) for line in lines[1:]]
    assert best == sorted(best)
    assert all(line.endswith(",0") for line in lines[1:])
    assert (tmp_path / "run" / "solutions.txt").read_text() == ""


def test_run_is_byte_identical_without_timing(tmp_path):
    texts = []
    for name in ("a", "b"):
        cfg = small(tmp_path, out=str(tmp_path / name), max_steps=4, seed=5)
        run(cfg, log=lambda *_: None)
        texts.append((tmp_path / name / "scores.csv").read_bytes())
    assert texts[0] == texts[1]


def test_run_success_writes_checkable_solution(tmp_path):
    # degree_square_sum is positive as soon as one edge exists
    cfg = small(tmp_path, invariant="degree_square_sum", target_score=0.5)
    assert run(cfg, log=lambda *_: None) == EXIT_OK
    solutions = tmp_path / "run" / "solutions.txt"
    assert len(read_graphs(solutions)) == 1
    assert check(solutions, "degree_square_sum", 0.5, log=lambda *_: None) == EXIT_OK


def test_run_restarts(tmp_path):
    messages = []
    cfg = small(tmp_path, target_score=1e9, restart_every=2, max_steps=5)
    run(cfg, log=messages.append)
    assert sum("restarting" in m for m in messages) == 2


@pytest.mark.parametrize("agent,env", [("reinforce", "linear_flip"), ("ppo", "global_set"), ("dce", "local_flip"),
                                       ("dce", "linear_set"), ("ppo", "global_flip"), ("reinforce", "local_set")])
def test_every_agent_and_environment_runs(tmp_path, agent, env):
    cfg = small(tmp_path, agent=agent, env=env, max_steps=2, target_score=1e9)
    assert run(cfg, log=lambda *_: None) == EXIT_TARGET


def test_run_with_zero_steps(tmp_path):
    assert run(small(tmp_path, max_steps=0), log=lambda *_: None) == EXIT_TARGET
    assert (tmp_path / "run" / "scores.csv").read_text() == SCORE_LOG_HEADER + "\n"


def test_check_verdicts(tmp_path, capsys):
    path = tmp_path / "sol.txt"
    counterexample = join_graph(complete_graph(4), named_graph("EmptyGraph", 8))
    path.write_text(format_line(counterexample) + "\n")
    assert main(["check", "--solutions", str(path), "--invariant", "mostar", "--target-score", "200"]) == EXIT_OK
    assert "line 1: valid (score 224.0)" in capsys.readouterr().out
    path.write_text(format_line(complete_graph(5)) + "\n")
    assert main(["check", "--solutions", str(path), "--invariant", "conjecture1"]) == EXIT_TARGET
    assert "line 1: invalid" in capsys.readouterr().out
    path.write_text(format_line(complete_graph(5)) + "\nnot a graph\n")
    assert main(["check", "--solutions", str(path), "--invariant", "conjecture1"]) == EXIT_INPUT
    out = capsys.readouterr().out
    assert "line 2: parse error" in out and "summary: 0 valid, 1 invalid, 1 malformed" in out


def test_invalid_inputs_exit_2(tmp_path, capsys):
    assert main(["check", "--solutions", str(tmp_path / "missing"), "--invariant", "mostar"]) == EXIT_INPUT
    assert main(["check", "--solutions", str(tmp_path), "--invariant", "nope"]) == EXIT_INPUT
    assert main(["run", "--agent", "sarsa", "--out", str(tmp_path / "x")]) == EXIT_INPUT
    assert main(["run", "--set", "orderless", "--out", str(tmp_path / "x")]) == EXIT_INPUT
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_INPUT
    assert "error:" in capsys.readouterr().err


def test_convert_round_trip(tmp_path):
    src = tmp_path / "g.txt"
    graphs = [complete_graph(4), named_graph("CycleGraph", 6)]
    src.write_text("".join(format_line(g) + "\n" for g in graphs))
    mid, back = tmp_path / "g.adj", tmp_path / "g2.txt"
    assert main(["convert", "--in", str(src), "--in-format", "bitmask_out", "--out", str(mid),
                 "--out-format", "adjacency-block"]) == EXIT_OK
    assert main(["convert", "--in", str(mid), "--in-format", "adjacency-block", "--out", str(back),
                 "--out-format", "bitmask_out"]) == EXIT_OK
    assert back.read_bytes() == src.read_bytes()
    assert main(["convert", "--in", str(src), "--in-format", "wat", "--out", str(mid),
                 "--out-format", "bitmask_out"]) == EXIT_INPUT


def test_convert_refuses_wide_bitmask(tmp_path):
    src, dst = tmp_path / "big.adj", tmp_path / "big.txt"
    a = np.ones((70, 70), dtype=int) - np.eye(70, dtype=int)
    src.write_text("2 0 0 70\n" + "\n".join(" ".join(map(str, row)) for row in a) + "\n")
    code = main(["convert", "--in", str(src), "--in-format", "adjacency-block", "--out", str(dst),
                 "--out-format", "bitmask_out"])
    assert code == EXIT_INPUT and not dst.exists()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "graphrl", "run", "--order", "4", "--max-steps", "1",
                           "--set", "batch_size=8", "--set", "timing=false", "--out", str(tmp_path / "m")],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_TARGET, proc.stderr
    assert (tmp_path / "m" / "scores.csv").exists()
