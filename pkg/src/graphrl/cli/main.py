"""``graphrl run | check | convert``.

Exit codes: 0 success, 1 target not reached (or some solution invalid),
2 invalid input.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from graphrl.agents import AGENTS, ConstantProbability, ExponentialDecay, LinearDecay, Network
from graphrl.cli.config import ConfigError, RunConfig, load_config
from graphrl.environments import ENVIRONMENTS, bernoulli, fixed, uniform_random
from graphrl.graphs import (
    ADJACENCY_BLOCK,
    FlattenedOrdering,
    GraphFormat,
    GraphFormatError,
    GraphKind,
    GraphParseError,
    dumps_graphs,
    flattened_length,
    format_line,
    iter_graph_file,
    monochromatic_graph,
)
from graphrl.invariants import evaluate64, lookup

EXIT_OK, EXIT_TARGET, EXIT_INPUT = 0, 1, 2
SCORE_LOG_HEADER = "step,best_score,generation_mean,elapsed_ms"
SOLUTIONS_NAME = "solutions.txt"
SCORE_LOG_NAME = "scores.csv"
FORMAT_NAMES = [f.value for f in GraphFormat] + [ADJACENCY_BLOCK]


# -- building blocks from a config ----------------------------------------------

def _generator(cfg: RunConfig, seed):
    name, _, arg = cfg.generator.partition(":")
    if name == "monochromatic":
        color = int(arg or 0)
        return fixed(monochromatic_graph(cfg.order, color, cfg.edge_colors, cfg.is_directed, cfg.allow_loops))
    if name == "uniform":
        return uniform_random(cfg.edge_colors, cfg.order, cfg.is_directed, cfg.allow_loops, seed=seed)
    if name == "bernoulli":
        return bernoulli(cfg.order, float(arg or 0.5), cfg.is_directed, cfg.allow_loops, seed=seed)
    raise ConfigError(f"unknown generator {cfg.generator!r} (monochromatic:C, uniform, bernoulli:P)")


def _random_actions(spec: str):
    name, _, arg = spec.partition(":")
    args = [float(a) for a in arg.split(",") if a.strip()]
    try:
        if name == "constant":
            return ConstantProbability(*args)
        if name == "linear":
            return LinearDecay(args[0], args[1], int(args[2]))
        if name == "exponential":
            return ExponentialDecay(*args)
    except (IndexError, TypeError) as exc:
        raise ConfigError(f"bad random_action {spec!r}: {exc}") from None
    raise ConfigError(f"unknown random_action {spec!r} (constant:P, linear:A,B,STEPS, exponential:A,RATE)")


def build_environment(cfg: RunConfig, invariant, seed=None):
    if cfg.env not in ENVIRONMENTS:
        raise ConfigError(f"unknown environment {cfg.env!r}; choose from {sorted(ENVIRONMENTS)}")
    kwargs = dict(is_directed=cfg.is_directed, allow_loops=cfg.allow_loops,
                  flattened_ordering=FlattenedOrdering(cfg.ordering))
    if "flip" not in cfg.env:
        kwargs["edge_colors"] = cfg.edge_colors
    elif cfg.edge_colors != 2:
        raise ConfigError("flip environments need edge_colors = 2")
    if cfg.env != "linear_build":
        kwargs["initial_graph_generator"] = _generator(cfg, seed)
    if cfg.env.startswith(("global", "local")):
        ell = flattened_length(cfg.order, GraphKind(cfg.is_directed, cfg.allow_loops))
        kwargs["episode_length"] = cfg.episode_length or ell
    if cfg.env.endswith("flip") and cfg.env != "linear_flip":
        kwargs["flip_only"] = cfg.flip_only
    if cfg.env.startswith("local"):
        kwargs["starting_vertex"] = cfg.starting_vertex
    return ENVIRONMENTS[cfg.env](invariant, cfg.order, **kwargs)


def build_agent(cfg: RunConfig, environment, seed=None):
    if cfg.agent not in AGENTS:
        raise ConfigError(f"unknown agent {cfg.agent!r}; choose from {sorted(AGENTS)}")
    rng = np.random.default_rng(seed)
    policy = Network.from_sizes((environment.state_length, *cfg.hidden, environment.action_number),
                                dropout=cfg.dropout, rng=rng)
    kwargs = dict(policy_network=policy, learning_rate=cfg.learning_rate,
                  random_action_mechanism=_random_actions(cfg.random_action), seed=seed)
    if cfg.batch_size is not None:
        kwargs["batch_size"] = cfg.batch_size
    if cfg.agent == "dce":
        kwargs.update(elite_fraction=cfg.elite_fraction, carry_fraction=cfg.carry_fraction)
    else:
        kwargs.update(top_fraction=cfg.top_fraction, gamma=cfg.gamma)
    if cfg.agent == "reinforce":
        kwargs["use_baseline"] = cfg.use_baseline
    if cfg.agent == "ppo":
        kwargs.update(epochs=cfg.epochs, clip=cfg.clip, value_coef=cfg.value_coef, entropy_coef=cfg.entropy_coef)
        kwargs["value_network"] = Network.from_sizes((environment.state_length, *cfg.hidden, 1), rng=rng)
    return AGENTS[cfg.agent](environment, **kwargs)


def _resolve_invariant(name: str):
    try:
        return lookup(name)
    except KeyError:
        raise ConfigError(f"unknown invariant {name!r}") from None


# -- run ----------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def run(cfg: RunConfig, log=print) -> int:
    """Search until ``best_score > target_score``, or until ``max_steps`` steps or
    ``time_limit`` seconds are spent."""
    invariant = _resolve_invariant(cfg.invariant)
    agent_seed, env_seed = np.random.SeedSequence(cfg.seed).spawn(2)
    try:
        env = build_environment(cfg, invariant, seed=env_seed)
        agent = build_agent(cfg, env, seed=agent_seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    solutions, score_log = out / SOLUTIONS_NAME, out / SCORE_LOG_NAME
    solutions.write_text("")
    start = time.perf_counter()
    best_score, best_graph = -math.inf, None

    with open(score_log, "w") as log_file:
        log_file.write(SCORE_LOG_HEADER + "\n")
        if cfg.max_steps > 0:
            agent.reset()
        for step in range(1, cfg.max_steps + 1):
            if agent.step_count >= cfg.restart_every:
                log(f"step {step - 1}: restarting (best so far {best_score:.6f})")
                agent.reset()
            agent.step()
            if agent.best_score > best_score:
                best_score, best_graph = agent.best_score, agent.best_graph
            elapsed = int((time.perf_counter() - start) * 1000) if cfg.timing else 0
            mean = float(np.mean(agent.last_generation_scores))
            log_file.write(f"{step},{_fmt(best_score)},{_fmt(mean)},{elapsed}\n")
            if best_score > cfg.target_score:
                # re-score in double precision before committing the graph
                exact = float(evaluate64(invariant, best_graph)[0])
                if exact > cfg.target_score:
                    log_file.flush()
                    with open(solutions, "a") as fh:
                        fh.write(format_line(best_graph) + "\n")
                    log(f"step {step}: success, score {exact:.6f}")
                    return EXIT_OK
            if cfg.time_limit is not None and time.perf_counter() - start > cfg.time_limit:
                log(f"time limit of {cfg.time_limit} s reached after {step} steps (best {best_score:.6f})")
                return EXIT_TARGET
    log(f"target {cfg.target_score} not reached in {cfg.max_steps} steps (best {best_score:.6f})")
    return EXIT_TARGET


# -- check --------------------------------------------------------------------------

def check(path, invariant_name: str, target_score: float = 1e-4, log=print) -> int:
    """Re-score every solution line in double precision and report a verdict per line."""
    invariant = _resolve_invariant(invariant_name)
    if not Path(path).is_file():
        raise ConfigError(f"solutions file not found: {path}")
    valid = invalid = malformed = 0
    for number, item in iter_graph_file(path, GraphFormat.BITMASK_OUT):
        if isinstance(item, GraphParseError):
            malformed += 1
            log(f"line {number}: parse error: {str(item).removeprefix(f'line {number}: ')}")
            continue
        try:
            score = float(evaluate64(invariant, item)[0])
        except ValueError as exc:
            invalid += 1
            log(f"line {number}: invalid (cannot evaluate: {exc})")
            continue
        if score > target_score:
            valid += 1
            log(f"line {number}: valid (score {score!r})")
        else:
            invalid += 1
            log(f"line {number}: invalid (score {score!r} <= {target_score!r})")
    log(f"summary: {valid} valid, {invalid} invalid, {malformed} malformed")
    if malformed:
        return EXIT_INPUT
    return EXIT_TARGET if invalid else EXIT_OK


# -- convert ------------------------------------------------------------------------

def convert(in_path, in_format: str, out_path, out_format: str) -> int:
    for name in (in_format, out_format):
        if name not in FORMAT_NAMES:
            raise ConfigError(f"unknown format {name!r}; choose from {FORMAT_NAMES}")
    if not Path(in_path).is_file():
        raise ConfigError(f"input file not found: {in_path}")
    graphs = []
    for _, item in iter_graph_file(in_path, in_format):
        if isinstance(item, GraphParseError):
            raise ConfigError(str(item))
        graphs.append(item)
    try:
        text = dumps_graphs(graphs, out_format)
    except (GraphFormatError, ValueError) as exc:
        raise ConfigError(f"cannot write {out_format}: {exc}") from None
    Path(out_path).write_text(text)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphrl", description="Search for extremal graphs with RL agents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a search with restarts")
    p.add_argument("--config")
    for flag, kind in [("seed", int), ("order", int), ("invariant", str), ("env", str), ("agent", str),
                       ("target-score", float), ("restart-every", int), ("max-steps", int), ("out", str)]:
        p.add_argument(f"--{flag}", type=kind)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any other config key")

    p = sub.add_parser("check", help="verify a solution file")
    p.add_argument("--solutions", required=True)
    p.add_argument("--invariant", required=True)
    p.add_argument("--target-score", type=float, default=1e-4)

    p = sub.add_parser("convert", help="re-encode a graph file")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--in-format", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--out-format", required=True)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            extra = {}
            for item in args.set:
                key, sep, value = item.partition("=")
                if not sep:
                    raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
                extra[key.strip()] = value
            overrides = {k: getattr(args, k) for k in ("seed", "order", "invariant", "env", "agent",
                                                       "target_score", "restart_every", "max_steps", "out")}
            cfg = load_config(args.config, **extra, **{k: v for k, v in overrides.items() if v is not None})
            return run(cfg)
        if args.command == "check":
            return check(args.solutions, args.invariant, args.target_score)
        return convert(args.in_path, args.in_format, args.out_path, args.out_format)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
