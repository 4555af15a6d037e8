"""Run one search config over several seeds, check each solution file, summarize.

    python scripts/search_seeds.py configs/conjecture1_n16.cfg --seeds 0 1 2 3 4
"""

import argparse
import time
from pathlib import Path

from graphrl.cli import EXIT_OK, check, load_config, run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    parser.add_argument("--out", default=None, help="root directory; one subdirectory per seed")
    parser.add_argument("--time-limit", type=float, default=None, help="seconds per seed")
    args = parser.parse_args()

    base = load_config(args.config)
    root = Path(args.out or base.out)
    rows = []
    for seed in args.seeds:
        cfg = base.with_overrides(seed=seed, out=str(root / f"seed{seed}"), time_limit=args.time_limit)
        start = time.perf_counter()
        code = run(cfg)
        elapsed = time.perf_counter() - start
        verified = code == EXIT_OK and check(Path(cfg.out) / "solutions.txt", cfg.invariant, cfg.target_score) == EXIT_OK
        rows.append((seed, verified, elapsed))

    print()
    for seed, verified, elapsed in rows:
        print(f"seed {seed}: {'found' if verified else 'missed'} in {elapsed:.0f} s")
    print(f"{sum(v for _, v, _ in rows)}/{len(rows)} seeds produced a verified solution")


if __name__ == "__main__":
    main()
