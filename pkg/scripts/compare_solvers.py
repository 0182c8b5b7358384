#!/usr/bin/env python3
"""Timing and agreement experiment: exact state search vs brute-force scan
on a seeded random ensemble.  Usage:

    python scripts/compare_solvers.py [--instances N] [--seed S] [--agents 3]
"""

import argparse
import random
import time
from dataclasses import dataclass

from fdsi.fairness import BASES, Notion
from fdsi.model import make_instance
from fdsi.search import brute_force_solve, exact_solve


@dataclass(frozen=True)
class ExperimentConfig:
    instances: int = 100
    seed: int = 7
    agents: int = 3
    max_items: int = 6
    max_value: int = 5
    max_impact: int = 5


def run(cfg: ExperimentConfig) -> None:
    rng = random.Random(cfg.seed)
    totals = {base: [0.0, 0.0] for base in BASES}
    solvable = {base: 0 for base in BASES}
    disagreements = 0
    for _ in range(cfg.instances):
        m = rng.randint(1, cfg.max_items)
        vals = [
            [rng.randint(0, cfg.max_value) for _ in range(m)]
            for _ in range(cfg.agents)
        ]
        imps = [
            [rng.randint(0, cfg.max_impact) for _ in range(m)]
            for _ in range(cfg.agents)
        ]
        inst = make_instance(vals, imps)
        for base in BASES:
            t0 = time.perf_counter()
            a = exact_solve(inst, Notion(base))
            t1 = time.perf_counter()
            b = brute_force_solve(inst, Notion(base))
            t2 = time.perf_counter()
            totals[base][0] += t1 - t0
            totals[base][1] += t2 - t1
            solvable[base] += a is not None
            disagreements += (a is None) != (b is None)
    print(f"{cfg.instances} instances, {cfg.agents} agents, seed {cfg.seed}")
    print(f"{'notion':>8} {'exact s':>10} {'brute s':>10} {'solvable':>9}")
    for base in BASES:
        ex, br = totals[base]
        print(f"{base:>8} {ex:10.3f} {br:10.3f} {solvable[base]:9d}")
    print(f"disagreements: {disagreements}")


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--agents", type=int, default=3)
    args = parser.parse_args()
    run(ExperimentConfig(instances=args.instances, seed=args.seed, agents=args.agents))


if __name__ == "__main__":
    main()
