#!/usr/bin/env python3
"""Generate the bundled multi-knapsack instances with their optima.

Layout of each file: n m / n profits / m rows of n weights / m capacities /
optimum.  Instances with at most 20 items are solved by enumeration, larger
ones with scipy's MILP solver.
"""
import itertools
import pathlib
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

SIZES = {"1-2": (10, 10), "1-3": (15, 10), "1-4": (20, 10), "1-5": (28, 10), "1-6": (39, 5)}
SEED = 20101


def make(rng, n, m):
    weights = rng.integers(0, 100, size=(m, n))
    weights[rng.random((m, n)) < 0.1] = 0
    profits = weights.mean(axis=0).astype(int) + rng.integers(1, 40, size=n)
    capacities = (weights.sum(axis=1) * rng.uniform(0.4, 0.6, size=m)).astype(int)
    return profits, weights, capacities


def brute_force(profits, weights, capacities):
    n = len(profits)
    best = 0
    rows = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    feasible = np.all(rows @ weights.T <= capacities, axis=1)
    if feasible.any():
        best = int((rows[feasible] @ profits).max())
    return best


def solve_milp(profits, weights, capacities):
    n = len(profits)
    res = milp(-profits, constraints=LinearConstraint(weights, -np.inf, capacities),
               integrality=np.ones(n), bounds=Bounds(0, 1))
    return int(round(-res.fun))


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    for name, (n, m) in SIZES.items():
        profits, weights, capacities = make(rng, n, m)
        opt = brute_force(profits, weights, capacities) if n <= 20 else solve_milp(profits, weights, capacities)
        lines = [f"{n} {m}", " ".join(map(str, profits))]
        lines += [" ".join(map(str, row)) for row in weights]
        lines += [" ".join(map(str, capacities)), str(opt)]
        (out / f"mknap{name}.txt").write_text("\n".join(lines) + "\n")
        print(name, n, m, opt)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data" / "knapsack")
