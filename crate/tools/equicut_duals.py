"""Regenerate the equicut fixtures: random integer-weighted graphs and an
approximate dual solution of their semidefinite relaxation.

    python3 tools/equicut_duals.py [--count 30] [--seed 1]

The dual is  max sum(y[:n])  s.t.  L/4 - Diag(y[:n]) - y[n] * ones  psd,
solved with an interior-point method, so y is only approximate. The Rust
tests turn it into a rigorous bound.
"""

import argparse
import pathlib

import cvxpy as cp
import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures" / "equicut"


def random_graph(rng, n):
    w = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.7:
                w[i, j] = w[j, i] = rng.integers(1, 10)
    return w


def dual(w):
    n = w.shape[0]
    lap = np.diag(w.sum(axis=1)) - w
    y = cp.Variable(n + 1)
    slack = lap / 4 - cp.diag(y[:n]) - y[n] * np.ones((n, n))
    prob = cp.Problem(cp.Maximize(cp.sum(y[:n])), [(slack + slack.T) / 2 >> 0])
    prob.solve(solver=cp.CLARABEL)
    return y.value, prob.value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    OUT.mkdir(parents=True, exist_ok=True)
    sizes = [4, 6, 8, 10, 12]
    for k in range(args.count):
        n = sizes[k % len(sizes)]
        w = random_graph(rng, n)
        y, val = dual(w)
        edges = [(i, j, w[i, j]) for i in range(n) for j in range(i + 1, n) if w[i, j]]
        with open(OUT / f"g{k:02}.graph", "w") as f:
            f.write(f"# relaxation value ~ {val:.9g}\n{n}\n")
            f.writelines(f"{i + 1} {j + 1} {v}\n" for i, j, v in edges)
        with open(OUT / f"g{k:02}.sol", "w") as f:
            f.write("solution v1\ny " + " ".join(repr(float(v)) for v in y) + "\n")


if __name__ == "__main__":
    main()
