"""Sweep the collapse vs restriction comparison across system dimensions.

For each dimension the sweep draws random (state, measured basis) pairs,
runs the collapse route and the premeasure-then-restrict route, and prints
the worst and mean elementwise gap. Exit code 2 if any gap exceeds --tol,
mirroring the CLI convention.
"""

import argparse
import json
import sys

from qmeasure.scenario import compare_collapse_vs_restriction, parse_scenario


def scenario_at_dim(dim: int, seed: int):
    """A minimal valid scenario at the given dimension; the comparison only
    draws on its dimension and seed."""
    doc = {
        "system_dim": dim,
        "initial_state": {
            "kind": "vector",
            "data": [[1.0, 0.0]] + [[0.0, 0.0]] * (dim - 1),
        },
        "observable": [
            [[float(i == j) * i, 0.0] for j in range(dim)] for i in range(dim)
        ],
        "apparatus": {"dim": dim},
        "trials": 0,
        "seed": seed,
    }
    return parse_scenario(json.dumps(doc))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs=2, default=(2, 10), metavar=("LO", "HI"))
    parser.add_argument("--random", type=int, default=200, help="cases per dimension")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-9)
    args = parser.parse_args(argv)

    lo, hi = args.dims
    print(f"{'dim':>4} {'cases':>6} {'worst':>12} {'mean':>12}")
    overall = 0.0
    for dim in range(lo, hi + 1):
        summary = compare_collapse_vs_restriction(
            scenario_at_dim(dim, args.seed), args.random
        )
        overall = max(overall, summary.worst)
        print(
            f"{dim:>4} {summary.n_random:>6} {summary.worst:>12.3e} {summary.mean:>12.3e}"
        )
    print(f"overall worst: {overall:.3e} (tol {args.tol:g})")
    if overall > args.tol:
        print("equivalence violated", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
