#!/usr/bin/env python3
"""Solver robustness sweep on randomly generated feasible GPs.

Generates small problems (feasible by construction at a known interior
point), solves each through the dual path, and cross-checks a sample of the
optima against the brute-force grid oracle.  Prints status counts, the worst
duality gap and equality residual, and the worst oracle disagreement.
"""

import argparse
import sys
import time

import numpy as np

from gpchoice import (
    NoFeasiblePointError,
    Status,
    brute_force_oracle,
    make_problem,
    solve,
    standardize,
)


def random_feasible_gp(rng):
    n = int(rng.integers(1, 4))
    t0 = int(rng.integers(2, 4))
    m = int(rng.integers(1, 3))

    def coeff():
        return float(10.0 ** rng.uniform(-1.0, 1.0))

    obj = [(coeff(), rng.uniform(0.3, 2.5, n)), (coeff(), rng.uniform(-2.5, -0.3, n))]
    for _ in range(t0 - 2):
        obj.append((coeff(), rng.uniform(-3.0, 3.0, n)))

    budget = 6 - len(obj)
    cons = []
    x_bar = np.exp(rng.uniform(-0.3, 0.3, n))
    for _ in range(m):
        k = int(rng.integers(1, min(2, budget) + 1)) if budget > 0 else 0
        if k == 0:
            break
        budget -= k
        terms = [(coeff(), rng.uniform(-3.0, 3.0, n)) for _ in range(k)]
        value_at_bar = sum(c * np.prod(x_bar ** np.asarray(e)) for c, e in terms)
        cons.append((terms, value_at_bar * (1.0 + rng.uniform(0.3, 2.0))))
    return make_problem(obj, cons)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--seed", type=int, default=20260808)
    parser.add_argument("--oracle-checks", type=int, default=60)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    statuses: dict[str, int] = {}
    worst_gap = 0.0
    worst_residual = 0.0
    worst_oracle = 0.0
    oracle_checked = 0

    started = time.perf_counter()
    for _ in range(args.count):
        s = standardize(random_feasible_gp(rng))
        report = solve(s)
        statuses[report.status.value] = statuses.get(report.status.value, 0) + 1
        if report.status is not Status.OPTIMAL:
            continue
        worst_gap = max(worst_gap, report.duality_gap)
        worst_residual = max(worst_residual, report.dual.equality_residual)
        if oracle_checked < args.oracle_checks and s.variable_count <= 3:
            half = max(2.0, 1.3 * float(np.max(np.abs(np.log(report.primal_x)))))
            points = 81 if s.variable_count <= 2 else 61
            try:
                check = brute_force_oracle(s, half, points)
            except NoFeasiblePointError:
                continue
            rel = abs(check.value - report.objective_value) / report.objective_value
            worst_oracle = max(worst_oracle, rel)
            oracle_checked += 1
    elapsed = time.perf_counter() - started

    print(f"{args.count} problems in {elapsed:.1f}s (seed {args.seed})")
    for name in sorted(statuses):
        print(f"  {name:16s} {statuses[name]}")
    print(f"worst duality gap        {worst_gap:.3e}")
    print(f"worst equality residual  {worst_residual:.3e}")
    print(f"worst oracle difference  {worst_oracle:.3e} "
          f"({oracle_checked} checks)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
