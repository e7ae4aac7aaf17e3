#!/usr/bin/env python3
"""Reproduce the two shipped design-selection examples across all six
candidate-set sizes and print the selected constants, optima, and dual
weights.  A brute-force grid check is appended for the first example.
"""

import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
PROBLEMS = REPO / "problems"

from gpchoice import (  # noqa: E402
    brute_force_oracle,
    build_dual,
    expand,
    parse_problem,
    solve_choice,
    solve_dual,
    standardize,
)


def run_fixture(path: Path):
    cg = parse_problem(path)
    started = time.perf_counter()
    result = solve_choice(cg)
    elapsed = (time.perf_counter() - started) * 1e3
    chosen = dict(result.chosen_values or ())
    report = result.report
    print(
        f"{path.stem:18s} z = {report.objective_value:12.7g}  "
        f"(c, p, a) = ({chosen['c']:g}, {chosen['p']:g}, {chosen['a']:g})  "
        f"combos = {result.solved + result.rejected:3d}  {elapsed:7.1f} ms"
    )
    return cg, result


def show_dual(cg, result, label):
    expanded = expand(cg, dict(result.chosen_bits))
    d = build_dual(standardize(expanded))
    ds = solve_dual(d)
    print(f"\n{label}: dual value {ds.objective_value:.7g}")
    for name, weight in zip(d.weight_labels(), ds.weights):
        print(f"  {name} = {weight:.7g}")


def main() -> int:
    print("selected constants per fixture")
    print("-" * 78)
    last = {}
    for example in (1, 2):
        for case in range(1, 7):
            path = PROBLEMS / f"example{example}_case{case}.json"
            last[example] = run_fixture(path)

    for example in (1, 2):
        cg, result = last[example]
        show_dual(cg, result, f"example {example} at its selected constants")

    cg, result = last[1]
    expanded = expand(cg, dict(result.chosen_bits))
    check = brute_force_oracle(
        standardize(expanded), box_log_halfwidth=5.0, grid_points_per_dim=200
    )
    rel = abs(check.value - result.report.objective_value) / check.value
    print(f"\ngrid check (example 1): {check.value:.7g} "
          f"(relative difference {rel:.2e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
