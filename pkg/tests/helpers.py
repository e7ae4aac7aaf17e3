"""Shared builders and reference values for the test suite."""

from pathlib import Path

import numpy as np

from gpchoice import GpProblem, make_problem

PROBLEM_DIR = Path(__file__).resolve().parent.parent / "problems"

# first shipped example: min c*x1^p + 3/x2^3 + x1*x2  s.t.  a*x1 + x2 <= 1
EX1_Z = 11.01098
EX1_X = (0.2069792, 0.7930208)
EX1_W = (0.4387805, 0.5463127, 0.01490681, 0.4238737, 1.624031)

# second shipped example: min c*x1 + 10*x2 + 4*x3 + 2*x4
#   s.t.  a*x1^p*x4^-2 + x2^2*x4^-2 <= 1,  100/(x1*x2*x3) <= 1
EX2_Z = 50.60611
EX2_X = (16.86890, 1.405717, 4.217114, 1.405791)
EX2_W = (0.3333372, 0.2777762, 0.3333285, 0.05555811, 0.2903339e-05,
         0.02777615, 0.3333285)


def example1_problem(c=1.0, p=-1.0, a=1.0) -> GpProblem:
    return make_problem(
        objective=[(c, (p, 0)), (3, (0, -3)), (1, (1, 1))],
        constraints=[([(a, (1, 0)), (1, (0, 1))], 1.0)],
    )


def example2_problem(c=1.0, p=-3.0, a=1.0) -> GpProblem:
    return make_problem(
        objective=[
            (c, (1, 0, 0, 0)),
            (10, (0, 1, 0, 0)),
            (4, (0, 0, 1, 0)),
            (2, (0, 0, 0, 1)),
        ],
        constraints=[
            ([(a, (p, 0, 0, -2)), (1, (0, 2, 0, -2))], 1.0),
            ([(100, (-1, -1, -1, 0))], 1.0),
        ],
    )


def random_feasible_gp(rng) -> GpProblem:
    """Small random GP, feasible by construction at a known interior point.

    Coefficients land in [0.1, 10], exponents in [-3, 3], at most six terms
    over at most three variables.  One all-positive and one all-negative
    exponent row in the objective pull the minimizer toward a bounded box.
    """
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
        bound = value_at_bar * (1.0 + rng.uniform(0.3, 2.0))
        cons.append((terms, bound))
    return make_problem(obj, cons)
