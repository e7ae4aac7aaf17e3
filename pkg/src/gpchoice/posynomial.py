"""Posynomial programs: term/problem containers, evaluation, standard form.

A posynomial is a finite sum of monomials c * prod_j x_j**e_j with c > 0 and
real exponents e_j, defined over strictly positive variables.  A problem in
generalized form carries per-constraint bounds b_i > 0; dividing every
coefficient of constraint i by b_i yields the standard form with all bounds
equal to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class GpDomainError(ValueError):
    """An argument left the domain of a posynomial operation."""


@dataclass(frozen=True)
class VariableIndex:
    index: int
    name: str


@dataclass(frozen=True)
class Monomial:
    """One product term: coefficient * prod_j x_j**exponents[j]."""

    coefficient: float
    exponents: tuple[float, ...]


@dataclass(frozen=True)
class Posynomial:
    terms: tuple[Monomial, ...]

    @property
    def term_count(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class GpProblem:
    """min objective(x) subject to constraint_i(x) <= bound_i, x > 0."""

    variables: tuple[VariableIndex, ...]
    objective: Posynomial
    constraints: tuple[tuple[Posynomial, float], ...]

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)


@dataclass(frozen=True)
class StandardGp:
    """Same shape as GpProblem with every constraint bound fixed to one."""

    variables: tuple[VariableIndex, ...]
    objective: Posynomial
    constraints: tuple[Posynomial, ...]

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def term_count(self) -> int:
        return self.objective.term_count + sum(c.term_count for c in self.constraints)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)


def make_variables(names: Sequence[str]) -> tuple[VariableIndex, ...]:
    return tuple(VariableIndex(i, name) for i, name in enumerate(names))


def make_posynomial(terms: Iterable[tuple[float, Sequence[float]]]) -> Posynomial:
    """Build a Posynomial from (coefficient, exponents) pairs."""
    return Posynomial(
        tuple(Monomial(float(c), tuple(float(e) for e in exps)) for c, exps in terms)
    )


def make_problem(
    objective: Iterable[tuple[float, Sequence[float]]],
    constraints: Iterable[tuple[Iterable[tuple[float, Sequence[float]]], float]] = (),
    variable_names: Sequence[str] | None = None,
) -> GpProblem:
    """Convenience constructor from plain (coefficient, exponents) data."""
    obj = make_posynomial(objective)
    cons = tuple((make_posynomial(ts), float(b)) for ts, b in constraints)
    if variable_names is None:
        n = len(obj.terms[0].exponents) if obj.terms else 0
        variable_names = [f"x{j + 1}" for j in range(n)]
    return GpProblem(make_variables(variable_names), obj, cons)


def evaluate(p: Posynomial, x: Sequence[float]) -> float:
    """Evaluate a posynomial at a strictly positive point.

    Raises GpDomainError when x has the wrong arity or any component is
    non-positive or non-finite.
    """
    xs = [float(v) for v in x]
    if p.terms and len(xs) != len(p.terms[0].exponents):
        raise GpDomainError(
            f"point has {len(xs)} components, posynomial expects "
            f"{len(p.terms[0].exponents)}"
        )
    for j, v in enumerate(xs):
        if not math.isfinite(v) or v <= 0.0:
            raise GpDomainError(f"x[{j}] = {v!r} is not a finite positive number")
    total = 0.0
    for term in p.terms:
        prod = term.coefficient
        for e, v in zip(term.exponents, xs):
            if e != 0.0:
                prod *= v**e
        total += prod
    return total


def standardize(g: GpProblem) -> StandardGp:
    """Divide every constraint coefficient by its bound; bounds become one.

    The feasible set is unchanged: f_i(x) <= b_i iff f_i(x)/b_i <= 1.
    """
    scaled = []
    for i, (posy, bound) in enumerate(g.constraints):
        if not math.isfinite(bound) or bound <= 0.0:
            raise GpDomainError(f"constraint {i}: bound {bound!r} must be positive")
        scaled.append(
            Posynomial(
                tuple(Monomial(t.coefficient / bound, t.exponents) for t in posy.terms)
            )
        )
    return StandardGp(g.variables, g.objective, tuple(scaled))


def _check_posynomial(posy: Posynomial, n: int, where: str, out: list[str]) -> None:
    if not posy.terms:
        out.append(f"{where}: has no terms")
    for t, term in enumerate(posy.terms):
        if not math.isfinite(term.coefficient) or term.coefficient <= 0.0:
            out.append(
                f"{where} term {t}: coefficient {term.coefficient!r} is not positive"
            )
        if len(term.exponents) != n:
            out.append(
                f"{where} term {t}: {len(term.exponents)} exponents for {n} variables"
            )
        for j, e in enumerate(term.exponents):
            if not math.isfinite(e):
                out.append(f"{where} term {t}: exponent {j} is not finite")


def validate(g: GpProblem) -> list[str]:
    """Collect invariant violations; an empty list means the problem is well formed.

    Diagnostics only: nothing is raised here.
    """
    out: list[str] = []
    n = g.variable_count
    for pos, var in enumerate(g.variables):
        if var.index != pos:
            out.append(f"variable {var.name!r}: index {var.index} at position {pos}")
    names = [v.name for v in g.variables]
    if len(set(names)) != len(names):
        out.append("variable names are not unique")
    _check_posynomial(g.objective, n, "objective", out)
    for i, (posy, bound) in enumerate(g.constraints):
        _check_posynomial(posy, n, f"constraint {i}", out)
        if not math.isfinite(bound) or bound <= 0.0:
            out.append(f"constraint {i}: bound {bound!r} is not positive")
    return out
