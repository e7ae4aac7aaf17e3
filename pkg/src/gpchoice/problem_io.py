"""Versioned problem-file format: parse and serialize GP models.

Files are JSON objects with explicit per-variable exponent maps; no
expression syntax.  Coefficient and exponent slots are either numeric
literals or references of the form {"set": "<name>"} into the declared
candidate sets.  Unknown fields are rejected so files stay diffable and
mistakes surface early.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .posynomial import GpProblem, make_problem
from .selectors import (
    CandidateSet,
    ChoiceGp,
    Role,
    SetRef,
    Slot,
    TermTemplate,
    validate_choice_gp,
)

FORMAT_TAG = "gp-problem/1"


class ProblemSyntaxError(Exception):
    """File is not well-formed JSON (or is empty)."""


class ProblemSemanticError(Exception):
    """File parses but violates the problem schema."""


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ProblemSemanticError(
            f"{where}: unknown field(s) {sorted(unknown)}"
        )
    missing = required - set(obj)
    if missing:
        raise ProblemSemanticError(f"{where}: missing field(s) {sorted(missing)}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemSemanticError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ProblemSemanticError(f"{where}: {value!r} is not finite")
    return float(value)


def _slot(value: Any, where: str) -> Slot:
    if isinstance(value, dict):
        _require_keys(value, {"set"}, {"set"}, where)
        if not isinstance(value["set"], str):
            raise ProblemSemanticError(f"{where}: set reference must be a string")
        return SetRef(value["set"])
    return _number(value, where)


def _term(obj: Any, variables: list[str], where: str) -> TermTemplate:
    if not isinstance(obj, dict):
        raise ProblemSemanticError(f"{where}: expected an object")
    _require_keys(obj, {"coefficient", "exponents"}, {"coefficient"}, where)
    coefficient = _slot(obj["coefficient"], f"{where}.coefficient")
    if isinstance(coefficient, float) and coefficient <= 0.0:
        raise ProblemSemanticError(
            f"{where}.coefficient: literal coefficient must be positive"
        )
    exponents = obj.get("exponents", {})
    if not isinstance(exponents, dict):
        raise ProblemSemanticError(f"{where}.exponents: expected an object")
    exps: list[Slot] = [0.0] * len(variables)
    for name, value in exponents.items():
        if name not in variables:
            raise ProblemSemanticError(
                f"{where}.exponents: unknown variable {name!r}"
            )
        exps[variables.index(name)] = _slot(value, f"{where}.exponents.{name}")
    return TermTemplate(coefficient, tuple(exps))


_ROLES = {r.value: r for r in Role}


def _candidate_set(obj: Any, where: str) -> CandidateSet:
    if not isinstance(obj, dict):
        raise ProblemSemanticError(f"{where}: expected an object")
    _require_keys(obj, {"name", "role", "values"}, {"name", "role", "values"}, where)
    if not isinstance(obj["name"], str) or not obj["name"]:
        raise ProblemSemanticError(f"{where}.name: expected a non-empty string")
    if obj["role"] not in _ROLES:
        raise ProblemSemanticError(
            f"{where}.role: {obj['role']!r} is not one of {sorted(_ROLES)}"
        )
    if not isinstance(obj["values"], list) or not obj["values"]:
        raise ProblemSemanticError(f"{where}.values: expected a non-empty list")
    values = tuple(
        _number(v, f"{where}.values[{i}]") for i, v in enumerate(obj["values"])
    )
    if not 1 <= len(values) <= 8:
        raise ProblemSemanticError(
            f"{where}.values: {len(values)} candidates, supported sizes are 1..8"
        )
    role = _ROLES[obj["role"]]
    if role is not Role.EXPONENT:
        for i, v in enumerate(values):
            if v < 0.0:
                raise ProblemSemanticError(
                    f"{where}.values[{i}]: negative coefficient candidate {v}"
                )
    return CandidateSet(obj["name"], role, values)


def parse_problem_text(text: str, source: str = "<string>") -> ChoiceGp | GpProblem:
    """Parse a problem document; returns a plain GpProblem when no sets exist.

    Raises ProblemSyntaxError for malformed JSON and ProblemSemanticError for
    schema violations; messages carry the offending location.
    """
    if not text.strip():
        raise ProblemSyntaxError(f"{source}: file is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemSyntaxError(
            f"{source}:{e.lineno}:{e.colno}: {e.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ProblemSemanticError(f"{source}: top level must be an object")

    _require_keys(
        doc,
        {"format", "name", "variables", "objective", "constraints", "candidate_sets"},
        {"format", "variables", "objective"},
        source,
    )
    if doc["format"] != FORMAT_TAG:
        raise ProblemSemanticError(
            f"{source}.format: expected {FORMAT_TAG!r}, got {doc['format']!r}"
        )
    variables = doc["variables"]
    if (
        not isinstance(variables, list)
        or not variables
        or not all(isinstance(v, str) for v in variables)
    ):
        raise ProblemSemanticError(
            f"{source}.variables: expected a non-empty list of names"
        )
    if len(set(variables)) != len(variables):
        raise ProblemSemanticError(f"{source}.variables: names are not unique")

    if not isinstance(doc["objective"], list) or not doc["objective"]:
        raise ProblemSemanticError(f"{source}.objective: expected a non-empty list")
    objective = tuple(
        _term(t, variables, f"{source}.objective[{i}]")
        for i, t in enumerate(doc["objective"])
    )

    constraints = []
    for i, obj in enumerate(doc.get("constraints", [])):
        where = f"{source}.constraints[{i}]"
        if not isinstance(obj, dict):
            raise ProblemSemanticError(f"{where}: expected an object")
        _require_keys(obj, {"terms", "bound"}, {"terms"}, where)
        if not isinstance(obj["terms"], list) or not obj["terms"]:
            raise ProblemSemanticError(f"{where}.terms: expected a non-empty list")
        terms = tuple(
            _term(t, variables, f"{where}.terms[{j}]")
            for j, t in enumerate(obj["terms"])
        )
        bound = _number(obj.get("bound", 1.0), f"{where}.bound")
        if bound <= 0.0:
            raise ProblemSemanticError(f"{where}.bound: must be positive")
        constraints.append((terms, bound))

    sets = tuple(
        _candidate_set(s, f"{source}.candidate_sets[{i}]")
        for i, s in enumerate(doc.get("candidate_sets", []))
    )
    cg = ChoiceGp(tuple(variables), objective, tuple(constraints), sets)
    problems = validate_choice_gp(cg)
    if problems:
        raise ProblemSemanticError(f"{source}: " + "; ".join(problems))
    if not sets:
        return _as_plain_problem(cg)
    return cg


def parse_problem(path: str | Path) -> ChoiceGp | GpProblem:
    path = Path(path)
    return parse_problem_text(path.read_text(), source=str(path))


def _as_plain_problem(cg: ChoiceGp) -> GpProblem:
    def literal_terms(templates):
        return [
            (float(t.coefficient), [float(e) for e in t.exponents]) for t in templates
        ]

    return make_problem(
        literal_terms(cg.objective),
        [(literal_terms(ts), b) for ts, b in cg.constraints],
        cg.variable_names,
    )


def as_choice_gp(model: ChoiceGp | GpProblem) -> ChoiceGp:
    """View any parsed model as a template (plain problems get no sets)."""
    if isinstance(model, ChoiceGp):
        return model
    objective = tuple(
        TermTemplate(t.coefficient, t.exponents) for t in model.objective.terms
    )
    constraints = tuple(
        (tuple(TermTemplate(t.coefficient, t.exponents) for t in posy.terms), bound)
        for posy, bound in model.constraints
    )
    return ChoiceGp(model.variable_names, objective, constraints, ())


def serialize_problem(model: ChoiceGp | GpProblem, name: str | None = None) -> dict:
    """Document form of a model; parse(serialize(m)) reproduces m."""
    cg = as_choice_gp(model)
    variables = list(cg.variable_names)

    def slot_doc(slot: Slot):
        if isinstance(slot, SetRef):
            return {"set": slot.name}
        return slot

    def term_doc(t: TermTemplate):
        exps = {
            variables[j]: slot_doc(e)
            for j, e in enumerate(t.exponents)
            if isinstance(e, SetRef) or e != 0.0
        }
        return {"coefficient": slot_doc(t.coefficient), "exponents": exps}

    doc: dict = {"format": FORMAT_TAG}
    if name:
        doc["name"] = name
    doc["variables"] = variables
    doc["objective"] = [term_doc(t) for t in cg.objective]
    doc["constraints"] = [
        {"terms": [term_doc(t) for t in ts], "bound": b} for ts, b in cg.constraints
    ]
    if cg.sets:
        doc["candidate_sets"] = [
            {"name": s.name, "role": s.role.value, "values": list(s.candidates)}
            for s in cg.sets
        ]
    return doc
