"""Posynomial geometric programming with discrete candidate selection.

Solves standard-form GPs through their linearly constrained dual and handles
problems whose coefficients or exponents are picked from small candidate sets
by enumerating binary selector assignments exactly.
"""

from .dual import (
    DualProgram,
    block_lambdas,
    build_dual,
    degree_of_difficulty,
    dual_objective,
    log_dual_objective,
)
from .oracle import NoFeasiblePointError, OracleResult, brute_force_oracle
from .posynomial import (
    GpDomainError,
    GpProblem,
    Monomial,
    Posynomial,
    StandardGp,
    VariableIndex,
    evaluate,
    make_posynomial,
    make_problem,
    make_variables,
    standardize,
    validate,
)
from .problem_io import (
    FORMAT_TAG,
    ProblemSemanticError,
    ProblemSyntaxError,
    as_choice_gp,
    parse_problem,
    parse_problem_text,
    serialize_problem,
)
from .selectors import (
    AssignmentOutcome,
    CandidateSet,
    ChoiceGp,
    ChoiceSolveReport,
    ExpansionRejected,
    Role,
    SetRef,
    TermTemplate,
    case_constraint_violations,
    expand,
    is_valid_assignment,
    resolve_choice,
    selector_polynomial,
    solve_choice,
    valid_assignments,
    validate_choice_gp,
)
from .solver import (
    DualSolution,
    KktResiduals,
    ReconstructionError,
    SolveReport,
    SolverSettings,
    Status,
    recover_primal,
    solve,
    solve_dual,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentOutcome",
    "CandidateSet",
    "ChoiceGp",
    "ChoiceSolveReport",
    "DualProgram",
    "DualSolution",
    "ExpansionRejected",
    "FORMAT_TAG",
    "GpDomainError",
    "GpProblem",
    "KktResiduals",
    "Monomial",
    "NoFeasiblePointError",
    "OracleResult",
    "Posynomial",
    "ProblemSemanticError",
    "ProblemSyntaxError",
    "ReconstructionError",
    "Role",
    "SetRef",
    "SolveReport",
    "SolverSettings",
    "StandardGp",
    "Status",
    "TermTemplate",
    "VariableIndex",
    "as_choice_gp",
    "block_lambdas",
    "brute_force_oracle",
    "build_dual",
    "case_constraint_violations",
    "degree_of_difficulty",
    "dual_objective",
    "evaluate",
    "expand",
    "is_valid_assignment",
    "log_dual_objective",
    "make_posynomial",
    "make_problem",
    "make_variables",
    "parse_problem",
    "parse_problem_text",
    "recover_primal",
    "resolve_choice",
    "selector_polynomial",
    "serialize_problem",
    "solve",
    "solve_choice",
    "solve_dual",
    "standardize",
    "valid_assignments",
    "validate",
    "validate_choice_gp",
]
