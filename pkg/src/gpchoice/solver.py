"""Concave maximization of the log dual over its affine set, primal recovery.

The dual of a posynomial GP maximizes a concave function over
{A w = e1, w >= 0}.  We parameterize the affine set through an orthonormal
null-space basis and run a damped Newton ascent with a fraction-to-boundary
safeguard; equality residuals stay at rounding level because iterates never
leave the affine set.  An interior stationary point is accepted outright
(global by concavity).  When the maximum lies on the boundary, a log-barrier
continuation rides the central path to the optimal face, since plain Newton
can lock onto a suboptimal face.  With degree of difficulty zero the unique
algebraic solution is obtained by a direct linear solve.

The primal minimizer is recovered from optimal weights through the log-linear
relations: objective terms satisfy term_value = w_0t * Z, and terms of an
active constraint block satisfy term_value = w_it / lambda_i.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from .dual import (
    DualProgram,
    block_lambdas,
    build_dual,
    log_dual_hessian,
    log_dual_objective,
)
from .posynomial import GpDomainError, StandardGp, evaluate

# log value beyond which the dual is declared unbounded (exp would overflow)
_LOG_VALUE_UNBOUNDED = 350.0
_INTERIOR_MIN = 1e-9
# weights may converge to a boundary face; flooring them far below
# boundary_eps keeps the Hessian finite without affecting any contract
_WEIGHT_FLOOR = 1e-150


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


class ReconstructionError(RuntimeError):
    """Primal recovery system is inconsistent beyond tolerance."""


@dataclass(frozen=True)
class SolverSettings:
    feasibility_tol: float = 1e-10
    stationarity_tol: float = 1e-8
    boundary_eps: float = 1e-12
    max_iterations: int = 10_000

    def __post_init__(self):
        for name in ("feasibility_tol", "stationarity_tol", "boundary_eps"):
            if getattr(self, name) <= 0.0:
                raise GpDomainError(f"{name} must be positive")
        if self.max_iterations <= 0:
            raise GpDomainError("max_iterations must be positive")


@dataclass(frozen=True)
class DualSolution:
    status: Status
    weights: np.ndarray
    lambdas: np.ndarray
    objective_value: float
    equality_residual: float
    stationarity: float
    iterations: int

    def __post_init__(self):
        self.weights.flags.writeable = False
        self.lambdas.flags.writeable = False


@dataclass(frozen=True)
class KktResiduals:
    equality: float
    stationarity: float
    primal_feasibility: float


@dataclass(frozen=True)
class SolveReport:
    status: Status
    primal_x: tuple[float, ...] | None
    dual: DualSolution
    objective_value: float | None
    duality_gap: float | None
    kkt_residuals: KktResiduals | None


def _project_onto_equalities(a: np.ndarray, b: np.ndarray, w: np.ndarray) -> np.ndarray:
    delta, *_ = np.linalg.lstsq(a, b - a @ w, rcond=None)
    return w + delta


def _face_norm(face_basis: np.ndarray, grad: np.ndarray, active: np.ndarray) -> float:
    if face_basis.shape[1] == 0:
        return 0.0
    proj = face_basis @ (face_basis.T @ grad)
    mask = ~active
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(proj[mask])))


def _stationarity_measure(
    a: np.ndarray,
    nullsp: np.ndarray,
    grad: np.ndarray,
    w: np.ndarray,
    boundary_eps: float,
) -> float:
    """Infinity norm of the projected gradient on interior coordinates.

    The projection is onto the null space of the equality system together
    with the bounds active at w (coordinates at or below boundary_eps), the
    face the iterate lives on; at a constrained maximizer this projection
    vanishes on the interior coordinates.
    """
    active = w <= boundary_eps
    if active.any():
        nullsp = scipy.linalg.null_space(np.vstack([a, np.eye(len(w))[active]]))
    return _face_norm(nullsp, grad, active)


def _equal_block_start(d: DualProgram) -> np.ndarray:
    w = np.empty(d.term_count)
    for i, size in enumerate(d.block_sizes):
        w[d.block_slice(i)] = 1.0 / size
    return w


def _phase_one(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Maximize the smallest weight over {A w = b, w >= 0}; None if empty."""
    k = a.shape[1]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_eq = np.hstack([a, np.zeros((a.shape[0], 1))])
    a_ub = np.hstack([-np.eye(k), np.ones((k, 1))])  # s - w_k <= 0
    bounds = [(0.0, None)] * k + [(None, 1.0)]
    res = linprog(
        c, A_ub=a_ub, b_ub=np.zeros(k), A_eq=a_eq, b_eq=b, bounds=bounds,
        method="highs",
    )
    if not res.success:
        return None
    return res.x


def _coordinate_max(a: np.ndarray, b: np.ndarray, k: int) -> float:
    c = np.zeros(a.shape[1])
    c[k] = -1.0
    res = linprog(
        c, A_eq=a, b_eq=b, bounds=[(0.0, 1e6)] * a.shape[1], method="highs"
    )
    return float(-res.fun) if res.success else 0.0


def _pocs_interior(
    a: np.ndarray, b: np.ndarray, w: np.ndarray, margin: float
) -> np.ndarray | None:
    """Alternate projections between {A w = b} and {w >= margin}."""
    pinv = np.linalg.pinv(a)
    particular = pinv @ b
    for _ in range(60):
        w = np.maximum(w, margin)
        w = w - pinv @ (a @ w) + particular
        if np.min(w) >= 0.5 * margin:
            return w
    return None


def _starting_point(d: DualProgram) -> np.ndarray | str:
    """Strictly feasible interior start, or 'infeasible' / 'reduce'."""
    a, b = d.equality_matrix, d.equality_rhs
    w = _project_onto_equalities(a, b, _equal_block_start(d))
    if np.min(w) >= 1e-6:
        return w
    for margin in (1e-2, 1e-4, 1e-6):
        found = _pocs_interior(a, b, w, margin)
        if found is not None:
            return found
    sol = _phase_one(a, b)
    if sol is None:
        return "infeasible"
    w, slack = sol[:-1], sol[-1]
    if slack <= _INTERIOR_MIN:
        return "reduce"
    # linprog satisfies equalities only to its own tolerance; tighten by
    # alternating projection and clipping
    for _ in range(5):
        w = _project_onto_equalities(a, b, w)
        if np.min(w) >= 0.1 * slack:
            return w
        w = np.maximum(w, 0.25 * slack)
    return "reduce"


def _reduced_program(d: DualProgram, keep: np.ndarray) -> DualProgram:
    sizes = tuple(
        int(np.count_nonzero(keep[d.block_slice(i)]))
        for i in range(len(d.block_sizes))
    )
    return DualProgram(
        term_coefficients=d.term_coefficients[keep].copy(),
        block_index=d.block_index[keep].copy(),
        exponent_matrix=d.exponent_matrix[keep].copy(),
        equality_matrix=d.equality_matrix[:, keep].copy(),
        equality_rhs=d.equality_rhs.copy(),
        block_sizes=sizes,
    )


def _solve_reduced(d: DualProgram, settings: SolverSettings) -> DualSolution:
    """Drop weights that every feasible point forces to zero, then re-solve."""
    a, b = d.equality_matrix, d.equality_rhs
    keep = np.array(
        [_coordinate_max(a, b, k) > _INTERIOR_MIN for k in range(d.term_count)]
    )
    if keep.all() or not keep.any():
        return _failure(d, Status.ITERATION_LIMIT)
    inner = solve_dual(_reduced_program(d, keep), settings)
    weights = np.zeros(d.term_count)
    weights[keep] = inner.weights
    return _finish(d, weights, settings, inner.status, inner.iterations)


def _newton_step(hu: np.ndarray, gu: np.ndarray) -> np.ndarray:
    """Ascent direction from the (negative definite) reduced Hessian."""
    neg = -(hu + hu.T) / 2.0
    ridge = 0.0
    scale = max(1.0, float(np.max(np.abs(neg))))
    for _ in range(6):
        try:
            factor = scipy.linalg.cho_factor(neg + ridge * np.eye(len(gu)))
            return scipy.linalg.cho_solve(factor, gu)
        except (np.linalg.LinAlgError, ValueError):
            ridge = max(10.0 * ridge, 1e-12 * scale)
    return gu  # steepest ascent fallback


def _failure(d: DualProgram, status: Status, iterations: int = 0) -> DualSolution:
    return DualSolution(
        status=status,
        weights=np.zeros(d.term_count),
        lambdas=np.zeros(d.constraint_count),
        objective_value=float("nan"),
        equality_residual=float("inf"),
        stationarity=float("inf"),
        iterations=iterations,
    )


def _finish(
    d: DualProgram,
    w: np.ndarray,
    settings: SolverSettings,
    status: Status,
    iterations: int,
    nullsp: np.ndarray | None = None,
) -> DualSolution:
    a, b = d.equality_matrix, d.equality_rhs
    residual = float(np.max(np.abs(a @ w - b)))
    value, grad = log_dual_objective(d, w)
    if nullsp is None:
        nullsp = scipy.linalg.null_space(a)
    stationarity = _stationarity_measure(a, nullsp, grad, w, settings.boundary_eps)
    if status is Status.OPTIMAL and (
        residual > settings.feasibility_tol
        or stationarity > settings.stationarity_tol
    ):
        status = Status.ITERATION_LIMIT
    return DualSolution(
        status=status,
        weights=w,
        lambdas=block_lambdas(d, w),
        objective_value=float(np.exp(value)),
        equality_residual=residual,
        stationarity=stationarity,
        iterations=iterations,
    )


def _barrier_eval(
    d: DualProgram, w: np.ndarray, mu: float
) -> tuple[float, float, np.ndarray]:
    """(raw log dual value, barrier-augmented value, augmented gradient)."""
    raw, grad = log_dual_objective(d, w)
    if mu == 0.0:
        return raw, raw, grad
    return raw, raw + mu * float(np.sum(np.log(w))), grad + mu / w


def _newton_phase(
    d: DualProgram,
    a: np.ndarray,
    b: np.ndarray,
    nullsp: np.ndarray,
    w: np.ndarray,
    settings: SolverSettings,
    mu: float,
    tol: float,
    max_iterations: int,
) -> tuple[np.ndarray, Status, int]:
    """Damped Newton ascent of the (optionally barrier-augmented) log dual.

    With mu > 0 iterates stay strictly interior.  With mu = 0 weights at
    boundary_eps are frozen and Newton works on the open face, which keeps
    the huge -1/w curvatures of frozen coordinates out of the reduced
    Hessian.
    """
    raw, value, grad = _barrier_eval(d, w, mu)
    status = Status.ITERATION_LIMIT
    iterations = 0
    k = d.term_count
    face_key: tuple[int, ...] | None = None
    face_basis = nullsp
    for iterations in range(1, max_iterations + 1):
        if raw > _LOG_VALUE_UNBOUNDED:
            return w, Status.UNBOUNDED, iterations

        active = (w <= settings.boundary_eps) if mu == 0.0 else (w < 0)
        key = tuple(np.flatnonzero(active))
        if key != face_key:
            face_key = key
            if key:
                face_basis = scipy.linalg.null_space(
                    np.vstack([a, np.eye(k)[active]])
                )
            else:
                face_basis = nullsp

        stationarity = _face_norm(face_basis, grad, active)
        if stationarity <= tol:
            status = Status.OPTIMAL
            break
        if face_basis.shape[1] == 0:
            status = Status.OPTIMAL
            break
        hess = log_dual_hessian(d, w)
        if mu > 0.0:
            hess[np.diag_indices_from(hess)] -= mu / w**2
        gu = face_basis.T @ grad
        du = _newton_step(face_basis.T @ hess @ face_basis, gu)
        if float(gu @ du) <= 0.0:
            du = gu

        accepted = False
        # the Newton direction can be ruined by near-boundary curvature;
        # plain ascent along the gradient still makes progress there
        for direction in (du, gu):
            slope = float(gu @ direction)
            if slope <= 0.0:
                continue
            dw = face_basis @ direction
            step = 1.0
            shrinking = dw < 0.0
            if shrinking.any():
                step = min(
                    step, 0.9995 * float(np.min(-w[shrinking] / dw[shrinking]))
                )
            # once the predicted gain sinks below value resolution,
            # sufficient decrease cannot be observed; judge trial steps by
            # stationarity instead
            plateau = 1e-13 * (1.0 + abs(value))
            for _ in range(60):
                trial = np.maximum(w + step * dw, _WEIGHT_FLOOR)
                if np.min(trial) > 0.0:
                    t_raw, t_value, t_grad = _barrier_eval(d, trial, mu)
                    predicted = 1e-4 * step * slope
                    if predicted > plateau:
                        ok = t_value >= value + predicted
                    else:
                        ok = _face_norm(face_basis, t_grad, active) < stationarity
                    if ok:
                        w, raw, value, grad = trial, t_raw, t_value, t_grad
                        accepted = True
                        break
                step *= 0.5
            if accepted:
                break
        if not accepted:
            break  # no further progress at floating precision

    return w, status, iterations


# continuation schedule for the interior barrier; the central path guides
# iterates to the optimal face before any weight is allowed to hit zero
_BARRIER_SCHEDULE = (1.0, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10)


def solve_dual(d: DualProgram, settings: SolverSettings | None = None) -> DualSolution:
    """Maximize the log dual objective over {A w = e1, w >= 0}.

    Returns a DualSolution whose status is OPTIMAL when the equality residual
    and the projected-gradient stationarity measure meet the settings,
    INFEASIBLE when the feasible set is empty, UNBOUNDED when the objective
    grows without bound along the feasible set, and ITERATION_LIMIT otherwise.
    """
    settings = settings or SolverSettings()
    a, b = d.equality_matrix, d.equality_rhs
    k = d.term_count

    # degree of difficulty zero: the equality system is square
    if k == a.shape[0]:
        try:
            w = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            w = None
        if w is not None and np.max(np.abs(a @ w - b)) <= 1e-8:
            if np.min(w) < -1e-9:
                return _failure(d, Status.INFEASIBLE)
            w = np.maximum(w, 0.0)
            w = _project_onto_equalities(a, b, w)
            if np.min(w) < 0.0:
                w = np.maximum(w, 0.0)
            return _finish(d, w, settings, Status.OPTIMAL, 0)

    start = _starting_point(d)
    if isinstance(start, str):
        if start == "infeasible":
            return _failure(d, Status.INFEASIBLE)
        return _solve_reduced(d, settings)

    nullsp = scipy.linalg.null_space(a)
    w = _project_onto_equalities(a, b, start)
    if nullsp.shape[1] == 0:
        # affine set is at most a single point
        if np.max(np.abs(a @ w - b)) > 1e-8:
            return _failure(d, Status.INFEASIBLE)
        if np.min(w) < -1e-9:
            return _failure(d, Status.INFEASIBLE)
        return _finish(d, np.maximum(w, 0.0), settings, Status.OPTIMAL, 0, nullsp)

    # fast path: plain Newton from the interior start; an interior stationary
    # point is the global maximum by concavity, so it can be accepted outright
    w_fast, status, used = _newton_phase(
        d, a, b, nullsp, w, settings,
        mu=0.0, tol=settings.stationarity_tol, max_iterations=200,
    )
    iterations = used
    if status is Status.UNBOUNDED:
        return _failure(d, Status.UNBOUNDED, iterations)
    if status is Status.OPTIMAL and np.min(w_fast) > settings.boundary_eps:
        return _finish(d, w_fast, settings, status, iterations, nullsp)

    # the fast path touched the boundary, where aggressive early steps can
    # lock onto a suboptimal face; rerun with barrier continuation, whose
    # central path reaches the optimal face before any weight hits zero
    for mu in _BARRIER_SCHEDULE:
        w, status, used = _newton_phase(
            d, a, b, nullsp, w, settings,
            mu=mu, tol=max(mu, settings.stationarity_tol),
            max_iterations=60,
        )
        iterations += used
        if status is Status.UNBOUNDED:
            return _failure(d, Status.UNBOUNDED, iterations)

    w, status, used = _newton_phase(
        d, a, b, nullsp, w, settings,
        mu=0.0, tol=settings.stationarity_tol,
        max_iterations=max(60, settings.max_iterations - iterations),
    )
    iterations += used
    if status is Status.UNBOUNDED:
        return _failure(d, Status.UNBOUNDED, iterations)
    return _finish(d, w, settings, status, iterations, nullsp)


def recover_primal(
    s: StandardGp, ds: DualSolution, settings: SolverSettings | None = None
) -> np.ndarray:
    """Recover the primal point from near-optimal dual weights.

    Solves, in least squares over y = log x, the stacked log-linear relations
    of objective terms and of terms in active constraint blocks; weights at or
    below boundary_eps contribute no equation.  Raises ReconstructionError
    when the residual of the stacked system exceeds 1e-6.
    """
    settings = settings or SolverSettings()
    d = build_dual(s)
    w = ds.weights
    z = ds.objective_value
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    sl = d.block_slice(0)
    for k in range(sl.start, sl.stop):
        if w[k] > settings.boundary_eps:
            rows.append(d.exponent_matrix[k])
            rhs.append(np.log(w[k] * z) - np.log(d.term_coefficients[k]))
    for i in range(1, len(d.block_sizes)):
        lam = ds.lambdas[i - 1]
        if lam <= settings.boundary_eps:
            continue  # inactive constraint, complementary slackness
        sl = d.block_slice(i)
        for k in range(sl.start, sl.stop):
            if w[k] > settings.boundary_eps:
                rows.append(d.exponent_matrix[k])
                rhs.append(np.log(w[k] / lam) - np.log(d.term_coefficients[k]))

    n = s.variable_count
    if n == 0:
        return np.empty(0)
    matrix = np.array(rows).reshape(len(rows), n)
    target = np.array(rhs)
    y, *_ = np.linalg.lstsq(matrix, target, rcond=None)
    residual = float(np.max(np.abs(matrix @ y - target))) if len(rhs) else 0.0
    if residual > 1e-6:
        raise ReconstructionError(
            f"log-linear recovery system inconsistent (residual {residual:.3e})"
        )
    return np.exp(y)


def solve(s: StandardGp, settings: SolverSettings | None = None) -> SolveReport:
    """Full dual-based solve: build dual, maximize, recover, check the gap."""
    settings = settings or SolverSettings()
    d = build_dual(s)
    ds = solve_dual(d, settings)
    if ds.status is not Status.OPTIMAL:
        return SolveReport(ds.status, None, ds, None, None, None)
    try:
        x = recover_primal(s, ds, settings)
    except ReconstructionError:
        return SolveReport(Status.ITERATION_LIMIT, None, ds, None, None, None)

    primal = evaluate(s.objective, x)
    gap = abs(primal - ds.objective_value) / primal
    worst = 0.0
    for posy in s.constraints:
        worst = max(worst, evaluate(posy, x) - 1.0)
    residuals = KktResiduals(
        equality=ds.equality_residual,
        stationarity=ds.stationarity,
        primal_feasibility=max(0.0, worst),
    )
    status = Status.OPTIMAL
    if gap > 1e-6 or worst > 1e-8:
        status = Status.ITERATION_LIMIT
    return SolveReport(
        status=status,
        primal_x=tuple(float(v) for v in x),
        dual=ds,
        objective_value=float(primal),
        duality_gap=float(gap),
        kkt_residuals=residuals,
    )
