"""Dual program of a standard-form GP: linear equality system and objective.

The dual associates one nonnegative weight with every primal term.  Weights of
the objective block must sum to one (normality); for every variable the
exponent-weighted sum over all terms, objective block included, must vanish
(orthogonality).  The dual objective is

    prod_k (c_k / w_k)^(w_k) * prod_i lambda_i^(lambda_i)

with c_k the standardized term coefficients and lambda_i the weight sum of
constraint block i.  Factors with w_k = 0 or lambda_i = 0 take their
continuous limit, one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .posynomial import GpDomainError, StandardGp


@dataclass(frozen=True)
class DualProgram:
    """Flattened dual data: one entry per primal term, objective block first.

    ``equality_matrix @ w = equality_rhs`` stacks the normality row on top of
    one orthogonality row per variable; ``equality_rhs`` is the first unit
    vector.
    """

    term_coefficients: np.ndarray  # (K,), strictly positive
    block_index: np.ndarray  # (K,), 0 for objective, i for constraint i
    exponent_matrix: np.ndarray  # (K, n)
    equality_matrix: np.ndarray  # (n + 1, K)
    equality_rhs: np.ndarray  # (n + 1,)
    block_sizes: tuple[int, ...]  # (T_0, T_1, ..., T_m)

    def __post_init__(self):
        for arr in (
            self.term_coefficients,
            self.block_index,
            self.exponent_matrix,
            self.equality_matrix,
            self.equality_rhs,
        ):
            arr.flags.writeable = False

    @property
    def term_count(self) -> int:
        return self.term_coefficients.shape[0]

    @property
    def variable_count(self) -> int:
        return self.exponent_matrix.shape[1]

    @property
    def constraint_count(self) -> int:
        return len(self.block_sizes) - 1

    @property
    def normality_row(self) -> np.ndarray:
        return self.equality_matrix[0]

    @property
    def orthogonality_rows(self) -> np.ndarray:
        return self.equality_matrix[1:]

    def block_slice(self, i: int) -> slice:
        start = sum(self.block_sizes[:i])
        return slice(start, start + self.block_sizes[i])

    def weight_labels(self) -> tuple[str, ...]:
        """Labels w{block}{term}, objective block first, 1-based term index."""
        labels = []
        for i, size in enumerate(self.block_sizes):
            labels.extend(f"w{i}{t + 1}" for t in range(size))
        return tuple(labels)


def build_dual(s: StandardGp) -> DualProgram:
    """Assemble the dual weight program of a standard-form GP."""
    coeffs: list[float] = []
    blocks: list[int] = []
    exps: list[tuple[float, ...]] = []
    sizes = [s.objective.term_count]
    for term in s.objective.terms:
        coeffs.append(term.coefficient)
        blocks.append(0)
        exps.append(term.exponents)
    for i, posy in enumerate(s.constraints, start=1):
        sizes.append(posy.term_count)
        for term in posy.terms:
            coeffs.append(term.coefficient)
            blocks.append(i)
            exps.append(term.exponents)

    n = s.variable_count
    k = len(coeffs)
    exponent_matrix = np.array(exps, dtype=float).reshape(k, n)
    block_index = np.array(blocks, dtype=int)
    equality = np.zeros((n + 1, k))
    equality[0, block_index == 0] = 1.0  # normality over the objective block
    equality[1:, :] = exponent_matrix.T  # orthogonality, objective included
    rhs = np.zeros(n + 1)
    rhs[0] = 1.0
    return DualProgram(
        term_coefficients=np.array(coeffs, dtype=float),
        block_index=block_index,
        exponent_matrix=exponent_matrix,
        equality_matrix=equality,
        equality_rhs=rhs,
        block_sizes=tuple(sizes),
    )


def degree_of_difficulty(s: StandardGp) -> int:
    """Total term count minus variable count minus one; may be negative."""
    return s.term_count - s.variable_count - 1


def _check_weights(d: DualProgram, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (d.term_count,):
        raise GpDomainError(
            f"weight vector has shape {w.shape}, expected ({d.term_count},)"
        )
    if np.any(w < 0.0) or not np.all(np.isfinite(w)):
        raise GpDomainError("weights must be finite and nonnegative")
    return w


def block_lambdas(d: DualProgram, w) -> np.ndarray:
    """Per-constraint-block weight sums lambda_i, i = 1..m."""
    w = np.asarray(w, dtype=float)
    return np.array(
        [w[d.block_slice(i)].sum() for i in range(1, len(d.block_sizes))]
    )


def dual_objective(d: DualProgram, w) -> float:
    """Product form of the dual objective; zero weights contribute factor one."""
    w = _check_weights(d, w)
    c = d.term_coefficients
    pos = w > 0.0
    value = float(np.prod((c[pos] / w[pos]) ** w[pos]))
    for lam in block_lambdas(d, w):
        if lam > 0.0:
            value *= lam**lam
    return value


def log_dual_objective(d: DualProgram, w) -> tuple[float, np.ndarray]:
    """Log of the dual objective and its gradient.

    Value uses the convention 0*log(0) = 0.  Gradient components are
    log(c_k) - log(w_k) - 1 on the objective block and
    log(c_k) - log(w_k) + log(lambda_i) on constraint block i; they diverge
    to +inf as w_k -> 0.
    """
    w = _check_weights(d, w)
    c = d.term_coefficients
    with np.errstate(divide="ignore"):
        logw = np.log(w)
        logc = np.log(c)
        pos = w > 0.0
        value = float(np.sum(w[pos] * (logc[pos] - logw[pos])))
        grad = logc - logw - 1.0
        for i in range(1, len(d.block_sizes)):
            sl = d.block_slice(i)
            lam = float(w[sl].sum())
            if lam > 0.0:
                value += lam * np.log(lam)
                grad[sl] += np.log(lam) + 1.0
            else:
                grad[sl] = np.inf
    return value, grad


def log_dual_hessian(d: DualProgram, w) -> np.ndarray:
    """Hessian of log_dual_objective at a strictly positive weight vector."""
    w = _check_weights(d, w)
    if np.any(w == 0.0):
        raise GpDomainError("hessian requires strictly positive weights")
    h = np.diag(-1.0 / w)
    for i in range(1, len(d.block_sizes)):
        sl = d.block_slice(i)
        lam = float(w[sl].sum())
        h[sl, sl] += 1.0 / lam
    return h
