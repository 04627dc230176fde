"""PageRank solvers: power iteration, Jacobi on the linear system, dense oracle."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np
import scipy.linalg

from ..core.errors import (
    DenseCapError,
    DimensionMismatchError,
    ParameterError,
    SingularMatrixError,
)
from ..core.transition import (
    ProbabilityVector,
    RowStochasticMatrix,
    apply_transposed,
)

logger = logging.getLogger(__name__)

DENSE_CAP = 64
DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000
PROGRESS_EVERY = 1000
STALL_WINDOW = 50


def check_damping(c: float) -> float:
    """Validate ``0 < c < 1`` and return it as a float."""
    c = float(c)
    if not 0.0 < c < 1.0:
        raise ParameterError(f"damping constant must lie strictly between 0 and 1, got {c}")
    return c


class SolverMethod(str, Enum):
    """Which solver produced a result."""
    POWER = "power"
    LINEAR = "linear"
    DENSE_ORACLE = "dense_oracle"

    @classmethod
    def parse(cls, name: str) -> "SolverMethod":
        if name == "oracle":
            return cls.DENSE_ORACLE
        try:
            return cls(name)
        except ValueError:
            raise ParameterError(f"unknown method {name!r} (power, linear, oracle)") from None


@dataclass(frozen=True)
class PageRankConfig:
    """Damping constant and stopping rule shared by the iterative solvers."""
    c: float = DEFAULT_DAMPING
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", check_damping(self.c))
        if not self.tol > 0:
            raise ParameterError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be at least 1, got {self.max_iter}")

    @property
    def threshold(self) -> float:
        """Stopping threshold ``tol * (1 - c)`` on the per-step L1 quantity."""
        return self.tol * (1.0 - self.c)

    def rounding_floor(self, n: int) -> float:
        """Step size below which ``n``-vector iterates are indistinguishable from rounding."""
        return n * float(np.finfo(float).eps) / (1.0 - self.c)


@dataclass(frozen=True, eq=False)
class PageRankResult:
    """Solved PageRank vector with convergence diagnostics.

    ``history`` holds the per-iteration L1 quantity tested against the
    stopping threshold: successive differences for power iteration, residual
    norms for Jacobi.
    """
    pi: ProbabilityVector
    iterations: int
    residual: float
    method: SolverMethod
    converged: bool = True
    history: Tuple[float, ...] = field(default=(), repr=False)


def residual_norm(a: RowStochasticMatrix, c: float, v: ProbabilityVector, x: np.ndarray) -> float:
    """``||(I - cA^T) x - (1 - c) v||_1``."""
    return float(np.abs(x - c * apply_transposed(a, x) - (1.0 - c) * v.entries).sum())


def _check_dimensions(a: RowStochasticMatrix, v: ProbabilityVector) -> None:
    if v.n != a.n:
        raise DimensionMismatchError(
            f"personalization vector has {v.n} entries, matrix is {a.n}x{a.n}"
        )


def _finish(
    a: RowStochasticMatrix,
    cfg: PageRankConfig,
    v: ProbabilityVector,
    x: np.ndarray,
    iterations: int,
    converged: bool,
    history: list,
    method: SolverMethod,
) -> PageRankResult:
    # One multiplicative correction; iterates themselves are never rescaled.
    pi = ProbabilityVector(x / x.sum())
    residual = residual_norm(a, cfg.c, v, pi.entries)
    if not converged:
        logger.warning(
            "%s solver stopped after %d iterations without reaching tol=%g (last step %.3e)",
            method.value, iterations, cfg.tol, history[-1] if history else float("nan"),
        )
    return PageRankResult(
        pi=pi,
        iterations=iterations,
        residual=residual,
        method=method,
        converged=converged,
        history=tuple(history),
    )


def pagerank_power(
    a: RowStochasticMatrix,
    cfg: PageRankConfig,
    v: ProbabilityVector,
) -> PageRankResult:
    """Power iteration on the damped operator ``cA^T + (1-c) v 1^T``.

    Starts from ``x0 = v`` and iterates ``x <- c A^T x + (1-c) v``. Every
    iterate keeps unit entry sum since A^T preserves sums. Stops once
    ``||x_{k+1} - x_k||_1 <= tol (1 - c)``, or once the step sits below the
    rounding floor ``n eps / (1 - c)`` and has not set a new minimum for
    ``STALL_WINDOW`` iterations. The second rule catches the slowly damped
    oscillation of bipartite graphs at c near 1, whose step levels off at
    rounding noise above ``tol (1 - c)``.

    Args:
        a: Row-stochastic matrix
        cfg: Damping and stopping rule
        v: Personalization vector

    Returns:
        PageRankResult; ``converged`` is False if ``max_iter`` ran out
    """
    _check_dimensions(a, v)
    c, teleport = cfg.c, (1.0 - cfg.c) * v.entries
    x = v.entries.copy()
    floor = cfg.rounding_floor(a.n)
    history = []
    converged = False
    best, stalled = float("inf"), 0

    for k in range(1, cfg.max_iter + 1):
        x_next = c * apply_transposed(a, x) + teleport
        delta = float(np.abs(x_next - x).sum())
        history.append(delta)
        x = x_next
        if k % PROGRESS_EVERY == 0:
            logger.debug("power iteration %d: step %.3e", k, delta)
        if delta <= cfg.threshold:
            converged = True
            break
        if delta < best:
            best, stalled = delta, 0
        else:
            stalled += 1
        if stalled >= STALL_WINDOW and delta <= floor:
            logger.debug("power iteration %d: step %.3e stalled at rounding level", k, delta)
            converged = True
            break

    return _finish(a, cfg, v, x, k, converged, history, SolverMethod.POWER)


def pagerank_linear(
    a: RowStochasticMatrix,
    cfg: PageRankConfig,
    v: ProbabilityVector,
) -> PageRankResult:
    """Jacobi iteration on ``(I - cA^T) pi = (1 - c) v``.

    The diagonal of ``I - cA^T`` is ``1 - c a_ii`` (just 1 for graph-derived
    A). Starting from zero, the iterates of a zero-diagonal A are exactly the
    partial sums of the Neumann series ``(1-c) sum_k c^k (A^T)^k v``. Stops
    once the L1 residual is at most ``tol (1 - c)``. Any row-stochastic A is
    accepted.

    Args:
        a: Row-stochastic matrix
        cfg: Damping and stopping rule
        v: Personalization vector

    Returns:
        PageRankResult; ``converged`` is False if ``max_iter`` ran out
    """
    _check_dimensions(a, v)
    c, rhs = cfg.c, (1.0 - cfg.c) * v.entries
    diagonal = 1.0 - c * a.diagonal()
    x = np.zeros(a.n)
    history = []
    converged = False

    for k in range(1, cfg.max_iter + 1):
        x_next = (rhs + c * apply_transposed(a, x, exclude_diagonal=True)) / diagonal
        # residual of the previous iterate: D (x_next - x)
        residual = float(np.abs(diagonal * (x_next - x)).sum())
        history.append(residual)
        x = x_next
        if k % PROGRESS_EVERY == 0:
            logger.debug("jacobi iteration %d: residual %.3e", k, residual)
        if residual <= cfg.threshold:
            converged = True
            break

    return _finish(a, cfg, v, x, k, converged, history, SolverMethod.LINEAR)


def dense_operator(a: RowStochasticMatrix, c: float) -> np.ndarray:
    """Materialize ``I - cA^T`` densely, within the dense size cap."""
    if a.n > DENSE_CAP:
        raise DenseCapError(f"dense evaluation is capped at n <= {DENSE_CAP}, got n = {a.n}")
    return np.eye(a.n) - c * a.to_dense().T


def pagerank_dense_oracle(a: RowStochasticMatrix, c: float, v: ProbabilityVector) -> np.ndarray:
    """Ground-truth ``pi = (1-c) (I - cA^T)^{-1} v`` by LU with partial pivoting.

    Only for desk-scale checks (n <= 64).
    """
    c = check_damping(c)
    _check_dimensions(a, v)
    operator = dense_operator(a, c)
    try:
        solution = scipy.linalg.solve(operator, v.entries)
    except scipy.linalg.LinAlgError as e:
        raise SingularMatrixError(f"I - cA^T is singular: {e}") from e
    return (1.0 - c) * solution


def pagerank(
    a: RowStochasticMatrix,
    cfg: PageRankConfig,
    v: ProbabilityVector,
    method: SolverMethod = SolverMethod.POWER,
) -> PageRankResult:
    """Solve with the chosen method; the oracle is wrapped as a result too."""
    method = SolverMethod(method)
    if method is SolverMethod.POWER:
        return pagerank_power(a, cfg, v)
    if method is SolverMethod.LINEAR:
        return pagerank_linear(a, cfg, v)

    x = np.maximum(pagerank_dense_oracle(a, cfg.c, v), 0.0)
    return _finish(a, cfg, v, x, 0, True, [], SolverMethod.DENSE_ORACLE)
