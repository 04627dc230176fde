"""L1 norms, the two-sided bound on ||pi - f||_1, and the identities behind it."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

import numpy as np
import scipy.linalg

from ..core.errors import (
    DimensionMismatchError,
    NonStationaryError,
    ParameterError,
    SingularMatrixError,
)
from ..core.transition import (
    ArrayLike,
    ProbabilityVector,
    RowStochasticMatrix,
    apply_transposed,
    as_array,
    uniform_vector,
)
from .solver import check_damping, dense_operator

logger = logging.getLogger(__name__)

DEFAULT_SLACK = 1e-9
STATIONARY_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """One instance of the lower/upper sandwich on ``||pi - f||_1``."""
    c: float
    distance_vf: float
    distance_pif: float
    lower: float
    upper: float
    slack: float
    lower_holds: bool
    upper_holds: bool
    verdict: str  # pass, fail
    identity_defect: float

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class NormReport:
    """Computed versus expected L1 operator norms of ``I - cA^T`` and its inverse."""
    c: float
    norm_forward: float
    norm_inverse: float
    expected_forward: float
    expected_inverse: float
    deviation_forward: float
    deviation_inverse: float

    def within(self, slack: float) -> bool:
        return self.deviation_forward <= slack and self.deviation_inverse <= slack

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def l1_distance(x: ArrayLike, y: ArrayLike) -> float:
    """``sum_i |x_i - y_i|``."""
    xa, ya = as_array(x), as_array(y)
    if xa.shape != ya.shape:
        raise DimensionMismatchError(f"cannot compare shapes {xa.shape} and {ya.shape}")
    return float(np.abs(xa - ya).sum())


def lower_bound_factor(c: float) -> float:
    """``(1 - c) / (1 + c)``, the tightest contraction the lower bound allows."""
    c = check_damping(c)
    return (1.0 - c) / (1.0 + c)


def theorem_bounds(v: ProbabilityVector, f: ProbabilityVector, c: float) -> Tuple[float, float]:
    """Lower and upper bounds on ``||pi - f||_1`` for personalization ``v``.

    Returns:
        ``((1-c)/(1+c) ||v-f||_1, ||v-f||_1)``
    """
    factor = lower_bound_factor(c)
    distance = l1_distance(v, f)
    return factor * distance, distance


def stationarity_defect(a: RowStochasticMatrix, f: ArrayLike) -> float:
    """``||A^T f - f||_1``."""
    return l1_distance(apply_transposed(a, f), f)


def difference_identity_defect(
    a: RowStochasticMatrix,
    c: float,
    v: ArrayLike,
    f: ArrayLike,
    pi: ArrayLike,
) -> float:
    """``||(I - cA^T)(pi - f) - (1 - c)(v - f)||_1`` using only the sparse kernel."""
    c = check_damping(c)
    va, fa, pa = as_array(v), as_array(f), as_array(pi)
    if not va.shape == fa.shape == pa.shape == (a.n,):
        raise DimensionMismatchError(
            f"vectors of shapes {va.shape}, {fa.shape}, {pa.shape} against matrix of size {a.n}"
        )
    diff = pa - fa
    lhs = diff - c * apply_transposed(a, diff)
    return float(np.abs(lhs - (1.0 - c) * (va - fa)).sum())


def check_theorem(
    a: RowStochasticMatrix,
    c: float,
    v: ProbabilityVector,
    f: ProbabilityVector,
    pi: ProbabilityVector,
    slack: float = DEFAULT_SLACK,
) -> BoundReport:
    """Check the two-sided bound for one solved instance.

    Args:
        a: Row-stochastic matrix
        c: Damping constant
        v: Personalization vector
        f: Stationary vector of A^T (the degree distribution for graphs)
        pi: PageRank vector solved to a tolerance well below ``slack``
        slack: Absolute tolerance on each inequality

    Returns:
        BoundReport; verdict is pass iff both inequalities hold within slack
    """
    c = check_damping(c)
    if slack < 0:
        raise ParameterError(f"slack must be nonnegative, got {slack}")
    if not v.n == f.n == pi.n == a.n:
        raise DimensionMismatchError(
            f"vectors of sizes {v.n}, {f.n}, {pi.n} against matrix of size {a.n}"
        )

    defect = stationarity_defect(a, f)
    if defect > slack:
        raise NonStationaryError(defect, slack)

    lower, upper = theorem_bounds(v, f, c)
    distance_pif = l1_distance(pi, f)
    lower_holds = lower - slack <= distance_pif
    upper_holds = distance_pif <= upper + slack

    identity_defect = difference_identity_defect(a, c, v, f, pi)
    if identity_defect > slack:
        logger.warning("difference identity defect %.3e exceeds slack %.3e", identity_defect, slack)

    return BoundReport(
        c=c,
        distance_vf=upper,
        distance_pif=distance_pif,
        lower=lower,
        upper=upper,
        slack=slack,
        lower_holds=lower_holds,
        upper_holds=upper_holds,
        verdict="pass" if lower_holds and upper_holds else "fail",
        identity_defect=identity_defect,
    )


def norm_identities(a: RowStochasticMatrix, c: float) -> NormReport:
    """Dense check of ``||I - cA^T||_1 = 1 + c`` and ``||(I - cA^T)^{-1}||_1 = 1/(1 - c)``.

    The forward identity needs a zero diagonal, so only graph-derived
    matrices (or others without self-transitions) are accepted.
    """
    c = check_damping(c)
    if not a.has_zero_diagonal:
        raise ParameterError("norm identities assume a zero diagonal (no self-transitions)")

    operator = dense_operator(a, c)
    try:
        inverse = scipy.linalg.inv(operator)
    except scipy.linalg.LinAlgError as e:
        raise SingularMatrixError(f"I - cA^T is singular: {e}") from e

    norm_forward = float(np.linalg.norm(operator, 1))
    norm_inverse = float(np.linalg.norm(inverse, 1))
    expected_forward = 1.0 + c
    expected_inverse = 1.0 / (1.0 - c)
    return NormReport(
        c=c,
        norm_forward=norm_forward,
        norm_inverse=norm_inverse,
        expected_forward=expected_forward,
        expected_inverse=expected_inverse,
        deviation_forward=abs(norm_forward - expected_forward),
        deviation_inverse=abs(norm_inverse - expected_inverse),
    )


def stationary_distribution(
    a: RowStochasticMatrix,
    tol: float = STATIONARY_TOL,
    max_iter: int = 100_000,
) -> ProbabilityVector:
    """A nonnegative unit-mass f with ``A^T f = f`` for an arbitrary row-stochastic A.

    Iterates the lazy chain ``x <- (x + A^T x) / 2`` from uniform, which has
    the same fixed points as A^T but cannot oscillate on periodic chains.

    Raises:
        NonStationaryError: if ``||A^T f - f||_1 > tol`` after ``max_iter`` steps
    """
    x = uniform_vector(a.n).entries.copy()
    defect = stationarity_defect(a, x)
    for _ in range(max_iter):
        if defect <= tol:
            break
        x = 0.5 * (x + apply_transposed(a, x))
        x /= x.sum()
        defect = stationarity_defect(a, x)
    if defect > tol:
        raise NonStationaryError(defect, tol)
    return ProbabilityVector(x)
