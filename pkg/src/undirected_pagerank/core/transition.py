"""Row-stochastic transition matrix, probability vectors and the A^T x kernel."""

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatchError,
    InvalidGraphError,
    IsolatedVertexError,
    ParameterError,
    VectorError,
)
from .graph import Graph, degrees

ROW_SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9

ArrayLike = Union["ProbabilityVector", np.ndarray, list, tuple]


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Nonnegative vector with unit L1 norm (f, v and pi all live here).

    Inputs within 1e-9 of unit mass are rescaled once; anything further off is
    rejected. Negative entries are rejected exactly.
    """
    entries: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.entries, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise VectorError(f"expected a nonempty 1-d vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise VectorError("vector has non-finite entries")
        negative = np.flatnonzero(x < 0)
        if negative.size:
            i = int(negative[0])
            raise VectorError(f"negative entry {x[i]!r} at index {i}")

        total = float(x.sum())
        deviation = abs(total - 1.0)
        if deviation > RENORMALIZE_TOL:
            raise VectorError(f"entries sum to {total!r}, not 1")
        if deviation > ROW_SUM_TOL:
            x = x / total

        x.setflags(write=False)
        object.__setattr__(self, "entries", x)

    @property
    def n(self) -> int:
        return int(self.entries.size)

    def __len__(self) -> int:
        return self.n

    def tolist(self) -> list:
        return self.entries.tolist()


def as_array(x: ArrayLike) -> np.ndarray:
    """View a ProbabilityVector or sequence as a float64 array."""
    if isinstance(x, ProbabilityVector):
        return x.entries
    return np.asarray(x, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class RowStochasticMatrix:
    """Row-compressed row-stochastic matrix A.

    Graph-derived matrices keep a single weight ``1/d(v_i)`` per row in
    ``row_weights``; arbitrary row-stochastic matrices keep per-entry weights
    in ``data``. Exactly one of the two is set.
    """
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    row_weights: Optional[np.ndarray] = None
    data: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if (self.row_weights is None) == (self.data is None):
            raise ParameterError("exactly one of row_weights and data must be given")

        indptr = np.array(self.indptr, dtype=np.int64)
        indices = np.array(self.indices, dtype=np.int64)
        if indptr.shape != (self.n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
            raise ParameterError("indptr does not describe the index array")
        if indices.size and (indices.min() < 0 or indices.max() >= self.n):
            raise ParameterError("column index out of range")

        arrays = {"indptr": indptr, "indices": indices}
        if self.row_weights is not None:
            arrays["row_weights"] = np.array(self.row_weights, dtype=np.float64)
            if arrays["row_weights"].shape != (self.n,):
                raise ParameterError("row_weights must hold one weight per row")
        else:
            arrays["data"] = np.array(self.data, dtype=np.float64)
            if arrays["data"].shape != indices.shape:
                raise ParameterError("data must hold one weight per stored entry")

        for name, array in arrays.items():
            array.setflags(write=False)
            object.__setattr__(self, name, array)

        if np.any(self.weights <= 0):
            raise ParameterError("stored entries must be strictly positive")
        sums = self.row_sums()
        worst = int(np.argmax(np.abs(sums - 1.0)))
        if abs(sums[worst] - 1.0) > ROW_SUM_TOL:
            raise ParameterError(f"row {worst} sums to {sums[worst]!r}, not 1")

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "RowStochasticMatrix":
        """Compress a dense row-stochastic matrix (zeros are dropped)."""
        dense = np.asarray(matrix, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ParameterError(f"expected a square matrix, got shape {dense.shape}")
        if np.any(dense < 0):
            raise ParameterError("matrix entries must be nonnegative")
        csr = sp.csr_matrix(dense)
        csr.eliminate_zeros()
        csr.sort_indices()
        return cls(n=dense.shape[0], indptr=csr.indptr, indices=csr.indices, data=csr.data)

    @cached_property
    def row_lengths(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def row_of_entry(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.row_lengths)

    @cached_property
    def weights(self) -> np.ndarray:
        """Per-entry weights in storage order."""
        if self.data is not None:
            return self.data
        return np.repeat(self.row_weights, self.row_lengths)

    @cached_property
    def off_diagonal_weights(self) -> np.ndarray:
        return np.where(self.row_of_entry == self.indices, 0.0, self.weights)

    def row_sums(self) -> np.ndarray:
        return np.bincount(self.row_of_entry, weights=self.weights, minlength=self.n)

    def diagonal(self) -> np.ndarray:
        on_diagonal = self.row_of_entry == self.indices
        return np.bincount(
            self.row_of_entry[on_diagonal],
            weights=self.weights[on_diagonal],
            minlength=self.n,
        )

    @property
    def has_zero_diagonal(self) -> bool:
        return not np.any(self.row_of_entry == self.indices)

    def row(self, i: int) -> Dict[int, float]:
        """Stored entries of row ``i`` as ``{column: weight}``."""
        start, stop = self.indptr[i], self.indptr[i + 1]
        return dict(zip(self.indices[start:stop].tolist(), self.weights[start:stop].tolist()))

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.weights, self.indices, self.indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()


def transition_matrix(g: Graph) -> RowStochasticMatrix:
    """Degree-normalized adjacency A with ``a_ij = 1/d(v_i)`` for each edge."""
    d = degrees(g).d
    isolated = np.flatnonzero(d == 0)
    if isolated.size:
        raise IsolatedVertexError(int(isolated[0]))
    b = g.adjacency
    return RowStochasticMatrix(
        n=g.n,
        indptr=b.indptr,
        indices=b.indices,
        row_weights=1.0 / d.astype(np.float64),
    )


def degree_distribution(g: Graph) -> ProbabilityVector:
    """The degree-distribution vector f with ``f_i = d(v_i) / 2|E|``."""
    deg = degrees(g)
    if deg.m2 == 0:
        raise InvalidGraphError("degree distribution needs at least one edge")
    return ProbabilityVector(deg.d / deg.m2)


def uniform_vector(n: int) -> ProbabilityVector:
    if n < 1:
        raise ParameterError(f"vector length must be positive, got {n}")
    return ProbabilityVector(np.full(n, 1.0 / n))


def point_mass(n: int, vertex: int) -> ProbabilityVector:
    if not 0 <= vertex < n:
        raise ParameterError(f"point mass vertex {vertex} outside 0..{n - 1}")
    x = np.zeros(n)
    x[vertex] = 1.0
    return ProbabilityVector(x)


def dirichlet_random(n: int, seed: int) -> ProbabilityVector:
    """Flat-Dirichlet sample: n standard exponentials in vertex order, normalized."""
    if n < 1:
        raise ParameterError(f"vector length must be positive, got {n}")
    draws = np.random.default_rng(seed).standard_exponential(n)
    return ProbabilityVector(draws / draws.sum())


def apply_transposed(
    a: RowStochasticMatrix,
    x: ArrayLike,
    *,
    exclude_diagonal: bool = False,
) -> np.ndarray:
    """Compute ``y = A^T x`` as a scatter over the rows of A.

    Accumulation runs in ascending row index, so identical inputs give
    bit-identical outputs. The entry sum of ``x`` is preserved.

    Args:
        a: Row-stochastic matrix
        x: Vector of length ``a.n``
        exclude_diagonal: Skip the diagonal entries of A (Jacobi splitting)

    Returns:
        New float64 array
    """
    values = as_array(x)
    if values.shape != (a.n,):
        raise DimensionMismatchError(f"vector of shape {values.shape} against matrix of size {a.n}")
    weights = a.off_diagonal_weights if exclude_diagonal else a.weights
    contributions = np.repeat(values, a.row_lengths) * weights
    return np.bincount(a.indices, weights=contributions, minlength=a.n)


def random_row_stochastic(n: int, density: float, seed: int) -> RowStochasticMatrix:
    """Random row-stochastic matrix, not necessarily symmetric-structured.

    Every row keeps at least one entry; diagonal entries are allowed.
    """
    if n < 1:
        raise ParameterError(f"matrix size must be positive, got {n}")
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    values = 1.0 - rng.random((n, n))  # (0, 1]
    mask = rng.random((n, n)) < density
    mask[np.arange(n), rng.integers(0, n, size=n)] = True
    dense = np.where(mask, values, 0.0)
    return RowStochasticMatrix.from_dense(dense / dense.sum(axis=1, keepdims=True))


class Personalization(str, Enum):
    """Ways to choose the personalization vector v."""
    UNIFORM = "uniform"
    DEGREE = "degree"
    POINT_MASS = "point_mass"
    DIRICHLET_RANDOM = "dirichlet_random"
    FILE = "file"


@dataclass(frozen=True)
class PersonalizationSpec:
    """Parsed personalization source.

    Grammar: ``uniform``, ``degree``, ``point_mass[:vertex]``,
    ``dirichlet_random[:seed]`` or ``file:<path>``.
    """
    kind: Personalization
    vertex: int = 0
    seed: Optional[int] = None
    path: Optional[Path] = None

    @classmethod
    def parse(cls, text: str) -> "PersonalizationSpec":
        name, sep, arg = text.strip().partition(":")
        try:
            kind = Personalization(name)
        except ValueError:
            known = ", ".join(k.value for k in Personalization)
            raise ParameterError(f"unknown personalization {text!r} (known: {known})") from None

        if kind is Personalization.FILE:
            if not arg:
                raise ParameterError("file personalization needs a path: file:<path>")
            return cls(kind, path=Path(arg))
        if kind in (Personalization.UNIFORM, Personalization.DEGREE):
            if sep:
                raise ParameterError(f"{kind.value} takes no argument, got {text!r}")
            return cls(kind)

        if not arg:
            return cls(kind)
        try:
            value = int(arg)
        except ValueError:
            raise ParameterError(f"expected an integer argument in {text!r}") from None
        if value < 0:
            raise ParameterError(f"argument must be nonnegative in {text!r}")
        if kind is Personalization.POINT_MASS:
            return cls(kind, vertex=value)
        return cls(kind, seed=value)

    def build(self, f: ProbabilityVector, seed: int = 0) -> ProbabilityVector:
        """Materialize v for a problem whose degree distribution is ``f``.

        Args:
            f: Degree distribution (fixes the dimension)
            seed: Instance seed, used by dirichlet_random without its own seed
        """
        n = f.n
        if self.kind is Personalization.UNIFORM:
            return uniform_vector(n)
        if self.kind is Personalization.DEGREE:
            return f
        if self.kind is Personalization.POINT_MASS:
            return point_mass(n, self.vertex)
        if self.kind is Personalization.DIRICHLET_RANDOM:
            return dirichlet_random(n, seed if self.seed is None else self.seed)

        v = load_vector(self.path)
        if v.n != n:
            raise DimensionMismatchError(f"{self.path} holds {v.n} entries, graph has {n} vertices")
        return v

    def __str__(self) -> str:
        if self.kind is Personalization.FILE:
            return f"file:{self.path}"
        if self.kind is Personalization.POINT_MASS:
            return f"point_mass:{self.vertex}"
        if self.kind is Personalization.DIRICHLET_RANDOM and self.seed is not None:
            return f"dirichlet_random:{self.seed}"
        return self.kind.value


def parse_vector(text: str) -> ProbabilityVector:
    """Parse a JSON array or plain text with one real per line."""
    stripped = text.strip()
    try:
        if stripped.startswith("["):
            values = json.loads(stripped)
        else:
            values = [
                float(line)
                for line in (raw.strip() for raw in stripped.splitlines())
                if line and not line.startswith("#")
            ]
    except ValueError as e:
        raise VectorError(f"cannot parse vector: {e}") from e
    return ProbabilityVector(values)


def load_vector(path: Union[str, Path]) -> ProbabilityVector:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise VectorError(f"cannot read {path}: {e}") from e
    return parse_vector(text)


def dump_vector(x: ArrayLike, fmt: str = "text") -> str:
    """Serialize a vector as plain text (one real per line) or a JSON array."""
    values = as_array(x).tolist()
    if fmt == "json":
        return json.dumps(values)
    return "".join(f"{value:.17g}\n" for value in values)
