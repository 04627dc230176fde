"""Deterministic graph generators and the ``family:params`` spec grammar."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import AssumptionUnsatisfiableError, GeneratorError
from .graph import Graph, is_bipartite, is_connected

logger = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 100
MAX_SEED = 2**64 - 1

Param = Union[int, float]


class Family(str, Enum):
    """Supported graph families."""
    PATH = "path"
    CYCLE = "cycle"
    COMPLETE = "complete"
    STAR = "star"
    COMPLETE_BIPARTITE = "complete_bipartite"
    K_REGULAR_CIRCULANT = "k_regular_circulant"
    ERDOS_RENYI = "erdos_renyi"


# Parameter count per family
_ARITY = {
    Family.PATH: 1,
    Family.CYCLE: 1,
    Family.COMPLETE: 1,
    Family.STAR: 1,
    Family.COMPLETE_BIPARTITE: 2,
    Family.K_REGULAR_CIRCULANT: 2,
    Family.ERDOS_RENYI: 2,
}


def _as_family(family: Union[Family, str]) -> Family:
    try:
        return Family(family)
    except ValueError:
        known = ", ".join(f.value for f in Family)
        raise GeneratorError(f"unknown graph family {family!r} (known: {known})") from None


def _positive_int(value: Param, name: str, minimum: int = 1) -> int:
    if isinstance(value, float) and not value.is_integer():
        raise GeneratorError(f"{name} must be an integer, got {value}")
    ivalue = int(value)
    if ivalue < minimum:
        raise GeneratorError(f"{name} must be >= {minimum}, got {ivalue}")
    return ivalue


def _path(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def _cycle(n: int) -> Graph:
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def _complete(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def _star(n: int) -> Graph:
    return Graph(n, frozenset((0, leaf) for leaf in range(1, n)))


def _complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def _circulant(n: int, k: int) -> Graph:
    """Vertex i joins i±1..i±k/2, plus the antipode i+n/2 when k is odd."""
    edges = set()
    for i in range(n):
        for offset in range(1, k // 2 + 1):
            j = (i + offset) % n
            edges.add((min(i, j), max(i, j)))
        if k % 2 == 1:
            j = (i + n // 2) % n
            edges.add((min(i, j), max(i, j)))
    return Graph(n, frozenset(edges))


def _erdos_renyi_draw(n: int, p: float, rng: np.random.Generator) -> Graph:
    """One G(n, p) sample.

    Pairs (i, j), i < j, are visited in lexicographic order with exactly one
    uniform draw each, so a seed fixes the edge set.
    """
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    return Graph(n, frozenset(zip(rows[keep].tolist(), cols[keep].tolist())))


def generate(
    family: Union[Family, str],
    params: Sequence[Param],
    seed: int = 0,
    *,
    require_assumption: bool = False,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> Graph:
    """Generate a graph of the given family.

    Args:
        family: Graph family
        params: Family parameters (``n`` for path/cycle/complete/star,
            ``a, b`` for complete_bipartite, ``n, k`` for k_regular_circulant,
            ``n, p`` for erdos_renyi)
        seed: 64-bit seed; only erdos_renyi consumes randomness
        require_assumption: Resample erdos_renyi until the graph is connected
            and non-bipartite
        max_retries: Sample budget when ``require_assumption`` is set

    Returns:
        Generated Graph
    """
    family = _as_family(family)
    expected = _ARITY[family]
    if len(params) != expected:
        raise GeneratorError(f"{family.value} takes {expected} parameter(s), got {len(params)}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise GeneratorError(f"seed must fit in 64 unsigned bits, got {seed}")

    if family is Family.PATH:
        return _path(_positive_int(params[0], "n"))
    if family is Family.CYCLE:
        return _cycle(_positive_int(params[0], "n", minimum=3))
    if family is Family.COMPLETE:
        return _complete(_positive_int(params[0], "n", minimum=2))
    if family is Family.STAR:
        return _star(_positive_int(params[0], "n", minimum=2))
    if family is Family.COMPLETE_BIPARTITE:
        return _complete_bipartite(_positive_int(params[0], "a"), _positive_int(params[1], "b"))

    if family is Family.K_REGULAR_CIRCULANT:
        n = _positive_int(params[0], "n", minimum=2)
        k = _positive_int(params[1], "k")
        if k >= n:
            raise GeneratorError(f"k_regular_circulant requires k < n, got n={n}, k={k}")
        if (n * k) % 2:
            raise GeneratorError(f"k_regular_circulant requires n*k even, got n={n}, k={k}")
        return _circulant(n, k)

    n = _positive_int(params[0], "n")
    p = float(params[1])
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"erdos_renyi requires p in [0, 1], got {p}")

    rng = np.random.default_rng(int(seed))
    if not require_assumption:
        return _erdos_renyi_draw(n, p, rng)

    # Each retry continues the same stream, so attempt t consumes the
    # (t+1)-th block of n(n-1)/2 draws.
    for attempt in range(max_retries):
        g = _erdos_renyi_draw(n, p, rng)
        if is_connected(g) and not is_bipartite(g):
            if attempt:
                logger.debug("erdos_renyi(%d, %g) accepted after %d resamples", n, p, attempt)
            return g
    raise AssumptionUnsatisfiableError(
        f"erdos_renyi:{n},{p:g} seed={seed}: no connected non-bipartite sample "
        f"in {max_retries} attempts"
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """A parsed ``family:p1,p2`` generator spec."""
    family: Family
    params: Tuple[Param, ...]

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        """Parse ``family:params``, e.g. ``path:3`` or ``erdos_renyi:30,0.2``."""
        name, sep, raw = text.strip().partition(":")
        if not sep or not raw:
            raise GeneratorError(f"generator spec {text!r} must look like family:params")
        family = _as_family(name.strip())

        params = []
        for token in raw.split(","):
            token = token.strip()
            try:
                params.append(int(token))
            except ValueError:
                try:
                    params.append(float(token))
                except ValueError:
                    raise GeneratorError(f"bad parameter {token!r} in {text!r}") from None

        if len(params) != _ARITY[family]:
            raise GeneratorError(
                f"{family.value} takes {_ARITY[family]} parameter(s), got {len(params)} in {text!r}"
            )
        return cls(family=family, params=tuple(params))

    @property
    def n(self) -> int:
        """Vertex count of graphs produced by this spec."""
        if self.family is Family.COMPLETE_BIPARTITE:
            return int(self.params[0]) + int(self.params[1])
        return int(self.params[0])

    @property
    def is_random(self) -> bool:
        return self.family is Family.ERDOS_RENYI

    def build(
        self,
        seed: int = 0,
        *,
        require_assumption: bool = False,
        max_retries: int = DEFAULT_MAX_RETRIES,
    ) -> Graph:
        return generate(
            self.family,
            self.params,
            seed,
            require_assumption=require_assumption,
            max_retries=max_retries,
        )

    def __str__(self) -> str:
        rendered = (f"{p:g}" if isinstance(p, float) else str(p) for p in self.params)
        return f"{self.family.value}:" + ",".join(rendered)
