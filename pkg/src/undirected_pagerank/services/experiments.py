"""Batch sweep harness for the bound checks."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
import yaml

from ..core.errors import (
    EmptyInputError,
    GeneratorError,
    IsolatedVertexError,
    PageRankError,
    ParameterError,
    SweepSpecError,
)
from ..core.generators import DEFAULT_MAX_RETRIES, MAX_SEED, GeneratorSpec
from ..core.transition import (
    Personalization,
    PersonalizationSpec,
    degree_distribution,
    transition_matrix,
)
from .analysis import DEFAULT_SLACK, check_theorem
from .solver import (
    DENSE_CAP,
    DEFAULT_TOL,
    PageRankConfig,
    SolverMethod,
    check_damping,
    pagerank,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "family", "n", "seed", "c", "strategy",
    "distance_vf", "distance_pif", "lower", "upper",
    "tightness_ratio", "converged", "verdict",
)

DEFAULT_FAMILIES = (
    "path:3", "path:20",
    "cycle:5", "cycle:20",
    "star:4", "star:20",
    "complete:3", "complete:10",
    "k_regular_circulant:20,4", "k_regular_circulant:50,4",
    "erdos_renyi:10,0.4", "erdos_renyi:50,0.1", "erdos_renyi:200,0.03",
)
DEFAULT_C_VALUES = (0.1, 0.5, 0.85, 0.99)
DEFAULT_STRATEGIES = ("uniform", "degree", "point_mass:0", "dirichlet_random")


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("true", "false"):
        return value.strip().lower() == "true"
    raise ValueError(f"expected true or false, got {value!r}")


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep over.

    Instance seeds are ``seed XOR counter`` where the counter enumerates
    (family, trial) pairs in order, starting at 0.
    """
    families: Tuple[GeneratorSpec, ...]
    c_values: Tuple[float, ...]
    v_strategies: Tuple[PersonalizationSpec, ...]
    trials: int = 1
    seed: int = 0
    slack: float = DEFAULT_SLACK
    tol: float = DEFAULT_TOL
    method: SolverMethod = SolverMethod.LINEAR
    require_assumption: bool = True
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self) -> None:
        if not self.families:
            raise SweepSpecError("at least one family is required")
        if not self.c_values:
            raise SweepSpecError("at least one damping constant is required")
        if not self.v_strategies:
            raise SweepSpecError("at least one personalization strategy is required")
        for c in self.c_values:
            try:
                check_damping(c)
            except ParameterError as e:
                raise SweepSpecError(str(e)) from None
        if any(s.kind is Personalization.FILE for s in self.v_strategies):
            raise SweepSpecError("file personalization is not available in sweeps")
        if self.trials < 1:
            raise SweepSpecError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed <= MAX_SEED:
            raise SweepSpecError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.slack < 0 or not self.tol > 0:
            raise SweepSpecError("slack must be nonnegative and tol positive")
        if self.method is SolverMethod.DENSE_ORACLE:
            too_large = [str(f) for f in self.families if f.n > DENSE_CAP]
            if too_large:
                raise SweepSpecError(
                    f"dense oracle is capped at n <= {DENSE_CAP}: {', '.join(too_large)}"
                )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        """Build a spec from parsed YAML (or flag) values.

        Families and strategies use the same ``family:params`` and strategy
        grammar as the CLI flags.
        """
        known = {
            "families", "c_values", "v_strategies", "trials", "seed", "slack",
            "tol", "method", "require_assumption", "max_retries",
        }
        unknown = set(data) - known
        if unknown:
            raise SweepSpecError(f"unknown sweep spec keys: {', '.join(sorted(unknown))}")

        try:
            families = data.get("families", DEFAULT_FAMILIES)
            strategies = data.get("v_strategies", DEFAULT_STRATEGIES)
            kwargs: Dict[str, Any] = {
                "families": tuple(GeneratorSpec.parse(str(s)) for s in families),
                "c_values": tuple(float(c) for c in data.get("c_values", DEFAULT_C_VALUES)),
                "v_strategies": tuple(PersonalizationSpec.parse(str(s)) for s in strategies),
            }
            for key, cast in (("trials", int), ("seed", int), ("slack", float), ("tol", float),
                              ("require_assumption", _as_bool), ("max_retries", int)):
                if key in data:
                    kwargs[key] = cast(data[key])
            if "method" in data:
                kwargs["method"] = SolverMethod.parse(str(data["method"]))
        except (GeneratorError, ParameterError, TypeError, ValueError) as e:
            raise SweepSpecError(str(e)) from None

        return cls(**kwargs)

    def instance_seed(self, counter: int) -> int:
        return self.seed ^ counter


def default_sweep_spec(**overrides: Any) -> SweepSpec:
    """The default corpus: 13 families, four damping constants, all four strategies, 5 trials."""
    data: Dict[str, Any] = {"trials": 5}
    data.update(overrides)
    return SweepSpec.from_dict(data)


def load_sweep_spec(path: Union[str, Path]) -> SweepSpec:
    """Read a YAML sweep spec file."""
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise SweepSpecError(f"cannot read sweep spec {path}: {e}") from e
    if not isinstance(data, dict):
        raise SweepSpecError(f"sweep spec {path} must be a mapping")
    return SweepSpec.from_dict(data)


@dataclass(frozen=True)
class SweepRow:
    """One (instance, c, strategy) outcome.

    Skipped instances keep their identifiers, carry NaN measurements and the
    verdict ``skip``.
    """
    family: str
    n: int
    seed: int
    c: float
    strategy: str
    distance_vf: float
    distance_pif: float
    lower: float
    upper: float
    tightness_ratio: float
    converged: bool
    verdict: str  # pass, fail, skip
    note: str = field(default="", compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in CSV_COLUMNS}


def _tightness(distance_pif: float, distance_vf: float) -> float:
    # 0/0 when v = f: both bounds collapse and pi = f, so report 1
    if distance_vf == 0.0:
        return 1.0
    return distance_pif / distance_vf


@dataclass(frozen=True)
class _Instance:
    family: GeneratorSpec
    seed: int


def _skip_row(
    instance: _Instance, c: float, strategy: PersonalizationSpec, reason: str
) -> SweepRow:
    nan = math.nan
    return SweepRow(
        family=str(instance.family), n=instance.family.n, seed=instance.seed, c=c,
        strategy=str(strategy), distance_vf=nan, distance_pif=nan, lower=nan, upper=nan,
        tightness_ratio=nan, converged=False, verdict="skip", note=reason,
    )


def _run_instance(spec: SweepSpec, instance: _Instance) -> List[SweepRow]:
    try:
        g = instance.family.build(
            instance.seed,
            require_assumption=spec.require_assumption and instance.family.is_random,
            max_retries=spec.max_retries,
        )
        a = transition_matrix(g)
        f = degree_distribution(g)
    except (GeneratorError, IsolatedVertexError) as e:
        logger.warning("skipping %s seed=%d: %s", instance.family, instance.seed, e)
        reason = f"{e.code}: {e}"
        return [
            _skip_row(instance, c, strategy, reason)
            for c in spec.c_values
            for strategy in spec.v_strategies
        ]

    rows = []
    for c in spec.c_values:
        cfg = PageRankConfig(c=c, tol=spec.tol)
        for strategy in spec.v_strategies:
            try:
                v = strategy.build(f, seed=instance.seed)
            except PageRankError as e:
                logger.warning(
                    "skipping %s seed=%d %s: %s", instance.family, instance.seed, strategy, e
                )
                rows.append(_skip_row(instance, c, strategy, f"{e.code}: {e}"))
                continue

            result = pagerank(a, cfg, v, spec.method)
            report = check_theorem(a, c, v, f, result.pi, spec.slack)
            rows.append(
                SweepRow(
                    family=str(instance.family),
                    n=g.n,
                    seed=instance.seed,
                    c=c,
                    strategy=str(strategy),
                    distance_vf=report.distance_vf,
                    distance_pif=report.distance_pif,
                    lower=report.lower,
                    upper=report.upper,
                    tightness_ratio=_tightness(report.distance_pif, report.distance_vf),
                    converged=result.converged,
                    verdict=report.verdict,
                )
            )
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRow]:
    """Run every (family, trial, c, strategy) combination.

    Instances may run on a thread pool; rows always come back in
    (family, trial, c, strategy) order.

    Args:
        spec: Sweep specification
        workers: Thread count (1 runs inline)

    Returns:
        Rows in deterministic order
    """
    instances = []
    counter = 0
    for family in spec.families:
        for _ in range(spec.trials):
            instances.append(_Instance(family=family, seed=spec.instance_seed(counter)))
            counter += 1

    logger.info(
        "sweep: %d instances x %d damping values x %d strategies",
        len(instances), len(spec.c_values), len(spec.v_strategies),
    )

    if workers <= 1:
        batches = [_run_instance(spec, instance) for instance in instances]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(lambda inst: _run_instance(spec, inst), instances))

    return [row for batch in batches for row in batch]


@dataclass(frozen=True)
class TightnessStats:
    """Tightness ratios observed at one damping constant."""
    c: float
    count: int
    minimum: float
    median: float
    maximum: float
    lower_factor: float


@dataclass(frozen=True)
class TightnessSummary:
    """Per-c tightness statistics and overall verdict counts."""
    per_c: Tuple[TightnessStats, ...]
    passed: int
    failed: int
    skipped: int

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.skipped

    def to_dict(self) -> Dict[str, Any]:
        return {
            "per_c": [asdict(stats) for stats in self.per_c],
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
        }


def rows_to_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_dict() for row in rows], columns=list(CSV_COLUMNS))


def tightness_summary(rows: Sequence[SweepRow]) -> TightnessSummary:
    """Summarize tightness ratios per damping constant.

    Skipped rows count toward ``skipped`` only.

    Raises:
        EmptyInputError: if ``rows`` is empty
    """
    if not rows:
        raise EmptyInputError("tightness summary needs at least one row")

    frame = rows_to_frame(rows)
    counts = frame["verdict"].value_counts()
    measured = frame[frame["verdict"] != "skip"]

    per_c = []
    if not measured.empty:
        grouped = measured.groupby("c", sort=True)["tightness_ratio"].agg(
            ["count", "min", "median", "max"]
        )
        for c, stats in grouped.iterrows():
            per_c.append(
                TightnessStats(
                    c=float(c),
                    count=int(stats["count"]),
                    minimum=float(stats["min"]),
                    median=float(stats["median"]),
                    maximum=float(stats["max"]),
                    lower_factor=(1.0 - float(c)) / (1.0 + float(c)),
                )
            )

    return TightnessSummary(
        per_c=tuple(per_c),
        passed=int(counts.get("pass", 0)),
        failed=int(counts.get("fail", 0)),
        skipped=int(counts.get("skip", 0)),
    )


def failing_rows(rows: Sequence[SweepRow]) -> List[SweepRow]:
    return [row for row in rows if row.verdict == "fail"]


def sweep_from_options(
    families: Sequence[str],
    c_values: Optional[Sequence[float]],
    strategies: Sequence[str],
    **extra: Any,
) -> SweepSpec:
    """Build a spec from CLI-style options; empty options keep the defaults."""
    data: Dict[str, Any] = {k: v for k, v in extra.items() if v is not None}
    if families:
        data["families"] = list(families)
    if c_values:
        data["c_values"] = list(c_values)
    if strategies:
        data["v_strategies"] = list(strategies)
    return SweepSpec.from_dict(data)
