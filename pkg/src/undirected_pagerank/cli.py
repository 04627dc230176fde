"""Command-line interface for undirected-pagerank."""

import functools
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import click
from rich.console import Console
from rich.table import Table

from . import __version__
from .core.config import Config, ConfigManager, get_config_manager, set_config_manager
from .core.errors import ParameterError, PageRankError
from .core.generators import GeneratorSpec
from .core.graph import Graph, read_edge_list, structural_warnings, write_edge_list
from .core.log import configure_logging
from .core.transition import (
    PersonalizationSpec,
    degree_distribution,
    transition_matrix,
)
from .services.analysis import check_theorem, norm_identities
from .services.experiments import (
    failing_rows,
    load_sweep_spec,
    run_sweep,
    sweep_from_options,
    tightness_summary,
)
from .services.export_service import ExportOptions, ExportService
from .services.solver import PageRankConfig, PageRankResult, SolverMethod, check_damping, pagerank

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3
EXIT_INTERNAL_ERROR = 4

OUTPUT_FORMATS = ("text", "json", "csv")
SUBCOMMANDS = ("rank", "check", "norms", "sweep", "gen")


@dataclass
class CliConfig:
    """Validated settings for one subcommand invocation."""
    subcommand: str
    generator: Optional[GeneratorSpec] = None
    input_path: Optional[Path] = None
    c: float = 0.85
    tol: float = 1e-12
    max_iter: int = 100_000
    method: SolverMethod = SolverMethod.POWER
    v_source: PersonalizationSpec = field(
        default_factory=lambda: PersonalizationSpec.parse("uniform")
    )
    output_format: str = "text"
    seed: int = 0
    slack: float = 1e-9
    require_assumption: bool = True
    max_retries: int = 100

    def validate(self) -> "CliConfig":
        """Check flags for this subcommand before any computation."""
        if self.subcommand not in SUBCOMMANDS:
            raise ParameterError(f"unknown subcommand {self.subcommand!r}")
        if self.subcommand in ("rank", "check", "norms", "gen"):
            if (self.generator is None) == (self.input_path is None):
                raise ParameterError("give exactly one of --gen and --input")
        if self.subcommand == "gen" and self.generator is None:
            raise ParameterError("gen needs --gen")
        check_damping(self.c)
        if not self.tol > 0:
            raise ParameterError(f"--tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterError(f"--max-iter must be at least 1, got {self.max_iter}")
        if self.slack < 0:
            raise ParameterError(f"--slack must be nonnegative, got {self.slack}")
        if self.seed < 0:
            raise ParameterError(f"--seed must be nonnegative, got {self.seed}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"--format must be one of {', '.join(OUTPUT_FORMATS)}")
        return self

    def solver_config(self) -> PageRankConfig:
        return PageRankConfig(c=self.c, tol=self.tol, max_iter=self.max_iter)


def _build_cli_config(subcommand: str, config: Config, **flags: Any) -> CliConfig:
    """Merge flags over configured defaults; ``None`` means "not given"."""
    solver = config.solver
    default_method = solver.check_method if subcommand == "check" else solver.rank_method

    def pick(name: str, default: Any) -> Any:
        value = flags.get(name)
        return default if value is None else value

    gen = flags.get("gen")
    input_path = flags.get("input_path")
    return CliConfig(
        subcommand=subcommand,
        generator=GeneratorSpec.parse(gen) if gen else None,
        input_path=Path(input_path) if input_path else None,
        c=pick("c", solver.damping),
        tol=pick("tol", solver.tol),
        max_iter=pick("max_iter", solver.max_iter),
        method=SolverMethod.parse(pick("method", default_method)),
        v_source=PersonalizationSpec.parse(pick("v", "uniform")),
        output_format=pick("output_format", config.output.format),
        seed=pick("seed", 0),
        slack=pick("slack", config.check.slack),
        require_assumption=pick("require_assumption", config.generator.require_assumption),
        max_retries=config.generator.max_retries,
    ).validate()


def _guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Map library errors to the ``error: CODE: message`` line and exit status."""
    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            status = command(*args, **kwargs)
        except PageRankError as e:
            click.echo(f"error: {e.code}: {e}", err=True)
            # input errors are ValueErrors; anything else is a numerical fault
            sys.exit(EXIT_INPUT_ERROR if isinstance(e, ValueError) else EXIT_INTERNAL_ERROR)
        sys.exit(status)

    return wrapper


def _load_graph(cfg: CliConfig) -> Graph:
    if cfg.generator is not None:
        g = cfg.generator.build(
            cfg.seed,
            require_assumption=cfg.require_assumption and cfg.generator.is_random,
            max_retries=cfg.max_retries,
        )
    else:
        g = read_edge_list(cfg.input_path)
    for warning in structural_warnings(g):
        logger.warning("standing assumption unmet: %s", warning)
    return g


def _export_service() -> ExportService:
    output = get_config_manager().config.output
    return ExportService(
        ExportOptions(float_format=output.float_format, json_indent=output.json_indent)
    )


def _print_key_values(title: str, values: Dict[str, Any]) -> None:
    table = Table(title=title, show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value")
    for key, value in values.items():
        table.add_row(key, f"{value:.17g}" if isinstance(value, float) else str(value))
    Console().print(table)


def _status_for(result: PageRankResult) -> int:
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


# Shared option groups

def graph_options(command: Callable[..., Any]) -> Callable[..., Any]:
    for option in reversed((
        click.option("--gen", help="Generator spec family:params, e.g. path:3 or cycle:5"),
        click.option(
            "--input", "input_path", type=click.Path(path_type=Path), help="Edge-list file"
        ),
        click.option("--seed", type=int, help="Generator / random personalization seed"),
        click.option(
            "--require-assumption/--allow-any",
            default=None,
            help="Resample random graphs until connected and non-bipartite",
        ),
    )):
        command = option(command)
    return command


def damping_options(command: Callable[..., Any]) -> Callable[..., Any]:
    for option in reversed((
        click.option("--c", "c", type=float, help="Damping constant in (0, 1)"),
        click.option(
            "--format", "output_format", type=click.Choice(OUTPUT_FORMATS), help="Output format"
        ),
    )):
        command = option(command)
    return command


def solver_options(command: Callable[..., Any]) -> Callable[..., Any]:
    for option in reversed((
        click.option("--tol", type=float, help="L1 convergence tolerance"),
        click.option("--max-iter", type=int, help="Iteration cap"),
        click.option("--method", type=click.Choice(["power", "linear", "oracle"]), help="Solver"),
        click.option(
            "--v",
            "v",
            help="uniform | degree | point_mass:<k> | dirichlet_random[:seed] | file:<path>",
        ),
    )):
        command = option(command)
    return command


slack_option = click.option("--slack", type=float, help="Absolute tolerance for bound checks")


@click.group()
@click.version_option(version=__version__, prog_name="undirected-pagerank")
@click.option(
    "--config-dir",
    type=click.Path(path_type=Path),
    help="Custom configuration directory",
)
@click.option("--reset-config", is_flag=True, help="Reset configuration to defaults")
@click.option("-v", "--verbose", is_flag=True, help="Debug output on stderr")
def main(config_dir: Optional[Path], reset_config: bool, verbose: bool) -> None:
    """Personalized PageRank on undirected graphs, with checks of the
    degree-distribution identity and the two-sided L1 bound.

    Examples:

        # PageRank of the 3-path with uniform personalization
        undirected-pagerank rank --gen path:3 --v uniform

        # Check the bound on a star
        undirected-pagerank check --gen star:4 --c 0.85 --v uniform

        # Default sweep to CSV
        undirected-pagerank sweep > sweep.csv
    """
    if config_dir:
        manager = ConfigManager(config_dir)
        manager.load()
        set_config_manager(manager)
    else:
        manager = get_config_manager()

    if reset_config:
        manager.reset_to_defaults()
        click.echo("Configuration reset to defaults", err=True)

    configure_logging("DEBUG" if verbose else manager.config.logging.level)


@main.command()
@graph_options
@damping_options
@solver_options
@_guarded
def rank(**flags: Any) -> int:
    """Compute the PageRank vector."""
    cfg = _build_cli_config("rank", get_config_manager().config, **flags)
    g = _load_graph(cfg)
    a = transition_matrix(g)
    f = degree_distribution(g)
    v = cfg.v_source.build(f, seed=cfg.seed)
    result = pagerank(a, cfg.solver_config(), v, cfg.method)
    summary = {
        "method": result.method.value,
        "iterations": result.iterations,
        "residual": result.residual,
        "converged": result.converged,
    }

    if cfg.output_format == "json":
        click.echo(json.dumps({"pi": result.pi.tolist(), **summary}, indent=2))
    elif cfg.output_format == "csv":
        click.echo("vertex,pi")
        for i, value in enumerate(result.pi.tolist()):
            click.echo(f"{i},{value:.17g}")
        click.echo(" ".join(f"{key}={value}" for key, value in summary.items()), err=True)
    else:
        table = Table(title=f"PageRank (c={cfg.c:g}, v={cfg.v_source})")
        table.add_column("vertex", justify="right")
        table.add_column("pi", justify="right")
        for i, value in enumerate(result.pi.tolist()):
            table.add_row(str(i), f"{value:.17g}")
        console = Console()
        console.print(table)
        console.print(" ".join(f"{key}={value}" for key, value in summary.items()))

    return _status_for(result)


@main.command()
@graph_options
@damping_options
@solver_options
@slack_option
@_guarded
def check(**flags: Any) -> int:
    """Check the lower/upper bound on ||pi - f||_1 for one instance."""
    cfg = _build_cli_config("check", get_config_manager().config, **flags)
    g = _load_graph(cfg)
    a = transition_matrix(g)
    f = degree_distribution(g)
    v = cfg.v_source.build(f, seed=cfg.seed)
    result = pagerank(a, cfg.solver_config(), v, cfg.method)
    report = check_theorem(a, cfg.c, v, f, result.pi, cfg.slack)

    if cfg.output_format == "text":
        _print_key_values("Bound report", report.to_dict())
    else:
        click.echo(_export_service().render_report(report, cfg.output_format), nl=False)

    if not report.passed:
        return EXIT_CHECK_FAILED
    return _status_for(result)


@main.command()
@graph_options
@damping_options
@slack_option
@_guarded
def norms(**flags: Any) -> int:
    """Verify the L1 operator norms of I - cA^T and its inverse (n <= 64)."""
    cfg = _build_cli_config("norms", get_config_manager().config, **flags)
    g = _load_graph(cfg)
    report = norm_identities(transition_matrix(g), cfg.c)

    if cfg.output_format == "text":
        _print_key_values("Norm report", report.to_dict())
    else:
        click.echo(_export_service().render_report(report, cfg.output_format), nl=False)

    return EXIT_OK if report.within(cfg.slack) else EXIT_CHECK_FAILED


def _parse_c_values(raw: Optional[str]) -> Optional[Tuple[float, ...]]:
    if not raw:
        return None
    try:
        return tuple(float(token) for token in raw.split(","))
    except ValueError:
        raise ParameterError(f"--c-values must be comma-separated reals, got {raw!r}") from None


@main.command()
@click.option("--spec", "spec_path", type=click.Path(path_type=Path), help="YAML sweep spec")
@click.option("--family", "families", multiple=True, help="Generator spec (repeatable)")
@click.option("--c-values", help="Comma-separated damping constants")
@click.option("--strategy", "strategies", multiple=True, help="Strategy (repeatable)")
@click.option("--trials", type=int)
@click.option("--seed", type=int)
@click.option("--slack", type=float)
@click.option("--tol", type=float)
@click.option("--method", type=click.Choice(["power", "linear", "oracle"]))
@click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--workers", type=int, help="Thread count for independent instances")
@click.option("--output", type=click.Path(path_type=Path), help="Write rows here instead of stdout")
@_guarded
def sweep(
    spec_path: Optional[Path],
    families: Tuple[str, ...],
    c_values: Optional[str],
    strategies: Tuple[str, ...],
    trials: Optional[int],
    seed: Optional[int],
    slack: Optional[float],
    tol: Optional[float],
    method: Optional[str],
    output_format: str,
    workers: Optional[int],
    output: Optional[Path],
) -> int:
    """Run the bound checks over a grid of graphs, damping values and strategies."""
    config = get_config_manager().config
    if spec_path is not None:
        spec = load_sweep_spec(spec_path)
    else:
        spec = sweep_from_options(
            families,
            _parse_c_values(c_values),
            strategies,
            trials=5 if trials is None else trials,
            seed=seed,
            slack=config.check.slack if slack is None else slack,
            tol=config.solver.tol if tol is None else tol,
            method=method,
            max_retries=config.generator.max_retries,
        )

    rows = run_sweep(spec, workers=workers or config.sweep.workers)
    service = ExportService(
        ExportOptions(format=output_format, float_format=config.output.float_format)
    )

    if output is not None:
        exported = service.export_rows(rows, output)
        if not exported.success:
            click.echo(f"error: E_OUTPUT: {exported.error}", err=True)
            return EXIT_INPUT_ERROR
    else:
        click.echo(service.render_rows(rows), nl=False)

    summary = tightness_summary(rows) if rows else None
    if summary is not None:
        for stats in summary.per_c:
            logger.info(
                "c=%g: tightness min=%.6f median=%.6f max=%.6f (lower factor %.6f)",
                stats.c, stats.minimum, stats.median, stats.maximum, stats.lower_factor,
            )
        logger.info(
            "rows: %d pass, %d fail, %d skip", summary.passed, summary.failed, summary.skipped
        )

    failures = failing_rows(rows)
    for row in failures:
        logger.warning(
            "bound violated: %s n=%d seed=%d c=%g %s",
            row.family, row.n, row.seed, row.c, row.strategy,
        )
    return EXIT_CHECK_FAILED if failures else EXIT_OK


@main.command()
@graph_options
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@_guarded
def gen(output_format: str, **flags: Any) -> int:
    """Generate a graph and print it as an edge list."""
    cfg = _build_cli_config("gen", get_config_manager().config, **flags)
    g = _load_graph(cfg)
    if output_format == "json":
        click.echo(json.dumps({"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}))
    else:
        click.echo(write_edge_list(g), nl=False)
    return EXIT_OK


if __name__ == "__main__":
    main()
