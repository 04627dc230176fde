"""Tests for the sweep harness and its tightness summary."""

import math

import pytest

from undirected_pagerank.core.errors import EmptyInputError, SweepSpecError
from undirected_pagerank.services.experiments import (
    CSV_COLUMNS,
    DEFAULT_FAMILIES,
    SweepSpec,
    default_sweep_spec,
    failing_rows,
    load_sweep_spec,
    rows_to_frame,
    run_sweep,
    sweep_from_options,
    tightness_summary,
)
from undirected_pagerank.services.solver import SolverMethod


def _spec(families, strategies, c_values=(0.85,), **extra):
    return sweep_from_options(families, c_values, strategies, **extra)


def test_degree_strategy_is_exact():
    """Test v = f gives zero distances and a pass on every family."""
    spec = _spec(["path:3", "star:4", "complete:3", "erdos_renyi:20,0.3"], ["degree"],
                 c_values=(0.1, 0.5, 0.85, 0.99))
    rows = run_sweep(spec)

    assert len(rows) == 16
    for row in rows:
        assert row.verdict == "pass"
        assert row.distance_vf == 0.0
        assert row.distance_pif <= 1e-10
        assert row.tightness_ratio == 1.0


def test_regular_family_with_uniform_strategy():
    rows = run_sweep(_spec(["k_regular_circulant:20,4"], ["uniform"]))

    assert [row.verdict for row in rows] == ["pass"]
    assert rows[0].distance_vf == 0.0
    assert rows[0].distance_pif <= 1e-10


def test_path3_uniform_hits_the_lower_bound():
    rows = run_sweep(_spec(["path:3"], ["uniform"]))

    assert rows[0].tightness_ratio == pytest.approx(3 / 37, abs=1e-10)
    assert rows[0].distance_pif == pytest.approx(rows[0].lower, abs=1e-10)


def test_star_uniform_tightness_equals_lower_factor():
    """Test the star attains the lower bound at every damping constant."""
    c_values = (0.1, 0.5, 0.85, 0.99)
    rows = run_sweep(_spec(["star:4", "star:20"], ["uniform"], c_values=c_values))
    summary = tightness_summary(rows)

    assert summary.passed == len(rows) == 8
    for stats in summary.per_c:
        assert stats.minimum == pytest.approx((1 - stats.c) / (1 + stats.c), abs=1e-9)
        assert stats.count == 2


def test_row_identifiers_and_seeds():
    """Test instance seeds are spec.seed XOR the instance counter."""
    spec = _spec(["cycle:5", "erdos_renyi:15,0.4"], ["uniform", "point_mass:0"],
                 c_values=(0.5,), trials=2, seed=5)
    rows = run_sweep(spec)

    assert [(r.family, r.seed, r.strategy) for r in rows] == [
        ("cycle:5", 5, "uniform"), ("cycle:5", 5, "point_mass:0"),
        ("cycle:5", 4, "uniform"), ("cycle:5", 4, "point_mass:0"),
        ("erdos_renyi:15,0.4", 7, "uniform"), ("erdos_renyi:15,0.4", 7, "point_mass:0"),
        ("erdos_renyi:15,0.4", 6, "uniform"), ("erdos_renyi:15,0.4", 6, "point_mass:0"),
    ]
    assert all(r.n in (5, 15) for r in rows)
    assert not failing_rows(rows)


def test_unsatisfiable_family_is_skipped():
    """Test an empty random graph becomes skip rows instead of an error."""
    spec = _spec(["erdos_renyi:30,0", "cycle:5"], ["uniform"], max_retries=3)
    rows = run_sweep(spec)

    skipped = [r for r in rows if r.verdict == "skip"]
    assert len(skipped) == 1
    assert skipped[0].family == "erdos_renyi:30,0"
    assert math.isnan(skipped[0].distance_pif)
    assert "E_ASSUMPTION_UNSATISFIABLE" in skipped[0].note
    assert rows[1].verdict == "pass"

    summary = tightness_summary(rows)
    assert (summary.passed, summary.failed, summary.skipped) == (1, 0, 1)


def test_point_mass_outside_graph_is_skipped():
    rows = run_sweep(_spec(["path:3"], ["point_mass:5", "uniform"]))

    assert [r.verdict for r in rows] == ["skip", "pass"]


def test_workers_do_not_change_output():
    """Test row order and contents do not depend on the thread count."""
    spec = _spec(["cycle:7", "erdos_renyi:25,0.3", "star:6"], ["uniform", "dirichlet_random"],
                 c_values=(0.5, 0.85), trials=3, seed=11)

    assert run_sweep(spec, workers=4) == run_sweep(spec, workers=1)


def test_power_method_sweep():
    rows = run_sweep(_spec(["path:20"], ["point_mass:0"], method="power"))

    assert rows[0].verdict == "pass"
    assert rows[0].converged


def test_tightness_summary_empty():
    with pytest.raises(EmptyInputError):
        tightness_summary([])


def test_tightness_summary_single_row():
    rows = run_sweep(_spec(["path:3"], ["uniform"], c_values=(0.5,)))
    summary = tightness_summary(rows)

    assert summary.total == 1
    (stats,) = summary.per_c
    assert stats.c == 0.5
    assert stats.minimum == stats.median == stats.maximum
    assert stats.lower_factor == pytest.approx(1 / 3)
    assert summary.to_dict()["passed"] == 1


def test_rows_to_frame_columns():
    frame = rows_to_frame(run_sweep(_spec(["complete:3"], ["uniform", "degree"])))

    assert tuple(frame.columns) == CSV_COLUMNS
    assert len(frame) == 2


@pytest.mark.parametrize(
    "data",
    [
        {"c_values": [0.5, 1.0]},
        {"c_values": [0.0]},
        {"c_values": []},
        {"families": []},
        {"families": ["hypercube:3"]},
        {"v_strategies": ["file:v.txt"]},
        {"v_strategies": ["teleport"]},
        {"trials": 0},
        {"seed": -1},
        {"method": "gmres"},
        {"repeat": 3},
    ],
)
def test_sweep_spec_rejects(data):
    with pytest.raises(SweepSpecError):
        SweepSpec.from_dict(data)


def test_default_sweep_spec():
    spec = default_sweep_spec()

    assert len(spec.families) == len(DEFAULT_FAMILIES) == 13
    assert spec.c_values == (0.1, 0.5, 0.85, 0.99)
    assert [str(s) for s in spec.v_strategies] == [
        "uniform", "degree", "point_mass:0", "dirichlet_random",
    ]
    assert spec.trials == 5
    assert spec.method is SolverMethod.LINEAR


def test_load_sweep_spec(tmp_path):
    path = tmp_path / "sweep.yaml"
    path.write_text(
        "families:\n"
        "  - cycle:5\n"
        "  - erdos_renyi:20,0.3\n"
        "c_values: [0.5, 0.9]\n"
        "v_strategies: [uniform, \"point_mass:1\"]\n"
        "trials: 2\n"
        "seed: 3\n"
        "method: power\n"
    )
    spec = load_sweep_spec(path)

    assert [str(f) for f in spec.families] == ["cycle:5", "erdos_renyi:20,0.3"]
    assert spec.c_values == (0.5, 0.9)
    assert spec.trials == 2
    assert spec.method is SolverMethod.POWER
    assert len(run_sweep(spec)) == 2 * 2 * 2 * 2


def test_load_sweep_spec_errors(tmp_path):
    with pytest.raises(SweepSpecError):
        load_sweep_spec(tmp_path / "missing.yaml")

    path = tmp_path / "list.yaml"
    path.write_text("- cycle:5\n")
    with pytest.raises(SweepSpecError):
        load_sweep_spec(path)


def test_oracle_sweep_rejects_families_over_dense_cap():
    """Test an oracle sweep over a large family fails before any instance is solved."""
    with pytest.raises(SweepSpecError, match="path:80"):
        _spec(["path:3", "path:80"], ["uniform"], method="oracle")
    with pytest.raises(SweepSpecError):
        default_sweep_spec(method="oracle")


def test_oracle_sweep_within_dense_cap():
    rows = run_sweep(_spec(["path:3", "complete:64"], ["uniform"], method="oracle"))

    assert [row.verdict for row in rows] == ["pass", "pass"]


@pytest.mark.parametrize("raw, expected", [(False, False), ("false", False), ("True", True)])
def test_require_assumption_parses_booleans(raw, expected):
    spec = SweepSpec.from_dict({"families": ["cycle:5"], "require_assumption": raw})

    assert spec.require_assumption is expected


@pytest.mark.parametrize("raw", ["no", 0, "1"])
def test_require_assumption_rejects_non_booleans(raw):
    with pytest.raises(SweepSpecError):
        SweepSpec.from_dict({"families": ["cycle:5"], "require_assumption": raw})
