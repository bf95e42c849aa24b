import csv
import io
import math

import pytest

from dso.engine import DsoConfig
from dso.harness import (
    CSV_HEADER,
    ExperimentError,
    ExperimentSpec,
    emit_report,
    format_markdown,
    load_config_file,
    run_experiment,
    summarize,
)
from dso.model import PENALTY_VALUE


def test_summary_closed_form():
    s = summarize([1.0, 2.0, 3.0])
    assert (s.best, s.mean, s.median, s.worst, s.std) == (1.0, 2.0, 2.0, 3.0, 1.0)


def test_summary_single_run():
    s = summarize([4.5])
    assert s.best == s.mean == s.median == s.worst == 4.5
    assert s.std == 0.0


def test_summary_even_count_and_ordering():
    s = summarize([4.0, 1.0, 3.0, 2.0])
    assert s.median == 2.5
    assert s.std == pytest.approx(math.sqrt(5 / 3))
    assert s.best <= s.median <= s.worst and s.best <= s.mean <= s.worst


def test_summary_flags_penalty_contamination():
    s = summarize([PENALTY_VALUE, 1.0, 2.0])
    assert s.feasible_runs == 2
    assert s.worst == PENALTY_VALUE
    assert s.best <= s.mean <= s.worst
    assert s.std == math.inf


def test_spec_defaults_budget_from_catalog():
    spec = ExperimentSpec("three-bar-truss", runs=3)
    assert spec.problem == "three_bar_truss"
    assert spec.budget == 3000
    assert [spec.seed_for(i) for i in range(3)] == [1, 2, 3]
    with pytest.raises(ValueError):
        ExperimentSpec("three_bar_truss", runs=0)


@pytest.fixture(scope="module")
def small():
    spec = ExperimentSpec("three_bar_truss", runs=3, base_seed=10)
    return spec, run_experiment(spec)


def test_run_experiment_orders_by_seed(small):
    spec, stats = small
    assert [r.seed for r in stats.per_run] == [10, 11, 12]
    assert all(r.evaluations_used == 3000 for r in stats.per_run)
    assert stats.best == min(r.best_value for r in stats.per_run)


def test_parallel_matches_serial(small):
    spec, stats = small
    par = run_experiment(spec, workers=2)
    assert emit_report(par, spec) == emit_report(stats, spec)


def test_csv_format_and_round_trip(small, tmp_path):
    spec, stats = small
    out = tmp_path / "r.csv"
    text = emit_report(stats, spec, "csv", out)
    assert out.read_text() == text
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 2
    assert tuple(rows[0]) == CSV_HEADER
    row = dict(zip(rows[0], rows[1]))
    assert float(row["best"]) == stats.best
    assert float(row["mean"]) == stats.mean
    assert float(row["std"]) == stats.std
    assert row["evaluations"] == "3000" and row["runs"] == "3" and row["base_seed"] == "10"


def test_csv_deterministic(small):
    spec, stats = small
    again = run_experiment(spec)
    assert emit_report(again, spec) == emit_report(stats, spec)


def test_markdown_contents(small):
    spec, stats = small
    md = format_markdown([(spec, stats)])
    assert "| MBA | 13,280 | 263.895852 | 263.897996 |" in md
    assert "| ABC | - | - | - |" in md
    assert "| Seed | Best | Feasible |" in md
    for r in stats.per_run:
        assert r.winning_firmware in md


def test_markdown_pressure_vessel_caveat():
    spec = ExperimentSpec("pressure_vessel", runs=1, config=DsoConfig(budget=120))
    md = emit_report(run_experiment(spec), spec, "markdown")
    assert "continuous" in md and "6059.71" in md


def test_unwritable_path(small, tmp_path):
    spec, stats = small
    bad = tmp_path / "missing" / "r.csv"
    with pytest.raises(OSError, match="missing"):
        emit_report(stats, spec, "csv", bad)


def test_run_error_names_index(monkeypatch):
    import dso.harness as harness

    def boom(name, config, seed, trace):
        if seed == 3:
            raise ValueError("bad seed")
        return real(name, config, seed, trace)

    real = harness._one_run
    monkeypatch.setattr(harness, "_one_run", boom)
    with pytest.raises(ExperimentError, match="run 2"):
        run_experiment(ExperimentSpec("three_bar_truss", runs=3, config=DsoConfig(budget=60)))


def test_config_file(tmp_path):
    path = tmp_path / "dso.cfg"
    path.write_text("# parameters\nteams = 5\npacc=0.25  # inline\n\nBUDGET = 900\n")
    assert load_config_file(path) == {"teams": 5, "pacc": 0.25, "budget": 900}
    path.write_text("speed = 3\n")
    with pytest.raises(ValueError, match="unknown key"):
        load_config_file(path)
    path.write_text("teams 3\n")
    with pytest.raises(ValueError, match="key = value"):
        load_config_file(path)
