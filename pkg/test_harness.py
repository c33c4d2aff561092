"""Tests for experiment specs, statistics, fits and result files."""

import dataclasses
import json
import math
import pathlib

import numpy as np
import pytest

from netlocal.errors import ContractViolation, EmptyResultsError, FitError, SpecError
from netlocal.harness import (
    DIAGNOSTIC_EVENTS,
    SCALING_COLUMNS,
    ExperimentSpec,
    emit_results,
    first_success_mass,
    fit_polylog_exponent,
    load_results,
    loglog_slope,
    parse_spec,
    read_spec,
    run_approximation_experiment,
    run_diagnostics_experiment,
    run_experiment,
    run_highdegree_experiment,
    run_lowerbound_demo,
    run_scaling_experiment,
    trial_seed,
)

SPECS = pathlib.Path(__file__).parent / "test-data" / "specs"

GRID = [2**e for e in range(10, 19, 2)]


def test_trial_seeds_are_pure_and_distinct() -> None:
    """Seeds depend only on (master, cell, trial) and never collide on a grid."""
    seeds = {trial_seed(1, cell, trial) for cell in range(10) for trial in range(50)}
    assert len(seeds) == 500
    assert trial_seed(1, 2, 3) == trial_seed(1, 2, 3)
    assert trial_seed(1, 2, 3) != trial_seed(2, 2, 3)
    assert all(0 <= seed < 1 << 64 for seed in seeds)


def test_read_spec() -> None:
    """Comments, spaces and comma-separated grids."""
    spec = read_spec(SPECS / "scaling.txt")
    assert spec.kind == "scaling"
    assert spec.n == (200, 400, 800, 1600)
    assert spec.trials == 3
    assert spec.seed == 7
    assert read_spec(SPECS / "approx.txt").kind == "approximation"
    assert read_spec(SPECS / "approx.txt").edge_probability == 0.35


@pytest.mark.parametrize(
    "text, message",
    [
        ("kind = scaling\nn = 100\ncolour = blue\n", "unknown key 'colour'"),
        ("kind = scaling\nn = 100\nn = 200\n", "duplicate key 'n'"),
        ("kind = scaling\nn = 100\ntrials = many\n", "bad value for trials"),
        ("kind = scaling\nn = 1e3\n", "bad value for n"),
        ("n = 100\n", "missing required key 'kind'"),
        ("kind = scaling\n", "missing required key 'n'"),
        ("kind = sideways\nn = 100\n", "unknown kind"),
        ("kind = scaling\nn = 100\nmode = half\n", "unknown mode"),
        ("kind = scaling\nn 100\n", "expected key = value"),
        ("kind = scaling\nn = 100\ntrials = 0\n", "trials and runs"),
        ("kind = scaling\nn = 0, 100\n", "every n must be positive"),
    ],
)
def test_parse_spec_rejects(text: str, message: str) -> None:
    """Malformed specs raise SpecError with a useful message."""
    with pytest.raises(SpecError, match=message):
        parse_spec(text)


def test_spec_error_names_the_file() -> None:
    """Errors from files carry the path and line."""
    with pytest.raises(SpecError, match=r"unknown-key\.txt: line 3"):
        read_spec(SPECS / "unknown-key.txt")


def test_fit_exact_polylog() -> None:
    """q = 3 (ln n)^4 recovers b = 4 and A = 3."""
    report = fit_polylog_exponent({n: 3 * math.log(n) ** 4 for n in GRID})
    assert report.b == pytest.approx(4.0, abs=0.1)
    assert report.a == pytest.approx(3.0, rel=1e-6)
    assert report.polylog_consistent
    assert report.points == len(GRID)
    assert report.to_json()["b"] == report.b


def test_fit_linear_is_not_polylog() -> None:
    """q = n fits a linear model better."""
    report = fit_polylog_exponent({n: float(n) for n in GRID})
    assert not report.polylog_consistent
    assert report.linear_residual_norm < report.residual_norm


def test_fit_constant() -> None:
    """A constant has exponent 0."""
    report = fit_polylog_exponent({n: 7.0 for n in GRID})
    assert report.b == pytest.approx(0.0, abs=1e-9)
    assert report.polylog_consistent


@pytest.mark.parametrize(
    "data",
    [
        {1024: 5.0, 2048: 6.0, 4096: 7.0},
        {1024: 5.0, 1100: 6.0, 1200: 7.0, 1300: 8.0},
        {1024: 0.0, 2048: 6.0, 4096: 7.0, 8192: 8.0},
        {2: 5.0, 16: 6.0, 128: 7.0, 1024: 8.0},
    ],
)
def test_fit_rejects(data: dict[int, float]) -> None:
    """Too few points, too narrow a span, a zero median, or n below 3."""
    with pytest.raises(FitError):
        fit_polylog_exponent(data)


def test_loglog_slope() -> None:
    """Doubling n doubles q: slope 1."""
    assert loglog_slope([1, 2, 4], [3, 6, 12]) == pytest.approx(1.0)
    assert loglog_slope([1], [3]) is None
    assert loglog_slope([1, 2], [0, 6]) is None


@pytest.mark.parametrize("seed", range(5))
def test_first_success_mass_is_at_most_one(seed: int) -> None:
    """The expected mass up to the first success is 1 - prod(1 - p_i) <= 1."""
    rng = np.random.default_rng(seed)
    p = rng.random(int(rng.integers(1, 40))) ** 2
    masses = first_success_mass(p, 100_000, rng)
    mean = float(masses.mean())
    se = float(masses.std(ddof=1)) / math.sqrt(masses.size)
    assert mean <= 1 + 3 * se
    assert mean == pytest.approx(1 - np.prod(1 - p), abs=5 * se + 1e-12)


def test_first_success_mass_edges() -> None:
    """A certain success stops the sum; no success sums everything."""
    rng = np.random.default_rng(0)
    assert first_success_mass([0.0, 1.0, 0.5], 10, rng).tolist() == [1.0] * 10
    assert first_success_mass([0.0, 0.0], 3, rng).tolist() == [0.0] * 3
    for bad in ([], [1.5], [[0.5]]):
        with pytest.raises(ContractViolation):
            first_success_mass(bad, 10, rng)  # type: ignore [arg-type]
    with pytest.raises(ContractViolation):
        first_success_mass([0.5], 0, rng)


def test_emit_rejects_empty_rows(tmp_path: pathlib.Path) -> None:
    """No rows, no file."""
    path = tmp_path / "empty.csv"
    with pytest.raises(EmptyResultsError):
        emit_results([], path)
    assert not path.exists()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_emit_round_trip(tmp_path: pathlib.Path, fmt: str) -> None:
    """Emitting then loading gives back the same rows."""
    rows = [
        {"n": 10, "m": 2, "trial": 0, "queries": 4, "success": True, "root_hit_step": 4},
        {"n": 10, "m": 2, "trial": 1, "queries": 10, "success": False, "root_hit_step": None},
        {"n": 10, "m": 2, "trial": "summary", "queries": 7.0, "success": 0.5, "root_hit_step": 4.0},
    ]
    path = tmp_path / f"rows.{fmt}"
    emit_results(rows, path, fmt)  # type: ignore [arg-type]
    assert load_results(path) == rows


def test_csv_layout(tmp_path: pathlib.Path) -> None:
    """Header first, booleans as true/false, missing values empty, "\\n" newlines."""
    row = {"n": 10, "m": 2, "trial": 0, "queries": 4, "success": True, "root_hit_step": None}
    path = tmp_path / "scaling.csv"
    emit_results([row], path)
    assert path.read_bytes() == b"n,m,trial,queries,success,root_hit_step\n10,2,0,4,true,\n"


def test_scaling_experiment() -> None:
    """One row per trial plus one summary row per n."""
    spec = ExperimentSpec(kind="scaling", n=(100, 200), trials=4, seed=3)
    rows, summary = run_scaling_experiment(spec)
    assert len(rows) == 2 * 4 + 2
    assert all(tuple(row) == SCALING_COLUMNS for row in rows)
    assert [row["trial"] for row in rows[-2:]] == ["summary", "summary"]
    for cell in summary["cells"]:
        trials = [row for row in rows if row["n"] == cell["n"] and row["trial"] != "summary"]
        assert cell["median_queries"] == np.median([row["queries"] for row in trials])
        assert cell["success_rate"] == sum(row["success"] for row in trials) / 4
    assert summary["fit"] is None


def test_scaling_is_deterministic_across_workers() -> None:
    """Worker processes do not change the rows."""
    spec = ExperimentSpec(kind="scaling", n=(100, 300), trials=3, seed=9)
    assert run_scaling_experiment(spec) == run_scaling_experiment(
        dataclasses.replace(spec, workers=2)
    )


def test_scaling_fit() -> None:
    """With four sizes spanning a factor 8 the summary has a fit."""
    spec = ExperimentSpec(kind="scaling", n=(200, 400, 800, 1600), trials=5, seed=1)
    rows, summary = run_scaling_experiment(spec)
    assert summary["fit"] is not None
    assert sum(row["success"] for row in rows if row["trial"] != "summary") >= 18


def test_highdegree_experiment() -> None:
    """The top degree found is within 1/ln^2 n of the maximum, and pairs join."""
    spec = ExperimentSpec(kind="highdegree", n=(1000,), trials=10, seed=6)
    rows, summary = run_highdegree_experiment(spec)
    assert len(rows) == 10
    for row in rows:
        assert row["top_degree"] <= row["max_degree"]
        assert row["degree_ratio"] == pytest.approx(row["top_degree"] / row["max_degree"])
        assert row["degree_ratio_ok"] == (row["degree_ratio"] >= 1 / math.log(1000) ** 2)
        assert row["best_degree"] >= 2
        assert row["st_size"] <= row["st_queries"] + 2
    (cell,) = summary["cells"]
    assert cell["degree_ratio_ok_rate"] >= 0.9
    assert cell["best_degree_ok_rate"] >= 0.9
    assert cell["st_success_rate"] >= 0.9
    assert summary["k"] == 1


def test_highdegree_reports_k_degrees() -> None:
    """With k = 3 the traversal crawls three more nodes after the root."""
    spec = ExperimentSpec(kind="highdegree", n=(300,), trials=2, k=3, seed=2, workers=2)
    rows, _ = run_highdegree_experiment(spec)
    assert rows == run_highdegree_experiment(dataclasses.replace(spec, workers=1))[0]
    assert all(row["top_queries"] >= 3 for row in rows)


@pytest.mark.parametrize("problem", ["mds", "partial", "neighbor"])
def test_approximation_experiment(problem: str) -> None:
    """Local values stay within their bounds on small random graphs."""
    spec = ExperimentSpec(
        kind="approximation",
        n=(6, 8),
        source="er",
        problem=problem,
        trials=3,
        runs=4,
        seed=2,
        edge_probability=0.4,
    )
    rows, summary = run_approximation_experiment(spec)
    assert len(rows) == 6
    assert [row["instance"] for row in rows] == ["0-0", "0-1", "0-2", "1-0", "1-1", "1-2"]
    for row in rows:
        assert row["within_bound"]
        assert row["coverage_ok"]
        assert row["ratio"] == pytest.approx(row["algorithm_value"] / row["exact_value"])
        if problem == "mds":
            assert row["ratio"] >= 1 - 1e-9
            assert row["tail_allowed"] is not None
    assert summary["within_bound_rate"] == 1.0


def test_approximation_skips_instances_over_the_cap(
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Graphs too big for the exact solver are skipped with a notice."""
    spec = ExperimentSpec(kind="approximation", n=(25,), source="er", trials=1, runs=1)
    rows, summary = run_approximation_experiment(spec)
    assert rows == []
    assert summary["instances"] == 0
    assert "skipping instance 0-0" in capsys.readouterr().err


def test_approximation_rejects_unknown_problem() -> None:
    """Only three problems are measured."""
    spec = ExperimentSpec(kind="approximation", n=(5,), source="er", problem="tsp", trials=1)
    with pytest.raises(SpecError):
        run_approximation_experiment(spec)


def test_lowerbound_broken_paths() -> None:
    """Full information needs 7 queries; the local search needs more."""
    rows, summary = run_lowerbound_demo(read_spec(SPECS / "lowerbound.txt"))
    assert len(rows) == 6
    assert {row["full_info_queries"] for row in rows} == {7}
    assert all(row["local_queries"] >= 7 for row in rows)
    stats = summary["algorithms"]["stexplore"]
    assert stats["n"] == [62, 122]
    assert stats["full_info_slope"] == pytest.approx(0.0)
    assert stats["local_slope"] is not None


def test_lowerbound_clique_pendant() -> None:
    """The degree-only greedy pays for most of the clique."""
    spec = ExperimentSpec(
        kind="lowerbound", n=(64,), source="family:clique_pendant", trials=5, seed=4
    )
    rows, summary = run_lowerbound_demo(spec)
    assert {row["algorithm"] for row in rows} == {"altrandom", "degreegreedy"}
    assert summary["algorithms"]["degreegreedy"]["median_local_queries"][0] >= 64 / 8
    assert all(row["planted_value"] == 2 for row in rows)


@pytest.mark.parametrize(
    "family", ["tree_hub", "two_stars_paths", "stars_with_pendants", "clique_star"]
)
def test_lowerbound_other_families(family: str) -> None:
    """Every family has a local run and a comparator."""
    spec = ExperimentSpec(kind="lowerbound", n=(100,), source=family, trials=2, seed=1)
    rows, summary = run_lowerbound_demo(spec)
    assert rows
    assert all(row["family"] == family for row in rows)
    assert all(row["full_info_queries"] > 0 for row in rows)
    assert summary["family"] == family


def test_lowerbound_rejects_unknown_family() -> None:
    """The source must name a family."""
    spec = ExperimentSpec(kind="lowerbound", n=(100,), source="family:moebius", trials=1)
    with pytest.raises(SpecError):
        run_lowerbound_demo(spec)


def test_diagnostics_experiment() -> None:
    """Every row reports the degree sum check and each event."""
    rows, summary = run_diagnostics_experiment(read_spec(SPECS / "diagnostics.txt"))
    assert len(rows) == 2
    for row in rows:
        assert row["degree_sum_ok"]
        assert set(DIAGNOSTIC_EVENTS) <= set(row)
        assert row["typical-degree"] == "n/a"
    assert summary["cells"][0]["degree_sum_ok_rate"] == 1.0


def test_run_experiment_is_byte_identical(tmp_path: pathlib.Path) -> None:
    """The same spec and seed give the same bytes."""
    spec = ExperimentSpec(kind="scaling", n=(100, 200), trials=2, seed=5)
    first = run_experiment(spec, tmp_path / "a")
    second = run_experiment(spec, tmp_path / "b")
    assert [path.name for path in first] == ["scaling.csv", "scaling-summary.json"]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
    summary = json.loads(first[1].read_text(encoding="utf-8"))
    assert summary["kind"] == "scaling"
    assert load_results(first[0])[0]["n"] == 100


@pytest.mark.parametrize(
    "options", [{"n": ()}, {"n": (10,), "workers": 0}, {"n": (10,), "m": 0}]
)
def test_experiment_spec_rejects(options: dict[str, object]) -> None:
    """Grids are non-empty, and workers, m, r and k are positive."""
    with pytest.raises(SpecError):
        ExperimentSpec(kind="scaling", **options)  # type: ignore [arg-type]


def test_scaling_on_a_graph_file() -> None:
    """A file source ignores n and runs on the file's graph."""
    graph = pathlib.Path(__file__).parent / "test-data" / "graphs" / "star-7.txt"
    spec = ExperimentSpec(kind="scaling", n=(1000,), source=f"file:{graph}", trials=3)
    rows, summary = run_scaling_experiment(spec)
    assert {row["n"] for row in rows} == {7}
    assert all(row["success"] for row in rows)
    assert summary["cells"][0]["success_rate"] == 1.0


def test_diagnostics_need_a_pa_source() -> None:
    """Structural diagnostics only apply to the two PA processes."""
    spec = ExperimentSpec(kind="diagnostics", n=(50,), source="er", trials=1)
    with pytest.raises(SpecError):
        run_diagnostics_experiment(spec)


def test_emit_rejects_unknown_format(tmp_path: pathlib.Path) -> None:
    """Only CSV and JSON are written."""
    with pytest.raises(ContractViolation):
        emit_results([{"n": 1}], tmp_path / "rows.xml", "xml")  # type: ignore [arg-type]
