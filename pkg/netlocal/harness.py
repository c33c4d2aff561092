"""Experiments: seeded trials, statistics, fits and result files.

Every experiment is a pure function of its ExperimentSpec: per-trial seeds are
derived from (master seed, cell, trial), trials may run in worker processes, and
rows are sorted before they are written, so output bytes never depend on scheduling.
"""

import concurrent.futures
import csv
import dataclasses
import io
import itertools
import json
import math
import pathlib
import re
import sys
import typing

import numpy as np

from netlocal.algorithms import (
    RunResult,
    alternate_random,
    alternate_random_and_jump,
    degree_greedy_cover,
    gain_per_cost_run,
    neighbor_collect,
    st_connect,
    st_explore,
    top_k_degrees,
    traverse_to_root,
)
from netlocal.baselines import (
    ExactSolution,
    bfs_shortest_path,
    brute_force_mds,
    brute_force_neighbor_collect,
    brute_force_partial_cover,
    exact_max_degree,
)
from netlocal.diagnostics import DiagnosticsParams, degree_diagnostics
from netlocal.errors import (
    ContractViolation,
    EmptyResultsError,
    FitError,
    InfeasibleError,
    SolverCapError,
    SpecError,
)
from netlocal.families import FAMILIES, FamilyInstance, build_family
from netlocal.generators import Model, PaParams, generate, random_connected_graph
from netlocal.graph import Graph, Mode, harmonic_number, max_degree, read_graph
from netlocal.oracle import LocalOracle, OracleConfig

Kind = typing.Literal[
    "scaling", "highdegree", "approximation", "lowerbound", "diagnostics"
]
Format = typing.Literal["csv", "json"]
Row = dict[str, typing.Any]

KINDS: dict[str, Kind] = {
    "scaling": "scaling",
    "highdegree": "highdegree",
    "approx": "approximation",
    "approximation": "approximation",
    "lowerbound": "lowerbound",
    "diagnostics": "diagnostics",
}
SCALING_COLUMNS = ("n", "m", "trial", "queries", "success", "root_hit_step")
DIAGNOSTIC_EVENTS = (
    "degree-upper",
    "degree-lower-early",
    "root-degree",
    "max-degree",
    "weights-concentration",
    "root-weight",
    "early-weights",
    "weights-upper",
    "typical-degree",
)
POLYLOG_EXPONENT_BAND = 6.0


def stderr(*args: object) -> None:
    """Print to stderr."""
    print("netlocal:", *args, file=sys.stderr, flush=True)


def trial_seed(master: int, cell: int, trial: int) -> int:
    """A 64-bit seed that depends only on (master, cell, trial)."""
    sequence = np.random.SeedSequence(master, spawn_key=(cell, trial))
    return int(sequence.generate_state(1, np.uint64)[0])


def _start_node(seed: int, n: int) -> int:
    return int(np.random.default_rng([seed, 2]).integers(1, n + 1))


@dataclasses.dataclass(frozen=True, slots=True)
class ExperimentSpec:  # pylint: disable = too-many-instance-attributes
    """One experiment: what to run, over which grid, with how many trials."""

    kind: Kind
    n: tuple[int, ...]
    source: str = "pa-sequential"
    m: int = 2
    r: int = 1
    k: int = 1
    c: float = 2.0
    rho: float = 0.5
    epsilon: float = 0.5
    trials: int = 10
    runs: int = 10
    seed: int = 0
    budget: int | None = None
    problem: str = "mds"
    edge_probability: float = 0.3
    workers: int = 1
    mode: Mode = "open"

    def __post_init__(self) -> None:
        if not self.n:
            raise SpecError("the n grid is empty")
        if any(n < 1 for n in self.n):
            raise SpecError(f"every n must be positive, got {list(self.n)}")
        if self.trials < 1 or self.runs < 1:
            raise SpecError("trials and runs must be at least 1")
        if self.workers < 1:
            raise SpecError(f"workers must be at least 1, got {self.workers}")
        if self.m < 1 or self.r < 1 or self.k < 1:
            raise SpecError("m, r and k must be at least 1")


_INT_KEYS = frozenset({"m", "r", "k", "trials", "runs", "seed", "budget", "workers"})
_FLOAT_KEYS = frozenset({"c", "rho", "epsilon", "edge_probability"})
_TEXT_KEYS = frozenset({"source", "problem", "mode"})


def parse_spec(text: str, *, path: object = None) -> ExperimentSpec:
    """Parse the flat "key = value" spec format ("#" starts a comment)."""
    where = f"{path}: " if path is not None else ""
    fields: dict[str, typing.Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, equals, value = (part.strip() for part in line.partition("="))
        if not equals or not key or not value:
            raise SpecError(f"{where}line {lineno}: expected key = value, got {raw!r}")
        if key in fields:
            raise SpecError(f"{where}line {lineno}: duplicate key {key!r}")
        try:
            match key:
                case "kind":
                    if value not in KINDS:
                        raise SpecError(f"{where}line {lineno}: unknown kind {value!r}")
                    fields[key] = KINDS[value]
                case "n":
                    fields[key] = tuple(int(part) for part in value.split(","))
                case _ if key in _INT_KEYS:
                    fields[key] = int(value)
                case _ if key in _FLOAT_KEYS:
                    fields[key] = float(value)
                case _ if key in _TEXT_KEYS:
                    fields[key] = value
                case _:
                    raise SpecError(f"{where}line {lineno}: unknown key {key!r}")
        except ValueError as error:
            if isinstance(error, SpecError):
                raise
            raise SpecError(f"{where}line {lineno}: bad value for {key}: {value!r}") from None
    for required in ("kind", "n"):
        if required not in fields:
            raise SpecError(f"{where}missing required key {required!r}")
    if fields.get("mode", "open") not in ("open", "closed"):
        raise SpecError(f"{where}unknown mode {fields['mode']!r}")
    return ExperimentSpec(**fields)


def read_spec(path: pathlib.Path) -> ExperimentSpec:
    """Read a spec file."""
    return parse_spec(path.read_text(encoding="utf-8"), path=path)


def _map(
    function: typing.Callable[..., list[Row]],
    spec: ExperimentSpec,
    tasks: list[tuple[int, int]],
) -> list[Row]:
    """Run function(spec, cell, trial) for every task, in worker processes if asked."""
    cells = [cell for cell, _ in tasks]
    trials = [trial for _, trial in tasks]
    if spec.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.workers) as pool:
            batches = list(pool.map(function, itertools.repeat(spec), cells, trials))
    else:
        batches = list(map(function, itertools.repeat(spec), cells, trials))
    return [row for batch in batches for row in batch]


def _tasks(spec: ExperimentSpec) -> list[tuple[int, int]]:
    return [(cell, trial) for cell in range(len(spec.n)) for trial in range(spec.trials)]


def _model(source: str) -> Model:
    match source:
        case "pa-sequential" | "ba" | "sequential":
            return "sequential"
        case "pa-weighted" | "br" | "weighted":
            return "weighted"
        case _:
            raise SpecError(f"source {source!r} is not a preferential-attachment model")


def _source_graph(spec: ExperimentSpec, n: int, seed: int) -> Graph:
    """The graph a trial runs on, for PA, Erdős–Rényi and file sources."""
    if spec.source.startswith("file:"):
        return read_graph(pathlib.Path(spec.source.removeprefix("file:")))
    if spec.source == "er":
        return random_connected_graph(n, spec.edge_probability, np.random.default_rng(seed))
    graph, _, _ = generate(PaParams(n, spec.m, seed), _model(spec.source))
    return graph


def _median(values: typing.Iterable[float]) -> float:
    return float(np.median(np.fromiter(values, dtype=float)))


def _scaling_trial(spec: ExperimentSpec, cell: int, trial: int) -> list[Row]:
    seed = trial_seed(spec.seed, cell, trial)
    graph = _source_graph(spec, spec.n[cell], seed)
    n = graph.node_count
    oracle = LocalOracle.create(graph, OracleConfig(seed=seed), _start_node(seed, n))
    result = traverse_to_root(oracle, spec.budget or min(n, 10**6))
    return [
        {
            "n": n,
            "m": spec.m,
            "trial": trial,
            "queries": result.steps,
            "success": result.success,
            "root_hit_step": result.root_hit_step,
        }
    ]


@dataclasses.dataclass(frozen=True, slots=True)
class FitReport:
    """q = A (ln n)^b fitted in log space, against q = C n."""

    a: float
    a_se: float
    b: float
    b_se: float
    residual_norm: float
    linear_residual_norm: float
    polylog_consistent: bool
    points: int

    def to_json(self) -> dict[str, object]:
        """A JSON-ready dict."""
        return dataclasses.asdict(self)


def fit_polylog_exponent(data: typing.Mapping[int, float]) -> FitReport:
    """Least-squares fit of log q = log A + b log ln n over (n, median queries) pairs.

    The verdict holds when b <= 6 and the polylog model fits no worse than a
    linear-in-n model.
    """
    points = sorted(data.items())
    if len(points) < 4:
        raise FitError(f"need at least 4 distinct n values, got {len(points)}")
    ns = np.array([n for n, _ in points], dtype=float)
    qs = np.array([q for _, q in points], dtype=float)
    if ns.min() < 3:
        raise FitError("every n must be at least 3 for ln ln n to be defined")
    if ns.max() < 4 * ns.min():
        raise FitError("the n values must span at least two octaves")
    if np.any(qs <= 0) or not np.all(np.isfinite(qs)):
        raise FitError("medians must be positive and finite")
    x = np.log(np.log(ns))
    y = np.log(qs)
    design = np.column_stack([np.ones_like(x), x])
    (log_a, b), _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ np.array([log_a, b])
    rss = float(residuals @ residuals)
    dof = len(points) - 2
    covariance = rss / dof * np.linalg.inv(design.T @ design)
    log_a_se, b_se = np.sqrt(np.diag(covariance)).tolist()
    linear = y - np.log(ns)
    linear_residuals = linear - linear.mean()
    linear_rss = float(linear_residuals @ linear_residuals)
    a = math.exp(log_a)
    return FitReport(
        a=a,
        a_se=a * log_a_se,
        b=float(b),
        b_se=b_se,
        residual_norm=math.sqrt(rss),
        linear_residual_norm=math.sqrt(linear_rss),
        polylog_consistent=bool(b <= POLYLOG_EXPONENT_BAND and rss <= linear_rss + 1e-12),
        points=len(points),
    )


def run_scaling_experiment(spec: ExperimentSpec) -> tuple[list[Row], dict[str, typing.Any]]:
    """Traverse to the root on PA graphs across the n grid; one row per trial."""
    rows = sorted(
        _map(_scaling_trial, spec, _tasks(spec)), key=lambda row: (row["n"], row["trial"])
    )
    cells: list[dict[str, typing.Any]] = []
    summaries: list[Row] = []
    for n, group in itertools.groupby(rows, key=lambda row: row["n"]):
        trials = list(group)
        hits = [row["root_hit_step"] for row in trials if row["root_hit_step"] is not None]
        cell = {
            "n": n,
            "median_queries": _median(row["queries"] for row in trials),
            "mean_queries": float(np.mean([row["queries"] for row in trials])),
            "success_rate": sum(row["success"] for row in trials) / len(trials),
            "median_root_hit_step": _median(hits) if hits else None,
        }
        cells.append(cell)
        summaries.append(
            {
                "n": n,
                "m": spec.m,
                "trial": "summary",
                "queries": cell["median_queries"],
                "success": cell["success_rate"],
                "root_hit_step": cell["median_root_hit_step"],
            }
        )
    summary: dict[str, typing.Any] = {"kind": "scaling", "cells": cells, "fit": None}
    try:
        summary["fit"] = fit_polylog_exponent(
            {cell["n"]: cell["median_queries"] for cell in cells}
        ).to_json()
    except FitError as error:
        stderr(f"no polylog fit: {error}")
    return rows + summaries, summary


def _highdegree_trial(spec: ExperimentSpec, cell: int, trial: int) -> list[Row]:
    seed = trial_seed(spec.seed, cell, trial)
    graph = _source_graph(spec, spec.n[cell], seed)
    n = graph.node_count
    log_n = math.log(max(n, 2))
    config = OracleConfig(seed=seed)
    start = _start_node(seed, n)
    top = top_k_degrees(LocalOracle.create(graph, config, start), spec.k, spec.budget)
    gain = gain_per_cost_run(LocalOracle.create(graph, config, start), spec.budget)
    _, most = exact_max_degree(graph)
    s, t = np.random.default_rng([seed, 3]).integers(1, n + 1, size=2).tolist()
    joined = st_connect(graph, s, t, spec.budget, config)
    ratio = top.values["top_degree"] / max(most, 1)
    return [
        {
            "n": n,
            "m": spec.m,
            "trial": trial,
            "top_queries": top.steps,
            "top_degree": int(top.values["top_degree"]),
            "max_degree": most,
            "degree_ratio": ratio,
            "degree_ratio_ok": ratio >= 1 / log_n**2,
            "best_degree": int(gain.values["best_degree"]),
            "best_degree_ok": gain.values["best_degree"] >= math.sqrt(n) / (4 * log_n**3),
            "best_ratio": gain.values["best_ratio"],
            "st_success": joined.success,
            "st_queries": joined.steps,
            "st_size": joined.set_size,
            "single_size": int(joined.values.get("s_queries", 0)) + 1,
        }
    ]


def run_highdegree_experiment(
    spec: ExperimentSpec,
) -> tuple[list[Row], dict[str, typing.Any]]:
    """Find high-degree nodes and join random pairs through the root on PA graphs."""
    rows = sorted(
        _map(_highdegree_trial, spec, _tasks(spec)), key=lambda row: (row["n"], row["trial"])
    )
    cells = []
    for n, group in itertools.groupby(rows, key=lambda row: row["n"]):
        trials = list(group)
        cells.append(
            {
                "n": n,
                "degree_ratio_ok_rate": sum(row["degree_ratio_ok"] for row in trials)
                / len(trials),
                "median_degree_ratio": _median(row["degree_ratio"] for row in trials),
                "best_degree_ok_rate": sum(row["best_degree_ok"] for row in trials)
                / len(trials),
                "median_best_ratio": _median(row["best_ratio"] for row in trials),
                "st_success_rate": sum(row["st_success"] for row in trials) / len(trials),
                "median_st_size": _median(row["st_size"] for row in trials),
                "median_single_size": _median(row["single_size"] for row in trials),
            }
        )
    return rows, {"kind": "highdegree", "k": spec.k, "cells": cells}


def _approximation_instance(spec: ExperimentSpec, cell: int, trial: int) -> list[Row]:
    seed = trial_seed(spec.seed, cell, trial)
    graph = _source_graph(spec, spec.n[cell], seed)
    n = graph.node_count
    _, delta = max_degree(graph)
    harmonic = harmonic_number(delta)
    instance = f"{cell}-{trial}"
    exact: ExactSolution
    try:
        match spec.problem:
            case "mds":
                exact = brute_force_mds(graph)
                bound = 2 * (1 + harmonic) * exact.optimum_value + 1
                tail = 2 * (2 + harmonic) * exact.optimum_value
            case "partial":
                exact = brute_force_partial_cover(
                    graph, math.ceil(spec.rho * (1 + spec.epsilon) * n)
                )
                bound = 3 * exact.optimum_value * harmonic / (spec.rho * spec.epsilon)
                tail = bound
            case "neighbor":
                exact = brute_force_neighbor_collect(graph, spec.c)
                bound = 2 * spec.c * (1 + harmonic) * exact.optimum_value
                tail = bound
            case _:
                raise SpecError(f"unknown problem {spec.problem!r}")
    except (SolverCapError, InfeasibleError) as error:
        stderr(f"skipping instance {instance}: {error}")
        return []
    values = []
    coverage_ok = True
    for run in range(spec.runs):
        run_seed = trial_seed(seed, 0, run)
        config = OracleConfig(mode="closed", seed=run_seed)
        match spec.problem:
            case "mds":
                result = alternate_random(LocalOracle(graph, config, _start_node(run_seed, n)))
                values.append(float(result.set_size))
            case "partial":
                result = alternate_random_and_jump(LocalOracle(graph, config), spec.rho)
                coverage_ok &= result.dominated_count >= math.ceil(spec.rho * n)
                values.append(float(result.set_size))
            case _:
                result = neighbor_collect(
                    LocalOracle(graph, config, _start_node(run_seed, n)), spec.c
                )
                values.append(float(result.values["f_value"]))
    mean = float(np.mean(values))
    tail_rate = sum(value > tail for value in values) / len(values)
    allowed = None
    if spec.problem == "mds":
        expected = math.exp(-exact.optimum_value)
        allowed = expected + 3 * math.sqrt(expected * (1 - expected) / spec.runs)
    return [
        {
            "instance": instance,
            "n": n,
            "problem": spec.problem,
            "algorithm_value": mean,
            "exact_value": float(exact.optimum_value),
            "ratio": mean / exact.optimum_value,
            "bound": bound,
            "within_bound": mean <= bound,
            "tail_rate": tail_rate,
            "tail_allowed": allowed,
            "coverage_ok": coverage_ok,
        }
    ]


def run_approximation_experiment(
    spec: ExperimentSpec,
) -> tuple[list[Row], dict[str, typing.Any]]:
    """Compare the mean local value over spec.runs runs to the exact optimum and its bound."""
    rows = sorted(
        _map(_approximation_instance, spec, _tasks(spec)),
        key=lambda row: tuple(map(int, row["instance"].split("-"))),
    )
    summary: dict[str, typing.Any] = {
        "kind": "approximation",
        "problem": spec.problem,
        "instances": len(rows),
        "within_bound_rate": (
            sum(row["within_bound"] for row in rows) / len(rows) if rows else None
        ),
        "coverage_ok": all(row["coverage_ok"] for row in rows),
    }
    if spec.problem == "mds" and rows:
        summary["tail_ok_rate"] = sum(
            row["tail_rate"] <= row["tail_allowed"] for row in rows
        ) / len(rows)
    return rows, summary


def _family_name(source: str) -> str:
    name = source.removeprefix("family:")
    if name not in FAMILIES:
        raise SpecError(f"unknown family {name!r} (expected one of {', '.join(FAMILIES)})")
    return name


def _demo_row(
    instance: FamilyInstance,
    trial: int,
    result: RunResult,
    full_info_queries: int,
    local_value: float,
    planted_value: float,
) -> Row:
    return {
        "family": instance.family,
        "n": instance.graph.node_count,
        "trial": trial,
        "algorithm": result.algorithm,
        "local_queries": result.steps,
        "full_info_queries": full_info_queries,
        "ratio": result.steps / full_info_queries,
        "local_value": local_value,
        "planted_value": planted_value,
    }


def _f_value(instance: FamilyInstance, result: RunResult, c: float) -> float:
    return c * result.set_size + instance.graph.node_count - result.dominated_count


def _lowerbound_trial(spec: ExperimentSpec, cell: int, trial: int) -> list[Row]:
    seed = trial_seed(spec.seed, cell, trial)
    name = _family_name(spec.source)
    instance = build_family(name, spec.n[cell], r=spec.r, k=spec.k, seed=seed)
    graph, special = instance.graph, instance.special_nodes
    n = graph.node_count
    budget = spec.budget or 4 * n
    start = _start_node(seed, n)
    planted = len(instance.planted_opt)
    match name:
        case "broken_paths":
            config = OracleConfig(radius=spec.r, mode=spec.mode, seed=seed)
            oracle = LocalOracle(graph, config, special["s"])
            target = oracle.ground_truth_probe("label-of-index", special["t"])
            result = st_explore(oracle, target, budget)
            path = bfs_shortest_path(graph, special["s"], special["t"])
            assert path is not None
            return [_demo_row(instance, trial, result, len(path) - 1, result.set_size, planted)]
        case "tree_hub":
            config = OracleConfig(seed=seed, root=special["hub"])
            result = traverse_to_root(LocalOracle(graph, config, start), budget)
            path = bfs_shortest_path(graph, special["root"], special["hub"])
            assert path is not None
            value = instance.objective()
            return [_demo_row(instance, trial, result, len(path), value, value)]
        case "clique_pendant":
            rows = []
            for algorithm, mode in ((degree_greedy_cover, "open"), (alternate_random, "closed")):
                config = OracleConfig(mode=typing.cast(Mode, mode), seed=seed)
                result = algorithm(LocalOracle(graph, config, start), budget=budget)
                rows.append(_demo_row(instance, trial, result, planted, result.set_size, planted))
            return rows
        case "two_stars_paths":
            config = OracleConfig(mode="closed", seed=seed)
            result = alternate_random_and_jump(LocalOracle(graph, config), spec.rho, budget=budget)
            return [_demo_row(instance, trial, result, planted, result.set_size, planted)]
        case "stars_with_pendants":
            config = OracleConfig(mode="closed", seed=seed)
            result = neighbor_collect(LocalOracle(graph, config, start), spec.c, budget=budget)
            value = _f_value(instance, result, spec.c)
            return [_demo_row(instance, trial, result, planted, value, instance.objective(spec.c))]
        case _:
            assert name == "clique_star", name
            config = OracleConfig(seed=seed)
            result = degree_greedy_cover(LocalOracle(graph, config, start), budget=budget)
            value = _f_value(instance, result, spec.c)
            return [_demo_row(instance, trial, result, planted, value, instance.objective(spec.c))]


def first_success_mass(
    p: typing.Sequence[float], trials: int, rng: np.random.Generator
) -> np.ndarray:
    """For each trial, draw X_i ~ Bernoulli(p_i) and sum p_i up to the first success.

    A trial without any success sums every p_i. The mean never exceeds 1.
    """
    probabilities = np.asarray(p, dtype=float)
    if probabilities.ndim != 1 or not probabilities.size:
        raise ContractViolation("p must be a non-empty sequence")
    if np.any((probabilities < 0) | (probabilities > 1)):
        raise ContractViolation("every p_i must be in [0, 1]")
    if trials < 1:
        raise ContractViolation(f"trials must be at least 1, got {trials}")
    successes = rng.random((trials, probabilities.size)) < probabilities
    last = probabilities.size - 1
    first = np.where(successes.any(axis=1), successes.argmax(axis=1), last)
    return np.cumsum(probabilities)[first]


def loglog_slope(ns: typing.Sequence[float], values: typing.Sequence[float]) -> float | None:
    """The slope of log(values) against log(ns), or None with fewer than two points."""
    if len(ns) < 2 or any(value <= 0 for value in values):
        return None
    slope, _ = np.polyfit(np.log(ns), np.log(values), 1)
    return float(slope)


def run_lowerbound_demo(spec: ExperimentSpec) -> tuple[list[Row], dict[str, typing.Any]]:
    """Run the matching local algorithm and full-information comparator on a family."""
    rows = sorted(
        _map(_lowerbound_trial, spec, _tasks(spec)),
        key=lambda row: (row["algorithm"], row["n"], row["trial"]),
    )
    algorithms: dict[str, typing.Any] = {}
    for algorithm, group in itertools.groupby(rows, key=lambda row: row["algorithm"]):
        by_n: dict[int, list[Row]] = {}
        for row in group:
            by_n.setdefault(row["n"], []).append(row)
        ns = sorted(by_n)
        local = [_median(row["local_queries"] for row in by_n[n]) for n in ns]
        full = [_median(row["full_info_queries"] for row in by_n[n]) for n in ns]
        ratio = [_median(row["ratio"] for row in by_n[n]) for n in ns]
        algorithms[algorithm] = {
            "n": ns,
            "median_local_queries": local,
            "median_full_info_queries": full,
            "median_ratio": ratio,
            "local_slope": loglog_slope(ns, local),
            "full_info_slope": loglog_slope(ns, full),
            "ratio_slope": loglog_slope(ns, ratio),
        }
    summary = {"kind": "lowerbound", "family": _family_name(spec.source), "algorithms": algorithms}
    return rows, summary


def _diagnostics_trial(spec: ExperimentSpec, cell: int, trial: int) -> list[Row]:
    seed = trial_seed(spec.seed, cell, trial)
    n = spec.n[cell]
    graph, _, weights = generate(PaParams(n, spec.m, seed), _model(spec.source))
    report = degree_diagnostics(graph, weights, DiagnosticsParams.for_graph(n, spec.m))
    statuses = {event.name: event.status for event in report.events}
    row: Row = {
        "n": n,
        "m": spec.m,
        "trial": trial,
        "degree_sum_ok": sum(graph.degrees) == 2 * spec.m * n,
        "loops": report.loops,
        "root_degree": report.root_degree,
        "max_degree": report.max_degree,
        "typical_fraction": report.typical_fraction,
    }
    for name in DIAGNOSTIC_EVENTS:
        row[name] = statuses.get(name, "n/a")
    return [row]


def run_diagnostics_experiment(
    spec: ExperimentSpec,
) -> tuple[list[Row], dict[str, typing.Any]]:
    """Structural diagnostics across seeds; the summary has per-event pass rates."""
    rows = sorted(
        _map(_diagnostics_trial, spec, _tasks(spec)), key=lambda row: (row["n"], row["trial"])
    )
    cells = []
    for n, group in itertools.groupby(rows, key=lambda row: row["n"]):
        trials = list(group)
        rates: dict[str, float | None] = {}
        for name in DIAGNOSTIC_EVENTS:
            decided = [row[name] for row in trials if row[name] != "n/a"]
            rates[name] = decided.count("pass") / len(decided) if decided else None
        cells.append(
            {
                "n": n,
                "degree_sum_ok_rate": sum(row["degree_sum_ok"] for row in trials) / len(trials),
                "pass_rates": rates,
            }
        )
    return rows, {"kind": "diagnostics", "cells": cells}


def _cell(value: object) -> str:
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case float():
            return repr(value)
        case _:
            return str(value)


def emit_results(rows: typing.Sequence[Row], path: pathlib.Path, fmt: Format = "csv") -> None:
    """Write rows with a header (CSV) or as a JSON array; columns follow the first row."""
    if not rows:
        raise EmptyResultsError(f"no rows to write to {path}")
    columns = list(rows[0])
    for row in rows:
        assert list(row) == columns, (list(row), columns)
    match fmt:
        case "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows([_cell(row[column]) for column in columns] for row in rows)
            text = buffer.getvalue()
        case "json":
            text = json.dumps(list(rows), indent=2) + "\n"
        case _:
            raise ContractViolation(f"unknown format {fmt!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


_RE_INT = re.compile(r"-?\d+")


def _parse_cell(text: str) -> object:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if _RE_INT.fullmatch(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def load_results(path: pathlib.Path) -> list[Row]:
    """Read rows written by emit_results, restoring their types."""
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        loaded = json.loads(text)
        assert isinstance(loaded, list), type(loaded)
        return loaded
    return [
        {column: _parse_cell(value) for column, value in row.items()}
        for row in csv.DictReader(io.StringIO(text))
    ]


RUNNERS: dict[Kind, typing.Callable[[ExperimentSpec], tuple[list[Row], dict[str, typing.Any]]]] = {
    "scaling": run_scaling_experiment,
    "highdegree": run_highdegree_experiment,
    "approximation": run_approximation_experiment,
    "lowerbound": run_lowerbound_demo,
    "diagnostics": run_diagnostics_experiment,
}


def run_experiment(
    spec: ExperimentSpec, out: pathlib.Path, fmt: Format = "csv"
) -> list[pathlib.Path]:
    """Run spec and write <kind>.<fmt> and <kind>-summary.json into out."""
    rows, summary = RUNNERS[spec.kind](spec)
    results = out / f"{spec.kind}.{fmt}"
    emit_results(rows, results, fmt)
    summary_path = out / f"{spec.kind}-summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    return [results, summary_path]
