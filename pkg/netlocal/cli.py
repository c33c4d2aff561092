"""Generate graphs, run local algorithms and experiments from the command line."""

import argparse
import json
import pathlib
import sys
import typing

import numpy as np

from netlocal import algorithms
from netlocal.errors import ContractViolation, NetlocalError
from netlocal.families import FAMILIES, build_family
from netlocal.generators import PaParams, generate, random_connected_graph, write_weights
from netlocal.graph import Mode, read_graph, write_graph
from netlocal.harness import Format, KINDS, read_spec, run_experiment, stderr
from netlocal.oracle import LocalOracle, OracleConfig

ALGORITHMS = (
    "traverse",
    "stconnect",
    "topk",
    "gainpercost",
    "degreegreedy",
    "altrandom",
    "altjump",
    "neighborcollect",
    "stexplore",
)
_CLOSED = frozenset({"altrandom", "altjump", "neighborcollect"})


class _GenerateArgs(typing.TypedDict):
    """netlocal generate ..."""

    command: typing.Literal["generate"]
    model: str
    n: int
    m: int
    k: int
    r: int
    c: float | None
    edge_probability: float
    seed: int
    out: pathlib.Path


class _RunArgs(typing.TypedDict):
    """netlocal run ..."""

    command: typing.Literal["run"]
    alg: str
    graph: pathlib.Path
    seed: int
    rho: float
    c: float
    k: int
    budget: int | None
    source: int | None
    target: int | None
    mode: Mode | None
    radius: int | None
    out: pathlib.Path


class _ExperimentArgs(typing.TypedDict):
    """netlocal experiment ..."""

    command: typing.Literal["experiment"]
    kind: str
    spec: pathlib.Path
    out: pathlib.Path
    format: Format


_Args = _GenerateArgs | _RunArgs | _ExperimentArgs


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message: str) -> typing.NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _model(text: str) -> str:
    if text in ("ba", "br", "er"):
        return text
    name = text.removeprefix("family:")
    if text.startswith("family:") and name in FAMILIES:
        return text
    raise argparse.ArgumentTypeError(
        f"expected ba, br, er or family:<name> with a name from {', '.join(FAMILIES)}"
    )


def _parse_args(args: typing.Sequence[str] | None) -> _Args:
    """Parse command line arguments."""
    parser = _ArgumentParser(prog="netlocal", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True, metavar="<command>")

    generate_parser = commands.add_parser("generate", help="Write a generated graph.")
    generate_parser.add_argument(
        "--model",
        required=True,
        type=_model,
        metavar="{ba|br|er|family:<name>}",
        help="Sequential PA, weight-sequence PA, connected G(n, p), or a hard family.",
    )
    generate_parser.add_argument("--n", required=True, type=int, help="Number of nodes.")
    generate_parser.add_argument("--m", default=2, type=int, help="Edges per new node.")
    generate_parser.add_argument("--k", default=1, type=int, help="Family connectivity.")
    generate_parser.add_argument("--r", default=1, type=int, help="Family visibility radius.")
    generate_parser.add_argument(
        "--c", default=None, type=float, help="Report the planted cost at this c."
    )
    generate_parser.add_argument(
        "--edge-probability", default=0.3, type=float, help="Edge probability for er."
    )
    generate_parser.add_argument("--seed", default=0, type=int, help="Random seed.")
    generate_parser.add_argument("--out", required=True, type=pathlib.Path)

    run_parser = commands.add_parser("run", help="Run a local algorithm on a graph file.")
    run_parser.add_argument("--alg", required=True, choices=ALGORITHMS)
    run_parser.add_argument("--graph", required=True, type=pathlib.Path)
    run_parser.add_argument("--seed", default=0, type=int, help="Oracle seed.")
    run_parser.add_argument("--rho", default=0.5, type=float, help="Coverage fraction.")
    run_parser.add_argument("--c", default=2.0, type=float, help="Cost per queried node.")
    run_parser.add_argument("--k", default=1, type=int, help="How many degrees topk reports.")
    run_parser.add_argument("--budget", default=None, type=int, help="Query cap.")
    run_parser.add_argument(
        "--source", default=None, type=int, help="Seed node (default: uniformly random)."
    )
    run_parser.add_argument("--target", default=None, type=int, help="Target node.")
    run_parser.add_argument("--mode", default=None, choices=("open", "closed"))
    run_parser.add_argument("--radius", default=None, type=int)
    run_parser.add_argument("--out", required=True, type=pathlib.Path)

    experiment_parser = commands.add_parser("experiment", help="Run an experiment spec.")
    experiment_parser.add_argument("kind", choices=sorted(KINDS))
    experiment_parser.add_argument("--spec", required=True, type=pathlib.Path)
    experiment_parser.add_argument("--out", required=True, type=pathlib.Path)
    experiment_parser.add_argument("--format", default="csv", choices=("csv", "json"))

    parsed = typing.cast(_Args, vars(parser.parse_args(args)))
    match parsed:
        case {"command": "run", "alg": "stconnect" | "stexplore" as alg}:
            if parsed["source"] is None or parsed["target"] is None:
                run_parser.error(f"--alg {alg} needs --source and --target")
    return parsed


def _generate(parsed: _GenerateArgs) -> None:
    out, model, n = parsed["out"], parsed["model"], parsed["n"]
    match model:
        case "ba" | "br":
            params = PaParams(n, parsed["m"], parsed["seed"])
            graph, _, weights = generate(params, "sequential" if model == "ba" else "weighted")
            write_graph(graph, out)
            stderr(model, "->", out)
            if weights is not None:
                sidecar = out.with_suffix(".weights")
                write_weights(weights, sidecar)
                stderr(model, "->", sidecar)
        case "er":
            rng = np.random.default_rng(parsed["seed"])
            write_graph(random_connected_graph(n, parsed["edge_probability"], rng), out)
            stderr(model, "->", out)
        case _:
            instance = build_family(
                model.removeprefix("family:"),
                n,
                r=parsed["r"],
                k=parsed["k"],
                seed=parsed["seed"],
            )
            sidecar = instance.write(out)
            stderr(model, "->", out)
            stderr(model, "->", sidecar)
            if parsed["c"] is not None and instance.problem == "neighbor-collect":
                stderr(f"planted cost at c={parsed['c']}: {instance.objective(parsed['c'])}")


def _run(parsed: _RunArgs) -> None:
    alg = parsed["alg"]
    graph = read_graph(parsed["graph"])
    n = graph.node_count
    seed = parsed["seed"]
    default_mode: Mode = "closed" if alg in _CLOSED else "open"
    config = OracleConfig(
        radius=parsed["radius"] or 1, mode=parsed["mode"] or default_mode, seed=seed
    )
    source = parsed["source"]
    if source is None and alg != "altjump":
        source = int(np.random.default_rng([seed, 2]).integers(1, n + 1))
    budget = parsed["budget"]
    result: algorithms.RunResult
    match alg:
        case "stconnect":
            assert source is not None and parsed["target"] is not None
            result = algorithms.st_connect(graph, source, parsed["target"], budget, config)
        case "stexplore":
            assert source is not None and parsed["target"] is not None
            oracle = LocalOracle(graph, config, source)
            target = oracle.ground_truth_probe("label-of-index", parsed["target"])
            result = algorithms.st_explore(oracle, target, budget)
        case "traverse":
            result = algorithms.traverse_to_root(LocalOracle(graph, config, source), budget)
        case "topk":
            oracle = LocalOracle(graph, config, source)
            result = algorithms.top_k_degrees(oracle, parsed["k"], budget)
        case "gainpercost":
            result = algorithms.gain_per_cost_run(LocalOracle(graph, config, source), budget)
        case "degreegreedy":
            result = algorithms.degree_greedy_cover(LocalOracle(graph, config, source), budget)
        case "altrandom":
            oracle = LocalOracle(graph, config, source)
            result = algorithms.alternate_random(oracle, budget=budget)
        case "altjump":
            oracle = LocalOracle(graph, config, source)
            result = algorithms.alternate_random_and_jump(oracle, parsed["rho"], budget=budget)
        case "neighborcollect":
            oracle = LocalOracle(graph, config, source)
            result = algorithms.neighbor_collect(oracle, parsed["c"], budget=budget)
        case _:  # pragma: no cover
            raise ContractViolation(f"unknown algorithm {alg!r}")
    # Oracles built from one config share one labelling:
    labels = LocalOracle(graph, config)
    record = result.to_json(n, None, seed)
    record["output"] = sorted(
        labels.ground_truth_probe("node-index-of-label", label) for label in result.output
    )
    out = parsed["out"]
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8", newline="\n")
    stderr(parsed["graph"], "->", out)


def _experiment(parsed: _ExperimentArgs) -> None:
    spec = read_spec(parsed["spec"])
    if spec.kind != KINDS[parsed["kind"]]:
        raise ContractViolation(
            f"{parsed['spec']} describes a {spec.kind} experiment, not {parsed['kind']}"
        )
    for out in run_experiment(spec, parsed["out"], parsed["format"]):
        stderr(parsed["spec"], "->", out)


def main(args: typing.Sequence[str] | None = None) -> int:
    """Run the main program."""
    parsed = _parse_args(args)
    try:
        match parsed:
            case {"command": "generate"}:
                _generate(typing.cast(_GenerateArgs, parsed))
            case {"command": "run"}:
                _run(typing.cast(_RunArgs, parsed))
            case {"command": "experiment"}:
                _experiment(typing.cast(_ExperimentArgs, parsed))
            case _:  # pragma: no cover
                assert False, parsed
    except (NetlocalError, OSError) as error:
        stderr(error)
        return 2
    return 0
