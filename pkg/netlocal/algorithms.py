"""Local algorithms, written strictly against the LocalOracle interface.

None of these functions look at the hidden graph: they see labels, degrees and
visible edges, and they pay for every jump and crawl. The only exception is the
root-hit probe, which the harness uses to stop a traversal and which is not counted.
"""

import dataclasses
import math
import typing

import numpy as np

from netlocal.errors import ContractViolation
from netlocal.graph import Graph, VertexSet, dominated_count
from netlocal.oracle import LocalOracle, OracleConfig, QueryEntry

StopRule = typing.Literal[
    "root-found", "full-domination", "coverage-threshold", "budget-exhausted"
]
Role = typing.Literal["jump", "greedy", "random", "rescue"]
Status = typing.Literal["ok", "stranded", "budget"]


@dataclasses.dataclass(frozen=True, slots=True)
class BudgetPolicy:
    """A query cap and the condition a run stops on."""

    max_queries: int
    stop_rule: StopRule = "budget-exhausted"

    def __post_init__(self) -> None:
        if self.max_queries < 1:
            raise ContractViolation(f"max_queries must be at least 1, got {self.max_queries}")


@dataclasses.dataclass(frozen=True, slots=True)
class TraceEntry:
    """One paid query: its role, the score of the chosen node and the best score."""

    step: int
    role: Role
    label: int
    score: float | None = None
    best: float | None = None


@dataclasses.dataclass(frozen=True)
class RunResult:  # pylint: disable = too-many-instance-attributes
    """The output set (as labels) and everything measured along the way."""

    algorithm: str
    output: VertexSet
    queries: tuple[QueryEntry, ...]
    trace: tuple[TraceEntry, ...]
    set_size: int
    dominated_count: int
    steps: int
    success: bool
    status: Status = "ok"
    root_hit_step: int | None = None
    values: typing.Mapping[str, float] = dataclasses.field(default_factory=dict)
    top: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        assert self.set_size == len(self.output), (self.set_size, len(self.output))
        assert self.root_hit_step is None or self.root_hit_step <= self.steps

    def to_json(self, n: int, m: int | None, seed: int) -> dict[str, object]:
        """The summary record of a run."""
        return {
            "algorithm": self.algorithm,
            "n": n,
            "m": m,
            "seed": seed,
            "queries": self.steps,
            "set_size": self.set_size,
            "dominated": self.dominated_count,
            "root_hit_step": self.root_hit_step,
            "f_value": self.values.get("f_value"),
            "success": self.success,
            "status": self.status,
            "values": dict(self.values),
            "top": [list(pair) for pair in self.top],
        }


def _tie_breaker(oracle: LocalOracle, rng: np.random.Generator | None) -> np.random.Generator:
    # A stream of its own, so tie-breaks are independent of the label permutation:
    return rng if rng is not None else np.random.default_rng([oracle.config.seed, 1])


def _cap(budget: BudgetPolicy | int | None, default: float) -> float:
    if budget is None:
        return default
    if isinstance(budget, BudgetPolicy):
        return budget.max_queries
    if budget < 1:
        raise ContractViolation(f"budget must be at least 1, got {budget}")
    return budget


def _require(oracle: LocalOracle, radius: int, mode: str, algorithm: str) -> None:
    config = oracle.config
    if config.radius != radius or config.mode != mode:
        raise ContractViolation(
            f"{algorithm} needs radius {radius} and {mode} mode, "
            f"got radius {config.radius} and {config.mode} mode"
        )


def _finish(
    oracle: LocalOracle,
    algorithm: str,
    trace: list[TraceEntry],
    *,
    success: bool,
    status: Status = "ok",
    root_hit_step: int | None = None,
    values: typing.Mapping[str, float] | None = None,
    top: tuple[tuple[int, int], ...] = (),
) -> RunResult:
    output = oracle.queried
    return RunResult(
        algorithm=algorithm,
        output=output,
        queries=oracle.log.entries,
        trace=tuple(trace),
        set_size=len(output),
        dominated_count=oracle.ground_truth_probe("dominated-count"),
        steps=oracle.query_count,
        success=success,
        status=status,
        root_hit_step=root_hit_step,
        values=dict(values or {}),
        top=top,
    )


class _Buckets:
    """Labels grouped by integer score, for an argmax with uniform tie-breaking."""

    def __init__(self) -> None:
        self._buckets: dict[int, list[int]] = {}
        self._where: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._where)

    def __contains__(self, label: object) -> bool:
        return label in self._where

    def add(self, label: int, score: int) -> None:
        """Insert a label (it must not be present)."""
        assert label not in self._where, label
        bucket = self._buckets.setdefault(score, [])
        self._where[label] = (score, len(bucket))
        bucket.append(label)

    def discard(self, label: int) -> None:
        """Remove a label if present, in constant time."""
        if label not in self._where:
            return
        score, position = self._where.pop(label)
        bucket = self._buckets[score]
        last = bucket.pop()
        if last != label:
            bucket[position] = last
            self._where[last] = (score, position)
        if not bucket:
            del self._buckets[score]

    def best(self) -> int:
        """The highest score present."""
        return max(self._buckets)

    def pick(self, rng: np.random.Generator) -> tuple[int, int]:
        """A uniformly random label among those with the highest score."""
        score = self.best()
        bucket = self._buckets[score]
        return bucket[int(rng.integers(len(bucket)))], score


class _DegreeGreedy:
    """Repeatedly crawls a visible non-member of maximum degree."""

    def __init__(self, oracle: LocalOracle, rng: np.random.Generator) -> None:
        self.oracle = oracle
        self.rng = rng
        self.trace: list[TraceEntry] = []
        self._frontier = _Buckets()
        self._members = set(oracle.queried)
        self._absorb(oracle.visible_labels())

    def _absorb(self, labels: typing.Iterable[int]) -> None:
        for label in labels:
            if label not in self._members and label not in self._frontier:
                self._frontier.add(label, self.oracle.degree(label))

    @property
    def stuck(self) -> bool:
        """Whether nothing is left to crawl."""
        return not self._frontier

    def crawl(self) -> int:
        """Crawl the best visible non-member and return its label."""
        label, score = self._frontier.pick(self.rng)
        self._frontier.discard(label)
        self.oracle.crawl(label)
        self._members.add(label)
        self.trace.append(TraceEntry(self.oracle.query_count, "greedy", label, score, score))
        self._absorb(self.oracle.revealed)
        return label

    def jump(self, role: Role) -> int:
        """Jump, keeping the frontier in sync."""
        label = self.oracle.jump()
        self._frontier.discard(label)
        self._members.add(label)
        self.trace.append(TraceEntry(self.oracle.query_count, role, label))
        self._absorb(self.oracle.revealed)
        return label


def _traverse(
    oracle: LocalOracle, cap: float, rng: np.random.Generator
) -> tuple[_DegreeGreedy, Status, int | None]:
    greedy = _DegreeGreedy(oracle, rng)
    if not oracle.queried:
        greedy.jump("jump")
    if oracle.root_hit():
        return greedy, "ok", oracle.query_count
    while True:
        if oracle.query_count >= cap:
            return greedy, "budget", None
        if greedy.stuck:
            return greedy, "stranded", None
        greedy.crawl()
        if oracle.root_hit():
            return greedy, "ok", oracle.query_count


def traverse_to_root(
    oracle: LocalOracle,
    budget: BudgetPolicy | int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> RunResult:
    """Crawl maximum-degree neighbors until the root is queried.

    Needs a 1-local oracle. An unseeded oracle starts with a jump. The default
    budget is n queries.
    """
    _require(oracle, 1, "open", "traverse_to_root")
    cap = _cap(budget, oracle.node_count)
    greedy, status, hit = _traverse(oracle, cap, _tie_breaker(oracle, rng))
    return _finish(
        oracle, "traverse", greedy.trace, success=hit is not None, status=status, root_hit_step=hit
    )


def st_connect(
    graph: Graph,
    s: int,
    t: int,
    budget: BudgetPolicy | int | None = None,
    config: OracleConfig | None = None,
) -> RunResult:
    """Traverse to the root from s and from t; the union of both sets joins s to t.

    Both oracles share one configuration, so they share one labelling.
    """
    config = config or OracleConfig()
    if config.radius != 1 or config.mode != "open":
        raise ContractViolation("st_connect needs 1-local oracles")
    from_s = LocalOracle.create(graph, config, s)
    if graph.check(s) == graph.check(t):
        return _finish(from_s, "stconnect", [], success=True)
    from_t = LocalOracle.create(graph, config, t)
    first = traverse_to_root(from_s, budget)
    second = traverse_to_root(from_t, budget)
    output = first.output.copy()
    for label in second.output:
        output.add(label)
    indices = [from_s.ground_truth_probe("node-index-of-label", label) for label in output]
    success = first.success and second.success
    status = first.status if not first.success else second.status
    return RunResult(
        algorithm="stconnect",
        output=output,
        queries=first.queries + second.queries,
        trace=first.trace + second.trace,
        set_size=len(output),
        dominated_count=dominated_count(graph, indices),
        steps=first.steps + second.steps,
        success=success,
        status=status,
        values={"s_queries": first.steps, "t_queries": second.steps},
    )


def top_k_degrees(
    oracle: LocalOracle,
    k: int,
    budget: BudgetPolicy | int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> RunResult:
    """Traverse to the root, crawl k more greedy steps, report the k best members."""
    if k < 1:
        raise ContractViolation(f"k must be at least 1, got {k}")
    _require(oracle, 1, "open", "top_k_degrees")
    rng = _tie_breaker(oracle, rng)
    cap = _cap(budget, oracle.node_count + k)
    greedy, status, hit = _traverse(oracle, cap, rng)
    if hit is not None:
        for _ in range(k):
            if greedy.stuck or oracle.query_count >= cap:
                break
            greedy.crawl()
    members = list(oracle.queried)
    order = rng.permutation(len(members)).tolist()
    ranked = sorted(
        ((members[i], oracle.degree(members[i])) for i in order), key=lambda pair: -pair[1]
    )
    top = tuple(ranked[:k])
    return _finish(
        oracle,
        "topk",
        greedy.trace,
        success=hit is not None,
        status=status,
        root_hit_step=hit,
        values={"top_degree": top[0][1], "top_degree_sum": sum(d for _, d in top)},
        top=top,
    )


def gain_per_cost_run(
    oracle: LocalOracle,
    budget: BudgetPolicy | int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> RunResult:
    """Traverse to the root and report the best |D(S')| / |S'| over prefixes S'.

    Also reports the singleton ratio 1 + deg of the highest-degree node found.
    """
    _require(oracle, 1, "open", "gain_per_cost_run")
    cap = _cap(budget, oracle.node_count)
    greedy, status, hit = _traverse(oracle, cap, _tie_breaker(oracle, rng))
    covered: set[int] = set()
    best_ratio, best_prefix, best_degree = 0.0, 0, 0
    for size, label in enumerate(oracle.queried, 1):
        # Members see all of their own edges in a 1-local view:
        covered.add(label)
        covered.update(oracle.visible_neighbors(label))
        if len(covered) / size > best_ratio:
            best_ratio, best_prefix = len(covered) / size, size
        best_degree = max(best_degree, oracle.degree(label))
    return _finish(
        oracle,
        "gainpercost",
        greedy.trace,
        success=hit is not None,
        status=status,
        root_hit_step=hit,
        values={
            "best_ratio": best_ratio,
            "best_prefix": best_prefix,
            "best_degree": best_degree,
            "singleton_ratio": 1 + best_degree,
        },
    )


def degree_greedy_cover(
    oracle: LocalOracle,
    budget: BudgetPolicy | int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> RunResult:
    """The 1-local degree-only greedy: crawl maximum degree until D(S) = V.

    It jumps when nothing is left to crawl.
    """
    _require(oracle, 1, "open", "degree_greedy_cover")
    cap = _cap(budget, math.inf)
    greedy = _DegreeGreedy(oracle, _tie_breaker(oracle, rng))
    if not oracle.queried:
        greedy.jump("jump")
    n = oracle.node_count
    status: Status = "ok"
    while oracle.visible_count < n:
        if oracle.query_count >= cap:
            status = "budget"
            break
        if greedy.stuck:
            greedy.jump("rescue")
        else:
            greedy.crawl()
    return _finish(oracle, "degreegreedy", greedy.trace, success=status == "ok", status=status)


def _new_coverage(oracle: LocalOracle, label: int) -> int:
    """|N(v) \\ D(S)| as a 1+-local view shows it: degree minus edges into D(S).

    Parallel edges to one undominated node each count, so this equals the number of
    distinct new nodes only on simple graphs.
    """
    counts = oracle.visible_neighbors(label)
    loops = counts.pop(label, 0)
    return oracle.degree(label) - 2 * loops - sum(counts.values())


class _Alternation:
    """Shared state for the greedy-then-random domination algorithms."""

    def __init__(self, oracle: LocalOracle, rng: np.random.Generator, cap: float) -> None:
        self.oracle = oracle
        self.rng = rng
        self.cap = cap
        self.trace: list[TraceEntry] = []
        self.members = set(oracle.queried)
        self.candidates = {
            label for label in oracle.visible_labels() if label not in self.members
        }

    @property
    def exhausted(self) -> bool:
        """Whether the budget is spent."""
        return self.oracle.query_count >= self.cap

    def _joined(self, label: int) -> None:
        self.members.add(label)
        self.candidates.discard(label)
        self.candidates.update(self.oracle.revealed - self.members)

    def jump(self, role: Role) -> int:
        """Jump and record it."""
        label = self.oracle.jump()
        self._joined(label)
        self.trace.append(TraceEntry(self.oracle.query_count, role, label))
        return label

    def best(self) -> tuple[list[int], int]:
        """The candidates that dominate the most new nodes, and that count."""
        best: list[int] = []
        top = -1
        for label in sorted(self.candidates):
            score = _new_coverage(self.oracle, label)
            if score > top:
                best, top = [label], score
            elif score == top:
                best.append(label)
        return best, top

    def greedy(self, best: list[int], top: int) -> int:
        """Crawl a uniformly random argmax."""
        label = best[int(self.rng.integers(len(best)))]
        self.oracle.crawl(label)
        self._joined(label)
        self.trace.append(TraceEntry(self.oracle.query_count, "greedy", label, top, top))
        return label

    def random_neighbor(self, x: int) -> int | None:
        """Crawl a uniformly random neighbor of x outside S, if there is one."""
        choices = sorted(set(self.oracle.visible_neighbors(x)) - self.members - {x})
        if not choices:
            return None
        label = choices[int(self.rng.integers(len(choices)))]
        self.oracle.crawl(label)
        self._joined(label)
        self.trace.append(TraceEntry(self.oracle.query_count, "random", label))
        return label


def alternate_random(
    oracle: LocalOracle,
    *,
    rng: np.random.Generator | None = None,
    budget: BudgetPolicy | int | None = None,
) -> RunResult:
    """Alternate a greedy crawl with a crawl to a random neighbor until D(S) = V.

    Needs a 1+-local oracle. An unseeded oracle starts with a jump, and so does any
    round in which no visible node would dominate anything new.
    """
    _require(oracle, 1, "closed", "alternate_random")
    state = _Alternation(oracle, _tie_breaker(oracle, rng), _cap(budget, math.inf))
    if not oracle.queried:
        state.jump("jump")
    n = oracle.node_count
    status: Status = "ok"
    while oracle.visible_count < n:
        if state.exhausted:
            status = "budget"
            break
        best, top = state.best()
        if top <= 0:
            state.jump("rescue")
            continue
        x = state.greedy(best, top)
        if not state.exhausted:
            state.random_neighbor(x)
    return _finish(oracle, "altrandom", state.trace, success=status == "ok", status=status)


def alternate_random_and_jump(
    oracle: LocalOracle,
    rho: float,
    *,
    rng: np.random.Generator | None = None,
    budget: BudgetPolicy | int | None = None,
) -> RunResult:
    """Jump, crawl greedily, crawl a random neighbor; stop once |D(S)| >= ceil(rho n)."""
    if not 0 < rho <= 1:
        raise ContractViolation(f"rho must be in (0, 1], got {rho}")
    _require(oracle, 1, "closed", "alternate_random_and_jump")
    state = _Alternation(oracle, _tie_breaker(oracle, rng), _cap(budget, math.inf))
    target = math.ceil(rho * oracle.node_count)

    def covered() -> bool:
        return bool(oracle.queried) and oracle.visible_count >= target

    status: Status = "ok"
    while not covered():
        if state.exhausted:
            status = "budget"
            break
        state.jump("jump")
        if covered() or state.exhausted:
            continue
        best, top = state.best()
        if not best:
            continue
        x = state.greedy(best, top)
        if covered() or state.exhausted:
            continue
        state.random_neighbor(x)
    return _finish(
        oracle,
        "altjump",
        state.trace,
        success=status == "ok",
        status=status,
        values={"target": target},
    )


def neighbor_collect(
    oracle: LocalOracle,
    c: float,
    *,
    rng: np.random.Generator | None = None,
    budget: BudgetPolicy | int | None = None,
) -> RunResult:
    """Run alternate_random and score f(S) = c|S| + |V \\ D(S)|."""
    if c < 1:
        raise ContractViolation(f"c must be at least 1, got {c}")
    result = alternate_random(oracle, rng=rng, budget=budget)
    f_value = c * result.set_size + (oracle.node_count - result.dominated_count)
    return dataclasses.replace(
        result, algorithm="neighborcollect", values={"c": c, "f_value": f_value}
    )


def _walk_to(oracle: LocalOracle, target: int) -> list[int]:
    """Labels from S out to a visible target, nearest first, along visible edges."""
    path = [target]
    while oracle.distance(path[-1]) > 1:
        here = path[-1]
        step = min(
            label
            for label in oracle.visible_neighbors(here)
            if oracle.distance(label) == oracle.distance(here) - 1
        )
        path.append(step)
    return path[::-1]


def st_explore(
    oracle: LocalOracle,
    target: int,
    budget: BudgetPolicy | int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> RunResult:
    """A randomized depth-first search from the seed until target is queried.

    Each step crawls a random unqueried neighbor of the last crawled node, or a
    random neighbor of S when the last node has none. Once target is visible it
    walks straight to it.
    """
    if not oracle.queried:
        raise ContractViolation("st_explore needs an oracle seeded at the source")
    rng = _tie_breaker(oracle, rng)
    cap = _cap(budget, 4 * oracle.node_count)
    trace: list[TraceEntry] = []
    members = set(oracle.queried)
    last = next(iter(oracle.queried))
    status: Status = "ok"
    while target not in members:
        if oracle.query_count >= cap:
            status = "budget"
            break
        if oracle.visible(target):
            for label in _walk_to(oracle, target):
                if label not in members and oracle.query_count < cap:
                    oracle.crawl(label)
                    members.add(label)
                    trace.append(TraceEntry(oracle.query_count, "greedy", label))
            continue
        near = sorted(set(oracle.visible_neighbors(last)) - members)
        if not near:
            near = sorted(
                label
                for label in oracle.visible_labels()
                if label not in members and oracle.distance(label) == 1
            )
        if not near:
            status = "stranded"
            break
        last = near[int(rng.integers(len(near)))]
        oracle.crawl(last)
        members.add(last)
        trace.append(TraceEntry(oracle.query_count, "random", last))
    return _finish(oracle, "stexplore", trace, success=status == "ok", status=status)
