"""Exact solvers and full-information baselines to measure local algorithms against."""

import collections
import dataclasses
import itertools
import typing

from netlocal.errors import InfeasibleError, SolverCapError
from netlocal.graph import Graph, VertexSet, dominated_set, max_degree

Method = typing.Literal["exhaustive", "branch-and-bound"]

MDS_CAP = 24
PARTIAL_CAP = 20
NEIGHBOR_CAP = 18


@dataclasses.dataclass(frozen=True)
class ExactSolution:
    """An optimal set, its value, and how many subsets the search looked at."""

    problem: str
    optimum_set: VertexSet
    optimum_value: float
    method: Method
    explored: int

    def to_json(self) -> dict[str, object]:
        """A JSON-ready dict."""
        return {
            "problem": self.problem,
            "value": self.optimum_value,
            "set": sorted(self.optimum_set),
            "explored": self.explored,
            "method": self.method,
        }


def _closed_masks(g: Graph, cap: int, problem: str) -> list[int]:
    """Bit masks of closed neighborhoods; bit v - 1 stands for node v."""
    if g.node_count > cap:
        raise SolverCapError(f"{problem}: n={g.node_count} is above the cap of {cap}")
    masks = []
    for v in g.nodes:
        mask = 1 << (v - 1)
        for w in g.neighbor_set(v):
            mask |= 1 << (w - 1)
        masks.append(mask)
    return masks


def _cover(masks: list[int], subset: tuple[int, ...]) -> int:
    covered = 0
    for v in subset:
        covered |= masks[v]
    return covered


def _smallest_reaching(
    g: Graph, target: int, cap: int, problem: str
) -> ExactSolution:
    masks = _closed_masks(g, cap, problem)
    explored = 0
    for size in range(g.node_count + 1):
        for subset in itertools.combinations(range(g.node_count), size):
            explored += 1
            if _cover(masks, subset).bit_count() >= target:
                return ExactSolution(
                    problem,
                    VertexSet(v + 1 for v in subset),
                    size,
                    "exhaustive",
                    explored,
                )
    raise InfeasibleError(f"{problem}: no set dominates {target} nodes")  # pragma: no cover


def brute_force_mds(g: Graph, cap: int = MDS_CAP) -> ExactSolution:
    """A minimum dominating set, searching subsets in order of size."""
    return _smallest_reaching(g, g.node_count, cap, "mds")


def brute_force_partial_cover(
    g: Graph, target_count: int, cap: int = PARTIAL_CAP
) -> ExactSolution:
    """A smallest S with |D(S)| >= target_count."""
    if target_count > g.node_count:
        raise InfeasibleError(
            f"partial-cover: target {target_count} exceeds n={g.node_count}"
        )
    return _smallest_reaching(g, target_count, cap, "partial-cover")


def brute_force_neighbor_collect(
    g: Graph, c: float, cap: int = NEIGHBOR_CAP
) -> ExactSolution:
    """A set minimizing f(S) = c|S| + |V \\ D(S)|.

    Sizes are searched in increasing order and the search stops once c|S| alone
    reaches the best value found.
    """
    masks = _closed_masks(g, cap, "neighbor-collect")
    n = g.node_count
    best_value, best_subset = float(n), ()
    explored = 1
    for size in range(1, n + 1):  # pragma: no branch
        if c * size >= best_value:
            break
        for subset in itertools.combinations(range(n), size):
            explored += 1
            value = c * size + n - _cover(masks, subset).bit_count()
            if value < best_value:
                best_value, best_subset = value, subset
    return ExactSolution(
        "neighbor-collect",
        VertexSet(v + 1 for v in best_subset),
        best_value,
        "branch-and-bound",
        explored,
    )


def _greedy_until(g: Graph, target: int) -> VertexSet:
    chosen = VertexSet()
    covered = dominated_set(g, ())
    while len(covered) < target:
        best = max(
            g.nodes,
            key=lambda v: (
                (v not in covered) + sum(1 for w in g.neighbor_set(v) if w not in covered),
                -v,
            ),
        )
        chosen.add(best)
        covered = dominated_set(g, chosen)
    return chosen


def full_info_greedy_mds(g: Graph) -> VertexSet:
    """The classic greedy with the whole graph in view: add the node dominating most."""
    return _greedy_until(g, g.node_count)


def full_info_greedy_cover(g: Graph, target_count: int) -> VertexSet:
    """The same greedy, stopping once target_count nodes are dominated."""
    if target_count > g.node_count:
        raise InfeasibleError(
            f"partial-cover: target {target_count} exceeds n={g.node_count}"
        )
    return _greedy_until(g, target_count)


def bfs_shortest_path(g: Graph, s: int, t: int) -> list[int] | None:
    """A shortest s-t path as a node list, or None if t is unreachable."""
    parent = {g.check(s): s}
    queue = collections.deque([s])
    g.check(t)
    while queue:
        u = queue.popleft()
        if u == t:
            path = [t]
            while path[-1] != s:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(g.neighbor_set(u)):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return None


def exact_max_degree(g: Graph) -> tuple[int, int]:
    """A node of maximum degree, and that degree."""
    return max_degree(g)
