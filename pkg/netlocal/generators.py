"""Preferential-attachment graphs and the random corpus used for approximation runs.

Two processes grow the same kind of graph on nodes 1..n, each node sending m edges
to earlier nodes (or to itself):

- the sequential process adds one edge at a time, choosing the far endpoint with
  probability proportional to its current degree (a node choosing itself counts its
  degree plus one), and
- the weighted process first draws a random weight sequence and then chooses parent
  j of node i with probability w_j / W_i.
"""

import dataclasses
import functools
import pathlib
import typing

import numpy as np

from netlocal.errors import ContractViolation
from netlocal.graph import Edge, Graph, is_connected

Model = typing.Literal["sequential", "weighted"]


@dataclasses.dataclass(frozen=True, slots=True)
class PaParams:
    """Size and seed of a preferential-attachment graph."""

    n: int
    m: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ContractViolation(f"n must be at least 1, got {self.n}")
        if self.m < 1:
            raise ContractViolation(f"m must be at least 1, got {self.m}")
        if not 0 <= self.seed < 1 << 64:
            raise ContractViolation(f"seed must fit in 64 bits, got {self.seed}")


@dataclasses.dataclass(frozen=True, slots=True)
class ParentRecord:
    """The m parents chosen by every node; parents[t - 1] belongs to node t."""

    parents: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(chosen) for chosen in self.parents}
        assert len(widths) <= 1, widths
        for t, chosen in enumerate(self.parents, 1):
            assert all(1 <= p <= t for p in chosen), (t, chosen)

    @property
    def node_count(self) -> int:
        """The number of nodes."""
        return len(self.parents)

    @property
    def m(self) -> int:
        """Parents per node."""
        return len(self.parents[0]) if self.parents else 0

    def of(self, t: int) -> tuple[int, ...]:
        """The parents of node t, in the order they were chosen."""
        return self.parents[t - 1]

    def edges(self) -> typing.Iterator[Edge]:
        """One (t, parent) edge per choice, in creation order."""
        for t, chosen in enumerate(self.parents, 1):
            for p in chosen:
                yield t, p

    def to_graph(self) -> Graph:
        """The multigraph formed by every (t, parent) edge."""
        return Graph.from_edges(self.node_count, self.edges())


@dataclasses.dataclass(frozen=True)
class WeightSequence:
    """Prefix sums W_0 = 0 < W_1 < ... < W_n <= 1 of the node weights."""

    prefix: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.prefix) < 2 or self.prefix[0] != 0:
            raise ContractViolation("a weight sequence starts at W_0 = 0 and has a node")
        array = self._array
        if not np.all(np.diff(array) > 0):
            raise ContractViolation("weight prefix sums must increase strictly")
        if array[-1] > 1:
            raise ContractViolation(f"W_n must be at most 1, got {array[-1]!r}")

    @classmethod
    def from_weights(cls, weights: typing.Iterable[float]) -> "WeightSequence":
        """Build the sequence from w_1..w_n."""
        return cls((0.0, *np.cumsum(np.fromiter(weights, dtype=float)).tolist()))

    @functools.cached_property
    def _array(self) -> np.ndarray:
        return np.asarray(self.prefix, dtype=float)

    @property
    def node_count(self) -> int:
        """n."""
        return len(self.prefix) - 1

    @property
    def weights(self) -> tuple[float, ...]:
        """w_1..w_n."""
        return tuple(np.diff(self._array).tolist())

    def weight(self, i: int) -> float:
        """w_i = W_i - W_(i-1)."""
        self._check(i)
        return self.prefix[i] - self.prefix[i - 1]

    def cumulative(self, i: int) -> float:
        """W_i."""
        self._check(i)
        return self.prefix[i]

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.node_count:
            raise ContractViolation(f"node {i} is outside 1..{self.node_count}")


def generate_sequential(params: PaParams) -> tuple[Graph, ParentRecord]:
    """Grow a graph one edge at a time, attaching proportionally to degree."""
    n, m = params.n, params.m
    rng = np.random.default_rng(params.seed)
    uniforms = rng.random(n * m).tolist()
    # Every edge endpoint so far, so a uniform entry is a degree-biased node:
    endpoints: list[int] = []
    parents: list[tuple[int, ...]] = []
    draws = iter(uniforms)
    for t in range(1, n + 1):
        chosen = []
        for _ in range(m):
            # The new edge's own free end is the extra (z-th) slot:
            z = len(endpoints) + 1
            pick = min(int(next(draws) * z), z - 1)
            p = t if pick == z - 1 else endpoints[pick]
            chosen.append(p)
            endpoints.append(t)
            endpoints.append(p)
        parents.append(tuple(chosen))
    record = ParentRecord(tuple(parents))
    return record.to_graph(), record


def draw_parents(ws: WeightSequence, m: int, rng: np.random.Generator) -> ParentRecord:
    """Choose m parents for every node i, each j <= i with probability w_j / W_i."""
    if m < 1:
        raise ContractViolation(f"m must be at least 1, got {m}")
    prefix = np.asarray(ws.prefix, dtype=float)
    n = ws.node_count
    x = rng.random((n, m)) * prefix[1:, None]
    chosen = np.searchsorted(prefix, x, side="right")
    chosen = np.clip(chosen, 1, np.arange(1, n + 1)[:, None])
    return ParentRecord(tuple(tuple(row) for row in chosen.tolist()))


def generate_weighted(params: PaParams) -> tuple[Graph, ParentRecord, WeightSequence]:
    """Draw a weight sequence from mn uniform pairs, then draw parents from it."""
    n, m = params.n, params.m
    rng = np.random.default_rng(params.seed)
    pairs = np.sort(rng.random((n * m, 2)), axis=1)
    y = np.sort(pairs[:, 1])
    prefix = WeightSequence((0.0, *y[m - 1 :: m].tolist()))
    record = draw_parents(prefix, m, rng)
    return record.to_graph(), record, prefix


def generate(
    params: PaParams, model: Model
) -> tuple[Graph, ParentRecord, WeightSequence | None]:
    """Run either process."""
    match model:
        case "sequential":
            graph, record = generate_sequential(params)
            return graph, record, None
        case "weighted":
            return generate_weighted(params)
        case _:
            raise ContractViolation(f"unknown model {model!r}")


def format_weights(ws: WeightSequence) -> str:
    """One "i w_i W_i" line per node, at full precision."""
    return "".join(
        f"{i} {ws.weight(i)!r} {ws.cumulative(i)!r}\n" for i in range(1, ws.node_count + 1)
    )


def write_weights(ws: WeightSequence, path: pathlib.Path) -> None:
    """Write the weight sidecar file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_weights(ws), encoding="utf-8", newline="\n")


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """An Erdős–Rényi G(n, p) sample, redrawn until it is connected."""
    if n < 1:
        raise ContractViolation(f"n must be at least 1, got {n}")
    if n > 1 and not 0 < p <= 1:
        raise ContractViolation(f"edge probability must be in (0, 1], got {p}")
    rows, cols = np.triu_indices(n, 1)
    while True:
        keep = rng.random(rows.size) < p
        graph = Graph.from_edges(n, zip((rows[keep] + 1).tolist(), (cols[keep] + 1).tolist()))
        if is_connected(graph):
            return graph
