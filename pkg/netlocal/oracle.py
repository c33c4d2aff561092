"""The local-information model: jump and crawl queries against a hidden graph.

Algorithms only ever hold a LocalOracle. Nodes are named by opaque labels (a random
permutation of 1..n), the visible part of the graph is the r-open or r-closed
neighborhood of the queried set, and every jump or crawl is logged and counted.
Ground-truth probes exist for the harness; they are logged but never counted.
"""

import collections
import dataclasses
import json
import typing

import numpy as np

from netlocal.errors import (
    AlreadyQueriedError,
    ContractViolation,
    InvalidNodeError,
    LocalityViolation,
)
from netlocal.graph import MODES, Edge, Graph, LocalView, Mode, VertexSet, edge_key

LabelMode = typing.Literal["opaque", "transparent"]
QueryKind = typing.Literal["jump", "crawl", "probe"]
Question = typing.Literal[
    "root-hit", "node-index-of-label", "label-of-index", "dominated-count"
]


@dataclasses.dataclass(frozen=True, slots=True)
class OracleConfig:
    """How much an algorithm sees, and the seed for labels and jumps.

    radius=1, mode="open" is a 1-local algorithm; radius=1, mode="closed" is 1+-local.
    """

    radius: int = 1
    mode: Mode = "open"
    seed: int = 0
    label_mode: LabelMode = "opaque"
    root: int = 1

    def __post_init__(self) -> None:
        if self.radius < 1:
            raise ContractViolation(f"radius must be at least 1, got {self.radius}")
        if self.mode not in MODES:
            raise ContractViolation(f"unknown mode {self.mode!r}")
        if self.label_mode not in ("opaque", "transparent"):
            raise ContractViolation(f"unknown label mode {self.label_mode!r}")


@dataclasses.dataclass(frozen=True, slots=True)
class QueryEntry:
    """One logged interaction."""

    step: int
    kind: QueryKind
    label: int | None


class QueryLog:
    """Every jump, crawl and probe, in order."""

    def __init__(self) -> None:
        self._entries: list[QueryEntry] = []
        self._counts: collections.Counter[str] = collections.Counter()

    def record(self, kind: QueryKind, label: int | None) -> QueryEntry:
        """Append an entry; probes share the step number of the last query."""
        if kind != "probe":
            self._counts[kind] += 1
        entry = QueryEntry(self.query_count, kind, label)
        self._entries.append(entry)
        return entry

    @property
    def entries(self) -> tuple[QueryEntry, ...]:
        """All entries."""
        return tuple(self._entries)

    @property
    def jumps(self) -> int:
        """The number of jumps."""
        return self._counts["jump"]

    @property
    def crawls(self) -> int:
        """The number of crawls."""
        return self._counts["crawl"]

    @property
    def query_count(self) -> int:
        """Jumps plus crawls."""
        return self.jumps + self.crawls

    def to_jsonl(self) -> str:
        """One JSON object per line."""
        return "".join(
            json.dumps(
                {"step": entry.step, "kind": entry.kind, "label": entry.label},
                separators=(",", ":"),
            )
            + "\n"
            for entry in self._entries
        )


class LocalOracle:  # pylint: disable = too-many-instance-attributes
    """A hidden graph, a growing queried set S, and the view S allows."""

    def __init__(
        self, graph: Graph, config: OracleConfig | None = None, seed_node: int | None = None
    ) -> None:
        self._graph = graph
        self._config = config = config or OracleConfig()
        graph.check(config.root)
        self._rng = np.random.default_rng(config.seed)
        n = graph.node_count
        if config.label_mode == "opaque":
            labels = (self._rng.permutation(n) + 1).tolist()
        else:
            labels = list(range(1, n + 1))
        self._label_of = [0, *labels]
        self._index_of = [0] * (n + 1)
        for index, label in enumerate(labels, 1):
            self._index_of[label] = index
        self._queried = VertexSet()
        self._distance: dict[int, int] = {}
        self._revealed: frozenset[int] = frozenset()
        self.log = QueryLog()
        if seed_node is not None:
            self._admit(graph.check(seed_node))

    @classmethod
    def create(
        cls, graph: Graph, config: OracleConfig | None = None, seed_node: int | None = None
    ) -> "LocalOracle":
        """An oracle whose S is {seed_node} (free of charge) or empty."""
        return cls(graph, config, seed_node)

    @property
    def config(self) -> OracleConfig:
        """The configuration."""
        return self._config

    @property
    def node_count(self) -> int:
        """n, which the model lets algorithms know."""
        return self._graph.node_count

    @property
    def query_count(self) -> int:
        """Jumps plus crawls so far."""
        return self.log.query_count

    @property
    def queried(self) -> VertexSet:
        """The labels of S, in the order they joined."""
        return VertexSet(self._label_of[v] for v in self._queried)

    @property
    def revealed(self) -> frozenset[int]:
        """Labels that became visible with the most recent query."""
        return self._revealed

    def _index(self, label: int) -> int:
        if not 1 <= label <= self._graph.node_count:
            raise InvalidNodeError(f"label {label} is outside 1..{self._graph.node_count}")
        return self._index_of[label]

    def _admit(self, v: int) -> None:
        """Add hidden node v to S and lower distances within the radius."""
        radius = self._config.radius
        distance = self._distance
        revealed = []
        if v not in distance:
            revealed.append(v)
        distance[v] = 0
        self._queried.add(v)
        queue = collections.deque([v])
        while queue:
            u = queue.popleft()
            d = distance[u] + 1
            if d > radius:
                continue
            for w in self._graph.neighbor_set(u):
                old = distance.get(w)
                if old is None or d < old:
                    if old is None:
                        revealed.append(w)
                    distance[w] = d
                    queue.append(w)
        self._revealed = frozenset(self._label_of[w] for w in revealed)

    def jump(self) -> int:
        """Add a uniformly random node (possibly already in S) and return its label."""
        v = int(self._rng.integers(1, self._graph.node_count + 1))
        label = self._label_of[v]
        self.log.record("jump", label)
        if v in self._queried:
            self._revealed = frozenset()
        else:
            self._admit(v)
        return label

    def crawl(self, label: int) -> None:
        """Add a visible node that is not yet in S."""
        v = self._index(label)
        if v in self._queried:
            raise AlreadyQueriedError(f"label {label} is already queried")
        if v not in self._distance:
            raise LocalityViolation(f"label {label} is not visible")
        self.log.record("crawl", label)
        self._admit(v)

    def _edge_visible(self, u: int, w: int) -> bool:
        radius = self._config.radius
        return self._config.mode == "closed" or not (
            self._distance[u] == radius and self._distance[w] == radius
        )

    def current_view(self) -> LocalView:
        """The neighborhood of S, in labels; blank while S is empty."""
        if not self._queried:
            return LocalView.blank(self._config.mode)
        label_of = self._label_of
        radius = self._config.radius
        edges: dict[Edge, int] = {}
        for u in self._distance:
            for w in self._graph.neighbors(u):
                if w < u or w not in self._distance or not self._edge_visible(u, w):
                    continue
                key = edge_key(label_of[u], label_of[w])
                edges[key] = edges.get(key, 0) + 1
        return LocalView(
            {label_of[v]: self._graph.degrees[v] for v in self._distance},
            edges,
            frozenset(label_of[v] for v, d in self._distance.items() if d == radius),
            self._config.mode,
        )

    def visible(self, label: int) -> bool:
        """Whether label is in the current view."""
        return self._index(label) in self._distance

    def _visible_index(self, label: int) -> int:
        v = self._index(label)
        if v not in self._distance:
            raise LocalityViolation(f"label {label} is not visible")
        return v

    def degree(self, label: int) -> int:
        """The degree of a visible node."""
        return self._graph.degrees[self._visible_index(label)]

    def distance(self, label: int) -> int:
        """The distance from S to a visible node."""
        return self._distance[self._visible_index(label)]

    def visible_neighbors(self, label: int) -> dict[int, int]:
        """Visible edges at a visible node: neighbor label -> multiplicity.

        A self-loop appears under the node's own label.
        """
        v = self._visible_index(label)
        counts: dict[int, int] = {}
        for w in self._graph.neighbors(v):
            if w in self._distance and self._edge_visible(v, w):
                key = self._label_of[w]
                counts[key] = counts.get(key, 0) + 1
        return counts

    @property
    def visible_count(self) -> int:
        """The number of visible nodes."""
        return len(self._distance)

    @property
    def frontier_labels(self) -> frozenset[int]:
        """Visible nodes at distance exactly r."""
        radius = self._config.radius
        return frozenset(
            self._label_of[v] for v, d in self._distance.items() if d == radius
        )

    def visible_labels(self) -> typing.Iterator[int]:
        """Every visible label."""
        return (self._label_of[v] for v in self._distance)

    def ground_truth_probe(self, question: Question, argument: int | None = None) -> int:
        """Answer a question from the hidden graph without charging a query.

        root-hit returns 1 or 0. node-index-of-label and label-of-index translate
        argument. dominated-count is |D(S)|.
        """
        match question:
            case "root-hit":
                answer = int(self._config.root in self._queried)
            case "node-index-of-label":
                assert argument is not None
                answer = self._index(argument)
            case "label-of-index":
                assert argument is not None
                answer = self._label_of[self._graph.check(argument)]
            case "dominated-count":
                answer = sum(1 for d in self._distance.values() if d <= 1)
            case _:
                raise ContractViolation(f"unknown probe {question!r}")
        self.log.record("probe", argument)
        return answer

    def root_hit(self) -> bool:
        """Whether the configured root is in S."""
        return bool(self.ground_truth_probe("root-hit"))
