"""Immutable multigraphs, local neighborhoods and domination primitives."""

import collections
import dataclasses
import functools
import math
import pathlib
import typing

from netlocal.errors import ContractViolation, GraphFormatError, InvalidNodeError

Mode = typing.Literal["open", "closed"]
Edge = tuple[int, int]

MODES: tuple[Mode, ...] = ("open", "closed")


def edge_key(u: int, v: int) -> Edge:
    """Order the endpoints of an undirected edge."""
    return (u, v) if u <= v else (v, u)


@dataclasses.dataclass(frozen=True)
class Graph:
    """An undirected multigraph on the nodes 1..n.

    Edges are kept in construction order so that the text format round-trips
    exactly. A self-loop is stored once in its node's adjacency list and adds 2 to
    the node's degree; parallel edges are repeated.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ContractViolation(f"a graph needs at least one node, got {self.node_count}")
        n = self.node_count
        for u, v in self.edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise InvalidNodeError(f"edge ({u}, {v}) is outside 1..{n}")

    @classmethod
    def from_edges(cls, node_count: int, edges: typing.Iterable[Edge]) -> "Graph":
        """Build a graph from any iterable of endpoint pairs."""
        return cls(node_count, tuple((int(u), int(v)) for u, v in edges))

    @property
    def edge_count(self) -> int:
        """The number of edges, loops and parallel edges included."""
        return len(self.edges)

    @functools.cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        lists: list[list[int]] = [[] for _ in range(self.node_count + 1)]
        for u, v in self.edges:
            lists[u].append(v)
            if u != v:
                lists[v].append(u)
        return tuple(tuple(neighbors) for neighbors in lists)

    @functools.cached_property
    def _neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(neighbors) - {v} for v, neighbors in enumerate(self._adjacency)
        )

    @functools.cached_property
    def degrees(self) -> tuple[int, ...]:
        """Multigraph degrees, indexed by node (position 0 is unused)."""
        degrees = [0] * (self.node_count + 1)
        for u, v in self.edges:
            degrees[u] += 1
            degrees[v] += 1
        return tuple(degrees)

    @property
    def nodes(self) -> range:
        """All node indices."""
        return range(1, self.node_count + 1)

    def check(self, v: int) -> int:
        """Return v if it is a node of this graph, raise otherwise."""
        if not 1 <= v <= self.node_count:
            raise InvalidNodeError(f"node {v} is outside 1..{self.node_count}")
        return v

    def degree(self, v: int) -> int:
        """The multigraph degree of v (a loop counts 2)."""
        return self.degrees[self.check(v)]

    def neighbors(self, v: int) -> tuple[int, ...]:
        """The neighbor multiset of v; a loop appears once, as v itself."""
        return self._adjacency[self.check(v)]

    def neighbor_set(self, v: int) -> frozenset[int]:
        """The distinct neighbors of v, excluding v."""
        return self._neighbor_sets[self.check(v)]

    def loop_count(self, v: int) -> int:
        """The number of self-loops at v."""
        return self._adjacency[self.check(v)].count(v)


class VertexSet:
    """A set of nodes (or labels) that remembers the order of insertion."""

    __slots__ = ("_members",)

    def __init__(self, members: typing.Iterable[int] = ()) -> None:
        self._members: dict[int, None] = dict.fromkeys(members)

    def add(self, member: int) -> bool:
        """Add a member, returning whether it was new."""
        if member in self._members:
            return False
        self._members[member] = None
        return True

    @property
    def members(self) -> frozenset[int]:
        """The members, unordered."""
        return frozenset(self._members)

    @property
    def insertion_order(self) -> tuple[int, ...]:
        """The members in the order they were added."""
        return tuple(self._members)

    def copy(self) -> "VertexSet":
        """A copy that can be written independently."""
        return VertexSet(self._members)

    def __contains__(self, member: object) -> bool:
        return member in self._members

    def __iter__(self) -> typing.Iterator[int]:
        return iter(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self._members.keys() == other._members.keys()

    __hash__ = None  # type: ignore [assignment]

    def __repr__(self) -> str:
        return f"VertexSet({list(self._members)!r})"


@dataclasses.dataclass(frozen=True, slots=True)
class LocalView:
    """What a local algorithm sees: visible nodes with degrees, and visible edges.

    Keys of degrees are the visible nodes; keys of edges are the visible edges
    (ordered pairs, loops as (v, v)) mapped to their multiplicity.
    """

    degrees: typing.Mapping[int, int]
    edges: typing.Mapping[Edge, int]
    frontier: frozenset[int]
    mode: Mode

    @classmethod
    def blank(cls, mode: Mode) -> "LocalView":
        """The view of an empty queried set."""
        return cls({}, {}, frozenset(), mode)

    @property
    def empty(self) -> bool:
        """Whether nothing is visible (the queried set is empty)."""
        return not self.degrees

    @property
    def visible_nodes(self) -> frozenset[int]:
        """The visible nodes."""
        return frozenset(self.degrees)

    def relabel(self, label: typing.Callable[[int], int]) -> "LocalView":
        """Translate every node through label."""
        edges: dict[Edge, int] = {}
        for (u, v), count in self.edges.items():
            key = edge_key(label(u), label(v))
            edges[key] = edges.get(key, 0) + count
        return LocalView(
            {label(v): degree for v, degree in self.degrees.items()},
            edges,
            frozenset(map(label, self.frontier)),
            self.mode,
        )


def distances(
    g: Graph, sources: typing.Iterable[int], cutoff: int | None = None
) -> dict[int, int]:
    """Breadth-first distances from a set of sources, up to an optional cutoff."""
    distance: dict[int, int] = {}
    queue: collections.deque[int] = collections.deque()
    for source in sources:
        if g.check(source) not in distance:
            distance[source] = 0
            queue.append(source)
    while queue:
        u = queue.popleft()
        d = distance[u]
        if cutoff is not None and d >= cutoff:
            continue
        for w in g.neighbor_set(u):
            if w not in distance:
                distance[w] = d + 1
                queue.append(w)
    return distance


def dominated_set(g: Graph, s: typing.Iterable[int]) -> VertexSet:
    """D(S) = N(S) ∪ S."""
    members = list(s)
    dominated = VertexSet(g.check(v) for v in members)
    for v in members:
        for w in g.neighbor_set(v):
            dominated.add(w)
    return dominated


def dominated_count(g: Graph, s: typing.Iterable[int]) -> int:
    """|D(S)|."""
    return len(dominated_set(g, s))


def is_dominating(g: Graph, s: typing.Iterable[int]) -> bool:
    """Whether D(S) = V."""
    return dominated_count(g, s) == g.node_count


def neighborhood_view(g: Graph, s: typing.Iterable[int], r: int, mode: Mode) -> LocalView:
    """The r-open or r-closed neighborhood around S."""
    sources = list(s)
    if not sources:
        raise ContractViolation("the neighborhood of an empty set is undefined")
    if r < 1:
        raise ContractViolation(f"radius must be at least 1, got {r}")
    if mode not in MODES:
        raise ContractViolation(f"unknown mode {mode!r}")
    distance = distances(g, sources, cutoff=r)
    edges: dict[Edge, int] = {}
    for u, du in distance.items():
        for w in g.neighbors(u):
            # Each edge once, from its smaller endpoint:
            if w < u or w not in distance:
                continue
            if mode == "open" and du == r and distance[w] == r:
                continue
            edges[u, w] = edges.get((u, w), 0) + 1
    return LocalView(
        {v: g.degrees[v] for v in distance},
        edges,
        frozenset(v for v, d in distance.items() if d == r),
        mode,
    )


def harmonic_number(d: int) -> float:
    """H(d) = 1 + 1/2 + ... + 1/d, with H(0) = 0."""
    if d < 0:
        raise ContractViolation(f"harmonic numbers need d >= 0, got {d}")
    return math.fsum(1 / k for k in range(1, d + 1))


def max_degree(g: Graph) -> tuple[int, int]:
    """A node of maximum degree and that degree; ties go to the smallest index."""
    degrees = g.degrees
    best = max(g.nodes, key=lambda v: (degrees[v], -v))
    return best, degrees[best]


def connected_component(g: Graph, v: int) -> frozenset[int]:
    """The nodes reachable from v."""
    return frozenset(distances(g, [v]))


def is_connected(g: Graph) -> bool:
    """Whether every node is reachable from node 1."""
    return len(distances(g, [1])) == g.node_count


def induces_connected(g: Graph, nodes: typing.Iterable[int]) -> bool:
    """Whether the subgraph induced by nodes is connected (and non-empty)."""
    members = {g.check(v) for v in nodes}
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbor_set(u) & members:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == members


def format_graph(g: Graph) -> str:
    """Serialize to the text format: "n edge_count", then one "u v" per edge."""
    lines = [f"{g.node_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def _ints(line: str, *, path: object, lineno: int) -> tuple[int, int]:
    match line.split():
        case [first, second]:
            try:
                return int(first), int(second)
            except ValueError:
                pass
    raise GraphFormatError(f"expected two integers, got {line!r}", path=path, line=lineno)


def parse_graph(text: str, *, path: object = None) -> Graph:
    """Parse the text format."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        del lines[-1]
    if not lines:
        raise GraphFormatError("empty graph file", path=path)
    n, m = _ints(lines[0], path=path, lineno=1)
    if len(lines) - 1 != m:
        raise GraphFormatError(
            f"header promises {m} edges, found {len(lines) - 1}", path=path, line=1
        )
    edges = [_ints(line, path=path, lineno=i) for i, line in enumerate(lines[1:], 2)]
    try:
        return Graph.from_edges(n, edges)
    except (ContractViolation, InvalidNodeError) as error:
        raise GraphFormatError(str(error), path=path) from None


def read_graph(path: pathlib.Path) -> Graph:
    """Read a graph file."""
    return parse_graph(path.read_text(encoding="utf-8"), path=path)


def write_graph(g: Graph, path: pathlib.Path) -> None:
    """Write a graph file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_graph(g), encoding="utf-8", newline="\n")
