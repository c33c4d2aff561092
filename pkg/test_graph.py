"""Tests for multigraphs, neighborhoods and the graph text format."""

import pathlib

import hypothesis
import hypothesis.strategies as st
import networkx as nx
import pytest

from netlocal.errors import ContractViolation, GraphFormatError, InvalidNodeError
from netlocal.graph import (
    Graph,
    LocalView,
    VertexSet,
    connected_component,
    distances,
    dominated_count,
    dominated_set,
    format_graph,
    harmonic_number,
    induces_connected,
    is_connected,
    is_dominating,
    max_degree,
    neighborhood_view,
    parse_graph,
    read_graph,
    write_graph,
)

GRAPHS = pathlib.Path(__file__).parent / "test-data" / "graphs"

TRIANGLE = Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])


@st.composite
def multigraphs(draw: st.DrawFn, max_nodes: int = 12) -> Graph:
    """Small multigraphs, loops and parallel edges included."""
    n = draw(st.integers(1, max_nodes))
    node = st.integers(1, n)
    edges = draw(st.lists(st.tuples(node, node), max_size=3 * n))
    return Graph.from_edges(n, edges)


def to_networkx(g: Graph) -> nx.MultiGraph:
    """The same multigraph in networkx."""
    other = nx.MultiGraph()
    other.add_nodes_from(g.nodes)
    other.add_edges_from(g.edges)
    return other


def test_loops_and_parallel_edges() -> None:
    """A loop adds 2 to the degree and shows up once among the neighbors."""
    g = read_graph(GRAPHS / "loops.txt")
    assert g.degrees == (0, 4, 3, 1)
    assert g.neighbors(1) == (1, 2, 2)
    assert g.neighbor_set(1) == {2}
    assert g.loop_count(1) == 1
    assert g.loop_count(2) == 0
    assert sum(g.degrees) == 2 * g.edge_count


@hypothesis.given(multigraphs())
def test_degrees_match_networkx(g: Graph) -> None:
    """Degrees agree with networkx's multigraph degrees."""
    other = to_networkx(g)
    assert [g.degree(v) for v in g.nodes] == [other.degree(v) for v in g.nodes]
    assert sum(g.degrees) == 2 * g.edge_count


@hypothesis.given(multigraphs(), st.data())
def test_distances_match_networkx(g: Graph, data: st.DataObject) -> None:
    """Multi-source BFS with a cutoff agrees with networkx."""
    sources = data.draw(st.sets(st.sampled_from(list(g.nodes)), min_size=1))
    cutoff = data.draw(st.integers(1, 4))
    expected = nx.multi_source_dijkstra_path_length(to_networkx(g), sources, cutoff=cutoff)
    assert distances(g, sources, cutoff) == expected


@pytest.mark.parametrize(
    "node_count, edges, error",
    [
        (0, [], ContractViolation),
        (2, [(1, 3)], InvalidNodeError),
        (2, [(0, 1)], InvalidNodeError),
    ],
)
def test_graph_rejects(node_count: int, edges: list[tuple[int, int]], error: type) -> None:
    """Empty graphs and edges outside 1..n are rejected."""
    with pytest.raises(error):
        Graph.from_edges(node_count, edges)


def test_invalid_node_is_an_index_error() -> None:
    """InvalidNodeError can be caught as IndexError."""
    with pytest.raises(IndexError):
        TRIANGLE.degree(4)


def test_vertex_set() -> None:
    """VertexSet keeps insertion order and reports whether an add was new."""
    s = VertexSet([3, 1])
    assert s.add(2)
    assert not s.add(3)
    assert s.insertion_order == (3, 1, 2)
    assert s.members == {1, 2, 3}
    assert s == VertexSet([3, 1, 2])
    assert s != VertexSet([1, 2, 3])
    copy = s.copy()
    copy.add(9)
    assert 9 not in s
    with pytest.raises(TypeError):
        hash(s)


def test_dominated_set_on_a_path() -> None:
    """D(S) is S with its neighbors."""
    g = read_graph(GRAPHS / "path-5.txt")
    assert dominated_set(g, [3]).members == {2, 3, 4}
    assert dominated_count(g, [1, 5]) == 4
    assert is_dominating(g, [2, 4])
    assert not is_dominating(g, [1, 5])
    assert dominated_count(g, []) == 0


def test_open_view_hides_edges_between_frontier_nodes() -> None:
    """The 1-open view of a triangle corner misses the opposite edge."""
    view = neighborhood_view(TRIANGLE, [1], 1, "open")
    assert view.visible_nodes == {1, 2, 3}
    assert view.frontier == {2, 3}
    assert dict(view.edges) == {(1, 2): 1, (1, 3): 1}
    closed = neighborhood_view(TRIANGLE, [1], 1, "closed")
    assert dict(closed.edges) == {(1, 2): 1, (1, 3): 1, (2, 3): 1}


def test_view_counts_parallel_edges_and_loops() -> None:
    """Multiplicities and loops appear in the view's edge map."""
    g = read_graph(GRAPHS / "loops.txt")
    view = neighborhood_view(g, [1], 1, "open")
    assert dict(view.edges) == {(1, 1): 1, (1, 2): 2}
    assert dict(view.degrees) == {1: 4, 2: 3}


def test_view_radius_two() -> None:
    """At radius 2 on a path, the frontier is two steps out."""
    g = read_graph(GRAPHS / "path-5.txt")
    view = neighborhood_view(g, [3], 2, "open")
    assert view.visible_nodes == {1, 2, 3, 4, 5}
    assert view.frontier == {1, 5}
    assert dict(view.edges) == {(1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 5): 1}


@pytest.mark.parametrize(
    "sources, r, mode",
    [([], 1, "open"), ([1], 0, "open"), ([1], 1, "sideways")],
)
def test_neighborhood_view_rejects(sources: list[int], r: int, mode: str) -> None:
    """An empty S, a radius below 1 or an unknown mode is a contract violation."""
    with pytest.raises(ContractViolation):
        neighborhood_view(TRIANGLE, sources, r, mode)  # type: ignore [arg-type]


def test_relabel() -> None:
    """Relabelling translates nodes, frontier and edges."""
    view = neighborhood_view(TRIANGLE, [1], 1, "open")
    relabelled = view.relabel(lambda v: 4 - v)
    assert relabelled.visible_nodes == {1, 2, 3}
    assert relabelled.frontier == {1, 2}
    assert dict(relabelled.edges) == {(2, 3): 1, (1, 3): 1}
    assert LocalView.blank("open").empty
    assert not relabelled.empty


@pytest.mark.parametrize(
    "d, expected", [(0, 0.0), (1, 1.0), (2, 1.5), (3, 11 / 6), (4, 25 / 12)]
)
def test_harmonic_number(d: int, expected: float) -> None:
    """H(d) is the d-th partial sum of the harmonic series."""
    assert harmonic_number(d) == pytest.approx(expected)


def test_harmonic_number_rejects_negative() -> None:
    """H is undefined below 0."""
    with pytest.raises(ContractViolation):
        harmonic_number(-1)


def test_max_degree() -> None:
    """The hub of a star wins; ties go to the smallest index."""
    assert max_degree(read_graph(GRAPHS / "star-7.txt")) == (1, 6)
    assert max_degree(read_graph(GRAPHS / "path-5.txt")) == (2, 2)


def test_connectivity() -> None:
    """Connectivity of graphs and induced subgraphs."""
    g = read_graph(GRAPHS / "path-5.txt")
    assert is_connected(g)
    assert not is_connected(Graph.from_edges(3, [(1, 2)]))
    assert connected_component(Graph.from_edges(4, [(1, 2), (3, 4)]), 4) == {3, 4}
    assert induces_connected(g, [2, 3, 4])
    assert not induces_connected(g, [1, 3])
    assert not induces_connected(g, [])


def test_format_round_trips_byte_for_byte() -> None:
    """Reading and formatting a file gives back the same bytes."""
    for path in ("loops.txt", "path-5.txt", "star-7.txt"):
        text = (GRAPHS / path).read_text(encoding="utf-8")
        assert format_graph(parse_graph(text)) == text


@hypothesis.given(multigraphs())
def test_parse_inverts_format(g: Graph) -> None:
    """parse_graph(format_graph(g)) == g, edge order included."""
    assert parse_graph(format_graph(g)) == g


def test_write_graph(tmp_path: pathlib.Path) -> None:
    """write_graph creates parent directories and uses "\\n" line endings."""
    path = tmp_path / "nested" / "triangle.txt"
    write_graph(TRIANGLE, path)
    assert path.read_bytes() == b"3 3\n1 2\n2 3\n1 3\n"
    assert read_graph(path) == TRIANGLE


@pytest.mark.parametrize(
    "name, where",
    [
        ("bad-count.txt", "bad-count.txt:1:"),
        ("bad-token.txt", "bad-token.txt:3:"),
        ("bad-node.txt", "bad-node.txt:"),
    ],
)
def test_malformed_files(name: str, where: str) -> None:
    """Malformed files raise GraphFormatError with path (and line) context."""
    with pytest.raises(GraphFormatError, match=where):
        read_graph(GRAPHS / name)


def test_empty_text() -> None:
    """An empty file is not a graph."""
    with pytest.raises(GraphFormatError):
        parse_graph("\n\n")


def test_distances_ignore_repeated_sources() -> None:
    """A source listed twice is still at distance 0."""
    g = read_graph(GRAPHS / "path-5.txt")
    assert distances(g, [3, 3], cutoff=1) == {3: 0, 2: 1, 4: 1}


def test_vertex_set_compares_only_with_vertex_sets() -> None:
    """Other containers are never equal to a VertexSet."""
    s = VertexSet([2, 1])
    assert s != {1, 2}
    assert s != [2, 1]
    assert repr(s) == "VertexSet([2, 1])"


@pytest.mark.parametrize("text", ["1 2 3\n", "3 1\n1\n", "3 1\n1 2 3\n"])
def test_lines_need_two_integers(text: str) -> None:
    """Header and edge lines hold exactly two integers."""
    with pytest.raises(GraphFormatError, match="expected two integers"):
        parse_graph(text)
