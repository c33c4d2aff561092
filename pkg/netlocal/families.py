"""Hard instances for local algorithms, each with a planted optimal solution.

Every builder lays its construction out on positions 1..n, validates the planted
solution, then moves every node to a uniformly random index so that nothing about
the construction can be read off node numbers.
"""

import dataclasses
import itertools
import json
import math
import pathlib
import typing

import numpy as np

from netlocal.errors import ConstructionError, ContractViolation
from netlocal.graph import (
    Edge,
    Graph,
    dominated_count,
    induces_connected,
    is_connected,
    is_dominating,
    max_degree,
    write_graph,
)

Problem = typing.Literal[
    "st-connect", "gain-per-cost", "mds", "partial-cover", "neighbor-collect"
]


@dataclasses.dataclass(frozen=True)
class FamilyInstance:
    """A graph, the solution planted in it, and its named nodes (all node indices)."""

    family: str
    graph: Graph
    planted_opt: frozenset[int]
    problem: Problem
    params: typing.Mapping[str, float]
    special_nodes: typing.Mapping[str, int]

    def objective(self, c: float | None = None) -> float:
        """The planted solution's value for this family's problem."""
        g, planted = self.graph, self.planted_opt
        match self.problem:
            case "gain-per-cost":
                return dominated_count(g, planted) / len(planted)
            case "neighbor-collect":
                if c is None:
                    raise ContractViolation("the neighbor-collecting objective needs c")
                return c * len(planted) + g.node_count - dominated_count(g, planted)
            case _:
                return len(planted)

    def to_json(self) -> dict[str, object]:
        """The sidecar record."""
        return {
            "family": self.family,
            "problem": self.problem,
            "params": dict(self.params),
            "special_nodes": dict(self.special_nodes),
            "planted_opt": sorted(self.planted_opt),
        }

    def write(self, path: pathlib.Path) -> pathlib.Path:
        """Write the graph to path and the sidecar next to it; return the sidecar path."""
        write_graph(self.graph, path)
        sidecar = path.with_suffix(".json")
        sidecar.write_text(
            json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
            newline="\n",
        )
        return sidecar


class _Layout:
    """Construction-time positions and edges, before random placement."""

    def __init__(self) -> None:
        self.size = 0
        self.edges: list[Edge] = []

    def nodes(self, count: int) -> list[int]:
        """Allocate count new positions."""
        start = self.size + 1
        self.size += count
        return list(range(start, self.size + 1))

    def join(self, u: int, v: int) -> None:
        """Add an edge."""
        self.edges.append((u, v))

    def clique(self, members: typing.Sequence[int]) -> None:
        """Join every pair of members."""
        self.edges.extend(itertools.combinations(members, 2))

    def place(
        self,
        family: str,
        rng: np.random.Generator,
        *,
        planted: typing.Iterable[int],
        problem: Problem,
        params: typing.Mapping[str, float],
        special: typing.Mapping[str, int],
    ) -> FamilyInstance:
        """Relabel every position through a random permutation."""
        at = [0, *(rng.permutation(self.size) + 1).tolist()]
        return FamilyInstance(
            family=family,
            graph=Graph.from_edges(self.size, ((at[u], at[v]) for u, v in self.edges)),
            planted_opt=frozenset(at[p] for p in planted),
            problem=problem,
            params=dict(params),
            special_nodes={name: at[p] for name, p in special.items()},
        )


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ConstructionError(message)


def broken_paths(n: int, r: int = 1, k: int = 1, *, seed: int = 0) -> FamilyInstance:
    """Paths from s to t on 2r+4 levels of k nodes, all but one cut in the middle.

    Each level is a k-clique and consecutive levels are joined by a perfect matching,
    so the intact path is k-edge-connected. s and t are joined to every node of the
    first and last level. The requested n is rounded down to 2 + paths * k(2r+4).
    """
    _check(r >= 1 and k >= 1, f"r and k must be positive, got r={r}, k={k}")
    levels = 2 * r + 4
    paths = (n - 2) // (k * levels)
    _check(paths >= 1, f"n={n} is too small for one path of {levels} levels of {k}")
    rng = np.random.default_rng(seed)
    layout = _Layout()
    s, t = layout.nodes(2)
    intact = int(rng.integers(paths))
    planted = [s, t]
    for path in range(paths):
        grid = [layout.nodes(k) for _ in range(levels)]
        for level in grid:
            layout.clique(level)
        layout.edges.extend((s, node) for node in grid[0])
        layout.edges.extend((node, t) for node in grid[-1])
        for j in range(levels - 1):
            if path != intact and j == levels // 2 - 1:
                continue
            layout.edges.extend(zip(grid[j], grid[j + 1]))
        if path == intact:
            planted.extend(itertools.chain.from_iterable(grid))
    instance = layout.place(
        "broken_paths",
        rng,
        planted=planted,
        problem="st-connect",
        params={"requested_n": n, "n": layout.size, "r": r, "k": k, "paths": paths},
        special={"s": s, "t": t},
    )
    special = instance.special_nodes
    _check(
        induces_connected(instance.graph, instance.planted_opt)
        and {special["s"], special["t"]} <= instance.planted_opt,
        "the intact path does not join s to t",
    )
    return instance


def tree_hub(n: int, k: int = 1, r: int = 1, *, seed: int = 0) -> FamilyInstance:
    """A complete binary tree with one random leaf turned into a hub of floor(sqrt n) spokes.

    For rk > 1 every tree edge becomes a path with rk - 1 inner nodes, and
    consecutive blocks of k inner nodes form cliques.
    """
    _check(r >= 1 and k >= 1, f"r and k must be positive, got r={r}, k={k}")
    spokes = math.isqrt(n)
    stretch = r * k
    tree_size = (n - spokes + stretch - 1) // stretch
    _check(tree_size >= 2, f"n={n} is too small for a tree with a hub leaf")
    _check(
        spokes + 1 > max(3, k + 1),
        f"n={n} gives a hub of degree {spokes + 1}, not above every other degree",
    )
    rng = np.random.default_rng(seed)
    layout = _Layout()
    tree = [0, *layout.nodes(tree_size)]
    for child in range(2, tree_size + 1):
        parent = tree[child // 2]
        inner = layout.nodes(stretch - 1)
        chain = [parent, *inner, tree[child]]
        layout.edges.extend(itertools.pairwise(chain))
        for start in range(0, len(inner), k):
            layout.clique(inner[start : start + k])
    hub = tree[int(rng.integers(tree_size // 2 + 1, tree_size + 1))]
    layout.edges.extend((hub, leaf) for leaf in layout.nodes(spokes))
    instance = layout.place(
        "tree_hub",
        rng,
        planted=[hub],
        problem="gain-per-cost",
        params={"requested_n": n, "n": layout.size, "r": r, "k": k, "spokes": spokes},
        special={"hub": hub, "s": hub, "root": tree[1]},
    )
    best, _ = max_degree(instance.graph)
    degrees = instance.graph.degrees
    _check(
        best == instance.special_nodes["hub"]
        and sum(1 for d in degrees[1:] if d == degrees[best]) == 1,
        "the hub is not the unique node of maximum degree",
    )
    return instance


def clique_pendant(n: int, *, seed: int = 0) -> FamilyInstance:
    """A clique on n - 2 nodes minus one edge (u, v), with pendants u' and v'."""
    _check(n >= 5, f"clique_pendant needs n >= 5, got {n}")
    rng = np.random.default_rng(seed)
    layout = _Layout()
    clique = layout.nodes(n - 2)
    u_at, v_at = sorted(rng.choice(n - 2, size=2, replace=False).tolist())
    u, v = clique[u_at], clique[v_at]
    layout.edges.extend(pair for pair in itertools.combinations(clique, 2) if pair != (u, v))
    u_prime, v_prime = layout.nodes(2)
    layout.join(u, u_prime)
    layout.join(v, v_prime)
    instance = layout.place(
        "clique_pendant",
        rng,
        planted=[u, v],
        problem="mds",
        params={"requested_n": n, "n": n},
        special={"u": u, "v": v, "u'": u_prime, "v'": v_prime},
    )
    _check(is_dominating(instance.graph, instance.planted_opt), "{u, v} does not dominate")
    return instance


def two_stars_paths(n: int, k: int = 1, *, seed: int = 0) -> FamilyInstance:
    """A big star whose leaves carry paths of k nodes, one of which reaches a small star.

    The big star has ceil(n/2) - floor(sqrt n) - 1 leaves and the small star
    floor(sqrt n) - 1; isolated nodes pad the graph to exactly n nodes. The two
    roots dominate at least half of the graph.
    """
    _check(k >= 1, f"k must be positive, got {k}")
    small = math.isqrt(n)
    leaves = -(-n // 2) - small - 1
    paths = leaves // k if leaves > 0 else 0
    _check(small >= 2 and paths >= 1, f"n={n} is too small for two stars with paths of {k}")
    rng = np.random.default_rng(seed)
    layout = _Layout()
    v = layout.nodes(1)[0]
    big_leaves = layout.nodes(leaves)
    layout.edges.extend((v, leaf) for leaf in big_leaves)
    u = layout.nodes(1)[0]
    layout.edges.extend((u, leaf) for leaf in layout.nodes(small - 1))
    bridge = int(rng.integers(paths))
    bridge_end = 0
    for index in range(paths):
        chain = layout.nodes(k)
        layout.join(big_leaves[index], chain[0])
        layout.edges.extend(itertools.pairwise(chain))
        if index == bridge:
            bridge_end = chain[-1]
            layout.join(bridge_end, u)
    padding = n - layout.size
    assert padding >= 0, padding
    layout.nodes(padding)
    instance = layout.place(
        "two_stars_paths",
        rng,
        planted=[v, u],
        problem="partial-cover",
        params={
            "requested_n": n,
            "n": n,
            "k": k,
            "rho": 0.5,
            "paths": paths,
            "isolated": padding,
        },
        special={"v": v, "u": u, "bridge": bridge_end},
    )
    _check(
        2 * dominated_count(instance.graph, instance.planted_opt) >= n,
        "the two roots dominate less than half of the graph",
    )
    return instance


def stars_with_pendants(n: int, k: int = 1, *, seed: int = 0) -> FamilyInstance:
    """A big and a small star joined leaf to leaf; k big spokes get a pendant each.

    The big star has n - floor(sqrt n) - k nodes and the small star floor(sqrt n),
    so the graph has exactly n nodes. Choosing both hubs costs 2c and leaves the k
    pendants uncovered.
    """
    small = math.isqrt(n)
    _check(k >= 0, f"k must not be negative, got {k}")
    _check(
        n - small - 2 * k >= 3 and small >= 2,
        f"stars_with_pendants needs n - sqrt(n) - 2k >= 3, got n={n}, k={k}",
    )
    rng = np.random.default_rng(seed)
    layout = _Layout()
    big_hub = layout.nodes(1)[0]
    spokes = layout.nodes(n - small - k - 1)
    layout.edges.extend((big_hub, spoke) for spoke in spokes)
    small_hub = layout.nodes(1)[0]
    small_leaves = layout.nodes(small - 1)
    layout.edges.extend((small_hub, leaf) for leaf in small_leaves)
    chosen = rng.choice(len(spokes), size=k + 1, replace=False).tolist()
    bridge = spokes[chosen[0]]
    layout.join(bridge, small_leaves[int(rng.integers(len(small_leaves)))])
    for index in chosen[1:]:
        layout.join(spokes[index], layout.nodes(1)[0])
    instance = layout.place(
        "stars_with_pendants",
        rng,
        planted=[big_hub, small_hub],
        problem="neighbor-collect",
        params={"requested_n": n, "n": n, "k": k},
        special={"big_hub": big_hub, "small_hub": small_hub, "bridge": bridge},
    )
    _check(is_connected(instance.graph), "the two stars are not connected")
    _check(
        instance.objective(1.0) <= 2 + k,
        "the hubs leave more than the k pendants uncovered",
    )
    return instance


def clique_star(n: int, *, seed: int = 0) -> FamilyInstance:
    """A clique on n - floor(sqrt n) nodes minus (u, v), and a star whose leaf v' touches v.

    The planted solution is the star root r with a clique node w other than u and v,
    which dominates everything at cost 2c.
    """
    _check(n >= 9, f"clique_star needs n >= 9, got {n}")
    small = math.isqrt(n)
    rng = np.random.default_rng(seed)
    layout = _Layout()
    clique = layout.nodes(n - small)
    u_at, v_at, w_at = rng.choice(len(clique), size=3, replace=False).tolist()
    u, v, w = clique[u_at], clique[v_at], clique[w_at]
    removed = {(u, v), (v, u)}
    layout.edges.extend(
        pair for pair in itertools.combinations(clique, 2) if pair not in removed
    )
    root = layout.nodes(1)[0]
    leaves = layout.nodes(small - 1)
    layout.edges.extend((root, leaf) for leaf in leaves)
    v_prime = leaves[0]
    layout.join(v, v_prime)
    instance = layout.place(
        "clique_star",
        rng,
        planted=[root, w],
        problem="neighbor-collect",
        params={"requested_n": n, "n": n},
        special={"u": u, "v": v, "r": root, "v'": v_prime, "w": w},
    )
    _check(is_dominating(instance.graph, instance.planted_opt), "{r, w} does not dominate")
    return instance


FAMILIES: typing.Mapping[str, typing.Callable[..., FamilyInstance]] = {
    "broken_paths": broken_paths,
    "tree_hub": tree_hub,
    "clique_pendant": clique_pendant,
    "two_stars_paths": two_stars_paths,
    "stars_with_pendants": stars_with_pendants,
    "clique_star": clique_star,
}


def build_family(
    name: str, n: int, *, r: int = 1, k: int = 1, seed: int = 0
) -> FamilyInstance:
    """Build a family by name, passing only the parameters it takes."""
    match name:
        case "broken_paths" | "tree_hub":
            return FAMILIES[name](n, r=r, k=k, seed=seed)
        case "two_stars_paths" | "stars_with_pendants":
            return FAMILIES[name](n, k=k, seed=seed)
        case "clique_pendant" | "clique_star":
            return FAMILIES[name](n, seed=seed)
        case _:
            raise ConstructionError(
                f"unknown family {name!r} (expected one of {', '.join(FAMILIES)})"
            )
