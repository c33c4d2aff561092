"""Structural checks on generated preferential-attachment graphs.

Each event is a high-probability property of the process, so a single graph may
fail one; callers aggregate pass rates over many seeds.
"""

import dataclasses
import math
import typing

import numpy as np

from netlocal.errors import ContractViolation
from netlocal.generators import WeightSequence
from netlocal.graph import Graph, max_degree

Status = typing.Literal["pass", "fail", "n/a"]


@dataclasses.dataclass(frozen=True, slots=True)
class DiagnosticsParams:
    """Thresholds for the events; s0 and s1 bound the "early" and "typical" ranges."""

    n: int
    m: int
    s0: float
    s1: float
    zeta: float = 30.0
    beta: float = 0.25

    @classmethod
    def for_graph(cls, n: int, m: int) -> "DiagnosticsParams":
        """The standard thresholds for an (n, m) graph."""
        if n < 1 or m < 1:
            raise ContractViolation(f"diagnostics need n, m >= 1, got n={n}, m={m}")
        if n < 3:
            # ln ln n is not positive here; nothing is early and nothing is typical.
            return cls(n, m, s0=float(n), s1=0.0)
        log_n = math.log(n)
        return cls(
            n,
            m,
            s0=160 * log_n * math.log(log_n) ** 2,
            s1=n / (2**25 * log_n**2),
        )

    @property
    def applicable(self) -> bool:
        """Whether the typical range [s0, s1] is non-empty."""
        return self.s0 < self.s1

    @property
    def log_n(self) -> float:
        """ln n, floored at ln 2 so bounds stay finite for tiny graphs."""
        return math.log(max(self.n, 2))


@dataclasses.dataclass(frozen=True, slots=True)
class EventResult:
    """The outcome of one event; worst_index is the most violating node, if any."""

    name: str
    status: Status
    worst_index: int | None = None
    detail: str = ""

    def to_json(self) -> dict[str, object]:
        """A JSON-ready dict."""
        return {
            "name": self.name,
            "status": self.status,
            "worst_index": self.worst_index,
            "detail": self.detail,
        }


@dataclasses.dataclass(frozen=True, slots=True)
class DiagnosticsReport:
    """Every event, plus a few raw structural numbers."""

    params: DiagnosticsParams
    events: tuple[EventResult, ...]
    loops: int
    root_degree: int
    max_degree: int
    typical_fraction: float | None

    def event(self, name: str) -> EventResult:
        """Look an event up by name."""
        for event in self.events:
            if event.name == name:
                return event
        raise KeyError(name)

    def passed(self, name: str) -> bool:
        """Whether the named event held."""
        return self.event(name).status == "pass"

    def to_json(self) -> dict[str, object]:
        """A JSON-ready dict."""
        return {
            "n": self.params.n,
            "m": self.params.m,
            "s0": self.params.s0,
            "s1": self.params.s1,
            "applicable": self.params.applicable,
            "loops": self.loops,
            "root_degree": self.root_degree,
            "max_degree": self.max_degree,
            "typical_fraction": self.typical_fraction,
            "events": [event.to_json() for event in self.events],
        }


def classify_typical(ws: WeightSequence, i: int, d: DiagnosticsParams) -> bool:
    """Whether node i is typical: early, or heavy enough for its position."""
    if not 1 <= i <= ws.node_count:
        raise ContractViolation(f"node {i} is outside 1..{ws.node_count}")
    return i <= d.s0 or ws.weight(i) >= 1 / (d.zeta * math.sqrt(i * d.n))


def _event(
    name: str,
    indices: np.ndarray,
    values: np.ndarray,
    bounds: np.ndarray | float,
    *,
    upper: bool,
) -> EventResult:
    if not indices.size:
        return EventResult(name, "n/a", detail="no nodes in range")
    margin = values - bounds if upper else bounds - values
    violations = int(np.count_nonzero(margin > 0))
    if not violations:
        return EventResult(name, "pass", detail=f"{indices.size} nodes checked")
    worst = int(indices[int(np.argmax(margin))])
    return EventResult(
        name, "fail", worst, f"{violations} of {indices.size} nodes violate the bound"
    )


def degree_diagnostics(
    g: Graph, ws: WeightSequence | None, d: DiagnosticsParams
) -> DiagnosticsReport:
    """Check degree events on g, and weight events when its weight sequence is known."""
    n, m = d.n, d.m
    if g.node_count != n:
        raise ContractViolation(f"graph has {g.node_count} nodes, thresholds are for {n}")
    if ws is not None and ws.node_count != n:
        raise ContractViolation(f"weights cover {ws.node_count} nodes, graph has {n}")
    log_n = d.log_n
    root_n = math.sqrt(n)
    index = np.arange(1, n + 1)
    degree = np.asarray(g.degrees[1:], dtype=float)
    late = index >= d.s0
    early = index <= d.s0
    events = [
        _event(
            "degree-upper",
            index[late],
            degree[late],
            6 * m * log_n * np.sqrt(n / index[late]),
            upper=True,
        ),
        _event(
            "degree-lower-early",
            index[early],
            degree[early],
            m * root_n / (5 * log_n**2),
            upper=False,
        ),
        _event("root-degree", index[:1], degree[:1], m * root_n / log_n, upper=False),
        _event("max-degree", index, degree, m * root_n * log_n, upper=True),
    ]
    typical_fraction = None
    if ws is not None:
        prefix = np.asarray(ws.prefix[1:], dtype=float)
        weight = np.diff(np.asarray(ws.prefix, dtype=float))
        expected = np.sqrt(index / n)
        events += [
            _event(
                "weights-concentration",
                index[late],
                np.abs(prefix[late] - expected[late]),
                expected[late] / 100,
                upper=True,
            ),
            _event("root-weight", index[:1], weight[:1], 4 / (log_n * root_n), upper=False),
            _event(
                "early-weights",
                index[early],
                weight[early],
                1 / (log_n**1.9 * root_n),
                upper=False,
            ),
            _event(
                "weights-upper",
                index[late],
                weight[late],
                log_n / np.sqrt(index[late] * n),
                upper=True,
            ),
        ]
        typical = early | (weight >= 1 / (d.zeta * np.sqrt(index * n)))
        typical_fraction = float(np.mean(typical))
        if d.applicable:
            middle = typical & late & (index <= d.s1)
            events.append(
                _event(
                    "typical-degree",
                    index[middle],
                    degree[middle],
                    m / (2 * d.zeta) * np.sqrt(n / index[middle]),
                    upper=False,
                )
            )
        else:
            events.append(
                EventResult("typical-degree", "n/a", detail="s0 >= s1 at this size")
            )
    _, top = max_degree(g)
    return DiagnosticsReport(
        params=d,
        events=tuple(events),
        loops=sum(1 for u, v in g.edges if u == v),
        root_degree=g.degrees[1],
        max_degree=top,
        typical_fraction=typical_fraction,
    )
