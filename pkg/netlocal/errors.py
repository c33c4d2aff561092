"""Exceptions raised by netlocal."""


class NetlocalError(Exception):
    """Base class for every error raised on purpose by this package."""


class InvalidNodeError(NetlocalError, IndexError):
    """A node index (or label) is outside 1..n."""


class ContractViolation(NetlocalError, ValueError):
    """A caller broke an operation's precondition."""


class GraphFormatError(NetlocalError, ValueError):
    """A graph (or weight) file could not be parsed."""

    def __init__(self, message: str, *, path: object = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class LocalityViolation(NetlocalError):
    """An algorithm tried to crawl a node outside its visible neighborhood."""


class AlreadyQueriedError(NetlocalError):
    """An algorithm tried to crawl a node that is already in its queried set."""


class ConstructionError(NetlocalError, ValueError):
    """An adversarial family cannot be built with the given parameters."""


class SolverCapError(NetlocalError):
    """An exhaustive solver refused an instance above its size cap."""


class InfeasibleError(NetlocalError, ValueError):
    """No solution exists for the requested target."""


class FitError(NetlocalError, ValueError):
    """The scaling fit cannot be computed from the given data."""


class SpecError(NetlocalError, ValueError):
    """An experiment spec file is malformed."""


class EmptyResultsError(NetlocalError, ValueError):
    """An experiment produced no rows to write."""
