"""Exception hierarchy shared by every module."""

from __future__ import annotations

from dataclasses import dataclass


class SpinSingError(Exception):
    """Base class for all library errors."""


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: object = None

    def __str__(self) -> str:
        return self.kind if self.subject is None else f"{self.kind}({self.subject!r})"


class InvalidGraph(SpinSingError, ValueError):
    """Raised by ``validate_graph`` with every violated invariant."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class UnknownId(SpinSingError, KeyError):
    def __init__(self, what: str, ident: object):
        self.what = what
        self.ident = ident
        super().__init__(f"unknown {what} id {ident!r}")

    def __str__(self) -> str:
        return self.args[0]


class DeltaNotEven(SpinSingError, ValueError):
    def __init__(self, odd_vertices):
        self.odd_vertices = tuple(odd_vertices)
        super().__init__(f"non-exceptional edges have odd degree at {list(self.odd_vertices)}")


class NoSmoothSupport(SpinSingError, ValueError):
    """No even subset contracts the graph to a tree-like graph."""


class IncompatibleDatum(SpinSingError, ValueError):
    pass


class InconsistentSquareRoot(SpinSingError, ValueError):
    pass


class WrongLevel(SpinSingError, ValueError):
    pass


class CapExceeded(SpinSingError, RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"group closure exceeded cap of {cap} elements")


class BadPrimitiveIndex(SpinSingError, ValueError):
    pass


class TrivialElement(SpinSingError, ValueError):
    pass


class QuasireflectionPresent(SpinSingError, ValueError):
    pass


class GenusTooSmall(SpinSingError, ValueError):
    pass


class MissingThetaFlag(SpinSingError, ValueError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r} is a j=0 elliptic tail without trivial_on_elliptic flag")


class NotInTable(SpinSingError, KeyError):
    def __str__(self) -> str:
        return self.args[0] if self.args else "not in weight table"


class NotFromSpinDatum(SpinSingError, ValueError):
    pass


class RequestSyntaxError(SpinSingError, ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{message} at line {line}, column {col}")


class MissingFlag(SpinSingError, ValueError):
    pass


class SchemaError(SpinSingError, ValueError):
    """Well-formed JSON that does not follow the request schema."""


class AnalysisError(SpinSingError):
    """A module error raised while analysing one support."""

    def __init__(self, support: str, cause: Exception):
        self.support = support
        self.cause = cause
        super().__init__(f"support {support}: {type(cause).__name__}: {cause}")
