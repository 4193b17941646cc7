"""
Errors Module - Exception hierarchy shared by the calculus modules
"""

from typing import Optional


class VertexMinorError(Exception):
    """Base class for every error raised by the package"""

    kind = "error"


class CapExceeded(VertexMinorError):
    """A size cap guarding an exhaustive search was exceeded"""

    kind = "cap"

    def __init__(self, cap: str, limit: int, actual: int):
        self.cap = cap
        self.limit = limit
        self.actual = actual
        super().__init__(f"{cap} cap exceeded: {actual} > {limit}")


class BoundOverflow(CapExceeded):
    """An exact bound value grew past the configured bit length"""

    def __init__(self, name: str, limit: int, actual: int):
        super().__init__(f"bound {name} bits", limit, actual)


class InvalidOperation(VertexMinorError):
    """Operation applied outside its domain (bad vertex, non-edge, unknown chord)"""

    kind = "invalid"


class TraceReplayError(InvalidOperation):
    """A trace step could not be applied"""

    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"step {index}: {message}")


class ParseError(VertexMinorError):
    """Malformed input text"""

    kind = "parse"

    def __init__(self, message: str, line: int, col: int = 1, source: Optional[str] = None):
        self.line = line
        self.col = col
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")


class PreconditionError(VertexMinorError):
    """A named hypothesis of a constructive procedure does not hold"""

    kind = "precondition"

    def __init__(self, clause: str, message: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {message}" if message else clause)


class PipelineStageError(VertexMinorError):
    """A pipeline stage produced output that failed its own check"""

    kind = "stage"

    def __init__(self, stage: str, message: str = ""):
        self.stage = stage
        super().__init__(f"stage {stage}: {message}" if message else f"stage {stage}")


class VerificationError(VertexMinorError):
    """An emitted trace failed its replay check under --verify"""

    kind = "verify"

    def __init__(self, what: str, message: str = ""):
        self.what = what
        super().__init__(f"{what} failed verification: {message}" if message else f"{what} failed verification")
