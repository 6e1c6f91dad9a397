"""Exceptions raised by the fcm_effects package."""


class FcmError(Exception):
    """Base class for every error raised by fcm_effects."""


class NonSquareMatrix(FcmError, ValueError):
    def __init__(self, shape):
        self.shape = tuple(shape)
        super().__init__(f"Weight matrix must be square, got shape {self.shape}")


class WeightOutOfRange(FcmError, ValueError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"Weight at ({i}, {j}) is {value!r}, outside [-1, 1]")


class NonzeroDiagonal(FcmError, ValueError):
    def __init__(self, i: int, value: float = None):
        self.i, self.value = i, value
        super().__init__(f"Self-loop on concept {i} (diagonal entry {value!r}); the diagonal must be zero")


class InvalidEdge(FcmError, ValueError):
    pass


class DuplicateEdge(FcmError, ValueError):
    def __init__(self, source: int, target: int):
        self.source, self.target = source, target
        super().__init__(f"Duplicate edge {source}->{target}")


class ConceptOutOfRange(FcmError, ValueError):
    def __init__(self, index, n: int):
        self.index, self.n = index, n
        super().__init__(f"Concept index {index!r} is outside [0, {n})")


class TooFewConcepts(FcmError, ValueError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"Operation needs at least 2 concepts, graph has {n}")


class SameConcept(FcmError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Source and target are the same concept ({index})")


class BudgetExceeded(FcmError):
    """Raised when a run hits its path cap or wall-clock deadline."""


class InvalidSpec(FcmError, ValueError):
    pass


class InvalidPlan(FcmError, ValueError):
    pass


class EmptyInput(FcmError, ValueError):
    pass


class DimensionMismatch(FcmError, ValueError):
    pass


class GraphFormatError(FcmError, ValueError):
    """A graph or state file could not be parsed; `line` is 1-based when known."""

    def __init__(self, path: str, message: str, line: int = None):
        self.path, self.line = path, line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
