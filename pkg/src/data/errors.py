class BudgetingError(Exception):
    """Base class for every error raised by the solver."""


class StructuralError(BudgetingError):
    """Malformed instance, unknown id or broken model invariant."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ParameterError(BudgetingError):
    """An argument is outside its admissible range."""


class DomainError(BudgetingError):
    """The operation is only defined for approval instances."""


class SearchBoundExceeded(BudgetingError):
    """A brute-force search refused to run past its configured limit."""

    def __init__(self, name: str, limit: int, actual: int):
        self.name = name
        self.limit = limit
        self.actual = actual
        super().__init__(f"search bound {name}={limit} exceeded (instance needs {actual})")


class StabilizationError(BudgetingError):
    """The eps-halving loop never produced two equal runs in a row."""

    def __init__(self, message: str, previous_trace=None, current_trace=None):
        self.previous_trace = previous_trace
        self.current_trace = current_trace
        super().__init__(message)


class InternalConsistencyError(BudgetingError):
    """Exact bookkeeping produced an impossible state."""


class UnknownFixtureError(StructuralError, KeyError):
    def __init__(self, fixture_id: str):
        self.fixture_id = fixture_id
        StructuralError.__init__(self, f"unknown fixture '{fixture_id}'")

    def __str__(self) -> str:
        return self.args[0]
