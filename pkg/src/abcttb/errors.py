"""Exception types raised across the package."""


class ContractViolation(ValueError):
    """Raised when an argument breaks an operation's precondition."""


class EmptyTraining(ContractViolation):
    pass


class AcceptanceStall(RuntimeError):
    """The learner hit its proposal cap before collecting enough acceptances.

    The partially updated learner state is kept on ``state`` so callers can
    still inspect (or score) what was learned before the cap.
    """

    def __init__(self, message, state=None, replicate=None):
        super().__init__(message)
        self.state = state
        self.replicate = replicate


class DataError(ValueError):
    """Base class for problems with input data files."""


class ParseError(DataError):
    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column!r}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.column = column


class DuplicateName(DataError):
    pass


class EmptyTable(DataError):
    pass


class DegenerateSplit(DataError):
    pass


class NonFiniteValue(ValueError):
    pass


class EmptySeries(ValueError):
    pass
