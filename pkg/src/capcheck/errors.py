"""Exception hierarchy shared by every module."""


class GroupError(ValueError):
    """Invalid input to a group computation."""


class DegreeMismatch(GroupError):
    pass


class CycleParseError(GroupError):
    def __init__(self, message, text=None, column=None):
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
        self.text = text
        self.column = column


class NotASubgroup(GroupError):
    pass


class NotNormal(GroupError):
    pass


class CapExceeded(RuntimeError):
    """A configured size cap was hit; the computation was refused, not attempted."""
