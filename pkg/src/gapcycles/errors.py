"""Exception hierarchy. The CLI maps these onto exit codes."""


class PreconditionError(ValueError):
    """An input violates an operation's precondition."""


class ResourceError(MemoryError):
    """A requested object would exceed the configured memory budget."""


class CycleFileError(ValueError):
    """Base class for unreadable cycle cache files."""


class MagicError(CycleFileError):
    pass


class TruncationError(CycleFileError):
    pass


class ChecksumError(CycleFileError):
    pass
