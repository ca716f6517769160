"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class MatroidError(ValueError):
    """Invalid input: element outside the ground set, loops, bad weights..."""


class ParseError(MatroidError):
    """Malformed matroid input file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(RuntimeError):
    """A desk-scale enumeration cap would be exceeded."""

    def __init__(self, cap_name, cap, needed=None):
        self.cap_name = cap_name
        self.cap = cap
        msg = f"cap '{cap_name}' = {cap} exceeded"
        if needed is not None:
            msg += f" (needed {needed})"
        super().__init__(msg)


class ConvergenceError(RuntimeError):
    """Iterative solver hit its iteration limit."""

    def __init__(self, message, gap=None):
        self.gap = gap
        super().__init__(message)


class ConsistencyError(AssertionError):
    """Two independent computation paths disagree. Indicates a bug."""
