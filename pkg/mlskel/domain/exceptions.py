"""Custom exception classes.

Each exception carries an error code, an HTTP status code for the API front
end and a process exit code for the CLI, so both surfaces report failures
consistently.
"""


class SkeletonError(Exception):
    """Base application error."""

    def __init__(
        self,
        message: str,
        error_code: str = "INTERNAL_ERROR",
        status_code: int = 500,
        exit_code: int = 3,
    ):
        self.message = message
        self.error_code = error_code
        self.status_code = status_code
        self.exit_code = exit_code
        super().__init__(self.message)


class ParseError(SkeletonError):
    """Raised when an input file cannot be parsed."""

    def __init__(
        self,
        message: str,
        path: str | None = None,
        line: int | None = None,
        offset: int | None = None,
    ):
        self.path = path
        self.line = line
        self.offset = offset
        location = []
        if path:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if offset is not None:
            location.append(f"offset {offset}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(
            message=message,
            error_code="PARSE_ERROR",
            status_code=400,
            exit_code=2,
        )


class EmptyInputError(SkeletonError):
    """Raised when a mesh or skeleton has nothing to work with."""

    def __init__(self, message: str):
        super().__init__(
            message=message,
            error_code="EMPTY_INPUT",
            status_code=422,
            exit_code=2,
        )


class UnsupportedFormatError(SkeletonError):
    """Raised when a file format is not recognised."""

    def __init__(self, fmt: str, supported: list[str] | None = None):
        self.format = fmt
        self.supported = supported or []
        message = f"Unsupported format '{fmt}'"
        if self.supported:
            message += f". Supported: {sorted(self.supported)}"
        super().__init__(
            message=message,
            error_code="UNSUPPORTED_FORMAT",
            status_code=400,
            exit_code=2,
        )


class ConfigError(SkeletonError):
    """Raised when run configuration fails validation."""

    def __init__(self, message: str, details: list | dict | None = None):
        self.details = details or {}
        super().__init__(
            message=message,
            error_code="VALIDATION_ERROR",
            status_code=400,
            exit_code=2,
        )


class ContractViolation(SkeletonError):
    """Raised when an operation's precondition or an internal invariant breaks."""

    def __init__(self, message: str):
        super().__init__(
            message=message,
            error_code="CONTRACT_VIOLATION",
            status_code=500,
            exit_code=3,
        )
