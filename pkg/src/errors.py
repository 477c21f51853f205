# errors.py
# ----------------------------------------------------------------
# exception hierarchy shared by monitor, log format and analyzer
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026


class IccError(Exception):
    """Base class for every error raised by the pipeline."""


class UnknownTagError(IccError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown taint tag: {self.name!r}"


class CatalogError(IccError):
    pass


class ScenarioError(IccError):
    """Schema or reference error in a scenario document, positioned by line and field."""

    def __init__(self, message, line=None, field=None):
        self.message = message
        self.line = line
        self.field = field
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.field:
            where.append(f"field '{self.field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        return f"{prefix}{self.message}"


class ResolutionError(IccError):
    pass


class LogFormatError(IccError):
    def __init__(self, message, line=None):
        self.message = message
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class VersionError(LogFormatError):
    pass


class StructuralError(IccError):
    pass


class StageError(IccError):
    """Wraps a failure with the name of the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
