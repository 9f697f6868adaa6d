"""Exception hierarchy shared by all modules."""


class BlowstarError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(BlowstarError):
    """Caller passed structurally invalid input (wrong table, zero divisor, ...)."""


class ParseError(UsageError):
    """Text input could not be parsed; carries line/column of the offense."""

    def __init__(self, message, line=1, col=0):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class NotInNagataRing(UsageError):
    """A fraction required to lie in R(t) does not; carries the refutation."""

    def __init__(self, message, cert):
        super().__init__(message)
        self.cert = cert


class RelevanceError(BlowstarError):
    """An ideal extension failed the relevance test; carries the report."""

    def __init__(self, message, report, chart_index=None):
        super().__init__(message)
        self.report = report
        self.chart_index = chart_index


class GlueError(BlowstarError):
    """Chart ideals do not agree on an overlap; carries the failing pair."""

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class CertificationError(BlowstarError):
    """An internally produced certificate failed its own re-check.

    Seeing this exception means a bug (or tampered data), never bad user input.
    """
