"""Exception hierarchy shared by the solver, the oracles and the CLI."""


class FleetminError(Exception):
    """Base class for all package errors."""


class InvalidInputError(FleetminError, ValueError):
    """Malformed instance, graph, matching or certificate passed by a caller."""


class ParseError(InvalidInputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OracleRefused(InvalidInputError):
    """Brute-force oracle asked to solve an instance above its size bound."""


class VerificationError(FleetminError):
    """An independently re-checked result failed verification."""


class InvariantViolation(FleetminError, RuntimeError):
    """An internal invariant broke (e.g. a successor cycle in a matching)."""
