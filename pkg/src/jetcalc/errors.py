"""Exception hierarchy shared by all jetcalc modules."""


class JetcalcError(Exception):
    """Base class; ``module`` names the subsystem that raised."""

    module = "jetcalc"


class ArityError(JetcalcError, ValueError):
    module = "algebra"


class ResourceLimitError(JetcalcError):
    """A configured cap (basis size, degree, branch budget) was exceeded."""

    module = "algebra"


class ParseError(JetcalcError, ValueError):
    module = "cli"

    def __init__(self, message, position=None, line=None):
        self.reason = message
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SamplingError(JetcalcError):
    """No usable random point was found within the trial budget."""

    module = "jets"


class DomainError(JetcalcError, ValueError):
    """An operation's precondition does not hold for the given input."""

    def __init__(self, message, module="jetcalc"):
        super().__init__(message)
        self.module = module
