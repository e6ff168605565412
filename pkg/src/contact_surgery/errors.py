"""Exception hierarchy shared by the engine and the script shell."""


class CalculusError(Exception):
    """Base class for every error the engine raises on bad input."""


# dividing sets
class InvalidDividingSet(CalculusError):
    pass


class InvalidArc(CalculusError):
    pass


class ConfigurationAbsent(CalculusError):
    pass


class EulerObstruction(CalculusError):
    pass


# presentations and surgeries
class LedgerError(CalculusError):
    pass


class KnotsNotDisjoint(CalculusError):
    pass


class FramingMismatch(CalculusError):
    pass


class NoMeridian(CalculusError):
    pass


class EventNotReversibleHere(CalculusError):
    pass


class KnotNotFound(CalculusError):
    pass


class TorusNotFound(CalculusError):
    pass


# lutz twists
class NotPreLagrangian(CalculusError):
    pass


class TargetParityMismatch(CalculusError):
    pass


class MacroPostconditionFailed(Exception):
    """Engine bug: the four-surgery expansion did not reproduce the Lutz twist."""


# scripts
class ScriptSyntaxError(CalculusError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f"line {line}, column {column}: {message}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


class UseBeforeDeclare(CalculusError):
    def __init__(self, name, line):
        self.name = name
        self.line = line
        super().__init__(f"line {line}: '{name}' used before it is declared")


class UnsupportedSlope(CalculusError):
    pass
