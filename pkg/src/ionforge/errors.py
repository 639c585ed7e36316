"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the command line
front-end prints as ``error[CODE]: message``.
"""


class IonForgeError(Exception):
    code = "E000"


class SizeError(IonForgeError, ValueError):
    code = "E001"


class QubitIndexError(IonForgeError, IndexError):
    code = "E002"


class UnitaryValidationError(IonForgeError, ValueError):
    code = "E003"


class IntegrityError(IonForgeError, RuntimeError):
    """Norm drift beyond tolerance; indicates a bug, never renormalized away."""

    code = "E004"


class ArgumentError(IonForgeError, ValueError):
    code = "E005"


class EmptyConditionError(IonForgeError, ValueError):
    code = "E006"


class SignTableError(IonForgeError, KeyError):
    code = "E007"

    def __str__(self):
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class ResourceLimitError(IonForgeError, ValueError):
    code = "E008"


class NotCompiledError(IonForgeError, TypeError):
    code = "E009"


class IllConditionedError(IonForgeError, ValueError):
    code = "E010"


class CircuitValidationError(IonForgeError, ValueError):
    code = "E011"


class DSLError(IonForgeError, ValueError):
    """Circuit text could not be parsed; ``line``/``column`` are 1-based."""

    code = "E100"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", col {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class MissingQubitsError(DSLError):
    code = "E101"


class UnknownKeywordError(DSLError):
    code = "E102"


class QubitRangeError(DSLError):
    code = "E103"


class AngleSyntaxError(DSLError):
    code = "E104"


class ArityError(DSLError):
    code = "E105"


class QubitCountError(DSLError):
    code = "E106"


class DuplicateQubitError(DSLError):
    code = "E107"


class MixedLevelError(DSLError):
    code = "E108"


class ChiBoundError(DSLError):
    code = "E109"
