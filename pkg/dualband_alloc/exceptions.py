# -*- coding: utf-8 -*-
"""Error hierarchy shared by every layer of the package."""


class DualBandError(Exception):
    """Root of all errors raised by the package"""


class UserError(DualBandError):
    """Operator-facing misuse, e.g. an invalid command-line value"""


class ValidationError(UserError):
    """A configuration invariant does not hold"""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigParseError(UserError):
    """Configuration file is missing or is not well-formed JSON"""


class DomainError(DualBandError, ValueError):
    """Argument outside the mathematical domain of a formula"""


class EscalationLimitError(DualBandError):
    """The uW feasibility escalation could not reach a feasible assignment"""


class OracleBudgetError(DualBandError):
    """An exhaustive reference was asked to enumerate more than its budget"""


class TrialError(DualBandError):
    """An allocator error raised inside a trial, annotated with its seed"""

    def __init__(self, seed, message):
        self.seed = seed
        super().__init__(f"Trial seed {seed}: {message}")
