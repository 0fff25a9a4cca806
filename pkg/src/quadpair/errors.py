"""Exception types shared across the package."""


class QuadpairError(Exception):
    """Base class for all package errors."""


class InvalidFormError(QuadpairError, ValueError):
    """A diagonal form violates its construction constraints."""


class InvalidModulusError(QuadpairError, ValueError):
    """A modulus is even, composite, or otherwise outside an operation's domain."""


class ArithmeticDomainError(QuadpairError, ValueError):
    """Inputs violate a coprimality or domain requirement (e.g. no inverse)."""


class InputTooLargeError(QuadpairError, ValueError):
    """Inputs exceed the documented exact-arithmetic bounds."""


class ScaleError(QuadpairError, ValueError):
    """A brute-force evaluation would exceed its term-count cap."""


class PreconditionError(QuadpairError, ValueError):
    """A stated precondition of the operation does not hold."""


class BudgetExceededError(QuadpairError, RuntimeError):
    """A numerical budget was exhausted without reaching the target accuracy."""


class ConfigError(QuadpairError, ValueError):
    """An experiment configuration is malformed or inconsistent."""
