"""Exception hierarchy shared by every module of the package."""


class HankelError(Exception):
    """Base class for all errors raised by kirillov_hankel."""


class DomainError(HankelError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. the Gamma function at a nonpositive integer)."""


class SingularPointError(DomainError):
    """A group action was evaluated where its multiplier vanishes."""


class BesselOverflowError(HankelError, OverflowError):
    pass


class SpecSyntaxError(HankelError, ValueError):
    """Malformed function spec; ``offset`` is the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SpecSemanticError(HankelError, ValueError):
    """Well-formed spec describing an invalid profile (e.g. a non-decaying rate)."""

    def __init__(self, message: str, offset: int | None = None):
        suffix = "" if offset is None else f" at offset {offset}"
        super().__init__(message + suffix)
        self.offset = offset


class QuadratureError(HankelError, RuntimeError):
    """Adaptive quadrature exhausted its evaluation budget before converging."""


class DivergenceError(HankelError, ArithmeticError):
    """An integrand failed the decay screen required for absolute convergence."""


class FitError(HankelError, ArithmeticError):
    """The asymptotic-coefficient fit was too ill-conditioned to trust."""


class UnsupportedAtomError(DomainError):
    """The closed-form transform was asked for an atom it does not cover."""
