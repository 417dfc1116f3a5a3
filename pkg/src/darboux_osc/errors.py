"""Exceptions raised by the numerical routines."""


class NumericalError(ArithmeticError):
    """Base class for failures that the CLI maps to exit status 2."""


class SingularTime(NumericalError):
    """A closed-form denominator vanishes at the requested time."""

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"singular denominator at t={t!r}")


class SingularDenominator(NumericalError):
    """The radicand of the factorization coefficient crosses zero on the grid."""

    def __init__(self, times, message=None):
        self.times = [float(x) for x in times]
        listed = ", ".join(f"{x:.9g}" for x in self.times)
        super().__init__(message or f"radicand vanishes near t = {listed}")


class DivisionBySingularAlpha(NumericalError):
    """The factorization coefficient alpha vanishes on the grid."""

    def __init__(self, times):
        self.times = [float(x) for x in times]
        listed = ", ".join(f"{x:.9g}" for x in self.times)
        super().__init__(f"alpha vanishes at t = {listed}")


class NonFiniteState(NumericalError):
    """Integration produced a non-finite state."""

    def __init__(self, t):
        self.t = float(t)
        super().__init__(f"non-finite state at t={self.t:.9g}")
