"""Exception hierarchy for reflectap."""


class ReflectapError(Exception):
    """Base class for all errors raised by the package."""


class BasisMismatch(ReflectapError):
    pass


class FrequencyNearZero(ReflectapError):
    """A frequency is too close to zero for a bounded antiderivative."""

    def __init__(self, value, margin):
        self.value = value
        self.margin = margin
        super().__init__(f"|lambda| = {abs(value):.3g} is below the zero margin {margin:.3g}")


class InvalidParams(ReflectapError):
    pass


class UnsupportedCase(ReflectapError):
    pass


class Resonance(ReflectapError):
    """A forced harmonic hits a natural rate of the equation."""

    def __init__(self, lam, detail=""):
        self.lam = lam
        msg = f"resonant harmonic at lambda = {lam:.17g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InvalidGrid(ReflectapError):
    pass


class NonContractive(ReflectapError):
    pass


class RadiusExceeded(ReflectapError):
    def __init__(self, iteration, sup, radius):
        self.iteration = iteration
        self.sup = sup
        self.radius = radius
        super().__init__(f"iterate {iteration} has sup {sup:.6g} > radius {radius:.6g}")


class MaxIterations(ReflectapError):
    pass


class SingularSystem(ReflectapError):
    pass


class VerificationMismatch(ReflectapError):
    pass


class ParseError(ReflectapError):
    def __init__(self, message, line, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class SemanticError(ReflectapError):
    pass
