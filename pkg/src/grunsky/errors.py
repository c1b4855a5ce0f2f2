"""Exception hierarchy.

Validation errors (bad input, geometry that violates a precondition) and
numerical errors (a computation that broke down) are kept apart so the CLI
can map them to different exit codes.
"""

from __future__ import annotations


class GrunskyError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(GrunskyError, ValueError):
    """Input rejected before any heavy computation."""


class NumericalError(GrunskyError, ArithmeticError):
    """A numerical procedure failed or lost its accuracy guarantee."""


# power series
class ZeroConstantTerm(NumericalError):
    pass


class CompositionDomain(ValidationError):
    pass


class NonzeroConstant(ValidationError):
    pass


# maps
class OutsideDisk(ValidationError):
    pass


class DegenerateDerivative(ValidationError):
    pass


class DegenerateMobius(ValidationError):
    pass


class InvalidParameter(ValidationError):
    pass


class OverlappingImages(ValidationError):
    def __init__(self, i: int, j: int, margin: float):
        self.i, self.j, self.margin = i, j, margin
        super().__init__(
            f"images of maps {i} and {j} are not disjoint "
            f"(certified margin {margin:.3g})"
        )


class PoleInImage(ValidationError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"pole of the Moebius transform lies in the closure of image {i}")


class DegenerateCenters(ValidationError):
    pass


# Bergman spaces / quadrature
class WrongSpace(ValidationError):
    pass


class SpaceMismatch(ValidationError):
    pass


class ResolutionTooLow(ValidationError):
    pass


# operator
class RiggingNotCertified(ValidationError):
    pass


class SeriesIllConditioned(NumericalError):
    pass


class QuadratureDiverged(NumericalError):
    pass


class PowerIterationStalled(NumericalError):
    pass


class InconsistentProducts(NumericalError):
    pass


class ConfigParse(ValidationError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
