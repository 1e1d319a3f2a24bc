"""Exception hierarchy.  Every domain error is a ``ValueError``."""


class CubeError(ValueError):
    """Base class for all precondition failures raised by cubeiso."""


class DimensionOutOfRange(CubeError):
    pass


class VertexOutOfRange(CubeError):
    pass


class BadLength(CubeError):
    pass


class BadCharacter(CubeError):
    pass


class CoordinateOutOfRange(CubeError):
    pass


class EmptySet(CubeError):
    pass


class DimensionMismatch(CubeError):
    pass


class SizeOutOfRange(CubeError):
    pass


class InvalidParameters(CubeError):
    pass


class DomainError(CubeError):
    pass


class DimensionTooLarge(CubeError):
    pass


class NoCase1(CubeError):
    """Strict greedy fitting could not certify the set as near a subcube."""


class UnknownSuite(CubeError):
    pass


class ParameterError(CubeError):
    pass


class ViolationFound(Exception):
    """A theorem-backed scan found a counterexample (an implementation bug)."""

    def __init__(self, report):
        super().__init__(f"{len(report.violations)} violation(s) in {report.scan_id}")
        self.report = report
