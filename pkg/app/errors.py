"""Exception hierarchy for the verification engine.

Everything derives from ``GeometryError`` (itself a ``ValueError``) so callers
that only care about "bad input or bad geometry" can catch one type.
"""


class GeometryError(ValueError):
    """Base error for all geometry failures"""


class DomainError(GeometryError):
    """A point lies outside the chart box of its manifold"""


class UsageError(GeometryError):
    """An operation was called with unsupported arguments"""


class DegeneracyError(GeometryError):
    """A metric (or matrix standing in for one) is numerically singular"""


class NullPivotError(DegeneracyError):
    """No non-null pivot vector was found while building a phi-basis"""


class PlaneDegeneracyError(DegeneracyError):
    """The plane spanned by two vectors is degenerate for the metric"""


class StructureRejectedError(GeometryError):
    """The tensors fail the structure axioms or the signature requirement"""


class CompatibilityError(StructureRejectedError):
    """The fundamental form is not antisymmetric"""


class ConstructionError(GeometryError):
    """The compatible-metric construction produced an unusable metric"""


class PreconditionError(GeometryError):
    """A hypothesis of a construction does not hold"""


class NotSkewError(PreconditionError):
    """N1 lowered with g is not totally skew-symmetric"""

    def __init__(self, defect: float):
        self.defect = defect
        super().__init__(f"N1 is not skew-symmetric (max defect {defect:.3e})")


class NotKillingError(PreconditionError):
    """The Reeb field is not a Killing vector field"""

    def __init__(self, defect: float):
        self.defect = defect
        super().__init__(f"xi is not a Killing field (max |L_xi g| = {defect:.3e})")


class NotEtaEinsteinError(PreconditionError):
    """The structure is not eta-Einstein"""


class DegenerateScaleError(PreconditionError):
    """Einsteinizing needs scal != 2n"""

    def __init__(self, scal: float, n: int):
        self.defect = abs(scal - 2 * n)
        super().__init__(f"scal = {scal:.6g} equals 2n = {2 * n}; no D-homothety makes it Einstein")


class PositivityError(GeometryError):
    """A gauge function is not strictly positive"""


class ParameterError(GeometryError):
    """A deformation parameter is out of range"""


class UnknownEntryError(GeometryError, KeyError):
    """No zoo entry with the requested id"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown entry"
