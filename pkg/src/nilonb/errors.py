"""Exception hierarchy.

Every error carries a ``kind`` string so reports and the CLI can map it to an
exit code without caring about the Python class.
"""


class NilError(Exception):
    kind = "Error"
    # input errors map to exit code 2, everything else to 3
    input_error = False

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"error": self.kind, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value if isinstance(value, (int, float, list, dict)) else str(value)
        return out


class LoadError(NilError):
    kind = "LoadError"
    input_error = True


class SchemaError(LoadError):
    kind = "SchemaError"


class RadicandMismatch(NilError):
    kind = "RadicandMismatch"


class JacobiFail(NilError):
    kind = "JacobiFail"


class AntisymmetryFail(NilError):
    kind = "AntisymmetryFail"


class NotNilpotent(NilError):
    kind = "NotNilpotent"


class SingularMatrix(NilError):
    kind = "SingularMatrix"


class NotStrongMalcev(NilError):
    kind = "NotStrongMalcev"


class DegreeOverflow(NilError):
    kind = "DegreeOverflow"


class CenterMismatch(NilError):
    kind = "CenterMismatch"
    input_error = True


class DegenerateForm(NilError):
    kind = "DegenerateForm"


class NotSubalgebra(NilError):
    kind = "NotSubalgebra"


class NotPolarizingIdeal(NilError):
    kind = "NotPolarizingIdeal"


class NoChRBasis(NilError):
    kind = "NoChRBasis"


class GradationViolation(NilError):
    kind = "GradationViolation"


class CenterNotOneDim(NilError):
    kind = "CenterNotOneDim"


class BasisNotThroughIdeal(NilError):
    kind = "BasisNotThroughIdeal"


class IrrationalScaling(NilError):
    kind = "IrrationalScaling"


class CovolumeMismatch(NilError):
    kind = "CovolumeMismatch"


class QuadratureNotConverged(NilError):
    kind = "QuadratureNotConverged"


class OracleUnavailable(NilError):
    kind = "OracleUnavailable"


class BasisMismatch(NilError):
    kind = "BasisMismatch"
