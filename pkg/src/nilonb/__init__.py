"""Orthonormal bases for square-integrable representations of nilpotent Lie groups.

The package covers exact structure-constant algebra over Q or Q(sqrt m), symbolic
group laws in coordinates of the second kind, coadjoint orbit data, lattices, the
induced representation and a numerical Gram/Parseval checker.
"""
from .algebra import LieAlgebra, from_dict, validate
from .builtins import builtin_names, get_builtin
from .errors import NilError
from .pipeline import AnalysisRequest, analyze, run_verify
from .scalar import Scalar

__version__ = "0.1.0"

__all__ = ["LieAlgebra", "from_dict", "validate", "builtin_names", "get_builtin", "NilError",
           "AnalysisRequest", "analyze", "run_verify", "Scalar", "__version__"]
