from .catalog import BUILDERS, build_problem, catalog
from .model import OdeProblem
from .operators import FdOperator, SpectralOperator, fd_laplacian, spectral_derivative
from .reference import generate_reference, reference_name, reference_solution

__all__ = [
    "BUILDERS",
    "FdOperator",
    "OdeProblem",
    "SpectralOperator",
    "build_problem",
    "catalog",
    "fd_laplacian",
    "generate_reference",
    "reference_name",
    "reference_solution",
    "spectral_derivative",
]
