from .library import export_library, library, lookup
from .model import ComplexPath, PathResidualReport, ValidityClass, decode_complex, encode_complex
from .solvers import (
    linear_path_weights,
    nonlinear_linear_permutations,
    solve_linear_path,
    solve_problem_specific_path,
    solve_relaxed_path3,
)
from .symmetric import elementary_symmetric, elementary_symmetric_all, stage_square_moment
from .verify import verify_path

__all__ = [
    "ComplexPath",
    "PathResidualReport",
    "ValidityClass",
    "decode_complex",
    "elementary_symmetric",
    "elementary_symmetric_all",
    "encode_complex",
    "export_library",
    "library",
    "linear_path_weights",
    "lookup",
    "nonlinear_linear_permutations",
    "solve_linear_path",
    "solve_problem_specific_path",
    "solve_relaxed_path3",
    "stage_square_moment",
    "verify_path",
]
