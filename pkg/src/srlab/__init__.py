"""srlab: stable rank, intrinsic dimension, and Schatten p-norm toolkit.

Computation of spectral rank surrogates for real and complex matrices,
structured verification of the inequalities they satisfy, constructive
counterexample families for the ones they do not, and a deterministic
fuzzing harness over random matrices.
"""

from .checks import CHECKS, CheckReport
from .fuzz import FuzzConfig, RunReport, run_fuzz
from .gallery import FamilyInstance, evaluate
from .matrices import (
    DEFAULT_TOL,
    DecompositionError,
    Matrix,
    PreconditionError,
    SampleSpec,
    Spectrum,
    Tolerances,
    as_matrix,
    conj_transpose,
    hermitian_eigenvalues,
    is_hermitian,
    is_psd,
    matmul,
    pivoted_cholesky,
    sample,
    scalar_field,
    singular_values,
    trace,
    two_norm,
)
from .ranks import (
    RankResult,
    intrinsic_dimension,
    numerical_rank,
    p_stable_rank,
    stable_rank,
)
from .schatten import INF, QuasiNormWarning, schatten_norm, schatten_norm_from_spectrum

__version__ = "0.1.0"

__all__ = [
    "CHECKS",
    "CheckReport",
    "DEFAULT_TOL",
    "DecompositionError",
    "FamilyInstance",
    "FuzzConfig",
    "INF",
    "Matrix",
    "PreconditionError",
    "QuasiNormWarning",
    "RankResult",
    "RunReport",
    "SampleSpec",
    "Spectrum",
    "Tolerances",
    "as_matrix",
    "conj_transpose",
    "evaluate",
    "hermitian_eigenvalues",
    "intrinsic_dimension",
    "is_hermitian",
    "is_psd",
    "matmul",
    "numerical_rank",
    "p_stable_rank",
    "pivoted_cholesky",
    "run_fuzz",
    "sample",
    "scalar_field",
    "schatten_norm",
    "schatten_norm_from_spectrum",
    "singular_values",
    "stable_rank",
    "trace",
    "two_norm",
]
