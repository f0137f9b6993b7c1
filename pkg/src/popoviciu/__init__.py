"""Numerical tools around the Popoviciu-Ionescu functional equation.

Hankel-determinant verification, Prony-type recovery of exponential
polynomials, dense generator sets, Montel-type translate checks and joint
trigonometric reconstruction.
"""

__version__ = "0.1.0"

from .exppoly import ExpPolynomial, Term, canonicalize, evaluate, translate_span_dim
from .hankel import (
    PopoviciuMatrix,
    SampleGrid1D,
    build_popoviciu_matrix,
    popoviciu_residual,
    sample_grid,
    translate_rank,
)
from .kronecker import (
    GeneratorSet,
    approximate_by_combination,
    dense_generators,
    is_q_independent_witness,
)
from .montel import (
    LatticeSampler,
    StepOperator,
    build_w_basis,
    fit_step_operator,
    membership_residual,
)
from .prony import (
    RadoCoefficients,
    RootCluster,
    characteristic_roots,
    rado_coefficients,
    reconstruction_residual,
    recover_exp_polynomial,
)
from .trig import (
    TrigPolynomial,
    detect_axis_degree,
    evaluate_trig,
    reconstruct_joint,
    verify_separate_slices,
)

__all__ = [
    "ExpPolynomial", "Term", "canonicalize", "evaluate", "translate_span_dim",
    "PopoviciuMatrix", "SampleGrid1D", "build_popoviciu_matrix", "popoviciu_residual",
    "sample_grid", "translate_rank",
    "GeneratorSet", "approximate_by_combination", "dense_generators", "is_q_independent_witness",
    "LatticeSampler", "StepOperator", "build_w_basis", "fit_step_operator", "membership_residual",
    "RadoCoefficients", "RootCluster", "characteristic_roots", "rado_coefficients",
    "reconstruction_residual", "recover_exp_polynomial",
    "TrigPolynomial", "detect_axis_degree", "evaluate_trig", "reconstruct_joint",
    "verify_separate_slices",
]
