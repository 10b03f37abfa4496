"""Spectral toolkit for the symmetric tri-band operator U(s, r, s) on lp and bv_p."""
from .core import (
    CharRoots,
    DegenerateOperatorError,
    ResolventUndefinedError,
    SingularTruncationError,
    TriBandParams,
    TruncationMatrix,
    apply,
    char_roots,
    make_operator,
    truncation_matrix,
)
from .eigen import (
    finite_section_eigenvalues,
    formal_eigenvector,
    no_eigenvalue_verdict,
    partial_lp_norms,
    pseudospectrum_grid,
)
from .resolvent import (
    apply_resolvent,
    dense_solve_oracle,
    kernel_entry,
    resolvent_in_lp_certificate,
    resolvent_norm_l1,
    resolvent_norm_linf,
)
from .spaces import (
    SpaceSpec,
    basis_bk,
    bvp_norm,
    delta_transform,
    dq_norm,
    inverse_delta,
    lp_norm,
    matrix_norm_l1,
    matrix_norm_linf,
    operator_norm_bounds,
    resolvent_bvp,
)
from .spectrum import (
    Region,
    classify_lambda,
    fine_spectrum_report,
    segment_membership,
    spectrum_segment,
)

__version__ = "0.1.0"
