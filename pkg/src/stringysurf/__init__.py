"""Exact stringy invariants of normal surface singularities.

The package computes log discrepancies, classification, stringy Euler
numbers and stringy E-functions of normal surface germs from their dual
resolution graphs, entirely in exact rational arithmetic, together with the
chain determinant machinery, blow-up invariance checks, Poincare duality for
complete surfaces, and closed forms for star-shaped (Seifert) graphs.
"""

from .classify import (
    Classification,
    Recognition,
    RecognizedType,
    SingularityClass,
    StructureReport,
    classify,
    recognize_log_canonical_type,
    structure_report,
)
from .discrepancy import (
    CheckReport,
    check_bound_lemma,
    check_monotonicity_lemma,
    log_discrepancies,
    restricted_discrepancies,
    scale,
)
from .efunction import (
    EFraction,
    GradedPoly,
    HodgeTerm,
    ZCorrection,
    eval_termwise_at_zero,
)
from .graphs import (
    ChainDeterminants,
    CurveVertex,
    Edge,
    FreePoint,
    IntersectionPoint,
    ResolutionGraph,
    blow_up,
    chain_determinants,
    hj_chain,
    parse_graph,
)
from .laurent import WPoly, as_fraction, format_fraction
from .linalg import (
    check_negative_definite,
    int_det,
    poly_determinant,
    solve_rational_system,
)
from .star import (
    SeifertData,
    StarInvariants,
    build_star,
    log_terminal_case_table,
    negative_polynomial_check,
    seifert_space,
    star_central_discrepancy,
    star_invariants,
    sweep_star_checks,
)
from .stringy import (
    ChainContext,
    GraphChain,
    chain_Dr,
    chain_contribution,
    chain_direct_sum,
    check_blowup_invariance,
    check_dr_identities,
    check_duality,
    check_nonnegativity,
    dr_matrix,
    e_at_zero,
    euler_chain_contribution,
    find_chains,
    stringy_complete_surface,
    stringy_e_function_germ,
    stringy_euler_germ,
)
from .suite import CheckSuiteResult, run_check_suite

__version__ = "0.1.0"
