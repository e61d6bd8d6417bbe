"""Exact Witt-group computations with machine-checked certificates.

The package computes in Witt groups of quadratic forms over Q, odd prime
fields, and small extension towers; pushes forms forward along finite
separable extensions via the trace; manipulates bounded chain complexes of
free modules with their duality; builds Koszul complexes with their duality
forms; and evaluates cohomology of line bundles on projective space by exact
Cech computations.  Everything is exact (no floats) and every theorem-level
statement is re-verified at runtime as a matrix identity or an invariant
comparison of Witt classes.
"""

from .errors import (
    BoundsExceeded,
    DegenerateForm,
    DegenerateTraceForm,
    FactorizationUnsupported,
    FieldMismatch,
    GradingInconsistent,
    Inconclusive,
    NotAChainComplex,
    NotAChainMap,
    NotAField,
    NotHomogeneous,
    NotRegularSequence,
    ParityError,
    RingMismatch,
    UnsupportedCharacteristic,
    UnsupportedField,
    WittforgeError,
)
from .complexes import (
    ChainComplex,
    ChainMap,
    DualityDatum,
    bidual_map,
    cone,
    direct_sum,
    dualize,
    graded_homology_dims,
    hom_complex,
    homology_dims,
    is_quasi_isomorphism,
    shift,
    tensor,
    unit_complex,
)
from .fields import FieldElement, FieldSpec, embed, factor_univariate, frobenius
from .koszul import (
    KoszulDatum,
    SymmetricSpace,
    delta_map,
    koszul_complex,
    koszul_form,
    pushforward_unit_form,
    sigma_map,
    split_factorization,
    theta_multiplicative,
    trace_diagram,
    x_map,
)
from .polynomials import MultiPolynomial, PolyRing, factor_over_extension
from .projspace import (
    CohomologyReport,
    ProjLineBundleQuery,
    canonical_twist,
    cohomology,
    pushforward_phi_r,
)
from .transfer import (
    CheckReport,
    ExtensionDatum,
    base_change_check,
    projection_formula_check,
    pushforward_via_cartan,
    restrict_form,
    scharlau_transfer,
    trace,
    trace_form,
    transfer_compose_check,
)
from .quadforms import (
    Place,
    QuadraticForm,
    WittClass,
    diagonalize,
    hilbert_symbol,
    hyperbolic_plane,
    is_isotropic,
    signature,
    signed_discriminant,
    witt_add,
    witt_decompose,
    witt_equal,
    witt_mul,
    witt_neg,
    witt_zero,
)
from .verify import VerificationReport, random_complex, run_all, run_suite

__all__ = [
    "FieldSpec",
    "FieldElement",
    "MultiPolynomial",
    "PolyRing",
    "embed",
    "factor_univariate",
    "factor_over_extension",
    "frobenius",
    "Place",
    "QuadraticForm",
    "WittClass",
    "diagonalize",
    "hilbert_symbol",
    "hyperbolic_plane",
    "is_isotropic",
    "signature",
    "signed_discriminant",
    "witt_add",
    "witt_decompose",
    "witt_equal",
    "witt_mul",
    "witt_neg",
    "witt_zero",
    "VerificationReport",
    "random_complex",
    "run_all",
    "run_suite",
    "ExtensionDatum",
    "CheckReport",
    "trace",
    "trace_form",
    "scharlau_transfer",
    "pushforward_via_cartan",
    "restrict_form",
    "transfer_compose_check",
    "base_change_check",
    "projection_formula_check",
    "ChainComplex",
    "ChainMap",
    "DualityDatum",
    "bidual_map",
    "cone",
    "direct_sum",
    "dualize",
    "graded_homology_dims",
    "hom_complex",
    "homology_dims",
    "is_quasi_isomorphism",
    "shift",
    "tensor",
    "unit_complex",
    "KoszulDatum",
    "SymmetricSpace",
    "koszul_complex",
    "koszul_form",
    "delta_map",
    "sigma_map",
    "x_map",
    "theta_multiplicative",
    "trace_diagram",
    "pushforward_unit_form",
    "split_factorization",
    "ProjLineBundleQuery",
    "CohomologyReport",
    "cohomology",
    "canonical_twist",
    "pushforward_phi_r",
    "WittforgeError",
    "BoundsExceeded",
    "DegenerateForm",
    "DegenerateTraceForm",
    "FactorizationUnsupported",
    "FieldMismatch",
    "GradingInconsistent",
    "Inconclusive",
    "NotAChainComplex",
    "NotAChainMap",
    "NotAField",
    "NotHomogeneous",
    "NotRegularSequence",
    "ParityError",
    "RingMismatch",
    "UnsupportedCharacteristic",
    "UnsupportedField",
]
