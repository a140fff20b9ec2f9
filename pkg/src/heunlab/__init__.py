"""Power-series solutions of the Heun equation and general multi-term
recurrences.

The package computes exact Frobenius coefficient streams, the guaranteed
absolute-convergence domain and its boundary radius, and the verification
machinery for the boundary-divergence argument: case classification, proof
constants with exact positivity certificates, modulus majorants and the
domination bound, lattice-path series rearrangement, factorial-ratio lower
bounds, and the divergent minorant.  Long-run float64 probes and a Gauss-type
boundary test provide the empirical counterpart.
"""

from ._version import __version__
from .audit import run_proof_audit, run_system_audit
from .convergence import (GaussReport, MembershipReport, boundary_radius,
                          domain_membership, eta_z, gauss_test,
                          membership_sum)
from .errors import (AllZeroLimits, DegreeMismatch, DomainError, HeunLabError,
                     IndicialPole, InputError, InsufficientData, InvalidC,
                     InvalidParams, MagnitudeOverflow, NotFoundWithin,
                     OutsideDomain, PoleAtIndex, TruncationTooLarge)
from .heun import (EvalResult, HeunParams, absolute_profile_sum, heun_eval,
                   heun_recurrence, heun_series, indicial_roots, ode_residual,
                   series_limits)
from .instances import (Instance, build_document, document_bytes,
                        load_instance, parse_instance, render_value,
                        trace_bytes, write_document, write_trace)
from .polynomials import (PolynomialInN, RationalFnInN, monic_quadratic,
                          nonneg_integer_roots, poly_from)
from .probes import (DiscrepancyReport, ProbeSeries, discrepancy_report,
                     empirical_radius, term_scan, term_trace)
from .proofs import (CASE1, CASE2, CASE3, CASE4, H_LABELS, BoundCertificate,
                     CaseReport, ConstantsVerification, MinorantReport,
                     ProofConstants, SweepResult, classify_case,
                     find_proof_constants, minorant_partial,
                     verify_proof_constants, z_power_tail)
from .rearrange import (PathTable, grouped_partial_sum, path_table,
                        path_table_enumerate, row_series_coefficients,
                        table_matches_stream)
from .recurrence import (CoefficientStream, DominationReport, LimitProfile,
                         ModulusRecurrence, RecurrenceSystem,
                         dominating_series_check, limit_profile,
                         modulus_stream, modulus_system,
                         recurrence_residuals, stream_coefficients)
from .scalars import (DEFAULT_PRECISION, as_mp, fmt_scalar, is_exact,
                      parse_number, parse_point, parse_precision,
                      precision_from_env, to_scalar)
from .special import (Hyp2F1Params, hyp2f1_series, min_index_for_ratio_bound,
                      pochhammer, pochhammer_ratio_lower_bound)

__all__ = [
    "__version__",
    "run_proof_audit", "run_system_audit",
    "GaussReport", "MembershipReport", "boundary_radius", "domain_membership",
    "eta_z", "gauss_test", "membership_sum",
    "AllZeroLimits", "DegreeMismatch", "DomainError", "HeunLabError",
    "IndicialPole", "InputError", "InsufficientData", "InvalidC",
    "InvalidParams", "MagnitudeOverflow", "NotFoundWithin", "OutsideDomain",
    "PoleAtIndex", "TruncationTooLarge",
    "EvalResult", "HeunParams", "absolute_profile_sum", "heun_eval",
    "heun_recurrence", "heun_series", "indicial_roots", "ode_residual",
    "series_limits",
    "Instance", "build_document", "document_bytes", "load_instance",
    "parse_instance", "render_value", "trace_bytes", "write_document",
    "write_trace",
    "PolynomialInN", "RationalFnInN", "monic_quadratic",
    "nonneg_integer_roots", "poly_from",
    "DiscrepancyReport", "ProbeSeries", "discrepancy_report",
    "empirical_radius", "term_scan", "term_trace",
    "CASE1", "CASE2", "CASE3", "CASE4", "H_LABELS",
    "BoundCertificate", "CaseReport", "ConstantsVerification",
    "MinorantReport", "ProofConstants", "SweepResult", "classify_case",
    "find_proof_constants", "minorant_partial", "verify_proof_constants",
    "z_power_tail",
    "PathTable", "grouped_partial_sum", "path_table", "path_table_enumerate",
    "row_series_coefficients", "table_matches_stream",
    "CoefficientStream", "DominationReport", "LimitProfile",
    "ModulusRecurrence", "RecurrenceSystem", "dominating_series_check",
    "limit_profile", "modulus_stream", "modulus_system",
    "recurrence_residuals", "stream_coefficients",
    "DEFAULT_PRECISION", "as_mp", "fmt_scalar", "is_exact", "parse_number",
    "parse_point", "parse_precision", "precision_from_env", "to_scalar",
    "Hyp2F1Params", "hyp2f1_series", "min_index_for_ratio_bound",
    "pochhammer", "pochhammer_ratio_lower_bound",
]
