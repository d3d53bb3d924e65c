"""Exact-arithmetic degenerate derangement polynomials and companions.

Layers:

* :mod:`degderange.exactcore` — rationals, factorials/binomials, polynomials.
* :mod:`degderange.series` — truncated formal power series over rationals,
  including the degenerate exponential and its compositional inverse.
* :mod:`degderange.sequences` — every named sequence, each with an explicit
  path and an independent series-extraction path.
* :mod:`degderange.identities` — exact verifiers and polynomial certification
  for the identity catalog.
* :mod:`degderange.probability` — degenerate gamma function/distribution:
  quadrature, sampling, and moment checks against exact targets.
* :mod:`degderange.cli` — the ``degderange`` command.
"""

from .exactcore import (
    ExactScalar,
    Poly,
    binomial,
    binomial_rational,
    factorial,
    poly_add,
    poly_eval,
    poly_mul,
    poly_scale,
    rat,
)
from .identities import (
    IdentityCase,
    IdentityId,
    VerificationReport,
    certify,
    verify,
    verify_grid,
)
from .probability import (
    DegGammaParams,
    MomentCheckResult,
    QuadratureError,
    QuadratureSpec,
    deg_gamma11_cdf,
    deg_gamma11_ppf,
    deg_gamma_fn,
    deg_gamma_fn_exact,
    deg_gamma_fn_quadrature,
    deg_gamma_pdf,
    erlang_bridge_check,
    erlang_moment,
    improper_quadrature,
    sample_deg_gamma11,
    sampler_ks_check,
    stirling_log_expansion_check,
    theorem11_check,
)
from .sequences import (
    SequenceTable,
    bell_deg,
    bell_deg_series,
    derange_deg,
    derange_deg_order,
    derange_deg_order_series,
    derange_deg_poly,
    derange_deg_series,
    falling_deg,
    fubini_deg,
    fubini_deg_series,
    set_cross_check,
    stirling1_classical,
    stirling1_deg,
    stirling1_deg_series,
    stirling2_deg,
    stirling2_deg_series,
)
from .series import (
    Series,
    binomial_pow,
    deg_exp,
    deg_log,
    geometric,
    series_compose,
    series_div,
    series_mul,
)

__version__ = "0.1.0"

__all__ = [
    "ExactScalar",
    "Poly",
    "rat",
    "factorial",
    "binomial",
    "binomial_rational",
    "poly_eval",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "Series",
    "series_mul",
    "series_div",
    "series_compose",
    "binomial_pow",
    "deg_exp",
    "deg_log",
    "geometric",
    "SequenceTable",
    "falling_deg",
    "derange_deg",
    "derange_deg_series",
    "derange_deg_poly",
    "derange_deg_order",
    "derange_deg_order_series",
    "stirling1_deg",
    "stirling1_deg_series",
    "stirling2_deg",
    "stirling2_deg_series",
    "stirling1_classical",
    "fubini_deg",
    "fubini_deg_series",
    "bell_deg",
    "bell_deg_series",
    "set_cross_check",
    "IdentityId",
    "IdentityCase",
    "VerificationReport",
    "verify",
    "verify_grid",
    "certify",
    "DegGammaParams",
    "QuadratureSpec",
    "QuadratureError",
    "MomentCheckResult",
    "improper_quadrature",
    "deg_gamma_fn",
    "deg_gamma_fn_exact",
    "deg_gamma_fn_quadrature",
    "deg_gamma_pdf",
    "deg_gamma11_cdf",
    "deg_gamma11_ppf",
    "sample_deg_gamma11",
    "sampler_ks_check",
    "theorem11_check",
    "stirling_log_expansion_check",
    "erlang_moment",
    "erlang_bridge_check",
]
