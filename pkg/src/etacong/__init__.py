"""q-series expansions of eta products and mechanical verification of
partition congruences for the even-parts-below-odd-parts counting functions."""

from .qseries import (
    EXACT,
    CoefficientDomain,
    EtaFactor,
    Series,
    add,
    build_eta_product,
    dissection_check,
    divide,
    expand_eta_factor,
    extract_progression,
    invert,
    mod_domain,
    multiply,
    named_series,
    reduce_series,
    scale,
    shift,
    truncate,
)

__all__ = [
    "EXACT",
    "CoefficientDomain",
    "EtaFactor",
    "Series",
    "add",
    "build_eta_product",
    "dissection_check",
    "divide",
    "expand_eta_factor",
    "extract_progression",
    "invert",
    "mod_domain",
    "multiply",
    "named_series",
    "reduce_series",
    "scale",
    "shift",
    "truncate",
]

__version__ = "0.1.0"
